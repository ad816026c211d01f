#include "qpoly/sampling.hpp"

#include "qpoly/rng.hpp"

namespace qpoly {

std::vector<std::string> default_labels(int parties) {
    if (parties < 1) throw InvalidInput("party count must be positive");
    std::vector<std::string> out{"A"};
    for (int i = 1; i < parties; ++i) out.push_back("B" + std::to_string(i));
    return out;
}

SystemLayout layout_from_dims(std::span<const long> dims) {
    const std::vector<std::string> labels = default_labels(static_cast<int>(dims.size()));
    std::vector<Part> parts;
    for (std::size_t i = 0; i < dims.size(); ++i) parts.push_back({labels[i], dims[i]});
    return SystemLayout(std::move(parts));
}

StateVector haar_random_pure(const SystemLayout& layout, std::uint64_t seed) {
    Rng rng(seed);
    Vector amps(layout.total_dim());
    for (long i = 0; i < layout.total_dim(); ++i) {
        const auto [re, im] = rng.gaussian_pair();
        amps[i] = Complex(re, im);
    }
    amps.normalize();
    return StateVector(layout, std::move(amps));
}

StateVector haar_random_pure(std::span<const long> dims, std::uint64_t seed) {
    return haar_random_pure(layout_from_dims(dims), seed);
}

DensityOperator random_mixed(const SystemLayout& layout, std::uint64_t seed) {
    const SystemLayout extended =
        layout.concat(SystemLayout({{"__anc", layout.total_dim()}}));
    const StateVector psi = haar_random_pure(extended, seed);
    return partial_trace(psi, layout.labels());
}

DensityOperator random_mixed(std::span<const long> dims, std::uint64_t seed) {
    return random_mixed(layout_from_dims(dims), seed);
}

}  // namespace qpoly
