#include "qpoly/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace qpoly {

EigResult eig_hermitian(const Matrix& m) {
    if (m.rows() != m.cols()) throw InvalidInput("eig_hermitian needs a square matrix");
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTol)
        throw InvalidInput("matrix is not Hermitian (residual " + std::to_string(herm) + ")");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const long n = m.rows();
    EigResult out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    // Eigen returns ascending order; flip to descending.
    for (long i = 0; i < n; ++i) {
        out.values[i] = es.eigenvalues()[n - 1 - i];
        out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    return out;
}

double entropy_of_spectrum(std::span<const double> spectrum) {
    double s = 0.0;
    for (double p : spectrum)
        if (p > kEntropyClamp) s -= p * std::log2(p);
    return s;
}

double binary_entropy(double x) {
    double s = 0.0;
    if (x > kEntropyClamp) s -= x * std::log2(x);
    if (1.0 - x > kEntropyClamp) s -= (1.0 - x) * std::log2(1.0 - x);
    return s;
}

double von_neumann_entropy(const DensityOperator& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (long i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()[i];
        if (p > kEntropyClamp) s -= p * std::log2(p);
    }
    return s;
}

double conditional_entropy(const DensityOperator& rho,
                           std::span<const std::string> target,
                           std::span<const std::string> condition) {
    if (target.empty()) throw InvalidInput("conditional entropy needs a nonempty target");
    std::vector<std::string> joint(target.begin(), target.end());
    for (const std::string& l : condition) {
        if (std::find(target.begin(), target.end(), l) != target.end())
            throw InvalidInput("target and condition overlap on label: " + l);
        joint.push_back(l);
    }
    const double s_joint = joint.size() == static_cast<std::size_t>(rho.layout().size())
                               ? von_neumann_entropy(rho)
                               : von_neumann_entropy(partial_trace(rho, joint));
    if (condition.empty()) return s_joint;
    return s_joint - von_neumann_entropy(partial_trace(rho, condition));
}

double mutual_information(const DensityOperator& rho,
                          std::span<const std::string> side_a,
                          std::span<const std::string> side_b) {
    std::vector<std::string> all(side_a.begin(), side_a.end());
    for (const std::string& l : side_b) {
        if (std::find(side_a.begin(), side_a.end(), l) != side_a.end())
            throw InvalidInput("cut sides overlap on label: " + l);
        all.push_back(l);
    }
    if (all.size() != static_cast<std::size_t>(rho.layout().size()))
        throw InvalidInput("cut does not partition the state's labels");
    rho.layout().positions_of(all);  // validates every label exists
    return von_neumann_entropy(partial_trace(rho, side_a)) +
           von_neumann_entropy(partial_trace(rho, side_b)) - von_neumann_entropy(rho);
}

}  // namespace qpoly
