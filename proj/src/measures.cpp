#include "qpoly/measures.hpp"

#include <cmath>

#include "qpoly/linalg.hpp"

namespace qpoly {

namespace {

// Snap tiny numerical negatives (within the linear-algebra tolerance) to 0;
// anything more negative is left visible.
double snap(double v) { return v < 0.0 && v > -kPsdTol ? 0.0 : v; }

void check_bipartition(const DensityOperator& rho, std::span<const std::string> side_a,
                       std::span<const std::string> side_b) {
    std::vector<std::string> all(side_a.begin(), side_a.end());
    all.insert(all.end(), side_b.begin(), side_b.end());
    if (all.size() != static_cast<std::size_t>(rho.layout().size()))
        throw InvalidInput("cut does not partition the state's labels");
    rho.layout().positions_of(all);
}

// Roof searches see the branch marginal on either side identically (pure
// branches); picking the smaller factor is cheaper.
std::vector<std::string> cheaper_side(const DensityOperator& rho,
                                      std::span<const std::string> side_a,
                                      std::span<const std::string> side_b) {
    long da = 1, db = 1;
    for (const auto& l : side_a) da *= rho.layout().part(rho.layout().index_of(l)).dim;
    for (const auto& l : side_b) db *= rho.layout().part(rho.layout().index_of(l)).dim;
    return db < da ? std::vector<std::string>(side_b.begin(), side_b.end())
                   : std::vector<std::string>(side_a.begin(), side_a.end());
}

CorrelationValue roof_measure(const DensityOperator& rho, std::span<const std::string> side_a,
                              const OptimizerConfig& cfg, Sense sense, MeasureKind kind,
                              BoundKind bound) {
    const std::vector<std::string> side_b = rho.layout().complement(side_a);
    if (side_a.empty() || side_b.empty())
        throw InvalidInput("cut side must be a proper nonempty subset of the state's labels");
    check_bipartition(rho, side_a, side_b);
    if (rho.is_pure()) {
        const double s = von_neumann_entropy(partial_trace(rho, side_a));
        return {kind, s, BoundKind::Exact, MeasureRoute::PureShortcut, true};
    }
    const OptimizationResult res = optimize_roof(rho, cheaper_side(rho, side_a, side_b), sense, cfg);
    return {kind, snap(res.value), bound, MeasureRoute::Direct, res.converged};
}

}  // namespace

const char* to_string(MeasureKind k) {
    switch (k) {
        case MeasureKind::EoF: return "eof";
        case MeasureKind::EoA: return "eoa";
        case MeasureKind::Jcc: return "jcc";
        case MeasureKind::UE: return "ue";
        case MeasureKind::Discord: return "discord";
        case MeasureKind::UD: return "ud";
        case MeasureKind::Entropy: return "entropy";
        case MeasureKind::MutualInfo: return "mutual-info";
    }
    return "?";
}

const char* to_string(BoundKind b) {
    switch (b) {
        case BoundKind::Exact: return "exact";
        case BoundKind::Lower: return "lower";
        case BoundKind::Upper: return "upper";
    }
    return "?";
}

const char* to_string(MeasureRoute r) {
    switch (r) {
        case MeasureRoute::Direct: return "direct";
        case MeasureRoute::Dual: return "dual";
        case MeasureRoute::PureShortcut: return "pure-shortcut";
        case MeasureRoute::ClosedForm: return "closed-form";
    }
    return "?";
}

CorrelationValue eof(const DensityOperator& rho, std::span<const std::string> side_a,
                     const OptimizerConfig& cfg) {
    return roof_measure(rho, side_a, cfg, Sense::Min, MeasureKind::EoF, BoundKind::Upper);
}

CorrelationValue eoa(const DensityOperator& rho, std::span<const std::string> side_a,
                     const OptimizerConfig& cfg) {
    return roof_measure(rho, side_a, cfg, Sense::Max, MeasureKind::EoA, BoundKind::Lower);
}

CorrelationValue one_way_classical_correlation(const DensityOperator& rho,
                                               std::span<const std::string> measured,
                                               const OptimizerConfig& cfg, JccRoute route) {
    const std::vector<std::string> kept = rho.layout().complement(measured);
    if (measured.empty() || kept.empty())
        throw InvalidInput("measured labels must be a proper nonempty subset");
    if (route == JccRoute::Direct) {
        const OptimizationResult res =
            optimize_rank1_measurement(rho, measured, Sense::Max, cfg, MeasurementSearchMode::Direct);
        return {MeasureKind::Jcc, snap(res.value), BoundKind::Lower, MeasureRoute::Direct,
                res.converged};
    }
    // S(rho_A) = J^<-(rho_AB) + EoF(rho_AC) on any purification, so the
    // computed EoF upper bound turns into a J lower bound.
    const double s_kept = von_neumann_entropy(partial_trace(rho, kept));
    const StateVector psi = purify(rho, "C*");
    std::vector<std::string> keep_anc = kept;
    keep_anc.push_back("C*");
    const CorrelationValue ef = eof(partial_trace(psi, keep_anc), kept, cfg);
    return {MeasureKind::Jcc, snap(s_kept - ef.value), BoundKind::Lower, MeasureRoute::Dual,
            ef.converged};
}

CorrelationValue unlocalizable_entanglement(const DensityOperator& rho,
                                            std::span<const std::string> measured,
                                            const OptimizerConfig& cfg, UeRoute route) {
    const std::vector<std::string> kept = rho.layout().complement(measured);
    if (measured.empty() || kept.empty())
        throw InvalidInput("measured labels must be a proper nonempty subset");
    if (route == UeRoute::Direct) {
        const OptimizationResult res =
            optimize_rank1_measurement(rho, measured, Sense::Min, cfg, MeasurementSearchMode::Direct);
        return {MeasureKind::UE, snap(res.value), BoundKind::Upper, MeasureRoute::Direct,
                res.converged};
    }
    // S(rho_A) = UE(rho_AB) + EoA(rho_AC) on any purification; EoA's lower
    // bound keeps UE an upper bound.
    const double s_kept = von_neumann_entropy(partial_trace(rho, kept));
    const StateVector psi = purify(rho, "C*");
    std::vector<std::string> keep_anc = kept;
    keep_anc.push_back("C*");
    const CorrelationValue ea = eoa(partial_trace(psi, keep_anc), kept, cfg);
    return {MeasureKind::UE, snap(s_kept - ea.value), BoundKind::Upper, MeasureRoute::Dual,
            ea.converged};
}

CorrelationValue quantum_discord(const DensityOperator& rho,
                                 std::span<const std::string> measured,
                                 const OptimizerConfig& cfg) {
    const std::vector<std::string> kept = rho.layout().complement(measured);
    const double mi = mutual_information(rho, kept, measured);
    const CorrelationValue j = one_way_classical_correlation(rho, measured, cfg);
    return {MeasureKind::Discord, snap(mi - j.value), BoundKind::Upper, j.route, j.converged};
}

CorrelationValue unlocalizable_discord(const DensityOperator& rho,
                                       std::span<const std::string> measured,
                                       const OptimizerConfig& cfg) {
    const std::vector<std::string> kept = rho.layout().complement(measured);
    const double mi = mutual_information(rho, kept, measured);
    const CorrelationValue ue = unlocalizable_entanglement(rho, measured, cfg);
    return {MeasureKind::UD, snap(mi - ue.value), BoundKind::Lower, ue.route, ue.converged};
}

double wootters_concurrence(const DensityOperator& rho) {
    if (rho.layout().size() != 2 || rho.layout().part(0).dim != 2 || rho.layout().part(1).dim != 2)
        throw InvalidInput("concurrence closed form needs a two-qubit state");
    // spin flip: rho~ = (sy (x) sy) conj(rho) (sy (x) sy)
    Matrix yy = Matrix::Zero(4, 4);
    yy(0, 3) = Complex(-1, 0);
    yy(1, 2) = Complex(1, 0);
    yy(2, 1) = Complex(1, 0);
    yy(3, 0) = Complex(-1, 0);
    const Matrix flipped = yy * rho.matrix().conjugate() * yy;

    // eigenvalues of rho * rho~ via the Hermitian form sqrt(rho) rho~ sqrt(rho)
    const EigResult eig = eig_hermitian(rho.matrix());
    Matrix sqrt_rho = Matrix::Zero(4, 4);
    for (int j = 0; j < 4; ++j)
        sqrt_rho += std::sqrt(std::max(eig.values[j], 0.0)) * eig.vectors.col(j) *
                    eig.vectors.col(j).adjoint();
    const EigResult prod = eig_hermitian(sqrt_rho * flipped * sqrt_rho);
    double c = 0.0;
    for (int j = 0; j < 4; ++j) {
        const double l = std::sqrt(std::max(prod.values[j], 0.0));
        c += j == 0 ? l : -l;
    }
    return std::max(c, 0.0);
}

CorrelationValue wootters_eof_two_qubit(const DensityOperator& rho) {
    const double c = wootters_concurrence(rho);
    const double value = binary_entropy(0.5 * (1.0 + std::sqrt(std::max(1.0 - c * c, 0.0))));
    return {MeasureKind::EoF, value, BoundKind::Exact, MeasureRoute::ClosedForm, true};
}

CorrelationValue entropy_value(const DensityOperator& rho, std::span<const std::string> labels) {
    const double s = labels.size() == static_cast<std::size_t>(rho.layout().size())
                         ? von_neumann_entropy(rho)
                         : von_neumann_entropy(partial_trace(rho, labels));
    return {MeasureKind::Entropy, s, BoundKind::Exact, MeasureRoute::Direct, true};
}

CorrelationValue mutual_information_value(const DensityOperator& rho,
                                          std::span<const std::string> side_a,
                                          std::span<const std::string> side_b) {
    return {MeasureKind::MutualInfo, snap(mutual_information(rho, side_a, side_b)),
            BoundKind::Exact, MeasureRoute::Direct, true};
}

}  // namespace qpoly
