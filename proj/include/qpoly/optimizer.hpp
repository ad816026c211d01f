#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpoly/ensembles.hpp"
#include "qpoly/states.hpp"

namespace qpoly {

enum class Sense { Min, Max };

/// Budget and reproducibility knobs for the roof searches.
struct OptimizerConfig {
    int restarts = 8;
    int max_evals_per_restart = 2000;
    double tol = 1e-6;  // stop a restart when a full sweep improves less than this
    std::optional<int> branch_count;  // decomposition size; default rank^2
    std::uint64_t seed = 0;

    void validate() const;
    /// Same config with the per-restart evaluation budget scaled by `factor`.
    OptimizerConfig escalated(int factor) const;
};

struct OptimizationResult {
    double value = 0.0;  // bits
    Isometry best_isometry;
    long evals_used = 0;
    bool converged = false;
    Sense sense = Sense::Min;
};

/// Number of real parameters of an N x r isometry chart (2Nr - r^2).
int isometry_param_count(int rows, int cols);

/// Isometry from a Givens-rotation/phase chart. All-zero parameters give the
/// identity embedding [I_r; 0]; the chart is smooth and covers every isometry.
Matrix isometry_from_params(std::span<const double> params, int rows, int cols);

/// N x N unitary from N^2 parameters (the square case of the chart above).
Matrix unitary_from_params(std::span<const double> params, int n);

/// Extremizes the average branch entropy over all size-N pure-state
/// decompositions of rho, seen from `side`. Sense::Min gives an upper bound
/// on the entanglement of formation, Sense::Max a lower bound on the
/// entanglement of assistance. Deterministic given the seed.
OptimizationResult optimize_roof(const DensityOperator& rho,
                                 std::span<const std::string> side, Sense sense,
                                 const OptimizerConfig& cfg);

enum class MeasurementSearchMode { Duality, Direct };

/// Extremizes f({M_x}) = S(rho_A) - sum_x p_x S(rho_A^x) over rank-1
/// measurements on the `measured` labels. The default route purifies the
/// state and reuses optimize_roof on the complement (decompositions of the
/// kept-plus-ancilla state are exactly the measurements on `measured`); the
/// direct route searches measurement space itself and serves as a cross-check.
OptimizationResult optimize_rank1_measurement(const DensityOperator& rho,
                                              std::span<const std::string> measured,
                                              Sense sense, const OptimizerConfig& cfg,
                                              MeasurementSearchMode mode = MeasurementSearchMode::Duality);

/// Measurement whose outcome vectors are the conjugated rows of an isometry;
/// completeness holds by construction. Materializes Direct-mode results.
Rank1Measurement measurement_from_isometry(const Isometry& w);

}  // namespace qpoly
