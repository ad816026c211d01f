#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpoly/linalg.hpp"
#include "qpoly/states.hpp"

namespace qpoly {

inline constexpr double kIsometryTol = 1e-8;
inline constexpr double kCompletenessTol = 1e-8;

/// N x r matrix with orthonormal columns (V^dag V = I_r), N >= r.
class Isometry {
  public:
    explicit Isometry(Matrix v);

    const Matrix& matrix() const { return v_; }
    long rows() const { return v_.rows(); }
    long cols() const { return v_.cols(); }

  private:
    Matrix v_;
};

/// One element of a pure-state decomposition.
struct EnsembleBranch {
    double probability = 0.0;
    StateVector state;
};

/// Probabilistic mixture of pure states realizing a target density operator.
/// Zero-probability branches are retained (with a placeholder basis state) so
/// isometry bookkeeping stays uniform; entropy averages skip them.
class PureEnsemble {
  public:
    PureEnsemble(DensityOperator target, std::vector<EnsembleBranch> branches);

    const DensityOperator& target() const { return target_; }
    const std::vector<EnsembleBranch>& branches() const { return branches_; }
    int branch_count() const { return static_cast<int>(branches_.size()); }

  private:
    DensityOperator target_;
    std::vector<EnsembleBranch> branches_;
};

/// Rank-1 measurement {M_x = |m_x><m_x|}: unnormalized outcome vectors whose
/// projectors sum to the identity on the measured factor.
class Rank1Measurement {
  public:
    explicit Rank1Measurement(std::vector<Vector> outcome_vectors);

    const std::vector<Vector>& outcome_vectors() const { return vectors_; }
    int outcome_count() const { return static_cast<int>(vectors_.size()); }
    long dim() const { return dim_; }

  private:
    std::vector<Vector> vectors_;
    long dim_ = 0;
};

/// One measurement outcome: probability and the conditional state of the
/// unmeasured side. Outcomes below the probability floor carry a maximally
/// mixed placeholder and are excluded from downstream averages.
struct MeasurementOutcome {
    double probability = 0.0;
    DensityOperator post_state;
};

struct MeasurementOutcomeSet {
    std::vector<MeasurementOutcome> outcomes;
};

/// Eigendecomposition ensemble: eigenvector branches weighted by eigenvalues.
PureEnsemble spectral_ensemble(const DensityOperator& rho);

/// Decomposition generated from the spectral one by an isometry:
/// sqrt(p_i)|phi_i> = sum_j V_ij sqrt(lambda_j)|e_j>. Column count must equal
/// rank(rho); every isometry yields a valid decomposition of rho.
PureEnsemble hjw_ensemble(const DensityOperator& rho, const Isometry& v);

/// sum_i p_i S(tr_{side^c} |phi_i><phi_i|) in bits, skipping p_i below 1e-12.
double average_branch_entropy(const PureEnsemble& ens, std::span<const std::string> side);

/// Applies a rank-1 measurement to the `measured` labels of rho.
MeasurementOutcomeSet measure_rank1(const DensityOperator& rho,
                                    std::span<const std::string> measured,
                                    const Rank1Measurement& m);

/// Measuring the assisting side of a pure state realizes a pure-state
/// decomposition of the kept side's reduced state.
PureEnsemble ensemble_measurement_duality(const StateVector& psi,
                                          std::span<const std::string> kept,
                                          std::span<const std::string> assisting,
                                          const Rank1Measurement& m);

/// Converse direction of the duality: a purification of the ensemble's target
/// plus a rank-1 measurement on its ancilla that reproduces the ensemble.
struct EnsembleRealization {
    StateVector purification;
    std::string ancilla_label;
    Rank1Measurement measurement;
};

EnsembleRealization measurement_from_ensemble(const PureEnsemble& ens,
                                              const std::string& ancilla_label = "C*");

}  // namespace qpoly
