#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "qpoly/layout.hpp"

namespace qpoly {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Validation tolerances. Linear-algebra error lives well below these;
// optimizer error is handled separately (1e-4 scale).
inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kUnitNormTol = 1e-9;
inline constexpr double kRankEigTol = 1e-10;   // eigenvalue threshold for rank
inline constexpr double kEntropyClamp = 1e-12; // eigenvalues below this add 0 to entropy
inline constexpr double kProbFloor = 1e-12;    // branches/outcomes below this are skipped
inline constexpr double kReconstructTol = 1e-8;

/// Mixed state: Hermitian, unit-trace, positive-semidefinite matrix on a layout.
class DensityOperator {
  public:
    DensityOperator(SystemLayout layout, Matrix matrix);

    const SystemLayout& layout() const { return layout_; }
    const Matrix& matrix() const { return matrix_; }
    long dim() const { return layout_.total_dim(); }

    /// Number of eigenvalues above the rank threshold.
    int rank() const;
    /// True when tr(rho^2) is 1 within tolerance.
    bool is_pure() const;

  private:
    SystemLayout layout_;
    Matrix matrix_;
};

/// Pure state: unit-norm amplitude vector on a layout.
class StateVector {
  public:
    StateVector(SystemLayout layout, Vector amplitudes);

    const SystemLayout& layout() const { return layout_; }
    const Vector& amplitudes() const { return amplitudes_; }
    long dim() const { return layout_.total_dim(); }

    /// The rank-1 projector |psi><psi| as a DensityOperator.
    DensityOperator to_density() const;

  private:
    SystemLayout layout_;
    Vector amplitudes_;
};

/// Kronecker product; output layout is the concatenation of the inputs'.
StateVector tensor_product(const StateVector& a, const StateVector& b);
DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b);

/// Reduced density operator on the kept labels (layout order preserved).
DensityOperator partial_trace(const DensityOperator& state, std::span<const std::string> keep);
DensityOperator partial_trace(const StateVector& state, std::span<const std::string> keep);

/// Purification: appends one ancilla factor of dimension max(rank, 2) under
/// `ancilla_label`; tracing the ancilla out reproduces the input.
StateVector purify(const DensityOperator& rho, const std::string& ancilla_label = "C*");

}  // namespace qpoly
