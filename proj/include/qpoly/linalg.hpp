#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpoly/states.hpp"

namespace qpoly {

/// Eigendecomposition of a Hermitian matrix.
struct EigResult {
    Eigen::VectorXd values;  // descending
    Matrix vectors;          // orthonormal columns, vectors.col(k) <-> values[k]
};

/// Hermitian eigendecomposition (input checked to 1e-9); eigenvalues descending.
EigResult eig_hermitian(const Matrix& m);

/// -sum p log2 p over a spectrum, in bits; entries below 1e-12 contribute 0.
double entropy_of_spectrum(std::span<const double> spectrum);

/// Binary entropy h(x) in bits.
double binary_entropy(double x);

/// Von Neumann entropy S(rho) in bits.
double von_neumann_entropy(const DensityOperator& rho);

/// S(target | condition) = S(rho_{target+condition}) - S(rho_condition), in bits.
/// May be negative. An empty condition degrades to the marginal entropy of target.
double conditional_entropy(const DensityOperator& rho,
                           std::span<const std::string> target,
                           std::span<const std::string> condition);

/// Mutual information across a bipartition of rho's labels, in bits.
double mutual_information(const DensityOperator& rho,
                          std::span<const std::string> side_a,
                          std::span<const std::string> side_b);

}  // namespace qpoly
