#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qpoly/states.hpp"

namespace qpoly {

/// Default labels A, B1, B2, ... for a party count.
std::vector<std::string> default_labels(int parties);

/// Layout with default labels over the given local dimensions.
SystemLayout layout_from_dims(std::span<const long> dims);

/// Unitarily invariant random pure state: per-amplitude standard complex
/// normals (one Box-Muller pair each, in index order), then normalized.
/// Deterministic per seed.
StateVector haar_random_pure(const SystemLayout& layout, std::uint64_t seed);
StateVector haar_random_pure(std::span<const long> dims, std::uint64_t seed);

/// Full-rank random mixed state: partial trace of a Haar-random pure state
/// on the layout extended by an ancilla of the layout's total dimension.
DensityOperator random_mixed(const SystemLayout& layout, std::uint64_t seed);
DensityOperator random_mixed(std::span<const long> dims, std::uint64_t seed);

}  // namespace qpoly
