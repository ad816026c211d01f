#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpoly/errors.hpp"

namespace qpoly {

/// One tensor factor: a label and its local dimension (>= 2).
struct Part {
    std::string label;
    long dim = 0;

    friend bool operator==(const Part&, const Part&) = default;
};

/// Ordered list of labelled tensor factors of a composite system.
///
/// The first factor is the most significant index digit (Kronecker
/// convention): on dims [2,2] the basis state |ab> has global index 2a+b.
/// Dense storage only; the product of dimensions is capped at 256.
class SystemLayout {
  public:
    static constexpr long kMaxTotalDim = 256;

    explicit SystemLayout(std::vector<Part> parts);

    long total_dim() const { return total_dim_; }
    int size() const { return static_cast<int>(parts_.size()); }
    const Part& part(int i) const { return parts_.at(static_cast<std::size_t>(i)); }
    const std::vector<Part>& parts() const { return parts_; }

    std::vector<std::string> labels() const;
    bool has_label(const std::string& label) const;
    /// Position of `label` in the factor order; throws InvalidInput if absent.
    int index_of(const std::string& label) const;

    /// Positions of the given labels, sorted into layout order.
    /// Rejects unknown and duplicated labels.
    std::vector<int> positions_of(std::span<const std::string> subset) const;

    /// Sub-layout of the given labels, factors kept in layout order.
    SystemLayout sublayout(std::span<const std::string> subset) const;

    /// Labels not in `subset`, in layout order.
    std::vector<std::string> complement(std::span<const std::string> subset) const;

    /// Concatenation this ++ other; label collisions are rejected.
    SystemLayout concat(const SystemLayout& other) const;

    friend bool operator==(const SystemLayout&, const SystemLayout&) = default;

  private:
    std::vector<Part> parts_;
    long total_dim_ = 1;
};

/// Splits global basis indices of a layout into (kept, rest) sub-indices
/// for a fixed label subset. Lookup tables, O(1) per query.
class IndexSplit {
  public:
    IndexSplit(const SystemLayout& layout, std::span<const std::string> keep);

    long keep_dim() const { return keep_dim_; }
    long rest_dim() const { return rest_dim_; }

    long keep_of(long global) const { return keep_of_[static_cast<std::size_t>(global)]; }
    long rest_of(long global) const { return rest_of_[static_cast<std::size_t>(global)]; }
    long merge(long keep, long rest) const {
        return keep_base_[static_cast<std::size_t>(keep)] + rest_base_[static_cast<std::size_t>(rest)];
    }

  private:
    long keep_dim_ = 1;
    long rest_dim_ = 1;
    std::vector<long> keep_of_, rest_of_;   // global -> sub-index
    std::vector<long> keep_base_, rest_base_;  // sub-index -> global contribution
};

}  // namespace qpoly
