#include "qpoly/layout.hpp"

#include <algorithm>
#include <unordered_set>

namespace qpoly {

SystemLayout::SystemLayout(std::vector<Part> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw InvalidInput("layout needs at least one factor");
    std::unordered_set<std::string> seen;
    for (const Part& p : parts_) {
        if (p.label.empty()) throw InvalidInput("factor label must be nonempty");
        if (!seen.insert(p.label).second)
            throw InvalidInput("duplicate factor label: " + p.label);
        if (p.dim < 2) throw InvalidInput("factor dimension must be >= 2: " + p.label);
        total_dim_ *= p.dim;
        if (total_dim_ > kMaxTotalDim)
            throw InvalidInput("total dimension exceeds dense-storage cap of 256");
    }
}

std::vector<std::string> SystemLayout::labels() const {
    std::vector<std::string> out;
    out.reserve(parts_.size());
    for (const Part& p : parts_) out.push_back(p.label);
    return out;
}

bool SystemLayout::has_label(const std::string& label) const {
    return std::any_of(parts_.begin(), parts_.end(),
                       [&](const Part& p) { return p.label == label; });
}

int SystemLayout::index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
        if (parts_[static_cast<std::size_t>(i)].label == label) return i;
    throw InvalidInput("unknown label: " + label);
}

std::vector<int> SystemLayout::positions_of(std::span<const std::string> subset) const {
    std::unordered_set<std::string> seen;
    std::vector<int> pos;
    pos.reserve(subset.size());
    for (const std::string& l : subset) {
        if (!seen.insert(l).second) throw InvalidInput("duplicate label in subset: " + l);
        pos.push_back(index_of(l));
    }
    std::sort(pos.begin(), pos.end());
    return pos;
}

SystemLayout SystemLayout::sublayout(std::span<const std::string> subset) const {
    std::vector<Part> kept;
    for (int i : positions_of(subset)) kept.push_back(parts_[static_cast<std::size_t>(i)]);
    return SystemLayout(std::move(kept));
}

std::vector<std::string> SystemLayout::complement(std::span<const std::string> subset) const {
    std::vector<int> pos = positions_of(subset);
    std::vector<std::string> out;
    for (int i = 0; i < size(); ++i)
        if (!std::binary_search(pos.begin(), pos.end(), i))
            out.push_back(parts_[static_cast<std::size_t>(i)].label);
    return out;
}

SystemLayout SystemLayout::concat(const SystemLayout& other) const {
    std::vector<Part> all = parts_;
    for (const Part& p : other.parts()) {
        if (has_label(p.label))
            throw InvalidInput("label collision in tensor product: " + p.label);
        all.push_back(p);
    }
    return SystemLayout(std::move(all));
}

IndexSplit::IndexSplit(const SystemLayout& layout, std::span<const std::string> keep) {
    if (keep.empty()) throw InvalidInput("kept label set must be nonempty");
    std::vector<int> kept_pos = layout.positions_of(keep);
    const int n = layout.size();
    std::vector<bool> is_kept(static_cast<std::size_t>(n), false);
    for (int i : kept_pos) is_kept[static_cast<std::size_t>(i)] = true;

    std::vector<long> dims(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        dims[static_cast<std::size_t>(i)] = layout.part(i).dim;
        (is_kept[static_cast<std::size_t>(i)] ? keep_dim_ : rest_dim_) *= layout.part(i).dim;
    }

    // Per-factor strides within the kept / rest groupings, factor order preserved.
    std::vector<long> keep_stride(static_cast<std::size_t>(n), 0), rest_stride(static_cast<std::size_t>(n), 0);
    long ks = 1, rs = 1;
    for (int i = n - 1; i >= 0; --i) {
        if (is_kept[static_cast<std::size_t>(i)]) {
            keep_stride[static_cast<std::size_t>(i)] = ks;
            ks *= dims[static_cast<std::size_t>(i)];
        } else {
            rest_stride[static_cast<std::size_t>(i)] = rs;
            rs *= dims[static_cast<std::size_t>(i)];
        }
    }

    const long total = layout.total_dim();
    keep_of_.resize(static_cast<std::size_t>(total));
    rest_of_.resize(static_cast<std::size_t>(total));
    keep_base_.assign(static_cast<std::size_t>(keep_dim_), 0);
    rest_base_.assign(static_cast<std::size_t>(rest_dim_), 0);
    for (long g = 0; g < total; ++g) {
        long rem = g, k = 0, r = 0;
        // decompose g into per-factor digits, most significant first
        long div = total;
        for (int i = 0; i < n; ++i) {
            div /= dims[static_cast<std::size_t>(i)];
            const long digit = rem / div;
            rem %= div;
            if (is_kept[static_cast<std::size_t>(i)])
                k += digit * keep_stride[static_cast<std::size_t>(i)];
            else
                r += digit * rest_stride[static_cast<std::size_t>(i)];
        }
        keep_of_[static_cast<std::size_t>(g)] = k;
        rest_of_[static_cast<std::size_t>(g)] = r;
        if (rest_of_[static_cast<std::size_t>(g)] == 0) keep_base_[static_cast<std::size_t>(k)] = g;
        if (keep_of_[static_cast<std::size_t>(g)] == 0) rest_base_[static_cast<std::size_t>(r)] = g;
    }
}

}  // namespace qpoly
