#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpoly/measures.hpp"
#include "qpoly/states.hpp"

namespace qpoly {

/// One nonempty proper subset of the non-focus labels, paired with the index
/// of its complement within the family.
struct LabelSubset {
    std::vector<std::string> labels;
    int complement_index = -1;
};

/// All 2^n - 2 nonempty proper subsets of the n non-focus labels, ordered by
/// size then lexicographically by position; closed under complement.
struct SubsetFamily {
    std::vector<std::string> b_labels;
    std::vector<LabelSubset> subsets;
};

SubsetFamily enumerate_subsets(std::span<const std::string> b_labels);

enum class Verdict { Pass, Fail, Inconclusive, NotChecked };
const char* to_string(Verdict v);

/// Knobs for the chain verifications.
struct ChainOptions {
    double tolerance = 1e-3;   // slack >= -tolerance passes
    bool escalate = true;      // x4 evaluation budget once on negative slack
    bool allow_mixed = false;  // best-effort mode: lhs becomes a lower bound
};

/// Per-subset evaluation of a three-term polygamy chain
/// lhs <= normalization * sum_X per_subset[X] <= sum_i per_single[B_i].
struct PolygamyReport {
    std::string focus;
    SubsetFamily family;
    double lhs = 0.0;
    double middle = 0.0;
    double rhs = 0.0;
    std::vector<CorrelationValue> per_subset;   // family order
    std::vector<CorrelationValue> per_single;   // b_labels order
    double normalization = 1.0;                 // 1 / (2^(n-1) - 1)
    double slack_lhs_middle = 0.0;
    double slack_middle_rhs = 0.0;
    double tolerance = 1e-3;
    Verdict verdict_lhs_middle = Verdict::NotChecked;
    Verdict verdict_middle_rhs = Verdict::NotChecked;
    Verdict verdict_lhs_rhs = Verdict::NotChecked;  // the usual polygamy bound
    bool lhs_exact = true;
    bool escalated = false;

    Verdict overall() const;
};

/// Strong polygamy chain of the entanglement of assistance for a pure state:
/// every subset term is an EoA lower bound, the focus-side term is exact, so
/// negative slack beyond tolerance is reported as optimizer-limited
/// (Inconclusive), never as a violation.
PolygamyReport strong_polygamy_entanglement(const StateVector& psi, const std::string& focus,
                                            const OptimizerConfig& cfg,
                                            const ChainOptions& opts = {});

/// Mixed-state variant behind the allow_mixed flag: the leading term is a
/// lower bound too, so negative slack is Inconclusive by construction.
PolygamyReport strong_polygamy_entanglement(const DensityOperator& rho, const std::string& focus,
                                            const OptimizerConfig& cfg, const ChainOptions& opts);

/// Strong polygamy of the unlocalizable discord for a pure state. Only the
/// two-term inequality is theorem-backed; the single-party sum is reported
/// for reference with verdict NotChecked.
PolygamyReport strong_polygamy_discord(const StateVector& psi, const std::string& focus,
                                       const OptimizerConfig& cfg, const ChainOptions& opts = {});

/// One verified identity: both sides computed independently.
struct IdentityCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// The identity suite the chain derivations rest on, evaluated on a pure
/// state: complement-sum symmetry, conditional-entropy cancellation, the
/// entropy/classical-correlation trade-off and its assistance dual at the
/// first-singleton split, the assistance/discord conditional relation, the
/// subset-sum equality of EoA and UD, and the pure-state shortcuts.
std::vector<IdentityCheck> identity_suite(const StateVector& psi, const std::string& focus,
                                          const OptimizerConfig& cfg);

}  // namespace qpoly
