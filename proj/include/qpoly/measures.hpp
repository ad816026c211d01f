#pragma once

#include <span>
#include <string>
#include <vector>

#include "qpoly/optimizer.hpp"
#include "qpoly/states.hpp"

namespace qpoly {

enum class MeasureKind { EoF, EoA, Jcc, UE, Discord, UD, Entropy, MutualInfo };
enum class BoundKind { Exact, Lower, Upper };
enum class MeasureRoute { Direct, Dual, PureShortcut, ClosedForm };

/// A computed correlation quantity with bound-direction metadata, so
/// downstream inequality checks know which direction is conservative.
struct CorrelationValue {
    MeasureKind kind;
    double value = 0.0;  // bits
    BoundKind bound = BoundKind::Exact;
    MeasureRoute route = MeasureRoute::Direct;
    bool converged = true;
};

const char* to_string(MeasureKind k);
const char* to_string(BoundKind b);
const char* to_string(MeasureRoute r);

enum class JccRoute { Direct, KoashiWinter };
enum class UeRoute { Direct, Dual };

/// Entanglement of formation across side_a | side_b: minimum average branch
/// entropy over pure-state decompositions. Upper bound; exact on pure input.
CorrelationValue eof(const DensityOperator& rho, std::span<const std::string> side_a,
                     const OptimizerConfig& cfg);

/// Entanglement of assistance: the roof maximum. Lower bound; exact on pure
/// input, where every decomposition averages to the marginal entropy.
CorrelationValue eoa(const DensityOperator& rho, std::span<const std::string> side_a,
                     const OptimizerConfig& cfg);

/// One-way classical correlation J^<-: maximal entropy reduction of the
/// unmeasured side by a rank-1 measurement on `measured`. Lower bound either
/// route; the default rewrites it as S(rho_A) - EoF of the purified complement.
CorrelationValue one_way_classical_correlation(const DensityOperator& rho,
                                               std::span<const std::string> measured,
                                               const OptimizerConfig& cfg,
                                               JccRoute route = JccRoute::KoashiWinter);

/// One-way unlocalizable entanglement: the minimal such entropy reduction.
/// Upper bound; the default route is S(rho_A) - EoA of the purified complement.
CorrelationValue unlocalizable_entanglement(const DensityOperator& rho,
                                            std::span<const std::string> measured,
                                            const OptimizerConfig& cfg,
                                            UeRoute route = UeRoute::Dual);

/// Quantum discord: mutual information minus one-way classical correlation.
CorrelationValue quantum_discord(const DensityOperator& rho,
                                 std::span<const std::string> measured,
                                 const OptimizerConfig& cfg);

/// One-way unlocalizable discord: mutual information minus UE.
CorrelationValue unlocalizable_discord(const DensityOperator& rho,
                                       std::span<const std::string> measured,
                                       const OptimizerConfig& cfg);

/// Closed-form two-qubit entanglement of formation from the concurrence
/// (spin-flipped spectrum). External oracle for the roof optimizer.
CorrelationValue wootters_eof_two_qubit(const DensityOperator& rho);

/// Concurrence of a two-qubit state (the max(0, l1-l2-l3-l4) spectrum gap).
double wootters_concurrence(const DensityOperator& rho);

/// Marginal entropy / mutual information wrapped with metadata, for the CLI.
CorrelationValue entropy_value(const DensityOperator& rho, std::span<const std::string> labels);
CorrelationValue mutual_information_value(const DensityOperator& rho,
                                          std::span<const std::string> side_a,
                                          std::span<const std::string> side_b);

}  // namespace qpoly
