#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qpoly/states.hpp"

namespace qpoly {

/// A generatable state: a named family with a party count, or a seeded
/// random state over explicit dimensions.
struct StateSpec {
    enum class Kind { Ghz, W, Dicke, Product, Bell, RandomPure, RandomMixed };
    Kind kind = Kind::Ghz;
    int parties = 3;           // named kinds (qubits)
    int excitations = 1;       // dicke only
    std::vector<long> dims;    // random kinds
};

/// Parses "ghz,4", "w,3", "dicke,4,2", "product,3", "bell",
/// "random-pure,2x2x2", "random-mixed,2x2".
StateSpec parse_state_spec(const std::string& text);
std::string to_string(const StateSpec& spec);

/// Deterministic construction of the named pure states (GHZ, W, Dicke,
/// product, Bell) on default labels A, B1, ...
StateVector gen_named_state(const StateSpec& spec);

}  // namespace qpoly
