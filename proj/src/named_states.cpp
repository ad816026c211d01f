#include "qpoly/named_states.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "qpoly/sampling.hpp"

namespace qpoly {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

long parse_positive(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        const long v = std::stol(text, &used);
        if (used != text.size() || v < 1) throw InvalidInput("");
        return v;
    } catch (...) {
        throw InvalidInput(std::string("invalid ") + what + ": '" + text + "'");
    }
}

long binomial(int n, int k) {
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

StateSpec parse_state_spec(const std::string& text) {
    const std::vector<std::string> fields = split(text, ',');
    if (fields.empty()) throw InvalidInput("empty state spec");
    const std::string& kind = fields[0];
    StateSpec spec;
    auto want = [&](std::size_t n) {
        if (fields.size() != n)
            throw InvalidInput("state spec '" + text + "' has wrong field count");
    };
    if (kind == "ghz" || kind == "w" || kind == "product") {
        want(2);
        spec.kind = kind == "ghz"       ? StateSpec::Kind::Ghz
                    : kind == "w"       ? StateSpec::Kind::W
                                        : StateSpec::Kind::Product;
        spec.parties = static_cast<int>(parse_positive(fields[1], "party count"));
    } else if (kind == "dicke") {
        want(3);
        spec.kind = StateSpec::Kind::Dicke;
        spec.parties = static_cast<int>(parse_positive(fields[1], "party count"));
        spec.excitations = static_cast<int>(parse_positive(fields[2], "excitation count"));
    } else if (kind == "bell") {
        want(1);
        spec.kind = StateSpec::Kind::Bell;
        spec.parties = 2;
    } else if (kind == "random-pure" || kind == "random-mixed") {
        want(2);
        spec.kind = kind == "random-pure" ? StateSpec::Kind::RandomPure
                                          : StateSpec::Kind::RandomMixed;
        for (const std::string& d : split(fields[1], 'x'))
            spec.dims.push_back(parse_positive(d, "dimension"));
        if (spec.dims.empty()) throw InvalidInput("random spec needs dimensions");
        spec.parties = static_cast<int>(spec.dims.size());
    } else {
        throw InvalidInput("unknown state kind: '" + kind + "'");
    }
    if (spec.parties < 2) throw InvalidInput("state needs at least two parties");
    return spec;
}

std::string to_string(const StateSpec& spec) {
    switch (spec.kind) {
        case StateSpec::Kind::Ghz: return "ghz," + std::to_string(spec.parties);
        case StateSpec::Kind::W: return "w," + std::to_string(spec.parties);
        case StateSpec::Kind::Product: return "product," + std::to_string(spec.parties);
        case StateSpec::Kind::Dicke:
            return "dicke," + std::to_string(spec.parties) + "," + std::to_string(spec.excitations);
        case StateSpec::Kind::Bell: return "bell";
        case StateSpec::Kind::RandomPure:
        case StateSpec::Kind::RandomMixed: {
            std::string dims;
            for (std::size_t i = 0; i < spec.dims.size(); ++i)
                dims += (i ? "x" : "") + std::to_string(spec.dims[i]);
            return (spec.kind == StateSpec::Kind::RandomPure ? "random-pure," : "random-mixed,") +
                   dims;
        }
    }
    return "?";
}

StateVector gen_named_state(const StateSpec& spec) {
    const int n = spec.parties;
    switch (spec.kind) {
        case StateSpec::Kind::RandomPure:
        case StateSpec::Kind::RandomMixed:
            throw InvalidInput("random specs are sampled, not generated; use the sampling API");
        case StateSpec::Kind::Dicke:
            if (spec.excitations >= n)
                throw InvalidInput("dicke excitation count must be below the party count");
            break;
        default: break;
    }

    std::vector<Part> parts;
    for (const std::string& l : default_labels(n)) parts.push_back({l, 2});
    SystemLayout layout(std::move(parts));
    const long dim = layout.total_dim();
    Vector amps = Vector::Zero(dim);

    switch (spec.kind) {
        case StateSpec::Kind::Ghz:
        case StateSpec::Kind::Bell: {
            const double w = 1.0 / std::sqrt(2.0);
            amps[0] = w;
            amps[dim - 1] = w;
            break;
        }
        case StateSpec::Kind::W: {
            const double w = 1.0 / std::sqrt(static_cast<double>(n));
            for (int i = 0; i < n; ++i) amps[1L << (n - 1 - i)] = w;
            break;
        }
        case StateSpec::Kind::Dicke: {
            const double w = 1.0 / std::sqrt(static_cast<double>(binomial(n, spec.excitations)));
            for (long b = 0; b < dim; ++b)
                if (std::popcount(static_cast<unsigned long>(b)) == spec.excitations) amps[b] = w;
            break;
        }
        case StateSpec::Kind::Product:
            amps[0] = 1.0;
            break;
        default: break;
    }
    return StateVector(std::move(layout), std::move(amps));
}

}  // namespace qpoly
