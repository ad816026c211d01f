#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qpoly/linalg.hpp"
#include "qpoly/measures.hpp"
#include "qpoly/named_states.hpp"
#include "qpoly/polygamy.hpp"
#include "qpoly/sampling.hpp"

namespace py = pybind11;
using namespace qpoly;

namespace {

SystemLayout layout_from_pairs(const std::vector<std::pair<std::string, long>>& parts) {
    std::vector<Part> ps;
    ps.reserve(parts.size());
    for (const auto& [label, dim] : parts) ps.push_back({label, dim});
    return SystemLayout(std::move(ps));
}

OptimizerConfig config_from_kwargs(int restarts, int max_evals, double tol,
                                   std::optional<int> branches, std::uint64_t seed) {
    OptimizerConfig cfg;
    cfg.restarts = restarts;
    cfg.max_evals_per_restart = max_evals;
    cfg.tol = tol;
    cfg.branch_count = branches;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_qpoly, m) {
    m.doc() = "bipartite correlation measures and polygamy chain verification";

    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_IOError);

    py::class_<SystemLayout>(m, "SystemLayout")
        .def(py::init(&layout_from_pairs), py::arg("parts"),
             "parts: list of (label, dim) pairs")
        .def_property_readonly("total_dim", &SystemLayout::total_dim)
        .def_property_readonly("labels", &SystemLayout::labels)
        .def("__repr__", [](const SystemLayout& l) {
            std::string out = "SystemLayout([";
            for (int i = 0; i < l.size(); ++i) {
                if (i) out += ", ";
                out += "(\"" + l.part(i).label + "\", " + std::to_string(l.part(i).dim) + ")";
            }
            return out + "])";
        });

    py::class_<StateVector>(m, "StateVector")
        .def(py::init<SystemLayout, Vector>(), py::arg("layout"), py::arg("amplitudes"))
        .def_property_readonly("layout", &StateVector::layout)
        .def_property_readonly("amplitudes", &StateVector::amplitudes)
        .def("to_density", &StateVector::to_density);

    py::class_<DensityOperator>(m, "DensityOperator")
        .def(py::init<SystemLayout, Matrix>(), py::arg("layout"), py::arg("matrix"))
        .def_property_readonly("layout", &DensityOperator::layout)
        .def_property_readonly("matrix", &DensityOperator::matrix)
        .def_property_readonly("rank", &DensityOperator::rank)
        .def_property_readonly("is_pure", &DensityOperator::is_pure);

    m.def("tensor_product",
          py::overload_cast<const StateVector&, const StateVector&>(&tensor_product),
          py::arg("a"), py::arg("b"));
    m.def("tensor_product",
          py::overload_cast<const DensityOperator&, const DensityOperator&>(&tensor_product),
          py::arg("a"), py::arg("b"));
    m.def(
        "partial_trace",
        [](const DensityOperator& rho, const std::vector<std::string>& keep) {
            return partial_trace(rho, keep);
        },
        py::arg("state"), py::arg("keep"));
    m.def(
        "partial_trace",
        [](const StateVector& psi, const std::vector<std::string>& keep) {
            return partial_trace(psi, keep);
        },
        py::arg("state"), py::arg("keep"));
    m.def("purify", &purify, py::arg("rho"), py::arg("ancilla_label") = "C*");

    m.def("von_neumann_entropy", &von_neumann_entropy, py::arg("rho"), "entropy in bits");
    m.def(
        "conditional_entropy",
        [](const DensityOperator& rho, const std::vector<std::string>& target,
           const std::vector<std::string>& condition) {
            return conditional_entropy(rho, target, condition);
        },
        py::arg("rho"), py::arg("target"), py::arg("condition"));
    m.def(
        "mutual_information",
        [](const DensityOperator& rho, const std::vector<std::string>& side_a,
           const std::vector<std::string>& side_b) {
            return mutual_information(rho, side_a, side_b);
        },
        py::arg("rho"), py::arg("side_a"), py::arg("side_b"));

    py::class_<OptimizerConfig>(m, "OptimizerConfig")
        .def(py::init(&config_from_kwargs), py::arg("restarts") = 8,
             py::arg("max_evals") = 2000, py::arg("tol") = 1e-6,
             py::arg("branches") = std::nullopt, py::arg("seed") = 0)
        .def_readwrite("restarts", &OptimizerConfig::restarts)
        .def_readwrite("max_evals", &OptimizerConfig::max_evals_per_restart)
        .def_readwrite("tol", &OptimizerConfig::tol)
        .def_readwrite("branches", &OptimizerConfig::branch_count)
        .def_readwrite("seed", &OptimizerConfig::seed);

    py::class_<CorrelationValue>(m, "CorrelationValue")
        .def_readonly("value", &CorrelationValue::value)
        .def_property_readonly("kind",
                               [](const CorrelationValue& v) { return to_string(v.kind); })
        .def_property_readonly("bound",
                               [](const CorrelationValue& v) { return to_string(v.bound); })
        .def_property_readonly("route",
                               [](const CorrelationValue& v) { return to_string(v.route); })
        .def_readonly("converged", &CorrelationValue::converged)
        .def("__repr__", [](const CorrelationValue& v) {
            return std::string(to_string(v.kind)) + "(" + std::to_string(v.value) + ", " +
                   to_string(v.bound) + ", " + to_string(v.route) + ")";
        });

    const OptimizerConfig default_cfg;
    m.def(
        "eof",
        [](const DensityOperator& rho, const std::vector<std::string>& side,
           const OptimizerConfig& cfg) { return eof(rho, side, cfg); },
        py::arg("rho"), py::arg("side"), py::arg("cfg") = default_cfg,
        "entanglement of formation across side | rest (upper bound)");
    m.def(
        "eoa",
        [](const DensityOperator& rho, const std::vector<std::string>& side,
           const OptimizerConfig& cfg) { return eoa(rho, side, cfg); },
        py::arg("rho"), py::arg("side"), py::arg("cfg") = default_cfg,
        "entanglement of assistance across side | rest (lower bound)");
    m.def(
        "one_way_classical_correlation",
        [](const DensityOperator& rho, const std::vector<std::string>& measured,
           const OptimizerConfig& cfg, const std::string& route) {
            return one_way_classical_correlation(
                rho, measured, cfg,
                route == "direct" ? JccRoute::Direct : JccRoute::KoashiWinter);
        },
        py::arg("rho"), py::arg("measured"), py::arg("cfg") = default_cfg,
        py::arg("route") = "koashi-winter");
    m.def(
        "unlocalizable_entanglement",
        [](const DensityOperator& rho, const std::vector<std::string>& measured,
           const OptimizerConfig& cfg, const std::string& route) {
            return unlocalizable_entanglement(rho, measured, cfg,
                                              route == "direct" ? UeRoute::Direct : UeRoute::Dual);
        },
        py::arg("rho"), py::arg("measured"), py::arg("cfg") = default_cfg,
        py::arg("route") = "dual");
    m.def(
        "quantum_discord",
        [](const DensityOperator& rho, const std::vector<std::string>& measured,
           const OptimizerConfig& cfg) { return quantum_discord(rho, measured, cfg); },
        py::arg("rho"), py::arg("measured"), py::arg("cfg") = default_cfg);
    m.def(
        "unlocalizable_discord",
        [](const DensityOperator& rho, const std::vector<std::string>& measured,
           const OptimizerConfig& cfg) { return unlocalizable_discord(rho, measured, cfg); },
        py::arg("rho"), py::arg("measured"), py::arg("cfg") = default_cfg);
    m.def("wootters_eof_two_qubit", &wootters_eof_two_qubit, py::arg("rho"));
    m.def("wootters_concurrence", &wootters_concurrence, py::arg("rho"));

    py::class_<LabelSubset>(m, "LabelSubset")
        .def_readonly("labels", &LabelSubset::labels)
        .def_readonly("complement_index", &LabelSubset::complement_index);
    py::class_<SubsetFamily>(m, "SubsetFamily")
        .def_readonly("b_labels", &SubsetFamily::b_labels)
        .def_readonly("subsets", &SubsetFamily::subsets);
    m.def(
        "enumerate_subsets",
        [](const std::vector<std::string>& labels) { return enumerate_subsets(labels); },
        py::arg("b_labels"));

    py::class_<ChainOptions>(m, "ChainOptions")
        .def(py::init([](double tolerance, bool escalate, bool allow_mixed) {
                 return ChainOptions{tolerance, escalate, allow_mixed};
             }),
             py::arg("tolerance") = 1e-3, py::arg("escalate") = true,
             py::arg("allow_mixed") = false)
        .def_readwrite("tolerance", &ChainOptions::tolerance)
        .def_readwrite("escalate", &ChainOptions::escalate)
        .def_readwrite("allow_mixed", &ChainOptions::allow_mixed);

    py::class_<PolygamyReport>(m, "PolygamyReport")
        .def_readonly("focus", &PolygamyReport::focus)
        .def_readonly("family", &PolygamyReport::family)
        .def_readonly("lhs", &PolygamyReport::lhs)
        .def_readonly("middle", &PolygamyReport::middle)
        .def_readonly("rhs", &PolygamyReport::rhs)
        .def_readonly("per_subset", &PolygamyReport::per_subset)
        .def_readonly("per_single", &PolygamyReport::per_single)
        .def_readonly("normalization", &PolygamyReport::normalization)
        .def_readonly("slack_lhs_middle", &PolygamyReport::slack_lhs_middle)
        .def_readonly("slack_middle_rhs", &PolygamyReport::slack_middle_rhs)
        .def_readonly("tolerance", &PolygamyReport::tolerance)
        .def_readonly("lhs_exact", &PolygamyReport::lhs_exact)
        .def_readonly("escalated", &PolygamyReport::escalated)
        .def_property_readonly(
            "verdict_lhs_middle",
            [](const PolygamyReport& r) { return to_string(r.verdict_lhs_middle); })
        .def_property_readonly(
            "verdict_middle_rhs",
            [](const PolygamyReport& r) { return to_string(r.verdict_middle_rhs); })
        .def_property_readonly(
            "verdict_lhs_rhs",
            [](const PolygamyReport& r) { return to_string(r.verdict_lhs_rhs); })
        .def_property_readonly("overall",
                               [](const PolygamyReport& r) { return to_string(r.overall()); });

    m.def(
        "strong_polygamy_entanglement",
        [](const StateVector& psi, const std::string& focus, const OptimizerConfig& cfg,
           const ChainOptions& opts) {
            return strong_polygamy_entanglement(psi, focus, cfg, opts);
        },
        py::arg("psi"), py::arg("focus") = "A", py::arg("cfg") = default_cfg,
        py::arg("options") = ChainOptions{});
    m.def(
        "strong_polygamy_entanglement_mixed",
        [](const DensityOperator& rho, const std::string& focus, const OptimizerConfig& cfg,
           const ChainOptions& opts) {
            return strong_polygamy_entanglement(rho, focus, cfg, opts);
        },
        py::arg("rho"), py::arg("focus") = "A", py::arg("cfg") = default_cfg,
        py::arg("options") = ChainOptions{});
    m.def(
        "strong_polygamy_discord",
        [](const StateVector& psi, const std::string& focus, const OptimizerConfig& cfg,
           const ChainOptions& opts) { return strong_polygamy_discord(psi, focus, cfg, opts); },
        py::arg("psi"), py::arg("focus") = "A", py::arg("cfg") = default_cfg,
        py::arg("options") = ChainOptions{});

    py::class_<IdentityCheck>(m, "IdentityCheck")
        .def_readonly("name", &IdentityCheck::name)
        .def_readonly("lhs", &IdentityCheck::lhs)
        .def_readonly("rhs", &IdentityCheck::rhs)
        .def_readonly("residual", &IdentityCheck::residual)
        .def_readonly("tolerance", &IdentityCheck::tolerance)
        .def_readonly("passed", &IdentityCheck::pass)
        .def("__repr__", [](const IdentityCheck& c) {
            return c.name + "(residual=" + std::to_string(c.residual) + ", " +
                   (c.pass ? "pass" : "fail") + ")";
        });
    m.def(
        "identity_suite",
        [](const StateVector& psi, const std::string& focus, const OptimizerConfig& cfg) {
            return identity_suite(psi, focus, cfg);
        },
        py::arg("psi"), py::arg("focus") = "A", py::arg("cfg") = default_cfg);

    m.def(
        "gen_named_state",
        [](const std::string& spec) { return gen_named_state(parse_state_spec(spec)); },
        py::arg("spec"), "ghz,N | w,N | dicke,N,K | product,N | bell");
    m.def(
        "haar_random_pure",
        [](const std::vector<long>& dims, std::uint64_t seed) {
            return haar_random_pure(dims, seed);
        },
        py::arg("dims"), py::arg("seed"));
    m.def(
        "random_mixed",
        [](const std::vector<long>& dims, std::uint64_t seed) { return random_mixed(dims, seed); },
        py::arg("dims"), py::arg("seed"));
}
