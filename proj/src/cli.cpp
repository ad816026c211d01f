#include "qpoly/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qpoly/io.hpp"
#include "qpoly/linalg.hpp"
#include "qpoly/measures.hpp"
#include "qpoly/named_states.hpp"
#include "qpoly/polygamy.hpp"
#include "qpoly/rng.hpp"
#include "qpoly/sampling.hpp"

namespace qpoly {

namespace {

struct CommonOpts {
    std::string state_path;
    std::string gen_spec;
    std::string focus = "A";
    std::string marginal;
    std::string measure;
    std::string route;
    int restarts = 8;
    int max_evals = 2000;
    double tol = 1e-6;
    int branches = 0;
    std::uint64_t seed = 1;
    double chain_tol = 1e-3;
    std::string escalate = "on";
    int trials = 100;
    int jobs = 0;
    std::string out_path;
    std::string format = "json";
    bool allow_mixed = false;
};

std::vector<std::string> split_labels(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

OptimizerConfig optimizer_config(const CommonOpts& o) {
    OptimizerConfig cfg;
    cfg.restarts = o.restarts;
    cfg.max_evals_per_restart = o.max_evals;
    cfg.tol = o.tol;
    if (o.branches > 0) cfg.branch_count = o.branches;
    cfg.seed = o.seed;
    cfg.validate();
    return cfg;
}

Json config_json(const CommonOpts& o) {
    Json j = Json::object();
    j["restarts"] = o.restarts;
    j["max_evals"] = o.max_evals;
    j["tol"] = o.tol;
    j["branches"] = o.branches > 0 ? Json(o.branches) : Json(nullptr);
    j["chain_tol"] = o.chain_tol;
    j["escalate"] = o.escalate == "on";
    j["format"] = o.format;
    return j;
}

LoadedState resolve_state(const CommonOpts& o, std::uint64_t seed) {
    if (!o.state_path.empty() && !o.gen_spec.empty())
        throw InvalidInput("--state and --gen are mutually exclusive");
    if (!o.state_path.empty()) return load_state_file(o.state_path);
    if (o.gen_spec.empty()) throw InvalidInput("one of --state or --gen is required");
    const StateSpec spec = parse_state_spec(o.gen_spec);
    switch (spec.kind) {
        case StateSpec::Kind::RandomPure:
            return haar_random_pure(spec.dims, seed);
        case StateSpec::Kind::RandomMixed:
            return random_mixed(spec.dims, seed);
        default:
            return gen_named_state(spec);
    }
}

std::string state_desc(const CommonOpts& o) {
    return o.state_path.empty() ? o.gen_spec : o.state_path;
}

DensityOperator as_density(const LoadedState& state) {
    return std::holds_alternative<StateVector>(state)
               ? std::get<StateVector>(state).to_density()
               : std::get<DensityOperator>(state);
}

/// Pure states loaded as density matrices are accepted for verify by
/// extracting the dominant eigenvector.
StateVector as_pure(const LoadedState& state) {
    if (std::holds_alternative<StateVector>(state)) return std::get<StateVector>(state);
    const DensityOperator& rho = std::get<DensityOperator>(state);
    if (!rho.is_pure())
        throw InvalidInput("a pure state is required (use --allow-mixed for best-effort chains)");
    const EigResult eig = eig_hermitian(rho.matrix());
    Vector top = eig.vectors.col(0);
    top.normalize();
    return StateVector(rho.layout(), std::move(top));
}

void emit_report(const CommonOpts& o, const ReportRecord& record, std::ostream& out) {
    const std::string text =
        o.format == "csv" ? report_to_csv(record) : report_to_json(record).dump() + "\n";
    if (o.out_path.empty()) {
        out << text;
    } else {
        write_text_file(o.out_path, text);
    }
}

std::string verdict_str(Verdict v) { return to_string(v); }

Json correlation_json(const CorrelationValue& v) {
    Json j = Json::object();
    j["kind"] = to_string(v.kind);
    j["value"] = v.value;
    j["bound"] = to_string(v.bound);
    j["route"] = to_string(v.route);
    j["converged"] = v.converged;
    return j;
}

Json chain_details(const PolygamyReport& r) {
    Json j = Json::object();
    j["normalization"] = r.normalization;
    j["escalated"] = r.escalated;
    j["lhs_exact"] = r.lhs_exact;
    Json subsets = Json::array();
    for (std::size_t i = 0; i < r.family.subsets.size(); ++i) {
        Json s = Json::object();
        Json labels = Json::array();
        for (const std::string& l : r.family.subsets[i].labels) labels.push_back(l);
        s["labels"] = std::move(labels);
        s["value"] = correlation_json(r.per_subset[i]);
        subsets.push_back(std::move(s));
    }
    j["per_subset"] = std::move(subsets);
    return j;
}

struct VerifyOutcome {
    std::vector<CheckRecord> checks;
    bool any_fail = false;
    bool any_inconclusive = false;
    double min_slack = std::numeric_limits<double>::infinity();
    int escalations = 0;
};

void note_verdict(VerifyOutcome& out, Verdict v) {
    if (v == Verdict::Fail) out.any_fail = true;
    if (v == Verdict::Inconclusive) out.any_inconclusive = true;
}

VerifyOutcome run_chain_checks(const StateVector& psi, const std::string& focus,
                               const OptimizerConfig& cfg, const ChainOptions& opts,
                               bool with_identities) {
    VerifyOutcome out;

    const PolygamyReport ent = strong_polygamy_entanglement(psi, focus, cfg, opts);
    {
        CheckRecord c;
        c.name = "entanglement-chain";
        c.lhs = ent.lhs;
        c.middle = ent.middle;
        c.rhs = ent.rhs;
        c.slack1 = ent.slack_lhs_middle;
        c.slack2 = ent.slack_middle_rhs;
        c.tolerance = ent.tolerance;
        const Verdict v = ent.verdict_lhs_middle == Verdict::Pass &&
                                  ent.verdict_middle_rhs == Verdict::Pass
                              ? Verdict::Pass
                              : (ent.verdict_lhs_middle == Verdict::Fail ||
                                         ent.verdict_middle_rhs == Verdict::Fail
                                     ? Verdict::Fail
                                     : Verdict::Inconclusive);
        c.verdict = verdict_str(v);
        c.details = chain_details(ent);
        note_verdict(out, v);
        out.min_slack = std::min({out.min_slack, ent.slack_lhs_middle, ent.slack_middle_rhs});
        if (ent.escalated) ++out.escalations;
        out.checks.push_back(std::move(c));
    }
    {
        CheckRecord c;
        c.name = "usual-polygamy";
        c.lhs = ent.lhs;
        c.rhs = ent.rhs;
        c.slack1 = ent.rhs - ent.lhs;
        c.tolerance = ent.tolerance;
        c.verdict = verdict_str(ent.verdict_lhs_rhs);
        note_verdict(out, ent.verdict_lhs_rhs);
        out.min_slack = std::min(out.min_slack, ent.rhs - ent.lhs);
        out.checks.push_back(std::move(c));
    }

    const PolygamyReport dis = strong_polygamy_discord(psi, focus, cfg, opts);
    {
        CheckRecord c;
        c.name = "discord-chain";
        c.lhs = dis.lhs;
        c.middle = dis.middle;
        c.rhs = dis.rhs;  // single-party sum, reported for reference
        c.slack1 = dis.slack_lhs_middle;
        c.slack2 = dis.slack_middle_rhs;
        c.tolerance = dis.tolerance;
        c.verdict = verdict_str(dis.verdict_lhs_middle);
        c.details = chain_details(dis);
        note_verdict(out, dis.verdict_lhs_middle);
        out.min_slack = std::min(out.min_slack, dis.slack_lhs_middle);
        if (dis.escalated) ++out.escalations;
        out.checks.push_back(std::move(c));
    }

    if (with_identities) {
        for (const IdentityCheck& id : identity_suite(psi, focus, cfg)) {
            CheckRecord c;
            c.name = id.name;
            c.lhs = id.lhs;
            c.rhs = id.rhs;
            c.slack1 = id.residual;
            c.tolerance = id.tolerance;
            c.verdict = id.pass ? "PASS" : "FAIL";
            if (!id.pass) out.any_fail = true;
            out.checks.push_back(std::move(c));
        }
    }
    return out;
}

int cmd_compute(const CommonOpts& o, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const OptimizerConfig cfg = optimizer_config(o);
    const LoadedState loaded = resolve_state(o, o.seed);
    DensityOperator rho = as_density(loaded);
    if (!o.marginal.empty()) rho = partial_trace(rho, split_labels(o.marginal));

    const std::vector<std::string> focus = split_labels(o.focus);
    const std::vector<std::string> measured = rho.layout().complement(focus);
    if (o.measure.empty()) throw InvalidInput("--measure is required for compute");

    CorrelationValue value{};
    if (o.measure == "entropy") {
        value = entropy_value(rho, focus);
    } else if (o.measure == "mutual-info") {
        value = mutual_information_value(rho, focus, measured);
    } else if (o.measure == "eof") {
        value = eof(rho, focus, cfg);
    } else if (o.measure == "eoa") {
        value = eoa(rho, focus, cfg);
    } else if (o.measure == "jcc") {
        const JccRoute route = o.route == "direct" ? JccRoute::Direct : JccRoute::KoashiWinter;
        if (!o.route.empty() && o.route != "direct" && o.route != "koashi-winter")
            throw InvalidInput("jcc routes: direct | koashi-winter");
        value = one_way_classical_correlation(rho, measured, cfg, route);
    } else if (o.measure == "ue") {
        const UeRoute route = o.route == "direct" ? UeRoute::Direct : UeRoute::Dual;
        if (!o.route.empty() && o.route != "direct" && o.route != "dual")
            throw InvalidInput("ue routes: direct | dual");
        value = unlocalizable_entanglement(rho, measured, cfg, route);
    } else if (o.measure == "discord") {
        value = quantum_discord(rho, measured, cfg);
    } else if (o.measure == "ud") {
        value = unlocalizable_discord(rho, measured, cfg);
    } else if (o.measure == "wootters") {
        value = wootters_eof_two_qubit(rho);
    } else {
        throw InvalidInput("unknown measure: " + o.measure);
    }

    ReportRecord record;
    record.command = "compute";
    record.state_desc = state_desc(o);
    record.focus = o.focus;
    record.seed = o.seed;
    record.config = config_json(o);
    CheckRecord c;
    c.name = "measure:" + o.measure;
    c.lhs = value.value;
    c.verdict = "NA";
    c.details = correlation_json(value);
    record.checks.push_back(std::move(c));
    Json summary = Json::object();
    summary["value"] = value.value;
    summary["bound"] = to_string(value.bound);
    record.summary = std::move(summary);
    record.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    if (!o.out_path.empty())
        out << o.measure << " = " << format_double(value.value) << " (" << to_string(value.bound)
            << ", " << to_string(value.route) << ")\n";
    emit_report(o, record, out);
    return 0;
}

int cmd_verify(const CommonOpts& o, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    const OptimizerConfig cfg = optimizer_config(o);
    const LoadedState loaded = resolve_state(o, o.seed);
    const ChainOptions opts{o.chain_tol, o.escalate == "on", o.allow_mixed};

    ReportRecord record;
    record.command = "verify";
    record.state_desc = state_desc(o);
    record.focus = o.focus;
    record.seed = o.seed;
    record.config = config_json(o);

    VerifyOutcome outcome;
    const bool mixed_input =
        std::holds_alternative<DensityOperator>(loaded) && !std::get<DensityOperator>(loaded).is_pure();
    if (mixed_input) {
        if (!o.allow_mixed)
            throw InvalidInput("verify needs a pure state (or --allow-mixed for best-effort)");
        const DensityOperator& rho = std::get<DensityOperator>(loaded);
        if (static_cast<int>(rho.layout().size()) > 5)
            err << "warning: more than four non-focus parties; subset count grows fast\n";
        const PolygamyReport ent = strong_polygamy_entanglement(rho, o.focus, cfg, opts);
        CheckRecord c;
        c.name = "entanglement-chain";
        c.lhs = ent.lhs;
        c.middle = ent.middle;
        c.rhs = ent.rhs;
        c.slack1 = ent.slack_lhs_middle;
        c.slack2 = ent.slack_middle_rhs;
        c.tolerance = ent.tolerance;
        const Verdict v = ent.overall();
        c.verdict = verdict_str(v);
        c.details = chain_details(ent);
        note_verdict(outcome, v);
        outcome.min_slack = std::min(ent.slack_lhs_middle, ent.slack_middle_rhs);
        if (ent.escalated) ++outcome.escalations;
        outcome.checks.push_back(std::move(c));
    } else {
        const StateVector psi = as_pure(loaded);
        if (static_cast<int>(psi.layout().size()) > 5)
            err << "warning: more than four non-focus parties; subset count grows fast\n";
        outcome = run_chain_checks(psi, o.focus, cfg, opts, true);
    }

    record.checks = std::move(outcome.checks);
    const std::string overall =
        outcome.any_fail ? "FAIL" : (outcome.any_inconclusive ? "INCONCLUSIVE" : "PASS");
    Json summary = Json::object();
    summary["verdict"] = overall;
    summary["min_slack"] = outcome.min_slack;
    summary["escalations"] = outcome.escalations;
    record.summary = std::move(summary);
    record.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    if (!o.out_path.empty()) out << "verify " << record.state_desc << ": " << overall << "\n";
    emit_report(o, record, out);
    return overall == "PASS" ? 0 : 1;
}

int cmd_fuzz(const CommonOpts& o, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    if (o.trials < 1) throw InvalidInput("--trials must be at least 1");
    if (o.gen_spec.empty()) throw InvalidInput("fuzz needs --gen random-pure,DIMS");
    const StateSpec spec = parse_state_spec(o.gen_spec);
    if (spec.kind != StateSpec::Kind::RandomPure)
        throw InvalidInput("fuzz sweeps Haar-random pure states; use --gen random-pure,DIMS");
    if (spec.dims.size() > 5) err << "warning: more than four non-focus parties\n";

    int jobs = o.jobs;
    if (jobs <= 0) {
        const char* env = std::getenv("QPOLY_JOBS");
        jobs = env ? std::max(1, std::atoi(env)) : 1;
    }

    const ChainOptions opts{o.chain_tol, o.escalate == "on", false};
    auto run_trial = [&](int t) {
        // trial t behaves exactly like `verify --seed (seed + t)`
        const std::uint64_t trial_seed = o.seed + static_cast<std::uint64_t>(t);
        OptimizerConfig cfg = optimizer_config(o);
        cfg.seed = trial_seed;
        const StateVector psi = haar_random_pure(spec.dims, trial_seed);
        return run_chain_checks(psi, o.focus, cfg, opts, true);
    };

    std::vector<VerifyOutcome> outcomes(static_cast<std::size_t>(o.trials));
    for (int base = 0; base < o.trials; base += jobs) {
        const int batch = std::min(jobs, o.trials - base);
        std::vector<std::future<VerifyOutcome>> futures;
        futures.reserve(static_cast<std::size_t>(batch));
        for (int k = 0; k < batch; ++k)
            futures.push_back(std::async(std::launch::async, run_trial, base + k));
        for (int k = 0; k < batch; ++k)
            outcomes[static_cast<std::size_t>(base + k)] = futures[static_cast<std::size_t>(k)].get();
    }

    ReportRecord record;
    record.command = "fuzz";
    record.state_desc = state_desc(o);
    record.focus = o.focus;
    record.seed = o.seed;
    record.config = config_json(o);
    bool any_fail = false, any_inconclusive = false;
    double min_slack = std::numeric_limits<double>::infinity();
    int escalations = 0;
    for (int t = 0; t < o.trials; ++t) {
        VerifyOutcome& v = outcomes[static_cast<std::size_t>(t)];
        any_fail |= v.any_fail;
        any_inconclusive |= v.any_inconclusive;
        min_slack = std::min(min_slack, v.min_slack);
        escalations += v.escalations;
        for (CheckRecord& c : v.checks) {
            c.name = "trial" + std::to_string(t) + "/" + c.name;
            record.checks.push_back(std::move(c));
        }
    }
    const std::string overall = any_fail ? "FAIL" : (any_inconclusive ? "INCONCLUSIVE" : "PASS");
    Json summary = Json::object();
    summary["verdict"] = overall;
    summary["trials"] = o.trials;
    summary["min_slack"] = min_slack;
    summary["escalations"] = escalations;
    record.summary = std::move(summary);
    record.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    if (!o.out_path.empty())
        out << "fuzz " << o.trials << " trials: " << overall
            << " (min slack " << format_double(min_slack) << ", escalations " << escalations
            << ")\n";
    emit_report(o, record, out);
    return overall == "PASS" ? 0 : 1;
}

void add_common_options(CLI::App* app, CommonOpts& o, bool with_measure, bool with_trials) {
    app->add_option("--state", o.state_path, "state file path (JSON)");
    app->add_option("--gen", o.gen_spec,
                    "state spec: ghz,N | w,N | dicke,N,K | product,N | bell | "
                    "random-pure,DxD... | random-mixed,DxD...");
    app->add_option("--focus", o.focus, "focus label(s), comma separated (default A)");
    if (with_measure) {
        app->add_option("--marginal", o.marginal, "reduce to these labels first");
        app->add_option("--measure", o.measure,
                        "entropy | mutual-info | eof | eoa | jcc | ue | discord | ud | wootters");
        app->add_option("--route", o.route, "jcc: direct|koashi-winter; ue: direct|dual");
    }
    app->add_option("--restarts", o.restarts, "optimizer restarts (default 8)");
    app->add_option("--max-evals", o.max_evals, "objective evaluations per restart (default 2000)");
    app->add_option("--tol", o.tol, "optimizer improvement stop (default 1e-6)");
    app->add_option("--branches", o.branches, "decomposition size override (default rank^2)");
    app->add_option("--seed", o.seed, "random seed (default 1; seed 0 is reserved for fixtures)");
    app->add_option("--chain-tol", o.chain_tol, "slack tolerance for verdicts (default 1e-3)");
    app->add_option("--escalate", o.escalate, "on|off: x4 budget retry on negative slack")
        ->check(CLI::IsMember({"on", "off"}));
    if (with_trials) {
        app->add_option("--trials", o.trials, "number of fuzz trials (default 100)");
        app->add_option("--jobs", o.jobs, "concurrent trials (default $QPOLY_JOBS or 1)");
    }
    app->add_option("--out", o.out_path, "write the report here instead of stdout");
    app->add_option("--format", o.format, "json | csv (default json)")
        ->check(CLI::IsMember({"json", "csv"}));
    app->add_flag("--allow-mixed", o.allow_mixed, "best-effort chains for mixed global states");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"bipartite correlation measures and polygamy chain verification"};
    app.require_subcommand(1);

    CommonOpts compute_opts, verify_opts, fuzz_opts;
    CLI::App* compute = app.add_subcommand("compute", "compute one correlation measure");
    add_common_options(compute, compute_opts, true, false);
    CLI::App* verify = app.add_subcommand("verify", "run the chain and identity checks");
    add_common_options(verify, verify_opts, false, false);
    CLI::App* fuzz = app.add_subcommand("fuzz", "sweep the checks over Haar-random states");
    add_common_options(fuzz, fuzz_opts, false, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (compute->parsed()) return cmd_compute(compute_opts, out);
        if (verify->parsed()) return cmd_verify(verify_opts, out, err);
        if (fuzz->parsed()) return cmd_fuzz(fuzz_opts, out, err);
        err << "error: no subcommand\n";
        return 2;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return 3;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace qpoly
