// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Default optimizer budgets throughout.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "qpoly/cli.hpp"
#include "qpoly/io.hpp"
#include "qpoly/linalg.hpp"
#include "qpoly/measures.hpp"
#include "qpoly/named_states.hpp"
#include "qpoly/polygamy.hpp"
#include "qpoly/sampling.hpp"

using namespace qpoly;

namespace {

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion-%d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

const std::vector<std::string> kFocus{"A"};

// 1. Two-qubit EoF against the closed form: 200 random mixed states,
//    |optimized - closed| <= 1e-4, optimized >= closed - 1e-9, under 60 s.
void criterion_1() {
    Timer timer;
    OptimizerConfig cfg;
    double worst_gap = 0.0, most_negative = 0.0;
    for (int s = 0; s < 200; ++s) {
        const long dims[] = {2, 2};
        const DensityOperator rho = random_mixed(dims, 1000 + static_cast<std::uint64_t>(s));
        cfg.seed = static_cast<std::uint64_t>(s);
        const double opt = eof(rho, kFocus, cfg).value;
        const double closed = wootters_eof_two_qubit(rho).value;
        worst_gap = std::max(worst_gap, opt - closed);
        most_negative = std::min(most_negative, opt - closed);
    }
    const double secs = timer.seconds();
    const bool pass = worst_gap <= 1e-4 && most_negative >= -1e-9 && secs <= 60.0;
    report(1, pass,
           fmt("eof vs closed form on 200 states: worst gap %.3g, lowest %.3g, %.1f s",
               worst_gap, most_negative, secs));
}

// 2./3. Entropy trade-off identities on 50 Haar three-qubit pure states:
//    S(A) = J(A|B) + EoF(A|C) and S(A) = UE(A|B) + EoA(A|C), residual <= 5e-4.
void criteria_2_3() {
    OptimizerConfig cfg;
    double worst_kw = 0.0, worst_dual = 0.0;
    const std::vector<std::string> b{"B1"};
    const std::vector<std::string> ab{"A", "B1"}, ac{"A", "B2"};
    for (int s = 0; s < 50; ++s) {
        const long dims[] = {2, 2, 2};
        const StateVector psi = haar_random_pure(dims, 2000 + static_cast<std::uint64_t>(s));
        cfg.seed = static_cast<std::uint64_t>(s);
        const double s_a = von_neumann_entropy(partial_trace(psi, kFocus));
        const DensityOperator rho_ab = partial_trace(psi, ab);
        const DensityOperator rho_ac = partial_trace(psi, ac);

        const double kw = one_way_classical_correlation(rho_ab, b, cfg, JccRoute::Direct).value +
                          eof(rho_ac, kFocus, cfg).value;
        worst_kw = std::max(worst_kw, std::abs(s_a - kw));

        const double dual = unlocalizable_entanglement(rho_ab, b, cfg, UeRoute::Direct).value +
                            eoa(rho_ac, kFocus, cfg).value;
        worst_dual = std::max(worst_dual, std::abs(s_a - dual));
    }
    report(2, worst_kw <= 5e-4,
           fmt("classical-correlation/formation trade-off on 50 states: worst residual %.3g",
               worst_kw));
    report(3, worst_dual <= 5e-4,
           fmt("unlocalizable/assistance dual trade-off on 50 states: worst residual %.3g",
               worst_dual));
}

// 4. Pure-state shortcuts: UD = EoA = S(rho_A) within 1e-9 on 50 bipartite
//    pure states.
void criterion_4() {
    OptimizerConfig cfg;
    double worst = 0.0;
    const std::vector<long> dim_choices[] = {{2, 2}, {2, 3}, {2, 4}, {3, 3}};
    for (int s = 0; s < 50; ++s) {
        const std::vector<long>& dims = dim_choices[s % 4];
        const StateVector psi = haar_random_pure(dims, 3000 + static_cast<std::uint64_t>(s));
        cfg.seed = static_cast<std::uint64_t>(s);
        const double s_a = von_neumann_entropy(partial_trace(psi, kFocus));
        const std::vector<std::string> measured{"B1"};
        const DensityOperator rho = psi.to_density();
        worst = std::max(worst, std::abs(unlocalizable_discord(rho, measured, cfg).value - s_a));
        worst = std::max(worst, std::abs(eoa(rho, kFocus, cfg).value - s_a));
    }
    report(4, worst <= 1e-9,
           fmt("pure-state shortcuts on 50 states: worst deviation from S(rho_A) is %.3g",
               worst));
}

// 5. Strong entanglement chain: GHZ4 gives (1, 2, 3) within 2e-3; 100 Haar
//    four-qubit states keep both slacks >= -1e-3 after escalation with zero
//    FAIL verdicts; under 30 minutes.
void criterion_5() {
    Timer timer;
    OptimizerConfig cfg;
    cfg.seed = 41;
    const PolygamyReport ghz = strong_polygamy_entanglement(
        gen_named_state(parse_state_spec("ghz,4")), "A", cfg);
    const bool ghz_ok = std::abs(ghz.lhs - 1.0) <= 2e-3 && std::abs(ghz.middle - 2.0) <= 2e-3 &&
                        std::abs(ghz.rhs - 3.0) <= 2e-3;

    double min_slack = 1e9;
    int fails = 0;
    for (int s = 0; s < 100; ++s) {
        const long dims[] = {2, 2, 2, 2};
        const StateVector psi = haar_random_pure(dims, 5000 + static_cast<std::uint64_t>(s));
        cfg.seed = static_cast<std::uint64_t>(s);
        const PolygamyReport r = strong_polygamy_entanglement(psi, "A", cfg);
        min_slack = std::min({min_slack, r.slack_lhs_middle, r.slack_middle_rhs});
        if (r.verdict_lhs_middle == Verdict::Fail || r.verdict_middle_rhs == Verdict::Fail ||
            r.verdict_lhs_rhs == Verdict::Fail)
            ++fails;
    }
    const double secs = timer.seconds();
    const bool pass = ghz_ok && min_slack >= -1e-3 && fails == 0 && secs <= 1800.0;
    std::ostringstream detail;
    detail << "ghz4 chain (" << format_double(ghz.lhs) << ", " << format_double(ghz.middle)
           << ", " << format_double(ghz.rhs) << "), 100-state min slack "
           << format_double(min_slack) << ", " << fails << " FAIL verdicts, "
           << fmt("%.0f s", secs);
    report(5, pass, detail.str());
}

// 6. Strong discord chain: GHZ4 lhs=1 <= middle=2 within 2e-3; 50 Haar
//    four-qubit states keep the slack >= -1e-3 with zero FAIL verdicts.
void criterion_6() {
    OptimizerConfig cfg;
    cfg.seed = 43;
    const PolygamyReport ghz =
        strong_polygamy_discord(gen_named_state(parse_state_spec("ghz,4")), "A", cfg);
    const bool ghz_ok = std::abs(ghz.lhs - 1.0) <= 2e-3 && std::abs(ghz.middle - 2.0) <= 2e-3;

    double min_slack = 1e9;
    int fails = 0;
    for (int s = 0; s < 50; ++s) {
        const long dims[] = {2, 2, 2, 2};
        const StateVector psi = haar_random_pure(dims, 6000 + static_cast<std::uint64_t>(s));
        cfg.seed = static_cast<std::uint64_t>(s);
        const PolygamyReport r = strong_polygamy_discord(psi, "A", cfg);
        min_slack = std::min(min_slack, r.slack_lhs_middle);
        if (r.verdict_lhs_middle == Verdict::Fail) ++fails;
    }
    const bool pass = ghz_ok && min_slack >= -1e-3 && fails == 0;
    std::ostringstream detail;
    detail << "ghz4 discord chain (lhs " << format_double(ghz.lhs) << ", middle "
           << format_double(ghz.middle) << "), 50-state min slack " << format_double(min_slack)
           << ", " << fails << " FAIL verdicts";
    report(6, pass, detail.str());
}

// 7. Subset-sum identity: |sum EoA - sum UD| <= 3e-3 on GHZ4, W4 and 20
//    random four-qubit pure states.
void criterion_7() {
    OptimizerConfig cfg;
    double worst = 0.0;
    std::vector<StateVector> states;
    states.push_back(gen_named_state(parse_state_spec("ghz,4")));
    states.push_back(gen_named_state(parse_state_spec("w,4")));
    for (int s = 0; s < 20; ++s) {
        const long dims[] = {2, 2, 2, 2};
        states.push_back(haar_random_pure(dims, 7000 + static_cast<std::uint64_t>(s)));
    }
    std::uint64_t seed = 0;
    for (const StateVector& psi : states) {
        cfg.seed = seed++;
        const SubsetFamily fam = enumerate_subsets(psi.layout().complement(kFocus));
        double lhs = 0.0, rhs = 0.0;
        for (const LabelSubset& x : fam.subsets) {
            std::vector<std::string> keep = kFocus;
            keep.insert(keep.end(), x.labels.begin(), x.labels.end());
            const DensityOperator marg = partial_trace(psi, keep);
            lhs += eoa(marg, kFocus, cfg).value;
            rhs += unlocalizable_discord(marg, x.labels, cfg).value;
        }
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    report(7, worst <= 3e-3,
           fmt("assistance/discord subset sums on 22 states: worst residual %.3g", worst));
}

// 8. Enumeration identities and conditional-entropy cancellation, exact to
//    1e-8, for n in {2, 3, 4}.
void criterion_8() {
    double worst = 0.0;
    bool closure_ok = true;
    for (int n = 2; n <= 4; ++n) {
        std::vector<StateVector> states;
        states.push_back(gen_named_state(parse_state_spec("ghz," + std::to_string(n + 1))));
        states.push_back(gen_named_state(parse_state_spec("w," + std::to_string(n + 1))));
        const std::vector<long> dims(static_cast<std::size_t>(n + 1), 2);
        states.push_back(haar_random_pure(dims, 8000 + static_cast<std::uint64_t>(n)));
        for (const StateVector& psi : states) {
            const SubsetFamily fam = enumerate_subsets(psi.layout().complement(kFocus));
            closure_ok &= fam.subsets.size() == (1u << n) - 2;
            double cond_sum = 0.0, direct = 0.0, complemented = 0.0;
            const DensityOperator rho = psi.to_density();
            for (const LabelSubset& x : fam.subsets) {
                const LabelSubset& xc = fam.subsets[static_cast<std::size_t>(x.complement_index)];
                closure_ok &= x.labels.size() + xc.labels.size() == static_cast<std::size_t>(n);
                std::vector<std::string> keep = kFocus;
                keep.insert(keep.end(), x.labels.begin(), x.labels.end());
                const double sx = von_neumann_entropy(partial_trace(psi, keep));
                direct += sx;
                std::vector<std::string> keep_c = kFocus;
                keep_c.insert(keep_c.end(), xc.labels.begin(), xc.labels.end());
                complemented += von_neumann_entropy(partial_trace(psi, keep_c));
                cond_sum += conditional_entropy(rho, kFocus, x.labels);
            }
            worst = std::max({worst, std::abs(direct - complemented), std::abs(cond_sum)});
        }
    }
    report(8, closure_ok && worst <= 1e-8,
           fmt("complement closure and conditional-entropy cancellation: worst residual %.3g",
               worst));
}

// 9. Determinism: repeated verify runs with the same seed and config produce
//    byte-identical JSON reports once timing fields are zeroed.
void criterion_9() {
    auto run_verify = [](const std::string& out_path) {
        const std::vector<const char*> argv{"qpoly",  "verify", "--gen", "random-pure,2x2x2x2",
                                            "--seed", "17",     "--out", out_path.c_str()};
        std::ostringstream out, err;
        return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    };
    const std::string p1 = "/tmp/qpoly_acc_det1.json", p2 = "/tmp/qpoly_acc_det2.json";
    const int c1 = run_verify(p1), c2 = run_verify(p2);
    auto strip = [](std::string text) {
        return std::regex_replace(text, std::regex(R"("wall_ms": [0-9.e+-]+)"),
                                  "\"wall_ms\": 0");
    };
    const std::string a = strip(read_text_file(p1)), b = strip(read_text_file(p2));
    const bool pass = c1 == 0 && c2 == 0 && !a.empty() && a == b;
    report(9, pass,
           fmt("repeated verify reports identical up to timing: %.0f bytes",
               static_cast<double>(a.size())));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

}  // namespace

int main() {
    Timer total;
    criterion_1();
    criteria_2_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    std::printf("%d/9 criteria passed in %.0f s\n", 9 - g_failures, total.seconds());
    return g_failures == 0 ? 0 : 1;
}
