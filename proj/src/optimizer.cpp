#include "qpoly/optimizer.hpp"

#include <cmath>
#include <numbers>

#include "qpoly/linalg.hpp"
#include "qpoly/rng.hpp"

namespace qpoly {

namespace {

constexpr double kPi = std::numbers::pi;

// Chart: start from [I_r; 0] with per-column phases, then plane rotations in
// reverse elimination order. Any isometry is reachable (QR argument).
void build_isometry(std::span<const double> params, int n, int r, Matrix& out) {
    out.setZero(n, r);
    const int pairs = (isometry_param_count(n, r) - r) / 2;
    const double* rot = params.data();
    const double* phase = params.data() + 2 * pairs;
    for (int j = 0; j < r; ++j) out(j, j) = std::polar(1.0, phase[j]);
    int q = pairs - 1;
    for (int j = r - 1; j >= 0; --j) {
        for (int i = n - 1; i >= j + 1; --i, --q) {
            const double th = rot[2 * q];
            if (th == 0.0) continue;
            const double c = std::cos(th), s = std::sin(th);
            const Complex e = std::polar(1.0, rot[2 * q + 1]);
            const Complex ec = std::conj(e);
            for (int col = 0; col < r; ++col) {
                const Complex a = out(j, col), b = out(i, col);
                out(j, col) = c * a - s * (e * b);
                out(i, col) = s * (ec * a) + c * b;
            }
        }
    }
}

// -mu log2(mu/p): contribution of one unnormalized marginal eigenvalue to
// p * S(normalized marginal).
inline double entropy_term(double mu, double p) {
    if (mu <= 0.0) return 0.0;
    const double q = mu / p;
    if (q <= kEntropyClamp) return 0.0;
    return -mu * std::log2(q);
}

// Average branch entropy of the size-N decomposition of a fixed state,
// as a function of the isometry chart parameters. Allocation-free per call.
class RoofObjective {
  public:
    RoofObjective(const DensityOperator& rho, std::span<const std::string> side, int branch_count)
        : n_(branch_count) {
        const EigResult eig = eig_hermitian(rho.matrix());
        rank_ = 0;
        for (long j = 0; j < eig.values.size(); ++j)
            if (eig.values[j] > kRankEigTol) ++rank_;
        if (rank_ == 0) rank_ = 1;
        if (n_ < rank_)
            throw InvalidInput("branch count " + std::to_string(n_) +
                               " below state rank " + std::to_string(rank_));
        dim_ = rho.dim();
        w_.resize(dim_, rank_);
        for (int j = 0; j < rank_; ++j)
            w_.col(j) = std::sqrt(std::max(eig.values[j], 0.0)) * eig.vectors.col(j);

        const IndexSplit split(rho.layout(), side);
        d_side_ = split.keep_dim();
        d_rest_ = split.rest_dim();
        side_of_.resize(static_cast<std::size_t>(dim_));
        rest_of_.resize(static_cast<std::size_t>(dim_));
        for (long g = 0; g < dim_; ++g) {
            side_of_[static_cast<std::size_t>(g)] = split.keep_of(g);
            rest_of_[static_cast<std::size_t>(g)] = split.rest_of(g);
        }
        v_.resize(n_, rank_);
        branches_.resize(dim_, n_);
        m_.resize(d_side_, d_rest_);
        h_.resize(d_side_, d_side_);
    }

    int rank() const { return rank_; }
    int param_count() const { return isometry_param_count(n_, rank_); }

    double operator()(std::span<const double> params) {
        build_isometry(params, n_, rank_, v_);
        branches_.noalias() = w_ * v_.transpose();
        double acc = 0.0;
        for (int b = 0; b < n_; ++b) {
            const double p = branches_.col(b).squaredNorm();
            if (p < kProbFloor) continue;
            for (long g = 0; g < dim_; ++g)
                m_(side_of_[static_cast<std::size_t>(g)], rest_of_[static_cast<std::size_t>(g)]) =
                    branches_(g, b);
            if (d_side_ == 2) {
                double h00 = 0.0, h11 = 0.0;
                Complex h01(0.0, 0.0);
                for (long t = 0; t < d_rest_; ++t) {
                    h00 += std::norm(m_(0, t));
                    h11 += std::norm(m_(1, t));
                    h01 += m_(0, t) * std::conj(m_(1, t));
                }
                const double tr = h00 + h11;
                const double det = h00 * h11 - std::norm(h01);
                const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
                acc += entropy_term(0.5 * (tr + disc), p) + entropy_term(0.5 * (tr - disc), p);
            } else {
                h_.noalias() = m_ * m_.adjoint();
                es_.compute(h_, Eigen::EigenvaluesOnly);
                for (long k = 0; k < d_side_; ++k) acc += entropy_term(es_.eigenvalues()[k], p);
            }
        }
        return acc;
    }

    Isometry isometry_at(std::span<const double> params) {
        build_isometry(params, n_, rank_, v_);
        return Isometry(v_);
    }

  private:
    int n_, rank_ = 0;
    long dim_ = 0, d_side_ = 0, d_rest_ = 0;
    Matrix w_, v_, branches_, m_, h_;
    std::vector<long> side_of_, rest_of_;
    Eigen::SelfAdjointEigenSolver<Matrix> es_;
};

// sum_x p_x S(rho_A^x) as a function of the measurement-isometry chart.
// Outcome vectors are the conjugated rows of the isometry.
class MeasurementObjective {
  public:
    MeasurementObjective(const DensityOperator& rho, std::span<const std::string> measured,
                         int outcome_count)
        : n_(outcome_count) {
        std::vector<std::string> kept = rho.layout().complement(measured);
        if (kept.empty() || kept.size() == static_cast<std::size_t>(rho.layout().size()))
            throw InvalidInput("measured labels must be a proper nonempty subset");
        const IndexSplit split(rho.layout(), kept);
        d_a_ = split.keep_dim();
        d_m_ = split.rest_dim();
        if (n_ < d_m_)
            throw InvalidInput("outcome count below measured dimension");
        tm_.resize(d_a_ * d_a_, d_m_ * d_m_);
        for (long a = 0; a < d_a_; ++a)
            for (long ap = 0; ap < d_a_; ++ap)
                for (long b = 0; b < d_m_; ++b)
                    for (long bp = 0; bp < d_m_; ++bp)
                        tm_(a * d_a_ + ap, b * d_m_ + bp) =
                            rho.matrix()(split.merge(a, b), split.merge(ap, bp));
        w_.resize(n_, d_m_);
        u_.resize(d_m_ * d_m_);
        rflat_.resize(d_a_ * d_a_);
        h_.resize(d_a_, d_a_);
    }

    long measured_dim() const { return d_m_; }
    int param_count() const { return isometry_param_count(n_, static_cast<int>(d_m_)); }

    double operator()(std::span<const double> params) {
        build_isometry(params, n_, static_cast<int>(d_m_), w_);
        double acc = 0.0;
        for (int x = 0; x < n_; ++x) {
            // outer product of the outcome vector, flattened over (b, b')
            for (long b = 0; b < d_m_; ++b)
                for (long bp = 0; bp < d_m_; ++bp)
                    u_[b * d_m_ + bp] = w_(x, b) * std::conj(w_(x, bp));
            rflat_.noalias() = tm_ * u_;
            double p = 0.0;
            for (long a = 0; a < d_a_; ++a) p += rflat_[a * d_a_ + a].real();
            if (p < kProbFloor) continue;
            if (d_a_ == 2) {
                const double h00 = rflat_[0].real(), h11 = rflat_[3].real();
                const double det = h00 * h11 - std::norm(rflat_[1]);
                const double disc = std::sqrt(std::max(p * p - 4.0 * det, 0.0));
                acc += entropy_term(0.5 * (p + disc), p) + entropy_term(0.5 * (p - disc), p);
            } else {
                for (long a = 0; a < d_a_; ++a)
                    for (long ap = 0; ap < d_a_; ++ap) h_(a, ap) = rflat_[a * d_a_ + ap];
                es_.compute(h_, Eigen::EigenvaluesOnly);
                for (long k = 0; k < d_a_; ++k) acc += entropy_term(es_.eigenvalues()[k], p);
            }
        }
        return acc;
    }

    Isometry isometry_at(std::span<const double> params) {
        build_isometry(params, n_, static_cast<int>(d_m_), w_);
        return Isometry(w_);
    }

  private:
    int n_;
    long d_a_ = 0, d_m_ = 0;
    Matrix tm_, w_, h_;
    Vector u_, rflat_;
    Eigen::SelfAdjointEigenSolver<Matrix> es_;
};

struct RestartOutcome {
    double value = 0.0;
    bool converged = false;
};

// One bracketing triple (lo < mid < hi by offset, value at mid lowest).
struct Bracket {
    double x1, f1, x2, f2, x3, f3;
};

// Coordinate-descent minimization: per-coordinate adaptive probes, downhill
// expansion, successive parabolic (golden-safeguarded) refinement of the
// bracket, and a pattern move after each sweep. Only improving moves are
// accepted, so the best value is monotone in the evaluation budget.
template <typename F>
RestartOutcome minimize_sweeps(F& fn, std::vector<double>& params, long max_evals, double tol,
                               long& evals, double initial_step = 0.5) {
    constexpr double kGold = 0.3819660112501051;  // 2 - phi
    const int p_count = static_cast<int>(params.size());
    std::vector<double> step(params.size(), initial_step);
    std::vector<int> stale(params.size(), 0);  // consecutive no-improvement count
    std::vector<int> prefer(params.size(), 1);  // last successful probe direction
    std::vector<double> sweep_origin(params.size());

    auto probe = [&](int c, double delta) {
        params[static_cast<std::size_t>(c)] += delta;
        const double v = fn(params);
        params[static_cast<std::size_t>(c)] -= delta;
        ++evals;
        return v;
    };

    double current = fn(params);
    ++evals;
    bool converged = false;
    long sweep_index = 0;
    while (evals < max_evals && !converged) {
        const double sweep_start = current;
        sweep_origin = params;
        bool skipped_any = false;
        for (int c = 0; c < p_count; ++c) {
            if (evals + 2 > max_evals) break;
            // revisit repeatedly unproductive coordinates less often
            const int s = stale[static_cast<std::size_t>(c)];
            if (s > 0 && (sweep_index & ((1 << std::min(s, 3)) - 1)) != 0) {
                skipped_any = true;
                continue;
            }
            double& h = step[static_cast<std::size_t>(c)];
            int& pref = prefer[static_cast<std::size_t>(c)];
            double best_off = 0.0, best_val = current;
            // probe the last successful direction first; the second probe is
            // only needed when the first fails
            const double g_first = probe(c, pref * h);
            double g_second = 0.0;
            bool probed_second = false;
            if (g_first < best_val) {
                best_val = g_first;
                best_off = pref * h;
            } else if (evals < max_evals) {
                probed_second = true;
                g_second = probe(c, -pref * h);
                if (g_second < best_val) {
                    best_val = g_second;
                    best_off = -pref * h;
                    pref = -pref;
                }
            }

            bool have_bracket = false;
            Bracket br{};
            if (best_off == 0.0 && probed_second) {
                const double gp = pref > 0 ? g_first : g_second;
                const double gm = pref > 0 ? g_second : g_first;
                br = {-h, gm, 0.0, current, +h, gp};
                have_bracket = true;
                h = std::max(0.5 * h, 1e-6);
            } else if (best_off != 0.0) {
                // walk downhill until the value rises again
                const double dir = best_off > 0.0 ? 1.0 : -1.0;
                double prev_off = 0.0, prev_val = current;
                double w = h;
                while (evals < max_evals) {
                    const double cand = best_off + dir * w;
                    if (std::abs(cand) > kPi) break;
                    const double gv = probe(c, cand);
                    if (gv < best_val) {
                        prev_off = best_off;
                        prev_val = best_val;
                        best_val = gv;
                        best_off = cand;
                        w *= 2.0;
                    } else {
                        if (dir > 0.0)
                            br = {prev_off, prev_val, best_off, best_val, cand, gv};
                        else
                            br = {cand, gv, best_off, best_val, prev_off, prev_val};
                        have_bracket = true;
                        break;
                    }
                }
                h = std::clamp(0.5 * std::abs(best_off), 1e-6, 0.5 * kPi);
            }

            if (have_bracket) {
                for (int it = 0; it < 4 && evals < max_evals; ++it) {
                    if (br.x3 - br.x1 < 1e-8) break;
                    if (std::max(br.f1, br.f3) - br.f2 < 1e-10) break;  // nothing left to gain
                    // parabolic vertex through the three points
                    const double d21 = br.x2 - br.x1, d23 = br.x2 - br.x3;
                    const double num = d21 * d21 * (br.f2 - br.f3) - d23 * d23 * (br.f2 - br.f1);
                    const double den = d21 * (br.f2 - br.f3) - d23 * (br.f2 - br.f1);
                    double cand;
                    if (std::abs(den) > 1e-18) {
                        cand = br.x2 - 0.5 * num / den;
                    } else {
                        cand = br.x2;
                    }
                    const double margin = 1e-9 * (1.0 + std::abs(br.x2));
                    if (!(cand > br.x1 + margin && cand < br.x3 - margin) ||
                        std::abs(cand - br.x2) < margin) {
                        // golden step into the larger half
                        cand = br.x2 + (br.x3 - br.x2 > br.x2 - br.x1
                                            ? kGold * (br.x3 - br.x2)
                                            : -kGold * (br.x2 - br.x1));
                    }
                    const double gv = probe(c, cand);
                    if (gv < best_val) { best_val = gv; best_off = cand; }
                    if (gv < br.f2) {
                        if (cand < br.x2) br = {br.x1, br.f1, cand, gv, br.x2, br.f2};
                        else br = {br.x2, br.f2, cand, gv, br.x3, br.f3};
                    } else {
                        if (cand < br.x2) br = {cand, gv, br.x2, br.f2, br.x3, br.f3};
                        else br = {br.x1, br.f1, br.x2, br.f2, cand, gv};
                    }
                }
            }
            if (best_val < current) {
                params[static_cast<std::size_t>(c)] += best_off;
                current = best_val;
                h = std::clamp(std::max(h, 2.0 * std::abs(best_off)), 1e-6, 0.5 * kPi);
                stale[static_cast<std::size_t>(c)] = 0;
            } else {
                ++stale[static_cast<std::size_t>(c)];
            }
        }
        // pattern move: repeat the net sweep displacement, doubling while it pays
        if (current < sweep_start && evals < max_evals) {
            std::vector<double> direction(params.size());
            for (int c = 0; c < p_count; ++c)
                direction[static_cast<std::size_t>(c)] =
                    params[static_cast<std::size_t>(c)] - sweep_origin[static_cast<std::size_t>(c)];
            std::vector<double> shifted = params;
            for (int doubling = 0; doubling < 3 && evals < max_evals; ++doubling) {
                for (int c = 0; c < p_count; ++c)
                    shifted[static_cast<std::size_t>(c)] += direction[static_cast<std::size_t>(c)];
                const double gv = fn(shifted);
                ++evals;
                if (gv >= current) break;
                params = shifted;
                current = gv;
                for (double& d : direction) d *= 2.0;
            }
        }
        ++sweep_index;
        if (sweep_start - current < tol) {
            if (skipped_any) {
                // a full pass must confirm convergence
                std::fill(stale.begin(), stale.end(), 0);
            } else {
                converged = true;
            }
        }
    }
    return {current, converged};
}

// Index of the rotation pair (j, i) in the chart enumeration for `rows` rows.
inline int pair_index(int rows, int j, int i) {
    return j * (rows - 1) - j * (j - 1) / 2 + (i - j - 1);
}

// Embeds parameters of a small chart (rows_src x cols) into a larger chart
// (rows_dst x cols): same isometry padded with zero rows.
std::vector<double> embed_params(std::span<const double> src, int rows_src, int rows_dst,
                                 int cols) {
    std::vector<double> dst(static_cast<std::size_t>(isometry_param_count(rows_dst, cols)), 0.0);
    const int pairs_src = (isometry_param_count(rows_src, cols) - cols) / 2;
    const int pairs_dst = (isometry_param_count(rows_dst, cols) - cols) / 2;
    for (int j = 0; j < cols; ++j)
        for (int i = j + 1; i < rows_src; ++i) {
            const int qs = pair_index(rows_src, j, i);
            const int qd = pair_index(rows_dst, j, i);
            dst[static_cast<std::size_t>(2 * qd)] = src[static_cast<std::size_t>(2 * qs)];
            dst[static_cast<std::size_t>(2 * qd + 1)] = src[static_cast<std::size_t>(2 * qs + 1)];
        }
    for (int j = 0; j < cols; ++j)
        dst[static_cast<std::size_t>(2 * pairs_dst + j)] =
            src[static_cast<std::size_t>(2 * pairs_src + j)];
    return dst;
}

// Shared multi-restart driver over a family of nested charts. Fresh restarts
// (the chart origin, then every third one uniform-random) first optimize in
// the minimal rows=cols chart and continue from its embedding in the full
// chart; the remaining restarts perturb the best parameters found so far with
// a shrinking scale. A restart's start point depends only on earlier
// restarts, so the best value stays monotone in the restart count under the
// same seed stream.
//
// MakeFn: int rows -> objective callable exposing isometry_at().
template <typename MakeFn>
OptimizationResult staged_restarts(MakeFn&& make_fn, int rows, int cols, Sense sense,
                                   const OptimizerConfig& cfg) {
    const double sign = sense == Sense::Min ? 1.0 : -1.0;
    auto full_fn = make_fn(rows);
    auto full = [&](std::span<const double> p) { return sign * full_fn(p); };
    const int p_full = isometry_param_count(rows, cols);

    const bool staged = rows > cols;
    std::optional<decltype(make_fn(cols))> small_fn;
    if (staged) small_fn.emplace(make_fn(cols));
    auto small = [&](std::span<const double> p) { return sign * (*small_fn)(p); };
    const int p_small = staged ? isometry_param_count(cols, cols) : p_full;

    long evals_total = 0;
    double best_g = std::numeric_limits<double>::infinity();
    std::vector<double> best_params;
    bool best_converged = false;
    for (int k = 0; k < cfg.restarts; ++k) {
        std::vector<double> params;
        double initial_step = 0.5;
        const bool fresh = k == 0 || k % 3 == 2;
        long evals = 0;
        if (fresh) {
            // coarse pass in the minimal chart, then refine in the full one
            std::vector<double> coarse(static_cast<std::size_t>(staged ? p_small : p_full), 0.0);
            if (k > 0) {
                Rng rng(sub_seed(cfg.seed, static_cast<std::uint64_t>(k)));
                for (double& x : coarse) x = rng.uniform(-kPi, kPi);
            }
            if (staged) {
                const long coarse_budget = cfg.max_evals_per_restart / 3;
                if (coarse_budget > 0) minimize_sweeps(small, coarse, coarse_budget, cfg.tol, evals);
                params = embed_params(coarse, cols, rows, cols);
            } else {
                params = std::move(coarse);
            }
        } else {
            Rng rng(sub_seed(cfg.seed, static_cast<std::uint64_t>(k)));
            const double sigma = kPi * std::pow(0.4, 1 + (k - 1) / 3);
            params.resize(static_cast<std::size_t>(p_full));
            for (std::size_t i = 0; i < params.size(); ++i) {
                const auto [g0, g1] = rng.gaussian_pair();
                params[i] = best_params[i] + sigma * g0;
                (void)g1;
            }
            initial_step = std::clamp(sigma, 0.05, 0.5);
        }
        const RestartOutcome out = minimize_sweeps(full, params, cfg.max_evals_per_restart,
                                                   cfg.tol, evals, initial_step);
        evals_total += evals;
        if (out.value < best_g) {
            best_g = out.value;
            best_params = std::move(params);
            best_converged = out.converged;
        }
    }
    OptimizationResult res{sign * best_g, full_fn.isometry_at(best_params), evals_total,
                           best_converged, sense};
    return res;
}

}  // namespace

void OptimizerConfig::validate() const {
    if (restarts < 1) throw InvalidInput("restarts must be positive");
    if (max_evals_per_restart < 1) throw InvalidInput("max_evals_per_restart must be positive");
    if (!(tol > 0.0) || tol >= 1e-2) throw InvalidInput("tol must be in (0, 1e-2)");
    if (branch_count && *branch_count < 1) throw InvalidInput("branch_count must be positive");
}

OptimizerConfig OptimizerConfig::escalated(int factor) const {
    OptimizerConfig c = *this;
    c.max_evals_per_restart = max_evals_per_restart * factor;
    return c;
}

int isometry_param_count(int rows, int cols) {
    if (cols < 1 || rows < cols) throw InvalidInput("isometry chart needs rows >= cols >= 1");
    return 2 * rows * cols - cols * cols;
}

Matrix isometry_from_params(std::span<const double> params, int rows, int cols) {
    if (static_cast<int>(params.size()) != isometry_param_count(rows, cols))
        throw InvalidInput("parameter count " + std::to_string(params.size()) +
                           " does not match chart size " +
                           std::to_string(isometry_param_count(rows, cols)));
    Matrix out;
    build_isometry(params, rows, cols, out);
    return out;
}

Matrix unitary_from_params(std::span<const double> params, int n) {
    return isometry_from_params(params, n, n);
}

OptimizationResult optimize_roof(const DensityOperator& rho,
                                 std::span<const std::string> side, Sense sense,
                                 const OptimizerConfig& cfg) {
    cfg.validate();
    if (side.empty() || side.size() >= static_cast<std::size_t>(rho.layout().size()))
        throw InvalidInput("side must be a proper nonempty subset of the state's labels");
    rho.layout().positions_of(side);

    const int rank = rho.rank();
    if (rank == 1) {
        // unique decomposition: the state itself
        const double value = von_neumann_entropy(partial_trace(rho, side));
        return {value, Isometry(Matrix::Identity(1, 1)), 0, true, sense};
    }
    const int n = cfg.branch_count.value_or(rank * rank);
    return staged_restarts([&](int rows) { return RoofObjective(rho, side, rows); }, n, rank,
                           sense, cfg);
}

OptimizationResult optimize_rank1_measurement(const DensityOperator& rho,
                                              std::span<const std::string> measured,
                                              Sense sense, const OptimizerConfig& cfg,
                                              MeasurementSearchMode mode) {
    cfg.validate();
    const std::vector<std::string> kept = rho.layout().complement(measured);
    if (measured.empty() || kept.empty())
        throw InvalidInput("measured labels must be a proper nonempty subset");
    const double s_kept = von_neumann_entropy(partial_trace(rho, kept));

    if (mode == MeasurementSearchMode::Duality) {
        const StateVector psi = purify(rho, "C*");
        std::vector<std::string> keep_anc = kept;
        keep_anc.push_back("C*");
        const DensityOperator rho_ac = partial_trace(psi, keep_anc);
        const Sense inner = sense == Sense::Max ? Sense::Min : Sense::Max;
        OptimizationResult roof = optimize_roof(rho_ac, kept, inner, cfg);
        return {s_kept - roof.value, std::move(roof.best_isometry), roof.evals_used,
                roof.converged, sense};
    }

    const IndexSplit split(rho.layout(), kept);
    const int d_m = static_cast<int>(split.rest_dim());
    const int n = cfg.branch_count.value_or(d_m * d_m);
    // f = S_A - sum_x p_x S(rho_A^x): maximizing f minimizes the average.
    const Sense inner = sense == Sense::Max ? Sense::Min : Sense::Max;
    OptimizationResult res = staged_restarts(
        [&](int rows) { return MeasurementObjective(rho, measured, rows); }, n, d_m, inner, cfg);
    return {s_kept - res.value, std::move(res.best_isometry), res.evals_used, res.converged,
            sense};
}

Rank1Measurement measurement_from_isometry(const Isometry& w) {
    std::vector<Vector> vectors;
    vectors.reserve(static_cast<std::size_t>(w.rows()));
    for (long x = 0; x < w.rows(); ++x)
        vectors.push_back(w.matrix().row(x).conjugate().transpose());
    return Rank1Measurement(std::move(vectors));
}

}  // namespace qpoly
