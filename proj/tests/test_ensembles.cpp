#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qpoly/ensembles.hpp"
#include "qpoly/optimizer.hpp"
#include "qpoly/rng.hpp"
#include "qpoly/sampling.hpp"

using namespace qpoly;

namespace {

SystemLayout qubits(std::vector<std::string> labels) {
    std::vector<Part> parts;
    for (auto& l : labels) parts.push_back({std::move(l), 2});
    return SystemLayout(std::move(parts));
}

DensityOperator classical_pair() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(3, 3) = 0.5;
    return DensityOperator(qubits({"A", "B"}), m);
}

StateVector ghz3() {
    Vector v = Vector::Zero(8);
    v[0] = v[7] = 1.0 / std::sqrt(2.0);
    return StateVector(qubits({"A", "B1", "B2"}), std::move(v));
}

Matrix qr_isometry(int rows, int cols, Rng& rng) {
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const auto [re, im] = rng.gaussian_pair();
            g(i, j) = Complex(re, im);
        }
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ() * Matrix::Identity(rows, cols);
}

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("spectral ensemble of a classical mixture") {
    const PureEnsemble ens = spectral_ensemble(classical_pair());
    REQUIRE(ens.branch_count() == 2);
    for (const EnsembleBranch& b : ens.branches()) {
        CHECK(b.probability == doctest::Approx(0.5));
        // branches are |00> and |11> in some order
        const double a0 = std::abs(b.state.amplitudes()[0]);
        const double a3 = std::abs(b.state.amplitudes()[3]);
        CHECK(std::max(a0, a3) == doctest::Approx(1.0));
    }
}

TEST_CASE("spectral ensemble of a pure state has one branch") {
    const long dims[] = {2, 2};
    const StateVector psi = haar_random_pure(dims, 3);
    const PureEnsemble ens = spectral_ensemble(psi.to_density());
    CHECK(ens.branch_count() == 1);
    CHECK(ens.branches()[0].probability == doctest::Approx(1.0));
}

TEST_CASE("spectral branch count equals rank") {
    const long dims[] = {2, 2};
    const StateVector a = haar_random_pure(dims, 10);
    const StateVector b = haar_random_pure(dims, 11);
    const Matrix m = 0.6 * (a.amplitudes() * a.amplitudes().adjoint()) +
                     0.4 * (b.amplitudes() * b.amplitudes().adjoint());
    const DensityOperator rho(a.layout(), m);
    CHECK(spectral_ensemble(rho).branch_count() == 2);
}

TEST_CASE("hjw ensemble with the identity isometry is the spectral one") {
    const DensityOperator rho = classical_pair();
    const PureEnsemble spec = spectral_ensemble(rho);
    const PureEnsemble hjw = hjw_ensemble(rho, Isometry(Matrix::Identity(2, 2)));
    REQUIRE(hjw.branch_count() == spec.branch_count());
    for (int i = 0; i < 2; ++i) {
        CHECK(hjw.branches()[static_cast<std::size_t>(i)].probability ==
              doctest::Approx(spec.branches()[static_cast<std::size_t>(i)].probability));
        const Complex overlap = spec.branches()[static_cast<std::size_t>(i)].state.amplitudes().dot(
            hjw.branches()[static_cast<std::size_t>(i)].state.amplitudes());
        CHECK(std::abs(overlap) == doctest::Approx(1.0));
    }
}

TEST_CASE("hjw ensemble under the Hadamard isometry gives Bell branches") {
    const DensityOperator rho = classical_pair();
    Matrix h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    const PureEnsemble ens = hjw_ensemble(rho, Isometry(h));

    // direct substitution: sqrt(p_i)|phi_i> = sum_j V_ij sqrt(l_j)|e_j>
    // with l = {1/2, 1/2}, e in {|00>, |11>} gives (|00> +- |11>)/sqrt(2), p = 1/2
    REQUIRE(ens.branch_count() == 2);
    for (const EnsembleBranch& b : ens.branches()) {
        CHECK(b.probability == doctest::Approx(0.5));
        CHECK(std::abs(b.state.amplitudes()[0]) == doctest::Approx(s));
        CHECK(std::abs(b.state.amplitudes()[3]) == doctest::Approx(s));
    }

    CHECK_THROWS_AS(hjw_ensemble(rho, Isometry(Matrix::Identity(3, 3))), InvalidInput);
}

TEST_CASE("hjw ensembles reconstruct the state for every isometry") {
    const long dims[] = {2, 2};
    const DensityOperator rho = random_mixed(dims, 42);
    const int rank = rho.rank();
    Rng rng(kFixtureSeed);
    for (int rep = 0; rep < 60; ++rep) {
        const int rows = rank + static_cast<int>(rng.next_u64() % 5);
        const PureEnsemble ens = hjw_ensemble(rho, Isometry(qr_isometry(rows, rank, rng)));
        Matrix mix = Matrix::Zero(4, 4);
        double total = 0.0;
        for (const EnsembleBranch& b : ens.branches()) {
            total += b.probability;
            mix += b.probability * (b.state.amplitudes() * b.state.amplitudes().adjoint());
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(max_abs_diff(mix, rho.matrix()) < 1e-8);
    }
    // isometries from the optimizer chart as well
    for (int rep = 0; rep < 60; ++rep) {
        const int rows = rank + 2;
        std::vector<double> params(static_cast<std::size_t>(isometry_param_count(rows, rank)));
        for (double& x : params) x = rng.uniform(-3.14, 3.14);
        const Isometry v(isometry_from_params(params, rows, rank));
        hjw_ensemble(rho, v);  // constructor revalidates reconstruction
    }
}

TEST_CASE("average branch entropy") {
    const DensityOperator rho = classical_pair();
    const std::vector<std::string> side{"A"};

    CHECK(average_branch_entropy(spectral_ensemble(rho), side) ==
          doctest::Approx(0.0).epsilon(1e-9));

    Matrix h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    CHECK(average_branch_entropy(hjw_ensemble(rho, Isometry(h)), side) ==
          doctest::Approx(1.0).epsilon(1e-9));

    const long dims[] = {2, 2};
    const StateVector psi = haar_random_pure(dims, 77);
    const PureEnsemble single = spectral_ensemble(psi.to_density());
    CHECK(average_branch_entropy(single, side) ==
          doctest::Approx(von_neumann_entropy(partial_trace(psi, side))).epsilon(1e-9));

    CHECK_THROWS_AS(average_branch_entropy(single, std::vector<std::string>{"A", "B1"}),
                    InvalidInput);
    CHECK_THROWS_AS(average_branch_entropy(single, std::vector<std::string>{"X"}), InvalidInput);
}

TEST_CASE("branch entropies never exceed the log-dimension bound") {
    const long dims[] = {2, 3};
    const DensityOperator rho = random_mixed(dims, 55);
    Rng rng(5);
    const int rank = rho.rank();
    const std::vector<std::string> side{"A"};
    for (int rep = 0; rep < 20; ++rep) {
        const PureEnsemble ens = hjw_ensemble(rho, Isometry(qr_isometry(rank + 3, rank, rng)));
        for (const EnsembleBranch& b : ens.branches()) {
            if (b.probability < 1e-12) continue;
            const double se = von_neumann_entropy(partial_trace(b.state, side));
            CHECK(se <= std::log2(2.0) + 1e-9);  // min(dim_A, dim_rest) = 2
        }
    }
}

TEST_CASE("rank-1 measurement validation") {
    Vector m0 = Vector::Zero(2), m1 = Vector::Zero(2);
    m0[0] = 1.0;
    m1[1] = 1.0;
    CHECK_NOTHROW(Rank1Measurement({m0, m1}));
    CHECK_THROWS_AS(Rank1Measurement({m0, m0}), InvalidInput);  // not complete
    CHECK_THROWS_AS(Rank1Measurement({m0}), InvalidInput);
}

TEST_CASE("computational measurement of a classical pair") {
    Vector m0 = Vector::Zero(2), m1 = Vector::Zero(2);
    m0[0] = 1.0;
    m1[1] = 1.0;
    const std::vector<std::string> measured{"B"};
    const MeasurementOutcomeSet out =
        measure_rank1(classical_pair(), measured, Rank1Measurement({m0, m1}));
    REQUIRE(out.outcomes.size() == 2);
    for (int x = 0; x < 2; ++x) {
        CHECK(out.outcomes[static_cast<std::size_t>(x)].probability == doctest::Approx(0.5));
        const Matrix& post = out.outcomes[static_cast<std::size_t>(x)].post_state.matrix();
        CHECK(post(x, x).real() == doctest::Approx(1.0));
    }
}

TEST_CASE("measuring a product state never disturbs the kept side") {
    const long dims_a[] = {2};
    const DensityOperator rho_a = random_mixed(dims_a, 8);
    Matrix mb = Matrix::Zero(2, 2);
    mb(0, 0) = 0.25;
    mb(1, 1) = 0.75;
    const DensityOperator joint =
        tensor_product(rho_a, DensityOperator(SystemLayout({{"B", 2}}), mb));

    const double s = 1.0 / std::sqrt(2.0);
    Vector p0(2), p1(2);
    p0 << s, s;
    p1 << s, -s;
    const std::vector<std::string> measured{"B"};
    const MeasurementOutcomeSet out = measure_rank1(joint, measured, Rank1Measurement({p0, p1}));
    double total = 0.0;
    for (const MeasurementOutcome& o : out.outcomes) {
        total += o.probability;
        CHECK(max_abs_diff(o.post_state.matrix(), rho_a.matrix()) < 1e-9);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("X-basis measurement on one side of a Bell state") {
    Vector bell = Vector::Zero(4);
    bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
    const DensityOperator rho(qubits({"A", "B"}), bell * bell.adjoint());

    const double s = 1.0 / std::sqrt(2.0);
    Vector p0(2), p1(2);
    p0 << s, s;
    p1 << s, -s;
    const std::vector<std::string> measured{"B"};
    const MeasurementOutcomeSet out = measure_rank1(rho, measured, Rank1Measurement({p0, p1}));
    // explicit 2x2 computation: outcome + gives |+><+|, outcome - gives |-><-|
    REQUIRE(out.outcomes.size() == 2);
    for (std::size_t x = 0; x < 2; ++x) {
        CHECK(out.outcomes[x].probability == doctest::Approx(0.5));
        const Matrix& post = out.outcomes[x].post_state.matrix();
        CHECK(post(0, 0).real() == doctest::Approx(0.5));
        CHECK(post(0, 1).real() == doctest::Approx(x == 0 ? 0.5 : -0.5));
        CHECK((post * post).trace().real() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("measuring the assisting side realizes ensembles of the kept state") {
    const StateVector ghz = ghz3();
    const std::vector<std::string> kept{"A", "B1"}, assisting{"B2"};

    Vector m0 = Vector::Zero(2), m1 = Vector::Zero(2);
    m0[0] = 1.0;
    m1[1] = 1.0;
    const PureEnsemble comp =
        ensemble_measurement_duality(ghz, kept, assisting, Rank1Measurement({m0, m1}));
    REQUIRE(comp.branch_count() == 2);
    // direct projections: branches |00> and |11>, each with p = 1/2
    for (const EnsembleBranch& b : comp.branches()) {
        CHECK(b.probability == doctest::Approx(0.5));
        const double a0 = std::abs(b.state.amplitudes()[0]);
        const double a3 = std::abs(b.state.amplitudes()[3]);
        CHECK(std::max(a0, a3) == doctest::Approx(1.0));
    }

    const double s = 1.0 / std::sqrt(2.0);
    Vector p0(2), p1(2);
    p0 << s, s;
    p1 << s, -s;
    const PureEnsemble xbasis =
        ensemble_measurement_duality(ghz, kept, assisting, Rank1Measurement({p0, p1}));
    for (const EnsembleBranch& b : xbasis.branches()) {
        CHECK(b.probability == doctest::Approx(0.5));
        CHECK(std::abs(b.state.amplitudes()[0]) == doctest::Approx(s));
        CHECK(std::abs(b.state.amplitudes()[3]) == doctest::Approx(s));
    }

    CHECK_THROWS_AS(ensemble_measurement_duality(ghz, kept, std::vector<std::string>{},
                                                 Rank1Measurement({p0, p1})),
                    InvalidInput);
}

TEST_CASE("duality round-trip preserves branch count and probabilities") {
    const long dims[] = {2, 2};
    const DensityOperator rho = random_mixed(dims, 99);
    Rng rng(1);
    const PureEnsemble ens = hjw_ensemble(rho, Isometry(qr_isometry(5, rho.rank(), rng)));

    const EnsembleRealization real = measurement_from_ensemble(ens);
    const PureEnsemble back = ensemble_measurement_duality(
        real.purification, rho.layout().labels(), std::vector<std::string>{real.ancilla_label},
        real.measurement);

    REQUIRE(back.branch_count() == ens.branch_count());
    for (int i = 0; i < ens.branch_count(); ++i) {
        const auto& orig = ens.branches()[static_cast<std::size_t>(i)];
        const auto& rt = back.branches()[static_cast<std::size_t>(i)];
        CHECK(rt.probability == doctest::Approx(orig.probability).epsilon(1e-9));
        if (orig.probability > 1e-9) {
            const Complex overlap = orig.state.amplitudes().dot(rt.state.amplitudes());
            CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("ensemble validation rejects bad mixtures") {
    const DensityOperator rho = classical_pair();
    Vector v00 = Vector::Zero(4);
    v00[0] = 1.0;
    const StateVector s00(rho.layout(), v00);
    CHECK_THROWS_AS(PureEnsemble(rho, {{0.5, s00}}), InvalidInput);   // sums to 1/2
    CHECK_THROWS_AS(PureEnsemble(rho, {{1.0, s00}}), InvalidInput);   // wrong mixture
    CHECK_THROWS_AS(PureEnsemble(rho, {{-0.1, s00}, {1.1, s00}}), InvalidInput);
}
