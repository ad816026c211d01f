#include "qpoly/ensembles.hpp"

#include <cmath>

namespace qpoly {

namespace {

Vector placeholder_basis_state(long dim) {
    Vector v = Vector::Zero(dim);
    v[0] = Complex(1.0, 0.0);
    return v;
}

}  // namespace

Isometry::Isometry(Matrix v) : v_(std::move(v)) {
    if (v_.rows() < v_.cols()) throw InvalidInput("isometry needs rows >= cols");
    if (v_.cols() < 1) throw InvalidInput("isometry needs at least one column");
    const Matrix gram = v_.adjoint() * v_;
    const double res = (gram - Matrix::Identity(v_.cols(), v_.cols())).cwiseAbs().maxCoeff();
    if (res > kIsometryTol)
        throw InvalidInput("columns are not orthonormal (residual " + std::to_string(res) + ")");
}

PureEnsemble::PureEnsemble(DensityOperator target, std::vector<EnsembleBranch> branches)
    : target_(std::move(target)), branches_(std::move(branches)) {
    if (branches_.empty()) throw InvalidInput("ensemble needs at least one branch");
    double total = 0.0;
    Matrix mix = Matrix::Zero(target_.dim(), target_.dim());
    for (const EnsembleBranch& b : branches_) {
        if (b.probability < 0.0) throw InvalidInput("negative branch probability");
        if (b.state.layout() != target_.layout())
            throw InvalidInput("branch layout differs from target layout");
        total += b.probability;
        if (b.probability >= kProbFloor)
            mix += b.probability * (b.state.amplitudes() * b.state.amplitudes().adjoint());
    }
    if (std::abs(total - 1.0) > kTraceTol)
        throw InvalidInput("branch probabilities sum to " + std::to_string(total));
    const double res = (mix - target_.matrix()).cwiseAbs().maxCoeff();
    if (res > kReconstructTol)
        throw InvalidInput("branches do not reconstruct the target (residual " +
                           std::to_string(res) + ")");
}

Rank1Measurement::Rank1Measurement(std::vector<Vector> outcome_vectors)
    : vectors_(std::move(outcome_vectors)) {
    if (vectors_.empty()) throw InvalidInput("measurement needs at least one outcome");
    dim_ = vectors_.front().size();
    Matrix sum = Matrix::Zero(dim_, dim_);
    for (const Vector& m : vectors_) {
        if (m.size() != dim_) throw InvalidInput("outcome vectors have mixed dimensions");
        sum += m * m.adjoint();
    }
    const double res = (sum - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff();
    if (res > kCompletenessTol)
        throw InvalidInput("outcome projectors do not sum to identity (residual " +
                           std::to_string(res) + ")");
}

PureEnsemble spectral_ensemble(const DensityOperator& rho) {
    const EigResult eig = eig_hermitian(rho.matrix());
    std::vector<EnsembleBranch> branches;
    for (long j = 0; j < eig.values.size(); ++j) {
        if (eig.values[j] <= kRankEigTol) continue;
        Vector v = eig.vectors.col(j);
        v.normalize();
        branches.push_back({eig.values[j], StateVector(rho.layout(), std::move(v))});
    }
    if (branches.empty())
        throw InvalidInput("density operator has no eigenvalue above the rank threshold");
    return PureEnsemble(rho, std::move(branches));
}

PureEnsemble hjw_ensemble(const DensityOperator& rho, const Isometry& v) {
    const EigResult eig = eig_hermitian(rho.matrix());
    const int rank = rho.rank();
    if (v.cols() != rank)
        throw InvalidInput("isometry column count " + std::to_string(v.cols()) +
                           " differs from state rank " + std::to_string(rank));
    const long d = rho.dim();
    Matrix w(d, rank);  // eigenvectors scaled by sqrt(eigenvalue)
    for (int j = 0; j < rank; ++j)
        w.col(j) = std::sqrt(std::max(eig.values[j], 0.0)) * eig.vectors.col(j);

    std::vector<EnsembleBranch> branches;
    branches.reserve(static_cast<std::size_t>(v.rows()));
    for (long i = 0; i < v.rows(); ++i) {
        Vector unnorm = w * v.matrix().row(i).transpose();
        const double p = unnorm.squaredNorm();
        if (p < kProbFloor) {
            branches.push_back({p, StateVector(rho.layout(), placeholder_basis_state(d))});
        } else {
            branches.push_back({p, StateVector(rho.layout(), unnorm / std::sqrt(p))});
        }
    }
    return PureEnsemble(rho, std::move(branches));
}

double average_branch_entropy(const PureEnsemble& ens, std::span<const std::string> side) {
    const SystemLayout& layout = ens.target().layout();
    if (side.size() >= static_cast<std::size_t>(layout.size()))
        throw InvalidInput("side must be a proper label subset of the ensemble layout");
    layout.positions_of(side);
    double acc = 0.0;
    for (const EnsembleBranch& b : ens.branches()) {
        if (b.probability < kProbFloor) continue;
        acc += b.probability * von_neumann_entropy(partial_trace(b.state, side));
    }
    return acc;
}

MeasurementOutcomeSet measure_rank1(const DensityOperator& rho,
                                    std::span<const std::string> measured,
                                    const Rank1Measurement& m) {
    std::vector<std::string> kept = rho.layout().complement(measured);
    if (kept.empty()) throw InvalidInput("measurement must leave at least one factor unmeasured");
    const IndexSplit split(rho.layout(), kept);
    if (m.dim() != split.rest_dim())
        throw InvalidInput("measurement dimension does not match the measured factors");
    const SystemLayout kept_layout = rho.layout().sublayout(kept);
    const long dk = split.keep_dim(), dm = split.rest_dim();

    MeasurementOutcomeSet out;
    for (const Vector& mv : m.outcome_vectors()) {
        // (I (x) <m|) rho (I (x) |m>) on the kept side
        Matrix cond(dk, dk);
        for (long a = 0; a < dk; ++a)
            for (long ap = 0; ap < dk; ++ap) {
                Complex acc(0.0, 0.0);
                for (long b = 0; b < dm; ++b)
                    for (long bp = 0; bp < dm; ++bp)
                        acc += std::conj(mv[b]) * rho.matrix()(split.merge(a, b), split.merge(ap, bp)) * mv[bp];
                cond(a, ap) = acc;
            }
        const double p = cond.trace().real();
        if (p < kProbFloor) {
            Matrix mixed = Matrix::Identity(dk, dk) / static_cast<double>(dk);
            out.outcomes.push_back({std::max(p, 0.0), DensityOperator(kept_layout, std::move(mixed))});
        } else {
            out.outcomes.push_back({p, DensityOperator(kept_layout, cond / p)});
        }
    }
    return out;
}

PureEnsemble ensemble_measurement_duality(const StateVector& psi,
                                          std::span<const std::string> kept,
                                          std::span<const std::string> assisting,
                                          const Rank1Measurement& m) {
    std::vector<std::string> all(kept.begin(), kept.end());
    all.insert(all.end(), assisting.begin(), assisting.end());
    if (all.size() != static_cast<std::size_t>(psi.layout().size()))
        throw InvalidInput("kept and assisting labels must partition the state");
    psi.layout().positions_of(all);

    const IndexSplit split(psi.layout(), kept);
    if (m.dim() != split.rest_dim())
        throw InvalidInput("measurement dimension does not match the assisting factors");
    const long dk = split.keep_dim(), dm = split.rest_dim();
    DensityOperator target = partial_trace(psi, kept);

    std::vector<EnsembleBranch> branches;
    for (const Vector& mv : m.outcome_vectors()) {
        Vector unnorm(dk);
        for (long a = 0; a < dk; ++a) {
            Complex acc(0.0, 0.0);
            for (long b = 0; b < dm; ++b) acc += std::conj(mv[b]) * psi.amplitudes()[split.merge(a, b)];
            unnorm[a] = acc;
        }
        const double p = unnorm.squaredNorm();
        if (p < kProbFloor) {
            branches.push_back({p, StateVector(target.layout(), placeholder_basis_state(dk))});
        } else {
            branches.push_back({p, StateVector(target.layout(), unnorm / std::sqrt(p))});
        }
    }
    return PureEnsemble(std::move(target), std::move(branches));
}

EnsembleRealization measurement_from_ensemble(const PureEnsemble& ens,
                                              const std::string& ancilla_label) {
    const DensityOperator& rho = ens.target();
    const EigResult eig = eig_hermitian(rho.matrix());
    const int rank = rho.rank();
    const long anc_dim = std::max(rank, 2);
    const long d = rho.dim();

    // Standard purification |Psi> = sum_j sqrt(lambda_j) |e_j>|j>.
    SystemLayout layout = rho.layout().concat(SystemLayout({{ancilla_label, anc_dim}}));
    Vector amps = Vector::Zero(d * anc_dim);
    for (int j = 0; j < rank; ++j) {
        const double w = std::sqrt(std::max(eig.values[j], 0.0));
        for (long x = 0; x < d; ++x) amps[x * anc_dim + j] = w * eig.vectors(x, j);
    }
    amps.normalize();
    StateVector purification(std::move(layout), std::move(amps));

    // Outcome vectors m_i[j] = conj(V_ij) with V_ij = <e_j|phi_i> sqrt(p_i/lambda_j);
    // completeness on the support follows from the ensemble reconstructing rho.
    std::vector<Vector> vectors;
    for (const EnsembleBranch& b : ens.branches()) {
        Vector mv = Vector::Zero(anc_dim);
        if (b.probability >= kProbFloor) {
            const double sp = std::sqrt(b.probability);
            for (int j = 0; j < rank; ++j) {
                const double lam = std::max(eig.values[j], 0.0);
                if (lam <= kRankEigTol) continue;
                const Complex vij = eig.vectors.col(j).dot(b.state.amplitudes()) * sp / std::sqrt(lam);
                mv[j] = std::conj(vij);
            }
        }
        vectors.push_back(std::move(mv));
    }
    // Pad dimensions beyond the support so the projectors sum to the identity.
    for (long j = rank; j < anc_dim; ++j) {
        Vector mv = Vector::Zero(anc_dim);
        mv[j] = Complex(1.0, 0.0);
        vectors.push_back(std::move(mv));
    }
    return EnsembleRealization{std::move(purification), ancilla_label,
                               Rank1Measurement(std::move(vectors))};
}

}  // namespace qpoly
