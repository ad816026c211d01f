#include "qpoly/states.hpp"

#include <cmath>

#include "qpoly/linalg.hpp"

namespace qpoly {

namespace {

void check_square(const Matrix& m, long dim) {
    if (m.rows() != dim || m.cols() != dim)
        throw InvalidInput("matrix shape does not match layout dimension");
}

}  // namespace

DensityOperator::DensityOperator(SystemLayout layout, Matrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
    check_square(matrix_, layout_.total_dim());
    const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTol)
        throw InvalidInput("density operator is not Hermitian (residual " + std::to_string(herm) + ")");
    const double tr_err = std::abs(matrix_.trace() - Complex(1.0, 0.0));
    if (tr_err > kTraceTol)
        throw InvalidInput("density operator trace differs from 1 by " + std::to_string(tr_err));
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPsdTol)
        throw InvalidInput("density operator has negative eigenvalue " +
                           std::to_string(es.eigenvalues().minCoeff()));
}

int DensityOperator::rank() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    int r = 0;
    for (long i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()[i] > kRankEigTol) ++r;
    return r > 0 ? r : 1;
}

bool DensityOperator::is_pure() const {
    const double purity = (matrix_ * matrix_).trace().real();
    return purity > 1.0 - 1e-9;
}

StateVector::StateVector(SystemLayout layout, Vector amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != layout_.total_dim())
        throw InvalidInput("amplitude count does not match layout dimension");
    const double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > kUnitNormTol)
        throw InvalidInput("state vector norm differs from 1 by " + std::to_string(std::abs(norm - 1.0)));
}

DensityOperator StateVector::to_density() const {
    return DensityOperator(layout_, amplitudes_ * amplitudes_.adjoint());
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
    SystemLayout layout = a.layout().concat(b.layout());
    const long db = b.dim();
    Vector out(layout.total_dim());
    for (long i = 0; i < a.dim(); ++i)
        out.segment(i * db, db) = a.amplitudes()[i] * b.amplitudes();
    return StateVector(std::move(layout), std::move(out));
}

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
    SystemLayout layout = a.layout().concat(b.layout());
    const long db = b.dim();
    Matrix out(layout.total_dim(), layout.total_dim());
    for (long i = 0; i < a.dim(); ++i)
        for (long j = 0; j < a.dim(); ++j)
            out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    return DensityOperator(std::move(layout), std::move(out));
}

DensityOperator partial_trace(const DensityOperator& state, std::span<const std::string> keep) {
    const IndexSplit split(state.layout(), keep);
    Matrix out = Matrix::Zero(split.keep_dim(), split.keep_dim());
    for (long k = 0; k < split.keep_dim(); ++k)
        for (long kp = 0; kp < split.keep_dim(); ++kp) {
            Complex acc(0.0, 0.0);
            for (long r = 0; r < split.rest_dim(); ++r)
                acc += state.matrix()(split.merge(k, r), split.merge(kp, r));
            out(k, kp) = acc;
        }
    return DensityOperator(state.layout().sublayout(keep), std::move(out));
}

DensityOperator partial_trace(const StateVector& state, std::span<const std::string> keep) {
    const IndexSplit split(state.layout(), keep);
    Matrix m(split.keep_dim(), split.rest_dim());
    for (long k = 0; k < split.keep_dim(); ++k)
        for (long r = 0; r < split.rest_dim(); ++r)
            m(k, r) = state.amplitudes()[split.merge(k, r)];
    Matrix out = m * m.adjoint();
    return DensityOperator(state.layout().sublayout(keep), std::move(out));
}

StateVector purify(const DensityOperator& rho, const std::string& ancilla_label) {
    const EigResult eig = eig_hermitian(rho.matrix());
    int rank = 0;
    for (long i = 0; i < eig.values.size(); ++i)
        if (eig.values[i] > kRankEigTol) ++rank;
    if (rank == 0) rank = 1;
    const long anc_dim = std::max(rank, 2);

    SystemLayout layout = rho.layout().concat(SystemLayout({{ancilla_label, anc_dim}}));
    const long d = rho.dim();
    Vector out = Vector::Zero(d * anc_dim);
    for (int j = 0; j < rank; ++j) {
        const double w = std::sqrt(std::max(eig.values[j], 0.0));
        for (long x = 0; x < d; ++x) out[x * anc_dim + j] = w * eig.vectors(x, j);
    }
    out.normalize();
    return StateVector(std::move(layout), std::move(out));
}

}  // namespace qpoly
