#include "qdfs/hilbert.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qdfs {

HilbertSpace::HilbertSpace(std::vector<int> factor_dims) : dims_(std::move(factor_dims)) {
    if (dims_.empty()) throw std::invalid_argument("HilbertSpace: empty factor list");
    total_ = 1;
    for (int d : dims_) {
        if (d < 2) throw std::invalid_argument("HilbertSpace: factor dimension < 2");
        total_ *= d;
    }
}

StateVector::StateVector(HilbertSpace space, Vector amplitudes)
    : space_(std::move(space)), amps_(std::move(amplitudes)) {
    if (amps_.size() != space_.dim())
        throw std::invalid_argument("StateVector: amplitude length does not match space");
}

StateVector StateVector::normalized() const {
    double n = amps_.norm();
    if (n < 1e-14) throw std::invalid_argument("StateVector: cannot normalize zero vector");
    return StateVector(space_, amps_ / n);
}

LinearOperator::LinearOperator(HilbertSpace space, Matrix matrix)
    : space_(std::move(space)), mat_(std::move(matrix)) {
    if (mat_.rows() != space_.dim() || mat_.cols() != space_.dim())
        throw std::invalid_argument("LinearOperator: matrix does not match space");
}

LinearOperator LinearOperator::identity(const HilbertSpace& space) {
    return LinearOperator(space, Matrix::Identity(space.dim(), space.dim()));
}

DensityOperator::DensityOperator(HilbertSpace space, Matrix matrix)
    : space_(std::move(space)), mat_(std::move(matrix)) {
    if (mat_.rows() != space_.dim() || mat_.cols() != space_.dim())
        throw std::invalid_argument("DensityOperator: matrix does not match space");
    if (max_abs(mat_ - mat_.adjoint()) > 1e-10)
        throw std::invalid_argument("DensityOperator: not Hermitian");
    if (std::abs(mat_.trace().real() - 1.0) > 1e-9 || std::abs(mat_.trace().imag()) > 1e-9)
        throw std::invalid_argument("DensityOperator: trace != 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw std::invalid_argument("DensityOperator: negative eigenvalue beyond tolerance");
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
    const Vector& v = psi.amplitudes();
    return DensityOperator(psi.space(), v * v.adjoint());
}

namespace {

std::vector<int> concat_dims(const HilbertSpace& a, const HilbertSpace& b) {
    std::vector<int> dims = a.factor_dims();
    dims.insert(dims.end(), b.factor_dims().begin(), b.factor_dims().end());
    return dims;
}

}  // namespace

StateVector tensor_product(const StateVector& a, const StateVector& b) {
    const int na = a.space().dim(), nb = b.space().dim();
    Vector out(na * nb);
    for (int i = 0; i < na; ++i)
        out.segment(i * nb, nb) = a.amplitudes()(i) * b.amplitudes();
    return StateVector(HilbertSpace(concat_dims(a.space(), b.space())), std::move(out));
}

LinearOperator tensor_product(const LinearOperator& a, const LinearOperator& b) {
    const int na = a.space().dim(), nb = b.space().dim();
    Matrix out(na * nb, na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j)
            out.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
    return LinearOperator(HilbertSpace(concat_dims(a.space(), b.space())), std::move(out));
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
    const auto& dims = rho.space().factor_dims();
    const int nf = rho.space().num_factors();
    if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
    std::vector<bool> kept(nf, false);
    for (int k : keep) {
        if (k < 0 || k >= nf) throw std::invalid_argument("partial_trace: invalid factor index");
        if (kept[k]) throw std::invalid_argument("partial_trace: duplicate factor index");
        kept[k] = true;
    }

    std::vector<int> keep_sorted, traced;
    for (int f = 0; f < nf; ++f) (kept[f] ? keep_sorted : traced).push_back(f);

    int dk = 1, dt = 1;
    for (int f : keep_sorted) dk *= dims[f];
    for (int f : traced) dt *= dims[f];

    // strides of each factor in the full flat index (row-major, factor 0 slowest)
    std::vector<int> stride(nf, 1);
    for (int f = nf - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];

    auto flat = [&](const std::vector<int>& sub, const std::vector<int>& factors) {
        int idx = 0;
        for (size_t i = 0; i < factors.size(); ++i) idx += sub[i] * stride[factors[i]];
        return idx;
    };
    auto unrank = [&](int rank, const std::vector<int>& factors) {
        std::vector<int> sub(factors.size());
        for (int i = static_cast<int>(factors.size()) - 1; i >= 0; --i) {
            sub[i] = rank % dims[factors[i]];
            rank /= dims[factors[i]];
        }
        return sub;
    };

    Matrix out = Matrix::Zero(dk, dk);
    for (int i = 0; i < dk; ++i) {
        const int bi = flat(unrank(i, keep_sorted), keep_sorted);
        for (int j = 0; j < dk; ++j) {
            const int bj = flat(unrank(j, keep_sorted), keep_sorted);
            Complex sum = 0.0;
            for (int t = 0; t < dt; ++t) {
                const int bt = flat(unrank(t, traced), traced);
                sum += rho.matrix()(bi + bt, bj + bt);
            }
            out(i, j) = sum;
        }
    }

    std::vector<int> out_dims;
    for (int f : keep_sorted) out_dims.push_back(dims[f]);
    return DensityOperator(HilbertSpace(out_dims), std::move(out));
}

SchmidtDecomposition schmidt_decompose(const StateVector& psi, int left_factors,
                                       double degeneracy_tol) {
    if (std::abs(psi.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("schmidt_decompose: state not normalized");
    const auto& dims = psi.space().factor_dims();
    if (left_factors < 1 || left_factors >= psi.space().num_factors())
        throw std::invalid_argument("schmidt_decompose: invalid bipartition");
    int dl = 1, dr = 1;
    for (int f = 0; f < left_factors; ++f) dl *= dims[f];
    for (int f = left_factors; f < psi.space().num_factors(); ++f) dr *= dims[f];

    Matrix M(dl, dr);
    for (int i = 0; i < dl; ++i)
        for (int j = 0; j < dr; ++j) M(i, j) = psi.amplitudes()(i * dr + j);

    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SchmidtDecomposition out;
    const int n = static_cast<int>(svd.singularValues().size());
    for (int k = 0; k < n; ++k) {
        double s = svd.singularValues()(k);
        out.coefficients.push_back(s * s);
        out.left_vectors.push_back(svd.matrixU().col(k));
        // psi_{ij} = sum_k U(i,k) s_k conj(V(j,k))
        out.right_vectors.push_back(svd.matrixV().col(k).conjugate());
    }
    if (n >= 2) out.degenerate = std::abs(out.coefficients[0] - out.coefficients[1]) < degeneracy_tol;
    return out;
}

Matrix expm_2x2(const Matrix& generator, double t) {
    if (generator.rows() != 2 || generator.cols() != 2)
        throw std::invalid_argument("expm_2x2: operator is not 2x2");
    if (max_abs(generator - generator.adjoint()) > 1e-12)
        throw std::invalid_argument("expm_2x2: generator not Hermitian");
    // G = a I + T with T traceless, T^2 = w^2 I; Euler form on each part.
    const double a = 0.5 * generator.trace().real();
    Matrix T = generator - a * Matrix::Identity(2, 2);
    const double w2 = (T * T)(0, 0).real();
    const double w = std::sqrt(std::max(w2, 0.0));
    const Complex phase = std::exp(Complex(0.0, -a * t));
    if (w < 1e-300) return phase * Matrix::Identity(2, 2);
    return phase * (std::cos(w * t) * Matrix::Identity(2, 2) -
                    Complex(0.0, 1.0) * (std::sin(w * t) / w) * T);
}

EighResult eigh(const Matrix& op, bool require_hermitian) {
    if (require_hermitian && max_abs(op - op.adjoint()) > 1e-10)
        throw std::invalid_argument("eigh: operator not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (op + op.adjoint()));
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigh: eigensolver failed to converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace qdfs
