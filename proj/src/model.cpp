#include "qdfs/model.hpp"

#include <cmath>

namespace qdfs {

namespace {
const Complex kI(0.0, 1.0);
}

void SystemParams::validate() const {
    if (g < 0 || kappa < 0 || gamma_a < 0 || gamma_b < 0 || omega1 < 0 || omega2 < 0)
        throw std::invalid_argument("SystemParams: negative rate");
    if (n_max < 1) throw std::invalid_argument("SystemParams: n_max < 1");
}

std::vector<std::string> SystemParams::hierarchy_report() const {
    std::vector<std::string> warnings;
    if (omega1 < 5.0 * omega2) warnings.push_back("omega1 >> omega2 not satisfied");
    if (omega2 < 5.0 * g) warnings.push_back("omega2 >> g not satisfied");
    const double gam = std::max(gamma_a, gamma_b);
    if (gam > 0 && engineered_rate() < 5.0 * gam)
        warnings.push_back("Gamma = g^2/kappa >> gamma^i not satisfied");
    return warnings;
}

SystemParams SystemParams::paper_regime() {
    SystemParams p;
    p.g = 1.0;
    p.omega1 = 100.0;
    p.omega2 = 10.0;
    p.kappa = 3.0;
    p.gamma_a = p.gamma_b = 1.0 / 500.0;
    return p;
}

Matrix sigma_eg() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;  // |e><g|, basis (|e>, |g>)
    return m;
}

Matrix sigma_ge() { return sigma_eg().adjoint(); }

Matrix sigma_z() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

Matrix cavity_annihilation(int n_max) {
    Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Matrix embed_ion_op(const Matrix& op, Ion ion) {
    Matrix id = Matrix::Identity(2, 2);
    const Matrix& left = (ion == Ion::A) ? op : id;
    const Matrix& right = (ion == Ion::A) ? id : op;
    Matrix out(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block(2 * i, 2 * j, 2, 2) = left(i, j) * right;
    return out;
}

Matrix extend_by_cavity(const Matrix& two_ion_op, int n_max) {
    const int nc = n_max + 1;
    Matrix out = Matrix::Zero(4 * nc, 4 * nc);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out.block(i * nc, j * nc, nc, nc) =
                two_ion_op(i, j) * Matrix::Identity(nc, nc);
    return out;
}

DressedBasis dressed_basis(const SystemParams& params) {
    auto make = [](double phi1, double phi) {
        Vector plus(2), minus(2);
        plus << std::cos(phi / 2), kI * std::exp(-kI * phi1) * std::sin(phi / 2);
        minus << kI * std::exp(kI * phi1) * std::sin(phi / 2), std::cos(phi / 2);
        return std::make_pair(plus, minus);
    };
    DressedBasis b;
    std::tie(b.plus_a, b.minus_a) = make(params.phi_a1, params.varphi_a);
    std::tie(b.plus_b, b.minus_b) = make(params.phi_b1, params.varphi_b);
    return b;
}

FrameGenerators frame_generators(const SystemParams& params) {
    auto make1 = [&](double phi1) -> Matrix {
        Matrix d = params.omega1 * std::exp(kI * phi1) * sigma_eg();
        return d + d.adjoint();
    };
    auto make2 = [&](double phi1, double phi) -> Matrix {
        return params.omega2 *
               (std::cos(phi) * sigma_z() +
                kI * std::sin(phi) *
                    (std::exp(-kI * phi1) * sigma_ge() - std::exp(kI * phi1) * sigma_eg()));
    };
    FrameGenerators f;
    f.g1_a = make1(params.phi_a1);
    f.g2_a = make2(params.phi_a1, params.varphi_a);
    f.g1_b = make1(params.phi_b1);
    f.g2_b = make2(params.phi_b1, params.varphi_b);
    return f;
}

LinearOperator build_h1(const SystemParams& params, double t) {
    params.validate();
    const int nc = params.n_max + 1;
    const Matrix a = cavity_annihilation(params.n_max);
    HilbertSpace space = HilbertSpace::two_ions_cavity(params.n_max);

    Matrix h = Matrix::Zero(4 * nc, 4 * nc);
    for (Ion ion : {Ion::A, Ion::B}) {
        const double phi1 = params.drive_phase1(ion);
        const double phi2 = phi1 - params.phase_diff(ion);
        Matrix seg = extend_by_cavity(embed_ion_op(sigma_eg(), ion), params.n_max);
        // drive 1 on resonance; drive 2 at the dressed splitting 2*omega1
        Complex amp = params.omega1 * std::exp(kI * phi1) +
                      2.0 * params.omega2 * std::exp(kI * (phi2 + 2.0 * params.omega1 * t));
        h += amp * seg;
    }
    // cavity coupling rotating at the second dressed splitting, 2*delta = -2*omega2
    Matrix seg_sum = extend_by_cavity(
        embed_ion_op(sigma_eg(), Ion::A) + embed_ion_op(sigma_eg(), Ion::B), params.n_max);
    Matrix a_full = Matrix::Zero(4 * nc, 4 * nc);
    for (int i = 0; i < 4; ++i) a_full.block(i * nc, i * nc, nc, nc) = a;
    h += params.g * std::exp(-kI * (2.0 * params.delta()) * t) * (a_full * seg_sum);

    Matrix full = h + h.adjoint();
    return LinearOperator(space, std::move(full));
}

LinearOperator build_h2(const SystemParams& params) {
    params.validate();
    const int nc = params.n_max + 1;
    DressedBasis b = dressed_basis(params);
    Matrix spm_sum =
        embed_ion_op(b.plus_a * b.minus_a.adjoint(), Ion::A) +
        embed_ion_op(b.plus_b * b.minus_b.adjoint(), Ion::B);
    Matrix a = cavity_annihilation(params.n_max);
    Matrix a_full = Matrix::Zero(4 * nc, 4 * nc);
    for (int i = 0; i < 4; ++i) a_full.block(i * nc, i * nc, nc, nc) = a;
    Matrix h = 0.5 * params.g * a_full.adjoint() * extend_by_cavity(spm_sum, params.n_max);
    Matrix full = h + h.adjoint();
    return LinearOperator(HilbertSpace::two_ions_cavity(params.n_max), std::move(full));
}

Matrix frame_unitary_ion(const SystemParams& params, Ion ion, double t) {
    FrameGenerators f = frame_generators(params);
    return expm_2x2(f.g1(ion), t) * expm_2x2(f.g2(ion), t);
}

Matrix frame_unitary_ion_derivative(const SystemParams& params, Ion ion, double t) {
    FrameGenerators f = frame_generators(params);
    Matrix e1 = expm_2x2(f.g1(ion), t);
    Matrix e2 = expm_2x2(f.g2(ion), t);
    return (-kI) * (f.g1(ion) * e1 * e2 + e1 * f.g2(ion) * e2);
}

LinearOperator frame_unitary_at(const SystemParams& params, double t) {
    Matrix ra = frame_unitary_ion(params, Ion::A, t);
    Matrix rb = frame_unitary_ion(params, Ion::B, t);
    Matrix out(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block(2 * i, 2 * j, 2, 2) = ra(i, j) * rb;
    return LinearOperator(HilbertSpace::two_ions(), std::move(out));
}

LinearOperator frame_unitary_derivative_at(const SystemParams& params, double t) {
    Matrix ra = frame_unitary_ion(params, Ion::A, t);
    Matrix rb = frame_unitary_ion(params, Ion::B, t);
    Matrix da = frame_unitary_ion_derivative(params, Ion::A, t);
    Matrix db = frame_unitary_ion_derivative(params, Ion::B, t);
    Matrix out(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block(2 * i, 2 * j, 2, 2) = da(i, j) * rb + ra(i, j) * db;
    return LinearOperator(HilbertSpace::two_ions(), std::move(out));
}

LinearOperator jump_operator(const SystemParams& params) {
    DressedBasis b = dressed_basis(params);
    Matrix j = embed_ion_op(b.plus_a * b.minus_a.adjoint(), Ion::A) +
               embed_ion_op(b.plus_b * b.minus_b.adjoint(), Ion::B);
    return LinearOperator(HilbertSpace::two_ions(), std::move(j));
}

std::array<LinearOperator, 2> transformed_decay_ops(const SystemParams& params, double t) {
    Matrix r = frame_unitary_at(params, t).matrix();
    Matrix sa = r.adjoint() * embed_ion_op(sigma_ge(), Ion::A) * r;
    Matrix sb = r.adjoint() * embed_ion_op(sigma_ge(), Ion::B) * r;
    HilbertSpace space = HilbertSpace::two_ions();
    return {LinearOperator(space, std::move(sa)), LinearOperator(space, std::move(sb))};
}

LinearOperator frame_residual(const SystemParams& params, double t) {
    Matrix r = extend_by_cavity(frame_unitary_at(params, t).matrix(), params.n_max);
    Matrix rdot = extend_by_cavity(frame_unitary_derivative_at(params, t).matrix(), params.n_max);
    Matrix h1 = build_h1(params, t).matrix();
    Matrix h2 = build_h2(params).matrix();
    Matrix res = r.adjoint() * h1 * r - kI * (r.adjoint() * rdot) - h2;
    return LinearOperator(HilbertSpace::two_ions_cavity(params.n_max), std::move(res));
}

}  // namespace qdfs
