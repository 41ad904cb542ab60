#include "qdfs/observables.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace qdfs {

namespace {

const Complex kI(0.0, 1.0);

double require_cyclic(const SystemParams& params) {
    const double ratio = params.omega1 / params.omega2;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, std::abs(ratio)))
        throw CyclicityError("omega1/omega2 = " + std::to_string(ratio) +
                             " is not an integer; the evolution is not cyclic");
    return params.period();
}

// Composite Simpson on [0, t_end] with an even number of panels.
template <typename F>
auto simpson(F&& f, double t_end, int panels) -> decltype(f(0.0)) {
    if (panels < 2 || panels % 2 != 0)
        throw std::invalid_argument("simpson: panels must be even and >= 2");
    const double h = t_end / panels;
    auto acc = f(0.0) + f(t_end);
    for (int k = 1; k < panels; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(k * h);
    return (h / 3.0) * acc;
}

}  // namespace

double concurrence(const DensityOperator& rho) {
    if (rho.space() != HilbertSpace::two_ions())
        throw std::invalid_argument("concurrence: expected a [2,2] state");
    Matrix yy = Matrix::Zero(4, 4);  // sigma_y (x) sigma_y
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    const Matrix& m = rho.matrix();
    EighResult es = eigh(m);
    if (es.eigenvalues(2) < 1e-12) {
        // pure state: |<psi| sigma_y (x) sigma_y |psi*>| avoids the precision
        // loss of square-rooting near-zero eigenvalues
        Vector psi = es.eigenvectors.col(3);
        return std::abs(psi.dot(yy * psi.conjugate()));
    }
    // Hermitian formulation: lambda_i are the sqrt eigenvalues of
    // sqrt(rho) yy rho* yy sqrt(rho)
    Matrix sqrt_rho = Matrix::Zero(4, 4);
    for (int k = 0; k < 4; ++k)
        sqrt_rho += std::sqrt(std::max(0.0, es.eigenvalues(k))) * es.eigenvectors.col(k) *
                    es.eigenvectors.col(k).adjoint();
    Matrix core = sqrt_rho * yy * m.conjugate() * yy * sqrt_rho;
    EighResult ec = eigh(0.5 * (core + core.adjoint()), false);
    std::array<double, 4> lam;
    for (int i = 0; i < 4; ++i) lam[i] = std::sqrt(std::max(0.0, ec.eigenvalues(i)));
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

double fidelity_trace(const StateVector& analytic, const DensityOperator& rho_prime,
                      const SystemParams& params, double t) {
    if (analytic.space() != HilbertSpace::two_ions() ||
        rho_prime.space() != HilbertSpace::two_ions())
        throw std::invalid_argument("fidelity_trace: expected [2,2] inputs");
    Matrix r = frame_unitary_at(params, t).matrix();
    Vector psi = analytic.amplitudes();
    Complex f = psi.dot(r * rho_prime.matrix() * r.adjoint() * psi);
    return f.real();
}

GeometricPhaseResult global_geometric_phase(const DfsCoordinates& coords,
                                            const SystemParams& params,
                                            PhaseMethod method, int panels) {
    coords.validate();
    const double tau = require_cyclic(params);
    GeometricPhaseResult res;
    res.method = method;
    if (method == PhaseMethod::ClosedForm) {
        res.raw = 2.0 * M_PI * (1.0 - coords.r);
        res.value = wrap_to_pi(res.raw);
        return res;
    }
    const Vector psi = psi_r(coords, params).amplitudes();
    // cyclicity of the actual trajectory, up to a global phase
    {
        Vector end = frame_unitary_at(params, tau).matrix() * psi;
        if (1.0 - std::norm(psi.dot(end)) > 1e-9)
            throw CyclicityError("trajectory fails to close over one period");
    }
    auto integrand = [&](double t) {
        Matrix r = frame_unitary_at(params, t).matrix();
        Matrix rdot = frame_unitary_derivative_at(params, t).matrix();
        return (kI * psi.dot(r.adjoint() * (rdot * psi))).real();
    };
    res.raw = simpson(integrand, tau, panels);
    res.value = wrap_to_pi(res.raw);
    res.quadrature_points = panels;
    return res;
}

GeometricPhaseResult subsystem_geometric_phase(const DfsCoordinates& coords,
                                               const SystemParams& params, Ion which,
                                               PhaseMethod method, int panels) {
    coords.validate();
    const double tau = require_cyclic(params);
    GeometricPhaseResult res;
    res.method = method;

    SchmidtDecomposition sd = schmidt_decompose(psi_r(coords, params));
    if (sd.degenerate) return res;  // degenerate Schmidt spectrum carries no phase

    if (method == PhaseMethod::ClosedForm) {
        const double r = coords.r;
        const double x = std::sqrt((1.0 - r) / (1.0 + r)) * M_PI;
        res.raw = std::arg(Complex(std::cos(x), std::sqrt(1.0 - r * r) * std::sin(x)));
        res.value = wrap_to_pi(res.raw);
        return res;
    }

    const auto& vecs = (which == Ion::A) ? sd.left_vectors : sd.right_vectors;
    FrameGenerators gen = frame_generators(params);
    const Matrix& g1 = gen.g1(which);
    const Matrix& g2 = gen.g2(which);
    Matrix r_tau = frame_unitary_ion(params, which, tau);

    Complex total(0.0, 0.0);
    for (std::size_t k = 0; k < sd.coefficients.size(); ++k) {
        const Vector& mu = vecs[k];
        auto connection = [&](double t) {
            Matrix e1 = expm_2x2(g1, t);
            Matrix e2 = expm_2x2(g2, t);
            Matrix rdot = -kI * (g1 * e1 * e2 + e1 * g2 * e2);
            return mu.dot((e1 * e2).adjoint() * (rdot * mu));
        };
        Complex integral = simpson(connection, tau, panels);
        total += sd.coefficients[k] * mu.dot(r_tau * mu) * std::exp(-integral);
    }
    res.raw = std::arg(total);
    res.value = wrap_to_pi(res.raw);
    res.quadrature_points = panels;
    return res;
}

std::vector<PhaseSweepRow> phase_vs_entanglement_sweep(const SystemParams& params,
                                                       const std::vector<double>& r_grid,
                                                       int panels) {
    std::vector<PhaseSweepRow> rows;
    rows.reserve(r_grid.size());
    for (double r : r_grid) {
        DfsCoordinates coords{r, 2.0 * M_PI};
        PhaseSweepRow row{};
        row.r = r;
        auto bg = global_geometric_phase(coords, params, PhaseMethod::Quadrature, panels);
        row.beta_global_raw = bg.raw;
        row.beta_global_wrapped = bg.value;
        row.beta_sub_closed =
            subsystem_geometric_phase(coords, params, Ion::A, PhaseMethod::ClosedForm).value;
        row.beta_sub_quadrature =
            subsystem_geometric_phase(coords, params, Ion::A, PhaseMethod::Quadrature, panels)
                .value;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qdfs
