#include "qdfs/lindblad.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qdfs {

Matrix dissipator(const Matrix& jump, const Matrix& rho) {
    if (jump.rows() != rho.rows() || jump.cols() != rho.cols())
        throw std::invalid_argument("dissipator: dimension mismatch");
    Matrix ada = jump.adjoint() * jump;
    return jump * rho * jump.adjoint() - 0.5 * (ada * rho + rho * ada);
}

MasterEquationSpec eq3_spec(const SystemParams& params) {
    params.validate();
    MasterEquationSpec spec{HilbertSpace::two_ions_cavity(params.n_max)};
    spec.name = "eq3";
    spec.hamiltonian = [params](double t) { return build_h1(params, t).matrix(); };
    spec.hamiltonian_static = false;
    Matrix a_full = Matrix::Zero(spec.space.dim(), spec.space.dim());
    {
        const int nc = params.n_max + 1;
        Matrix a = cavity_annihilation(params.n_max);
        for (int i = 0; i < 4; ++i) a_full.block(i * nc, i * nc, nc, nc) = a;
    }
    spec.channels.push_back({params.kappa, [a_full](double) { return a_full; }, true});
    for (Ion ion : {Ion::A, Ion::B}) {
        Matrix s = extend_by_cavity(embed_ion_op(sigma_ge(), ion), params.n_max);
        spec.channels.push_back({params.gamma(ion), [s](double) { return s; }, true});
    }
    spec.max_rate = std::max({params.omega1, params.omega2, params.g, params.kappa});
    return spec;
}

MasterEquationSpec eq5_spec(const SystemParams& params) {
    params.validate();
    MasterEquationSpec spec{HilbertSpace::two_ions_cavity(params.n_max)};
    spec.name = "eq5";
    Matrix h2 = build_h2(params).matrix();
    spec.hamiltonian = [h2](double) { return h2; };
    spec.hamiltonian_static = true;
    Matrix a_full = Matrix::Zero(spec.space.dim(), spec.space.dim());
    {
        const int nc = params.n_max + 1;
        Matrix a = cavity_annihilation(params.n_max);
        for (int i = 0; i < 4; ++i) a_full.block(i * nc, i * nc, nc, nc) = a;
    }
    spec.channels.push_back({params.kappa, [a_full](double) { return a_full; }, true});
    const bool decaying = params.gamma_a > 0 || params.gamma_b > 0;
    for (Ion ion : {Ion::A, Ion::B}) {
        auto jump = [params, ion](double t) {
            return extend_by_cavity(transformed_decay_ops(params, t)[ion == Ion::A ? 0 : 1].matrix(),
                                    params.n_max);
        };
        spec.channels.push_back({params.gamma(ion), jump, false});
    }
    // the fast drive frequencies only matter while a decay channel is active
    spec.max_rate = std::max({params.g, params.kappa,
                              decaying ? params.omega1 : 0.0});
    return spec;
}

MasterEquationSpec eq6_spec(const SystemParams& params) {
    params.validate();
    MasterEquationSpec spec{HilbertSpace::two_ions()};
    spec.name = "eq6";
    Matrix j = jump_operator(params).matrix();
    spec.channels.push_back({params.engineered_rate(), [j](double) { return j; }, true});
    const bool decaying = params.gamma_a > 0 || params.gamma_b > 0;
    for (Ion ion : {Ion::A, Ion::B}) {
        auto jump = [params, ion](double t) {
            return transformed_decay_ops(params, t)[ion == Ion::A ? 0 : 1].matrix();
        };
        spec.channels.push_back({params.gamma(ion), jump, false});
    }
    spec.max_rate = std::max({params.engineered_rate(), params.g,
                              decaying ? params.omega1 : 0.0});
    return spec;
}

MasterEquationSpec eq7_spec(const SystemParams& params) {
    params.validate();
    MasterEquationSpec spec{HilbertSpace::two_ions()};
    spec.name = "eq7";
    Matrix j = jump_operator(params).matrix();
    spec.channels.push_back({params.engineered_rate(), [j](double) { return j; }, true});
    spec.max_rate = params.engineered_rate();
    return spec;
}

namespace {

struct PreparedChannel {
    double rate;
    Matrix jump;       // static value, or scratch for dynamic
    Matrix ada;        // rate * jump^dag * jump (static only)
    const Channel* src = nullptr;  // non-null for time-dependent channels
};

struct Rhs {
    const MasterEquationSpec& spec;
    std::vector<PreparedChannel> chans;
    Matrix h_static;
    bool has_h;

    explicit Rhs(const MasterEquationSpec& s) : spec(s) {
        has_h = static_cast<bool>(s.hamiltonian);
        if (has_h && s.hamiltonian_static) h_static = s.hamiltonian(0.0);
        for (const auto& c : s.channels) {
            if (c.rate == 0.0) continue;  // zero-rate channels contribute nothing
            PreparedChannel p;
            p.rate = c.rate;
            if (c.is_static) {
                p.jump = c.jump(0.0);
                p.ada = p.jump.adjoint() * p.jump;
            } else {
                p.src = &c;
            }
            chans.push_back(std::move(p));
        }
    }

    // Evaluate time-dependent jumps once per substage time.
    void refresh(double t) {
        for (auto& p : chans) {
            if (p.src) {
                p.jump = p.src->jump(t);
                p.ada = p.jump.adjoint() * p.jump;
            }
        }
    }

    Matrix operator()(double t, const Matrix& rho) const {
        Matrix out = Matrix::Zero(rho.rows(), rho.cols());
        if (has_h) {
            const Matrix h = spec.hamiltonian_static ? h_static : spec.hamiltonian(t);
            Matrix c = h * rho;
            out += Complex(0.0, -1.0) * (c - c.adjoint());
        }
        for (const auto& p : chans) {
            out += p.rate * (p.jump * rho * p.jump.adjoint() -
                             0.5 * (p.ada * rho + rho * p.ada));
        }
        return out;
    }
};

}  // namespace

Trajectory integrate(const MasterEquationSpec& spec, const DensityOperator& rho0,
                     double t_end, const IntegrateOptions& opts) {
    if (rho0.space() != spec.space)
        throw std::invalid_argument("integrate: initial state on wrong space");
    if (t_end <= 0) throw std::invalid_argument("integrate: t_end <= 0");

    const double rate = std::max(spec.max_rate, 1.0 / t_end);
    const double dt0 = opts.safety / rate;
    const long n_steps = std::max(1L, std::lround(std::ceil(t_end / dt0)));
    const double dt = t_end / static_cast<double>(n_steps);

    Rhs rhs(spec);
    Matrix rho = rho0.matrix();
    Trajectory traj;
    traj.spec_name = spec.name;

    auto record = [&](double t) {
        const double trace_err = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
        if (trace_err > 1e-6)
            throw IntegrationError("integrate(" + spec.name + "): trace drift " +
                                   std::to_string(trace_err) + " at t=" + std::to_string(t));
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                                 Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-6)
            throw IntegrationError("integrate(" + spec.name + "): negativity " +
                                   std::to_string(es.eigenvalues().minCoeff()) +
                                   " at t=" + std::to_string(t));
        traj.times.push_back(t);
        traj.states.push_back(rho);
        if (opts.observer) opts.observer(t, rho);
    };

    record(0.0);
    for (long i = 0; i < n_steps; ++i) {
        const double t = static_cast<double>(i) * dt;
        rhs.refresh(t);
        Matrix k1 = rhs(t, rho);
        rhs.refresh(t + 0.5 * dt);
        Matrix k2 = rhs(t + 0.5 * dt, rho + (0.5 * dt) * k1);
        Matrix k3 = rhs(t + 0.5 * dt, rho + (0.5 * dt) * k2);
        rhs.refresh(t + dt);
        Matrix k4 = rhs(t + dt, rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const bool last = (i == n_steps - 1);
        if (last || (opts.sample_stride > 0 && (i + 1) % opts.sample_stride == 0))
            record(static_cast<double>(i + 1) * dt);
    }
    return traj;
}

StateVector propagate_pure(const SystemParams& params, const StateVector& psi0, double t) {
    if (psi0.space() != HilbertSpace::two_ions())
        throw std::invalid_argument("propagate_pure: state must live on [2,2]");
    if (std::abs(psi0.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("propagate_pure: state not normalized");
    Matrix r = frame_unitary_at(params, t).matrix();
    return StateVector(psi0.space(), r * psi0.amplitudes());
}

}  // namespace qdfs
