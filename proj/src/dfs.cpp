#include "qdfs/dfs.hpp"

#include <algorithm>
#include <cmath>

namespace qdfs {

namespace {
const Complex kI(0.0, 1.0);
const double kTwoPi = 2.0 * M_PI;
}

double wrap_to_pi(double angle) {
    double a = std::fmod(angle, kTwoPi);
    if (a > M_PI) a -= kTwoPi;
    if (a <= -M_PI) a += kTwoPi;
    return a;
}

double wrap_to_two_pi(double angle) {
    double a = std::fmod(angle, kTwoPi);
    if (a <= 0) a += kTwoPi;
    return a;
}

void DfsCoordinates::validate() const {
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("DfsCoordinates: r outside [0,1]");
    if (mu <= 0.0 || mu > kTwoPi) throw std::invalid_argument("DfsCoordinates: mu outside (0,2pi]");
}

SystemParams ReservoirParameters::apply_to(SystemParams base) const {
    base.phi_a1 = phi_a1;
    base.phi_b1 = phi_b1;
    base.varphi_a = varphi_a;
    base.varphi_b = varphi_b;
    return base;
}

std::array<StateVector, 4> dfs_basis(const SystemParams& params) {
    DressedBasis b = dressed_basis(params);
    HilbertSpace space = HilbertSpace::two_ions();
    auto kron2 = [](const Vector& x, const Vector& y) {
        Vector v(4);
        v << x(0) * y(0), x(0) * y(1), x(1) * y(0), x(1) * y(1);
        return v;
    };
    const double s = 1.0 / std::sqrt(2.0);
    Vector s1 = kron2(b.plus_a, b.plus_b);
    Vector s2 = s * (kron2(b.minus_a, b.plus_b) - kron2(b.plus_a, b.minus_b));
    Vector s3 = kron2(b.minus_a, b.minus_b);
    Vector s4 = s * (kron2(b.minus_a, b.plus_b) + kron2(b.plus_a, b.minus_b));
    return {StateVector(space, s1), StateVector(space, s2), StateVector(space, s3),
            StateVector(space, s4)};
}

StateVector psi_r(const DfsCoordinates& coords, const SystemParams& params) {
    coords.validate();
    auto basis = dfs_basis(params);
    Vector v = std::sqrt(1.0 - coords.r) * basis[0].amplitudes() +
               std::sqrt(coords.r) * std::exp(kI * coords.mu) * basis[1].amplitudes();
    return StateVector(HilbertSpace::two_ions(), std::move(v));
}

std::array<Complex, 4> coefficients_at(const DfsCoordinates& coords,
                                       const SystemParams& params, double t) {
    coords.validate();
    const double o1 = params.omega1, o2 = params.omega2;
    const double pa1 = params.phi_a1, pb1 = params.phi_b1;
    const double ca = std::cos(params.varphi_a / 2 - o1 * t);
    const double sa = std::sin(params.varphi_a / 2 - o1 * t);
    const double cb = std::cos(params.varphi_b / 2 - o1 * t);
    const double sb = std::sin(params.varphi_b / 2 - o1 * t);
    const Complex em = std::exp(kI * coords.mu);
    const Complex sq = std::sqrt(coords.r) / std::sqrt(2.0);
    const double q = std::sqrt(1.0 - coords.r);
    const Complex e2 = std::exp(-kI * (2.0 * o2 * t));

    const Complex eia = std::exp(kI * pa1), eib = std::exp(kI * pb1);
    std::array<Complex, 4> c;
    c[0] = -kI * em * sq * (eib * ca * sb - eia * sa * cb) + e2 * q * ca * cb;
    c[1] = -em * sq * (ca * cb + eia / eib * sa * sb) +
           kI * std::exp(-kI * pb1) * e2 * q * ca * sb;
    c[2] = em * sq * (ca * cb + eib / eia * sa * sb) +
           kI * std::exp(-kI * pa1) * e2 * q * sa * cb;
    c[3] = -kI * em * sq * (sa * cb / eia - ca * sb / eib) -
           std::exp(-kI * (pa1 + pb1)) * e2 * q * sa * sb;
    return c;
}

StateVector analytic_state_at(const DfsCoordinates& coords, const SystemParams& params,
                              double t) {
    auto c = coefficients_at(coords, params, t);
    Vector v(4);
    v << c[0], c[1], c[2], c[3];
    return StateVector(HilbertSpace::two_ions(), std::move(v));
}

StateVector psi_e_initial_state() {
    Vector v(4);
    const double s = 1.0 / std::sqrt(2.0);
    v << 0.0, 0.5, -0.5, s;
    return StateVector(HilbertSpace::two_ions(), std::move(v));
}

SystemParams psi_e_params(SystemParams base) {
    base.varphi_a = base.varphi_b = M_PI;
    base.phi_a1 = M_PI;
    base.phi_b1 = 0.0;
    return base;
}

StateVector psi_e_state_at(const SystemParams& params, double t) {
    const double o1 = params.omega1, o2 = params.omega2;
    const double s = 1.0 / std::sqrt(2.0);
    const Complex e2 = std::exp(-kI * (2.0 * o2 * t));
    const double s1 = std::sin(o1 * t), c1 = std::cos(o1 * t);
    const double s2t = std::sin(2.0 * o1 * t), c2t = std::cos(2.0 * o1 * t);
    Vector v(4);
    v(0) = e2 * s1 * s1 * s - kI * 0.5 * s2t;
    v(1) = 0.5 * c2t + kI * e2 * s2t * 0.5 * s;
    v(2) = -(0.5 * c2t + kI * e2 * s2t * 0.5 * s);
    v(3) = e2 * c1 * c1 * s + kI * 0.5 * s2t;
    return StateVector(HilbertSpace::two_ions(), std::move(v));
}

std::pair<Vector, Vector> symmetric_antisymmetric_decompose(const StateVector& psi,
                                                            const SystemParams& params) {
    if (std::abs(psi.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("symmetric_antisymmetric_decompose: state not normalized");
    auto basis = dfs_basis(params);
    const Vector& v = psi.amplitudes();
    Vector sym = Vector::Zero(4), anti = Vector::Zero(4);
    for (int k : {0, 2, 3}) sym += basis[k].amplitudes().dot(v) * basis[k].amplitudes();
    anti = basis[1].amplitudes().dot(v) * basis[1].amplitudes();
    return {sym, anti};
}

namespace {

struct Projection {
    Complex a1, a2;   // <1|psi0>, <2|psi0>
    double overlap2;  // |a1|^2 + |a2|^2
};

Projection project_onto_dfs(const Vector& psi0, const SystemParams& p) {
    auto basis = dfs_basis(p);
    Projection pr;
    pr.a1 = basis[0].amplitudes().dot(psi0);
    pr.a2 = basis[1].amplitudes().dot(psi0);
    pr.overlap2 = std::norm(pr.a1) + std::norm(pr.a2);
    return pr;
}

DfsCoordinates coords_from_projection(const Projection& pr) {
    DfsCoordinates c;
    if (pr.overlap2 < 1e-300) return c;
    c.r = std::clamp(std::norm(pr.a2) / pr.overlap2, 0.0, 1.0);
    if (c.r < 1e-12 || c.r > 1.0 - 1e-12)
        c.mu = kTwoPi;  // mu is a global phase at the endpoints
    else
        c.mu = wrap_to_two_pi(std::arg(pr.a2) - std::arg(pr.a1));
    return c;
}

InversionResult make_result(const Vector& psi0, const SystemParams& base,
                            const ReservoirParameters& rp, InversionBranch branch) {
    SystemParams p = rp.apply_to(base);
    Projection pr = project_onto_dfs(psi0, p);
    InversionResult res;
    res.params = rp;
    res.params.phi_a1 = wrap_to_pi(res.params.phi_a1);
    res.params.phi_b1 = wrap_to_pi(res.params.phi_b1);
    res.params.varphi_a = wrap_to_pi(res.params.varphi_a);
    res.params.varphi_b = wrap_to_pi(res.params.varphi_b);
    res.coords = coords_from_projection(pr);
    res.branch = branch;
    // verify by the forward map, never by parameter comparison
    Vector fwd = psi_r(res.coords, p).amplitudes();
    res.residual = std::max(0.0, 1.0 - std::norm(psi0.dot(fwd)));
    return res;
}

// Nelder-Mead on the four angles; objective 1 - (projection onto the DFS).
struct Simplex {
    using Point = std::array<double, 4>;

    static InversionResult minimize(const Vector& psi0, const SystemParams& base,
                                    const Point& start) {
        auto eval = [&](const Point& x) {
            SystemParams p = base;
            p.phi_a1 = x[0];
            p.phi_b1 = x[1];
            p.varphi_a = x[2];
            p.varphi_b = x[3];
            return 1.0 - project_onto_dfs(psi0, p).overlap2;
        };

        std::array<Point, 5> pts;
        std::array<double, 5> f;
        pts[0] = start;
        for (int i = 1; i < 5; ++i) {
            pts[i] = start;
            pts[i][i - 1] += 0.4;
        }
        for (int i = 0; i < 5; ++i) f[i] = eval(pts[i]);

        auto order = [&]() {
            std::array<int, 5> idx{0, 1, 2, 3, 4};
            std::sort(idx.begin(), idx.end(), [&](int a, int b) { return f[a] < f[b]; });
            std::array<Point, 5> p2;
            std::array<double, 5> f2;
            for (int i = 0; i < 5; ++i) {
                p2[i] = pts[idx[i]];
                f2[i] = f[idx[i]];
            }
            pts = p2;
            f = f2;
        };

        for (int iter = 0; iter < 600; ++iter) {
            order();
            if (f[0] < 1e-14 || f[4] - f[0] < 1e-16) break;
            Point centroid{};
            for (int i = 0; i < 4; ++i)
                for (int d = 0; d < 4; ++d) centroid[d] += pts[i][d] / 4.0;
            auto blend = [&](double coef) {
                Point x;
                for (int d = 0; d < 4; ++d)
                    x[d] = centroid[d] + coef * (pts[4][d] - centroid[d]);
                return x;
            };
            Point xr = blend(-1.0);
            double fr = eval(xr);
            if (fr < f[0]) {
                Point xe = blend(-2.0);
                double fe = eval(xe);
                if (fe < fr) { pts[4] = xe; f[4] = fe; }
                else { pts[4] = xr; f[4] = fr; }
            } else if (fr < f[3]) {
                pts[4] = xr;
                f[4] = fr;
            } else {
                Point xc = blend(fr < f[4] ? -0.5 : 0.5);
                double fc = eval(xc);
                if (fc < std::min(fr, f[4])) {
                    pts[4] = xc;
                    f[4] = fc;
                } else {
                    for (int i = 1; i < 5; ++i) {
                        for (int d = 0; d < 4; ++d)
                            pts[i][d] = pts[0][d] + 0.5 * (pts[i][d] - pts[0][d]);
                        f[i] = eval(pts[i]);
                    }
                }
            }
        }
        order();
        ReservoirParameters rp{pts[0][0], pts[0][1], pts[0][2], pts[0][3]};
        return make_result(psi0, base, rp, InversionBranch::Numeric);
    }
};

}  // namespace

const std::array<BellTableEntry, 4>& bell_parameter_table() {
    static const double s = 1.0 / std::sqrt(2.0);
    static const std::array<BellTableEntry, 4> table = {{
        {"phi_plus", {s, 0, 0, s}, {M_PI / 2, M_PI / 2, 0.0, M_PI}},
        {"phi_minus", {s, 0, 0, -s}, {0.0, 0.0, 0.0, M_PI}},
        {"psi_plus", {0, s, s, 0}, {-M_PI / 2, 0.0, M_PI, M_PI}},
        {"psi_minus", {0, s, -s, 0}, {-M_PI / 2, -M_PI / 2, M_PI, M_PI}},
    }};
    return table;
}

InversionResult invert_parameters(const StateVector& psi0_in, const SystemParams& base) {
    if (psi0_in.space() != HilbertSpace::two_ions())
        throw std::invalid_argument("invert_parameters: state must live on [2,2]");
    if (std::abs(psi0_in.norm() - 1.0) > 1e-6)
        throw std::invalid_argument("invert_parameters: state not normalized");
    const Vector psi0 = psi0_in.amplitudes() / psi0_in.norm();

    // Bell states -> the tabulated parameter sets.
    for (const auto& entry : bell_parameter_table()) {
        Vector b(4);
        b << entry.amplitudes[0], entry.amplitudes[1], entry.amplitudes[2],
            entry.amplitudes[3];
        if (1.0 - std::norm(b.dot(psi0)) < 1e-12) {
            InversionResult res = make_result(psi0, base, entry.params,
                                              InversionBranch::ClosedFormBell);
            if (res.residual < 1e-9) return res;
        }
    }

    // m|ee> + n e^{i theta}|gg> family, closed form for m != n.
    const double m = std::abs(psi0(0)), n = std::abs(psi0(3));
    if (std::abs(psi0(1)) < 1e-10 && std::abs(psi0(2)) < 1e-10 &&
        std::abs(m - n) > 1e-6) {
        const double theta = (n < 1e-12 || m < 1e-12)
                                 ? M_PI
                                 : std::arg(psi0(3)) - std::arg(psi0(0));
        const double phi1 = 0.5 * (M_PI - theta);
        const double sgn = (n > m) ? 1.0 : -1.0;
        const double at = std::atan(2.0 * std::sqrt(m * n) / std::abs(m - n));
        ReservoirParameters rp{phi1, phi1, M_PI / 2 * (1.0 + sgn) - at,
                               M_PI / 2 * (1.0 + sgn) + at};
        InversionResult res = make_result(psi0, base, rp, InversionBranch::ClosedFormDiagonal);
        if (res.residual < 1e-9) return res;
    }

    // General case: deterministic 3^4 multi-start over the angles.
    const std::array<double, 3> grid = {-2.0 * M_PI / 3.0, 0.0, 2.0 * M_PI / 3.0};
    InversionResult best;
    best.residual = 1.0;
    for (double x0 : grid)
        for (double x1 : grid)
            for (double x2 : grid)
                for (double x3 : grid) {
                    InversionResult res =
                        Simplex::minimize(psi0, base, {x0, x1, x2, x3});
                    if (res.residual < best.residual) best = res;
                    if (best.residual < 1e-12) goto done;
                }
done:
    if (best.residual > 1e-9)
        throw InversionError("invert_parameters: no solution, best residual " +
                             std::to_string(best.residual));
    return best;
}

}  // namespace qdfs
