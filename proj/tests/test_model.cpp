#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qdfs/model.hpp"

using namespace qdfs;

namespace {

std::mt19937 rng(20240818);

SystemParams random_phases(SystemParams p) {
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    p.phi_a1 = u(rng);
    p.phi_b1 = u(rng);
    p.varphi_a = u(rng);
    p.varphi_b = u(rng);
    return p;
}

SystemParams decay_study_params() {
    SystemParams p = SystemParams::paper_regime();
    p.varphi_a = p.varphi_b = M_PI;
    p.phi_a1 = M_PI;
    p.phi_b1 = 0.0;
    return p;
}

}  // namespace

TEST_CASE("parameter validation and hierarchy warnings") {
    SystemParams p;
    CHECK_NOTHROW(p.validate());
    p.kappa = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = SystemParams{};
    p.n_max = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    CHECK(SystemParams::paper_regime().hierarchy_report().empty());
    SystemParams weak = SystemParams::paper_regime();
    weak.omega2 = 80.0;  // breaks omega1 >> omega2
    auto warnings = weak.hierarchy_report();
    CHECK(!warnings.empty());
}

TEST_CASE("derived rates") {
    SystemParams p = SystemParams::paper_regime();
    CHECK(p.engineered_rate() == doctest::Approx(1.0 / 3.0));
    CHECK(p.delta() == doctest::Approx(-10.0));
    CHECK(p.period() == doctest::Approx(M_PI / 10.0));
}

TEST_CASE("dressed states are orthonormal") {
    for (int trial = 0; trial < 10; ++trial) {
        SystemParams p = random_phases(SystemParams{});
        DressedBasis b = dressed_basis(p);
        for (Ion ion : {Ion::A, Ion::B}) {
            CHECK(b.plus(ion).norm() == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(b.minus(ion).norm() == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(std::abs(b.plus(ion).dot(b.minus(ion))) < 1e-13);
        }
    }
}

TEST_CASE("collective jump operator has a two-dimensional kernel") {
    SystemParams p = random_phases(SystemParams{});
    Matrix j = jump_operator(p).matrix();
    Eigen::JacobiSVD<Matrix> svd(j);
    int null_dim = 0;
    for (int k = 0; k < 4; ++k)
        if (svd.singularValues()(k) < 1e-12) ++null_dim;
    CHECK(null_dim == 2);
    CHECK(max_abs(j * j * j) < 1e-12);  // nilpotent ladder of length 3
}

TEST_CASE("frame unitary basics") {
    SystemParams p = random_phases(SystemParams{});
    CHECK(max_abs(frame_unitary_at(p, 0.0).matrix() - Matrix::Identity(4, 4)) < 1e-13);
    for (double t : {0.013, 0.21, 1.7}) {
        Matrix r = frame_unitary_at(p, t).matrix();
        CHECK(max_abs(r * r.adjoint() - Matrix::Identity(4, 4)) < 1e-12);
    }
}

TEST_CASE("frame unitary derivative against finite differences") {
    SystemParams p = random_phases(SystemParams{});
    const double h = 1e-6;
    for (double t : {0.0, 0.05, 0.31}) {
        Matrix fd = (frame_unitary_at(p, t + h).matrix() -
                     frame_unitary_at(p, t - h).matrix()) /
                    (2.0 * h);
        Matrix exact = frame_unitary_derivative_at(p, t).matrix();
        CHECK(max_abs(fd - exact) < 1e-4 * std::max(1.0, max_abs(exact)));
    }
}

TEST_CASE("single-ion frame closes after one period") {
    // R^i(pi/omega2) = (-1)^{N+1} I when omega1 = N * omega2
    for (int n : {3, 10, 11}) {
        SystemParams p = random_phases(SystemParams{});
        p.omega2 = 10.0;
        p.omega1 = n * p.omega2;
        Matrix r = frame_unitary_ion(p, Ion::A, p.period());
        const double sign = (n % 2 == 0) ? -1.0 : 1.0;
        CHECK(max_abs(r - sign * Matrix::Identity(2, 2)) < 1e-10);
    }
}

TEST_CASE("effective hamiltonian annihilates protected states with an empty cavity") {
    SystemParams p = random_phases(SystemParams{});
    Matrix h2 = build_h2(p).matrix();
    CHECK(max_abs(h2 - h2.adjoint()) < 1e-13);

    DressedBasis b = dressed_basis(p);
    const int nc = p.n_max + 1;
    auto with_vacuum = [&](const Vector& ion_a, const Vector& ion_b) {
        Vector full = Vector::Zero(4 * nc);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) full((2 * i + j) * nc) = ion_a(i) * ion_b(j);
        return full;
    };
    Vector s1 = with_vacuum(b.plus_a, b.plus_b);
    Vector s2 = (with_vacuum(b.minus_a, b.plus_b) - with_vacuum(b.plus_a, b.minus_b)) /
                std::sqrt(2.0);
    CHECK((h2 * s1).norm() < 1e-12);
    CHECK((h2 * s2).norm() < 1e-12);
}

TEST_CASE("transformed decay operators") {
    SystemParams p = random_phases(SystemParams{});
    auto ops0 = transformed_decay_ops(p, 0.0);
    CHECK(max_abs(ops0[0].matrix() - embed_ion_op(sigma_ge(), Ion::A)) < 1e-13);
    CHECK(max_abs(ops0[1].matrix() - embed_ion_op(sigma_ge(), Ion::B)) < 1e-13);
    // unitary conjugation preserves the spectrum of sigma^dag sigma
    auto ops = transformed_decay_ops(p, 0.37);
    for (const auto& op : ops) {
        Matrix m = op.matrix();
        CHECK(std::abs((m.adjoint() * m).trace().real() - 2.0) < 1e-12);
        CHECK(max_abs(m * m) < 1e-12);
    }
}

TEST_CASE("interaction hamiltonian is hermitian and supports the rotated frame") {
    SystemParams p = decay_study_params();
    p.n_max = 1;
    Matrix h1 = build_h1(p, 0.123).matrix();
    CHECK(max_abs(h1 - h1.adjoint()) < 1e-12);

    // the residual H~ - H2 averages to ~0 over one period at these phases
    const int panels = 512;
    const double tau = p.period();
    Matrix mean = frame_residual(p, 0.0).matrix() + frame_residual(p, tau).matrix();
    for (int k = 1; k < panels; ++k)
        mean += (k % 2 ? 4.0 : 2.0) * frame_residual(p, k * tau / panels).matrix();
    mean *= (tau / panels / 3.0) / tau;
    CHECK(max_abs(mean) < 1e-8);
}

TEST_CASE("ion-only residual vanishes on average without the cavity coupling") {
    SystemParams p = random_phases(SystemParams{});
    p.g = 0.0;
    p.n_max = 1;
    const int panels = 1024;
    const double tau = p.period();
    Matrix mean = frame_residual(p, 0.0).matrix() + frame_residual(p, tau).matrix();
    for (int k = 1; k < panels; ++k)
        mean += (k % 2 ? 4.0 : 2.0) * frame_residual(p, k * tau / panels).matrix();
    mean *= (tau / panels / 3.0) / tau;
    CHECK(max_abs(mean) < 1e-8);
}
