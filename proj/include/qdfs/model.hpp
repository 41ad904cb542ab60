#ifndef QDFS_MODEL_HPP
#define QDFS_MODEL_HPP

#include <array>
#include <string>
#include <vector>

#include "qdfs/hilbert.hpp"

namespace qdfs {

enum class Ion { A, B };

// Physical rates, detunings and classical-field phases. The coupling g sets
// the rate unit (g = 1 by default). The scheme's resonance conditions are
// baked in: drive 1 on resonance, drive-2 detuning -2*omega1, and the cavity
// detuning locked to -omega2.
struct SystemParams {
    double g = 1.0;
    double kappa = 3.0;
    double gamma_a = 0.0;
    double gamma_b = 0.0;
    double omega1 = 100.0;
    double omega2 = 10.0;
    double phi_a1 = 0.0;
    double phi_b1 = 0.0;
    double varphi_a = 0.0;  // phi^A_1 - phi^A_2
    double varphi_b = 0.0;
    int n_max = 3;

    double delta() const { return -omega2; }
    double engineered_rate() const { return g * g / kappa; }  // Gamma = g^2/kappa
    double period() const { return M_PI / omega2; }

    double drive_phase1(Ion ion) const { return ion == Ion::A ? phi_a1 : phi_b1; }
    double phase_diff(Ion ion) const { return ion == Ion::A ? varphi_a : varphi_b; }
    double gamma(Ion ion) const { return ion == Ion::A ? gamma_a : gamma_b; }

    // Throws on negative rates or n_max < 1.
    void validate() const;

    // Flags (without rejecting) violations of omega1 >> omega2 >> g and of
    // Gamma >> gamma^i. Empty vector means no warnings.
    std::vector<std::string> hierarchy_report() const;

    static SystemParams paper_regime();  // omega1=100g, omega2=10g, kappa=3g, gamma=g/500
};

// Single-ion dressed states, defined by
//   |+> = cos(varphi/2)|e> + i e^{-i phi1} sin(varphi/2)|g>
//   |-> = i e^{i phi1} sin(varphi/2)|e> + cos(varphi/2)|g>
struct DressedBasis {
    Vector plus_a, minus_a, plus_b, minus_b;

    const Vector& plus(Ion ion) const { return ion == Ion::A ? plus_a : plus_b; }
    const Vector& minus(Ion ion) const { return ion == Ion::A ? minus_a : minus_b; }
};

DressedBasis dressed_basis(const SystemParams& params);

// Generators of the two exponential factors of the single-ion frame unitary
// R^i(t) = exp(-i G1_i t) exp(-i G2_i t).
struct FrameGenerators {
    Matrix g1_a, g2_a, g1_b, g2_b;

    const Matrix& g1(Ion ion) const { return ion == Ion::A ? g1_a : g1_b; }
    const Matrix& g2(Ion ion) const { return ion == Ion::A ? g2_a : g2_b; }
};

FrameGenerators frame_generators(const SystemParams& params);

// Interaction-picture Hamiltonian on [2,2,n_max+1]. The drive-2 and cavity
// terms use the frequencies that make the rotated frame reduce to build_h2:
// drive 2 with amplitude 2*omega2 at 2*omega1, cavity at 2*delta = -2*omega2.
LinearOperator build_h1(const SystemParams& params, double t);

// Time-independent effective Hamiltonian (g/2)[a^dag (s^A_{+-}+s^B_{+-}) + h.c.]
// on [2,2,n_max+1].
LinearOperator build_h2(const SystemParams& params);

// Single-ion frame unitary R^i(t) and its exact derivative.
Matrix frame_unitary_ion(const SystemParams& params, Ion ion, double t);
Matrix frame_unitary_ion_derivative(const SystemParams& params, Ion ion, double t);

// Two-ion frame unitary R(t) = R^A(t) (x) R^B(t) on [2,2].
LinearOperator frame_unitary_at(const SystemParams& params, double t);
LinearOperator frame_unitary_derivative_at(const SystemParams& params, double t);

// Collective dressed-state jump operator J = s^A_{+-} + s^B_{+-} on [2,2].
LinearOperator jump_operator(const SystemParams& params);

// Frame-transformed decay operators sigma'^i(t) = R(t)^dag sigma^i_{ge} R(t).
std::array<LinearOperator, 2> transformed_decay_ops(const SystemParams& params, double t);

// H~(t) - H2 with H~ = R^dag H1 R - i R^dag Rdot (R extended by the cavity
// identity). Averages to ~0 over one period when the rate hierarchy holds.
LinearOperator frame_residual(const SystemParams& params, double t);

// Helpers for building two-ion and cavity-extended operators.
Matrix embed_ion_op(const Matrix& op, Ion ion);                      // on [2,2]
Matrix extend_by_cavity(const Matrix& two_ion_op, int n_max);        // on [2,2,n+1]
Matrix cavity_annihilation(int n_max);
Matrix sigma_eg();
Matrix sigma_ge();
Matrix sigma_z();

}  // namespace qdfs

#endif
