#ifndef QDFS_DFS_HPP
#define QDFS_DFS_HPP

#include <array>
#include <string>

#include "qdfs/hilbert.hpp"
#include "qdfs/model.hpp"

namespace qdfs {

// Location of a protected state in the decoherence-free subspace:
// |Psi_r> = sqrt(1-r)|1> + sqrt(r) e^{i mu}|2>, r in [0,1], mu in (0, 2pi].
struct DfsCoordinates {
    double r = 0.0;
    double mu = 2.0 * M_PI;

    void validate() const;
};

// The four adjustable classical-field phases, reported in (-pi, pi].
struct ReservoirParameters {
    double phi_a1 = 0.0;
    double phi_b1 = 0.0;
    double varphi_a = 0.0;
    double varphi_b = 0.0;

    // Copy the phases into a SystemParams (rates untouched).
    SystemParams apply_to(SystemParams base) const;
};

enum class InversionBranch { ClosedFormDiagonal, ClosedFormBell, Numeric };

struct InversionResult {
    ReservoirParameters params;
    DfsCoordinates coords;
    double residual = 0.0;  // 1 - |<psi0|Psi_r>|^2 of the forward map
    InversionBranch branch = InversionBranch::Numeric;
};

struct InversionError : std::runtime_error {
    explicit InversionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Orthonormal states |1>=|++>, |2>=(|-+>-|+->)/sqrt2, |3>=|-->,
// |4>=(|-+>+|+->)/sqrt2 on [2,2]. |1>,|2> span the DFS.
std::array<StateVector, 4> dfs_basis(const SystemParams& params);

StateVector psi_r(const DfsCoordinates& coords, const SystemParams& params);

// Closed-form amplitudes of |Psi(t)> = R(t)|Psi_r> in the bare basis
// (|ee>, |eg>, |ge>, |gg>).
std::array<Complex, 4> coefficients_at(const DfsCoordinates& coords,
                                       const SystemParams& params, double t);

StateVector analytic_state_at(const DfsCoordinates& coords, const SystemParams& params,
                              double t);

// Closed-form trajectory of the example initial state
// (|gg> + (|eg> - |ge>)/sqrt2)/sqrt2 under varphi^i = pi, phi^A_1 = pi,
// phi^B_1 = 0. Only omega1, omega2 are read from params.
StateVector psi_e_state_at(const SystemParams& params, double t);

StateVector psi_e_initial_state();
SystemParams psi_e_params(SystemParams base);

// Projections onto the symmetric span{|1>,|3>,|4>} and antisymmetric
// span{|2>} sectors; squared norms sum to 1.
std::pair<Vector, Vector> symmetric_antisymmetric_decompose(const StateVector& psi,
                                                            const SystemParams& params);

// Find phases and DFS coordinates whose forward map reproduces psi0 up to a
// global phase. Closed-form branches cover m|ee> + n e^{i theta}|gg> (m != n)
// and the four Bell states; everything else goes through a deterministic
// multi-start Nelder-Mead over the four angles.
InversionResult invert_parameters(const StateVector& psi0, const SystemParams& base);

// The four maximally entangled states and the phase sets that place each of
// them in the DFS (as |Psi_r> with r = 1).
struct BellTableEntry {
    const char* name;
    std::array<Complex, 4> amplitudes;  // bare basis (|ee>,|eg>,|ge>,|gg>)
    ReservoirParameters params;
};

const std::array<BellTableEntry, 4>& bell_parameter_table();

double wrap_to_pi(double angle);        // (-pi, pi]
double wrap_to_two_pi(double angle);    // (0, 2pi]

}  // namespace qdfs

#endif
