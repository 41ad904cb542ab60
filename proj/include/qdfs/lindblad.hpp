#ifndef QDFS_LINDBLAD_HPP
#define QDFS_LINDBLAD_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qdfs/hilbert.hpp"
#include "qdfs/model.hpp"

namespace qdfs {

// One dissipative channel: rate * D[jump(t)]. Static channels are evaluated
// once; time-dependent ones at every RK4 substage time.
struct Channel {
    double rate = 0.0;
    std::function<Matrix(double)> jump;
    bool is_static = true;
};

struct MasterEquationSpec {
    HilbertSpace space;
    std::function<Matrix(double)> hamiltonian;  // empty when absent
    bool hamiltonian_static = true;
    std::vector<Channel> channels;
    double max_rate = 1.0;  // fastest relevant rate, sets the RK4 step
    std::string name;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Matrix> states;  // density matrices
    std::string spec_name;

    const Matrix& final_state() const { return states.back(); }
};

struct IntegrationError : std::runtime_error {
    explicit IntegrationError(const std::string& msg) : std::runtime_error(msg) {}
};

// D[A]rho = A rho A^dag - (A^dag A rho + rho A^dag A)/2
Matrix dissipator(const Matrix& jump, const Matrix& rho);

// Eq-level master-equation specs.
// eq3: full system [2,2,n+1], H1(t), channels kappa D[a] + gamma^i D[sigma^i_ge].
// eq5: rotated frame [2,2,n+1], H2, channels kappa D[a] + gamma^i D[sigma'^i(t)].
// eq6: ion-only [2,2], no Hamiltonian, Gamma D[J] + gamma^i D[sigma'^i(t)].
// eq7: ion-only [2,2], no Hamiltonian, single channel Gamma D[J].
MasterEquationSpec eq3_spec(const SystemParams& params);
MasterEquationSpec eq5_spec(const SystemParams& params);
MasterEquationSpec eq6_spec(const SystemParams& params);
MasterEquationSpec eq7_spec(const SystemParams& params);

struct IntegrateOptions {
    double safety = 0.02;        // dt = safety / max_rate
    int sample_stride = 100;     // store every N-th step (plus first and last)
    std::function<void(double, const Matrix&)> observer;  // per stored sample
};

// Fixed-step RK4 on the density matrix. Throws IntegrationError when trace
// drift exceeds 1e-6 or an eigenvalue dips below -1e-6.
Trajectory integrate(const MasterEquationSpec& spec, const DensityOperator& rho0,
                     double t_end, const IntegrateOptions& opts = {});

// Exact pure-state propagation |psi(t)> = R(t)|psi0> on [2,2].
StateVector propagate_pure(const SystemParams& params, const StateVector& psi0, double t);

}  // namespace qdfs

#endif
