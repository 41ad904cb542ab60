#ifndef QDFS_OBSERVABLES_HPP
#define QDFS_OBSERVABLES_HPP

#include <string>
#include <vector>

#include "qdfs/dfs.hpp"
#include "qdfs/hilbert.hpp"
#include "qdfs/model.hpp"

namespace qdfs {

enum class PhaseMethod { ClosedForm, Quadrature };

struct GeometricPhaseResult {
    double value = 0.0;  // wrapped to (-pi, pi]
    double raw = 0.0;    // unwrapped (meaningful for the global phase)
    PhaseMethod method = PhaseMethod::Quadrature;
    int quadrature_points = 0;
};

struct FidelityCurve {
    std::vector<double> times;
    std::vector<double> values;
};

struct CyclicityError : std::runtime_error {
    explicit CyclicityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Wootters two-qubit concurrence on [2,2].
double concurrence(const DensityOperator& rho);

// F = <psi(t)| R(t) rho'(t) R(t)^dag |psi(t)> on [2,2].
double fidelity_trace(const StateVector& analytic, const DensityOperator& rho_prime,
                      const SystemParams& params, double t);

inline constexpr int kDefaultSimpsonPanels = 4096;

// Global phase i * integral of <Psi_r| R^dag Rdot |Psi_r> over one period
// pi/omega2; equals 2pi(1-r). Requires omega1/omega2 integer (cyclicity).
GeometricPhaseResult global_geometric_phase(const DfsCoordinates& coords,
                                            const SystemParams& params,
                                            PhaseMethod method = PhaseMethod::Quadrature,
                                            int panels = kDefaultSimpsonPanels);

// Subsystem phase over one period: Schmidt-weighted holonomy
// arg[sum_k p_k <mu_k|R^i(tau)|mu_k> exp(-int <mu_k|R^i^dag Rdot^i|mu_k> dt)],
// or the closed form arg[cos(x) + i sqrt(1-r^2) sin(x)], x = sqrt((1-r)/(1+r)) pi.
// Degenerate Schmidt spectrum (r = 1) returns 0.
GeometricPhaseResult subsystem_geometric_phase(const DfsCoordinates& coords,
                                               const SystemParams& params, Ion which,
                                               PhaseMethod method,
                                               int panels = kDefaultSimpsonPanels);

struct PhaseSweepRow {
    double r;
    double beta_global_raw;
    double beta_global_wrapped;
    double beta_sub_closed;
    double beta_sub_quadrature;
};

std::vector<PhaseSweepRow> phase_vs_entanglement_sweep(const SystemParams& params,
                                                       const std::vector<double>& r_grid,
                                                       int panels = kDefaultSimpsonPanels);

}  // namespace qdfs

#endif
