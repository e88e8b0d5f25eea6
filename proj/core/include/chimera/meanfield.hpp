#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chimera/adaptive_law.hpp"
#include "chimera/model.hpp"
#include "chimera/trajectory.hpp"

namespace chimera {

enum class meanfield_system { general, full_two_pop, reduced_inter, reduced_intra };

// Guard for the 1/rho factors in the psi equations: below the floor the psi
// derivative is frozen and a diagnostic counter increments.
inline constexpr double rho_floor = 1e-6;
// rho stepping outside [0, 1] is clamped back (overshoots above 1 land here,
// safely inside the domain of the 1/(1 - rho^2) manifold formulas) and counted.
inline constexpr double rho_ceiling = 1.0 - 1e-12;

struct meanfield_state {
    double rho1 = 0.0;
    double rho2 = 1.0; // pinned to 1 in the reduced systems
    double psi = 0.0;  // phi2 - phi1, unwrapped
    double coupling = 0.0; // mu (inter target) or k1 (intra1 target)
    double t = 0.0;
};

struct meanfield_deriv {
    double drho1 = 0.0, drho2 = 0.0, dpsi = 0.0, dcoupling = 0.0;
};

struct meanfield_diagnostics {
    std::uint64_t floor_events = 0;
};

// Fast-slow intercoupling system: (rho1, psi) fast, mu slow.
meanfield_deriv reduced_inter_rhs(const meanfield_state& s, const system_params& p,
                                  const adaptive_law_spec& law,
                                  meanfield_diagnostics* diag = nullptr);

// Fast-slow intracoupling system: (rho1, psi) fast, k1 slow.
meanfield_deriv reduced_intra_rhs(const meanfield_state& s, const system_params& p,
                                  const adaptive_law_spec& law,
                                  meanfield_diagnostics* diag = nullptr);

// Fast subsystem of the full two-population reduction (rho1, rho2, psi); the
// slow law is layered on by the integrator.
meanfield_deriv full_two_pop_rhs(const meanfield_state& s, const system_params& p,
                                 meanfield_diagnostics* diag = nullptr);

// Mean field for M populations with a fixed coupling matrix (row-major M x M).
struct general_meanfield_params {
    std::size_t m = 0;
    std::vector<double> k;     // m*m couplings
    std::vector<double> width; // m half-widths
    std::vector<double> freq;  // m center frequencies
};
struct general_meanfield_state {
    std::vector<double> rho, phi;
};
general_meanfield_state general_meanfield_rhs(const general_meanfield_state& s,
                                              const general_meanfield_params& p,
                                              meanfield_diagnostics* diag = nullptr);

// Fixed-step RK4 over the selected system.  The general selector maps the
// two-population params onto the M = 2 matrix form and requires a constant
// law (couplings stay fixed there).
trajectory integrate_meanfield(meanfield_system sys, const system_params& p,
                               const adaptive_law_spec& law, meanfield_state init,
                               const integration_options& opt);

} // namespace chimera
