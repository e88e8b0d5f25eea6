#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chimera/adaptive_law.hpp"
#include "chimera/model.hpp"
#include "chimera/trajectory.hpp"

namespace chimera {

struct network_state {
    std::vector<double> phases1, phases2; // unwrapped
    double coupling = 0.0; // adaptive coupling value; ignored without a target
    double t = 0.0;
};

// Draws initial phases so both clusters start at the prescribed order
// parameters.  Population 2 is centered at -psi: centroid angles run opposite
// to the reduced phase difference, so this makes the effective reduced psi
// start at the given value.  Population seeds are seed and seed + 1.
network_state synthesize_network_state(const system_params& p, double rho1,
                                       double rho2, double psi, double coupling0,
                                       std::uint64_t seed);

struct network_deriv {
    std::vector<double> dphases1, dphases2;
};

// Instantaneous phase derivatives via the order-parameter reduction (O(N)).
// `adaptive` selects which coupling constant is read from state.coupling
// instead of the params.
network_deriv network_rhs(const network_state& s, const system_params& p,
                          std::optional<adaptive_target> adaptive);

// Fixed-step RK4 over all phases plus the adaptive coupling.  The law sees
// R1 and the reduced-convention phase difference.  Output is bit-identical
// across thread counts (fixed-order chunked reductions).
trajectory integrate_network(const system_params& p, const adaptive_law_spec& law,
                             const network_state& init,
                             const integration_options& opt);

} // namespace chimera
