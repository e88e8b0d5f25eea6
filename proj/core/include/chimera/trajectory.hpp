#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace chimera {

// Column-oriented record of one run.  phi columns hold order-parameter phases
// wrapped to [0, 2*pi); psi is kept unwrapped so slow phase drifts stay
// continuous across revolutions.  Reduced mean-field systems report r2 = 1
// and phi1 = 0.
struct trajectory {
    std::vector<double> t;
    std::vector<double> r1, phi1, r2, phi2;
    std::vector<double> psi;
    std::vector<double> coupling;

    std::uint64_t clamp_events = 0; // rho pushed back into [0, 1 - 1e-12]
    std::uint64_t floor_events = 0; // psi derivative frozen at the rho floor

    std::size_t size() const { return t.size(); }
    void reserve(std::size_t n);
    void push(double time, double r1v, double phi1v, double r2v, double phi2v,
              double psiv, double couplingv);
};

struct integration_options {
    double dt = 0.01;
    double t_final = 0.0;
    std::size_t record_stride = 10;
    int threads = 0; // 0 = runtime default; result is thread-count invariant
};

// Rejects non-positive dt or t_final and a zero record stride.
void validate_grid(const integration_options& opt);

} // namespace chimera
