#include "chimera/trajectory.hpp"

#include <cmath>

#include "chimera/errors.hpp"

namespace chimera {

void trajectory::reserve(std::size_t n) {
    t.reserve(n);
    r1.reserve(n);
    phi1.reserve(n);
    r2.reserve(n);
    phi2.reserve(n);
    psi.reserve(n);
    coupling.reserve(n);
}

void trajectory::push(double t_, double r1_, double phi1_, double r2_, double phi2_,
                      double psi_, double coupling_) {
    t.push_back(t_);
    r1.push_back(r1_);
    phi1.push_back(phi1_);
    r2.push_back(r2_);
    phi2.push_back(phi2_);
    psi.push_back(psi_);
    coupling.push_back(coupling_);
}

void validate_grid(const integration_options& opt) {
    if (!(std::isfinite(opt.dt) && opt.dt > 0.0))
        throw config_error("integrator dt must be positive");
    if (!(std::isfinite(opt.t_final) && opt.t_final > 0.0))
        throw config_error("integrator t_final must be positive");
    if (opt.record_stride == 0) throw config_error("record_stride must be at least 1");
}

} // namespace chimera
