#include "chimera/meanfield.hpp"

#include <cmath>
#include <cstdint>

#include "chimera/errors.hpp"
#include "chimera/rk4.hpp"

namespace chimera {

namespace {

double clamp_rho(double r, std::uint64_t& events) {
    if (r < 0.0) {
        ++events;
        return 0.0;
    }
    if (r > 1.0) {
        ++events;
        return rho_ceiling;
    }
    return r;
}

} // namespace

meanfield_deriv reduced_inter_rhs(const meanfield_state& s, const system_params& p,
                                  const adaptive_law_spec& law,
                                  meanfield_diagnostics* diag) {
    if (law.target != adaptive_target::inter)
        throw config_error("reduced intercoupling system needs a law targeting mu");
    const double r = s.rho1;
    const double mu = s.coupling;
    meanfield_deriv d;
    d.drho1 = -p.pop1.width * r
              + 0.5 * (1.0 - r * r) * (p.coupling.k1 * r + mu * std::cos(s.psi));
    if (r > rho_floor) {
        d.dpsi = -p.omega_diff() - 0.5 * mu * ((3.0 * r * r + 1.0) / r) * std::sin(s.psi);
    } else {
        d.dpsi = 0.0;
        if (diag) ++diag->floor_events;
    }
    d.dcoupling = eval_law(law, r, s.psi, mu, s.t);
    return d;
}

meanfield_deriv reduced_intra_rhs(const meanfield_state& s, const system_params& p,
                                  const adaptive_law_spec& law,
                                  meanfield_diagnostics* diag) {
    if (law.target != adaptive_target::intra1)
        throw config_error("reduced intracoupling system needs a law targeting k1");
    const double r = s.rho1;
    const double k1 = s.coupling;
    const double mu = p.coupling.mu;
    meanfield_deriv d;
    d.drho1 = -p.pop1.width * r + 0.5 * (1.0 - r * r) * (k1 * r + mu * std::cos(s.psi));
    if (r > rho_floor) {
        d.dpsi = -p.omega_diff() - 0.5 * mu * ((3.0 * r * r + 1.0) / r) * std::sin(s.psi);
    } else {
        d.dpsi = 0.0;
        if (diag) ++diag->floor_events;
    }
    d.dcoupling = eval_law(law, r, s.psi, k1, s.t);
    return d;
}

meanfield_deriv full_two_pop_rhs(const meanfield_state& s, const system_params& p,
                                 meanfield_diagnostics* diag) {
    const double r1 = s.rho1;
    const double r2 = s.rho2;
    const double cpsi = std::cos(s.psi);
    meanfield_deriv d;
    d.drho1 = -p.pop1.width * r1
              + 0.5 * (1.0 - r1 * r1) * (p.coupling.k1 * r1 + p.coupling.mu * r2 * cpsi);
    d.drho2 = -p.pop2.width * r2
              + 0.5 * (1.0 - r2 * r2) * (p.coupling.k2 * r2 + p.coupling.mu * r1 * cpsi);
    if (r1 > rho_floor && r2 > rho_floor) {
        const double shape = (r1 * r1 + r2 * r2 + 2.0 * r1 * r1 * r2 * r2) / (r1 * r2);
        d.dpsi = -p.omega_diff() - 0.5 * p.coupling.mu * shape * std::sin(s.psi);
    } else {
        d.dpsi = 0.0;
        if (diag) ++diag->floor_events;
    }
    return d;
}

general_meanfield_state general_meanfield_rhs(const general_meanfield_state& s,
                                              const general_meanfield_params& p,
                                              meanfield_diagnostics* diag) {
    const std::size_t m = p.m;
    if (m == 0 || s.rho.size() != m || s.phi.size() != m || p.k.size() != m * m ||
        p.width.size() != m || p.freq.size() != m)
        throw config_error("general mean-field dimensions are inconsistent");
    general_meanfield_state d;
    d.rho.resize(m);
    d.phi.resize(m);
    for (std::size_t a = 0; a < m; ++a) {
        double cos_sum = 0.0;
        double sin_sum = 0.0;
        for (std::size_t b = 0; b < m; ++b) {
            const double kab = p.k[a * m + b];
            cos_sum += kab * s.rho[b] * std::cos(s.phi[b] - s.phi[a]);
            sin_sum += kab * s.rho[b] * std::sin(s.phi[b] - s.phi[a]);
        }
        const double r = s.rho[a];
        d.rho[a] = -p.width[a] * r + 0.5 * (1.0 - r * r) * cos_sum;
        if (r > rho_floor) {
            d.phi[a] = -p.freq[a] + 0.5 * ((r * r + 1.0) / r) * sin_sum;
        } else {
            d.phi[a] = -p.freq[a];
            if (diag) ++diag->floor_events;
        }
    }
    return d;
}

trajectory integrate_meanfield(meanfield_system sys, const system_params& p,
                               const adaptive_law_spec& law, meanfield_state init,
                               const integration_options& opt) {
    validate(p);
    validate_grid(opt);
    if (!(init.rho1 >= 0.0 && init.rho1 <= 1.0))
        throw config_error("initial rho1 must lie in [0, 1]");
    if (!(init.rho2 >= 0.0 && init.rho2 <= 1.0))
        throw config_error("initial rho2 must lie in [0, 1]");
    if (!std::isfinite(init.psi) || !std::isfinite(init.coupling))
        throw config_error("initial psi and coupling must be finite");

    const auto steps = static_cast<std::uint64_t>(std::llround(opt.t_final / opt.dt));
    if (steps == 0) throw config_error("t_final is shorter than one step");

    enum class layout { reduced, full, general };
    layout lay;
    std::vector<double> y;
    general_meanfield_params gp;
    switch (sys) {
    case meanfield_system::reduced_inter:
    case meanfield_system::reduced_intra:
        lay = layout::reduced;
        y = {init.rho1, init.psi, init.coupling};
        break;
    case meanfield_system::full_two_pop:
        lay = layout::full;
        y = {init.rho1, init.rho2, init.psi, init.coupling};
        break;
    case meanfield_system::general:
        if (!std::holds_alternative<constant_law>(law.kind))
            throw config_error("general mean field integrates fixed couplings only");
        lay = layout::general;
        gp.m = 2;
        gp.k = {p.coupling.k1, p.coupling.mu, p.coupling.mu, p.coupling.k2};
        gp.width = {p.pop1.width, p.pop2.width};
        gp.freq = {p.pop1.center_freq, p.pop2.center_freq};
        // phi1 starts at 0, so phi2 carries the initial psi.
        y = {init.rho1, init.rho2, 0.0, init.psi};
        break;
    default:
        throw config_error("unknown mean-field system");
    }

    meanfield_diagnostics diag;
    system_params pp = p;
    auto rhs = [&](const std::vector<double>& v, double t, std::vector<double>& out) {
        meanfield_state s;
        switch (lay) {
        case layout::reduced: {
            s.rho1 = v[0];
            s.psi = v[1];
            s.coupling = v[2];
            s.t = t;
            const meanfield_deriv d = (sys == meanfield_system::reduced_inter)
                                          ? reduced_inter_rhs(s, p, law, &diag)
                                          : reduced_intra_rhs(s, p, law, &diag);
            out[0] = d.drho1;
            out[1] = d.dpsi;
            out[2] = d.dcoupling;
            break;
        }
        case layout::full: {
            s.rho1 = v[0];
            s.rho2 = v[1];
            s.psi = v[2];
            s.coupling = v[3];
            s.t = t;
            if (law.target == adaptive_target::inter)
                pp.coupling.mu = v[3];
            else
                pp.coupling.k1 = v[3];
            const meanfield_deriv d = full_two_pop_rhs(s, pp, &diag);
            out[0] = d.drho1;
            out[1] = d.drho2;
            out[2] = d.dpsi;
            out[3] = eval_law(law, s.rho1, s.psi, s.coupling, t);
            break;
        }
        case layout::general: {
            const general_meanfield_state gs{{v[0], v[1]}, {v[2], v[3]}};
            const general_meanfield_state d = general_meanfield_rhs(gs, gp, &diag);
            out[0] = d.rho[0];
            out[1] = d.rho[1];
            out[2] = d.phi[0];
            out[3] = d.phi[1];
            break;
        }
        }
    };

    trajectory traj;
    traj.reserve(static_cast<std::size_t>(steps / opt.record_stride) + 2);
    const double fixed_coupling = (law.target == adaptive_target::inter)
                                      ? p.coupling.mu
                                      : p.coupling.k1;
    auto record = [&](double t) {
        double r1v = 0.0, r2v = 1.0, phi1v = 0.0, phi2v = 0.0, psiv = 0.0, cv = 0.0;
        switch (lay) {
        case layout::reduced:
            r1v = y[0];
            psiv = y[1];
            cv = y[2];
            phi2v = wrap_two_pi(psiv);
            break;
        case layout::full:
            r1v = y[0];
            r2v = y[1];
            psiv = y[2];
            cv = y[3];
            phi2v = wrap_two_pi(psiv);
            break;
        case layout::general:
            r1v = y[0];
            r2v = y[1];
            psiv = y[3] - y[2];
            phi1v = wrap_two_pi(y[2]);
            phi2v = wrap_two_pi(y[3]);
            cv = fixed_coupling;
            break;
        }
        if (!std::isfinite(r1v + r2v + psiv + cv))
            throw numerical_error("state left the finite range", t);
        traj.push(t, r1v, phi1v, r2v, phi2v, psiv, cv);
    };

    rk4_workspace ws;
    record(0.0);
    for (std::uint64_t k = 1; k <= steps; ++k) {
        rk4_step(y, static_cast<double>(k - 1) * opt.dt, opt.dt, rhs, ws);
        y[0] = clamp_rho(y[0], traj.clamp_events);
        if (lay != layout::reduced) y[1] = clamp_rho(y[1], traj.clamp_events);
        if (k % opt.record_stride == 0 || k == steps)
            record(static_cast<double>(k) * opt.dt);
    }
    traj.floor_events = diag.floor_events;
    return traj;
}

} // namespace chimera
