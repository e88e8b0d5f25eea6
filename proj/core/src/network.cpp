#include "chimera/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "chimera/errors.hpp"
#include "chimera/rk4.hpp"

#ifdef CHIMERA_WITH_OPENMP
#include <omp.h>
#endif

namespace chimera {

namespace {

// Phasor sums are accumulated per fixed 512-oscillator chunk and reduced in
// chunk order, so results do not depend on how chunks land on threads.
constexpr std::size_t chunk_size = 512;

struct phasor {
    double re = 0.0, im = 0.0;
};

struct force_workspace {
    std::vector<double> sin_th, cos_th;
    std::vector<phasor> partial;
    std::size_t n1 = 0, n2 = 0, chunks1 = 0, chunks2 = 0;

    void init(std::size_t n1_, std::size_t n2_) {
        n1 = n1_;
        n2 = n2_;
        chunks1 = (n1 + chunk_size - 1) / chunk_size;
        chunks2 = (n2 + chunk_size - 1) / chunk_size;
        sin_th.resize(n1 + n2);
        cos_th.resize(n1 + n2);
        partial.resize(chunks1 + chunks2);
    }
};

// Population mean phasors from the flat phase array; fills the sin/cos caches
// as a side effect so the force loop reuses them.
void population_phasors(const double* phases, force_workspace& ws, phasor& z1,
                        phasor& z2) {
    const auto total = static_cast<std::ptrdiff_t>(ws.chunks1 + ws.chunks2);
#ifdef CHIMERA_WITH_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t ci = 0; ci < total; ++ci) {
        const auto c = static_cast<std::size_t>(ci);
        const bool second = c >= ws.chunks1;
        const std::size_t base = second ? ws.n1 : 0;
        const std::size_t local = second ? c - ws.chunks1 : c;
        const std::size_t count = second ? ws.n2 : ws.n1;
        const std::size_t lo = base + local * chunk_size;
        const std::size_t hi = base + std::min(count, (local + 1) * chunk_size);
        phasor acc;
        for (std::size_t i = lo; i < hi; ++i) {
            const double s = std::sin(phases[i]);
            const double cth = std::cos(phases[i]);
            ws.sin_th[i] = s;
            ws.cos_th[i] = cth;
            acc.re += cth;
            acc.im += s;
        }
        ws.partial[c] = acc;
    }
    z1 = {};
    z2 = {};
    for (std::size_t c = 0; c < ws.chunks1; ++c) {
        z1.re += ws.partial[c].re;
        z1.im += ws.partial[c].im;
    }
    for (std::size_t c = ws.chunks1; c < ws.chunks1 + ws.chunks2; ++c) {
        z2.re += ws.partial[c].re;
        z2.im += ws.partial[c].im;
    }
    z1.re /= static_cast<double>(ws.n1);
    z1.im /= static_cast<double>(ws.n1);
    z2.re /= static_cast<double>(ws.n2);
    z2.im /= static_cast<double>(ws.n2);
}

struct coupling_values {
    double k1, k2, mu;
};

// d theta_i = omega_i + Im(F e^{-i theta_i}) with F = e^{i beta} (k z_own +
// mu z_other): the all-to-all sine sums collapse onto the mean phasors.
void phase_derivs(const double* phases, const double* w1, const double* w2,
                  const coupling_values& kv, double beta, force_workspace& ws,
                  double* out, phasor& z1, phasor& z2) {
    population_phasors(phases, ws, z1, z2);
    const double cb = std::cos(beta);
    const double sb = std::sin(beta);
    auto rotate = [&](double re, double im) {
        return phasor{re * cb - im * sb, re * sb + im * cb};
    };
    const phasor f1 = rotate(kv.k1 * z1.re + kv.mu * z2.re, kv.k1 * z1.im + kv.mu * z2.im);
    const phasor f2 = rotate(kv.k2 * z2.re + kv.mu * z1.re, kv.k2 * z2.im + kv.mu * z1.im);
    const auto n = static_cast<std::ptrdiff_t>(ws.n1 + ws.n2);
#ifdef CHIMERA_WITH_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const bool second = ui >= ws.n1;
        const phasor& f = second ? f2 : f1;
        const double w = second ? w2[ui - ws.n1] : w1[ui];
        out[ui] = w + f.im * ws.cos_th[ui] - f.re * ws.sin_th[ui];
    }
}

coupling_values resolve_couplings(const system_params& p,
                                  std::optional<adaptive_target> adaptive,
                                  double coupling_state) {
    coupling_values kv{p.coupling.k1, p.coupling.k2, p.coupling.mu};
    if (adaptive == adaptive_target::inter)
        kv.mu = coupling_state;
    else if (adaptive == adaptive_target::intra1)
        kv.k1 = coupling_state;
    return kv;
}

} // namespace

network_state synthesize_network_state(const system_params& p, double rho1,
                                       double rho2, double psi, double coupling0,
                                       std::uint64_t seed) {
    validate(p);
    network_state s;
    s.phases1 = sample_phases(p.pop1.size, rho1, 0.0, seed);
    s.phases2 = sample_phases(p.pop2.size, rho2, -psi, seed + 1);
    s.coupling = coupling0;
    return s;
}

network_deriv network_rhs(const network_state& s, const system_params& p,
                          std::optional<adaptive_target> adaptive) {
    validate(p);
    if (s.phases1.size() != p.pop1.size || s.phases2.size() != p.pop2.size)
        throw config_error("network state does not match the population sizes");
    const std::size_t n1 = p.pop1.size;
    const std::size_t n2 = p.pop2.size;
    const std::vector<double> w1 = sample_frequencies(p.pop1);
    const std::vector<double> w2 = sample_frequencies(p.pop2);
    std::vector<double> flat(n1 + n2);
    std::copy(s.phases1.begin(), s.phases1.end(), flat.begin());
    std::copy(s.phases2.begin(), s.phases2.end(), flat.begin() + static_cast<std::ptrdiff_t>(n1));
    force_workspace ws;
    ws.init(n1, n2);
    std::vector<double> out(n1 + n2);
    phasor z1, z2;
    phase_derivs(flat.data(), w1.data(), w2.data(),
                 resolve_couplings(p, adaptive, s.coupling), p.coupling.phase_lag, ws,
                 out.data(), z1, z2);
    network_deriv d;
    d.dphases1.assign(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n1));
    d.dphases2.assign(out.begin() + static_cast<std::ptrdiff_t>(n1), out.end());
    return d;
}

trajectory integrate_network(const system_params& p, const adaptive_law_spec& law,
                             const network_state& init,
                             const integration_options& opt) {
    validate(p);
    validate_grid(opt);
    const std::size_t n1 = p.pop1.size;
    const std::size_t n2 = p.pop2.size;
    if (init.phases1.size() != n1 || init.phases2.size() != n2)
        throw config_error("network state does not match the population sizes");
    if (!std::isfinite(init.coupling))
        throw config_error("initial coupling must be finite");
    const auto steps = static_cast<std::uint64_t>(std::llround(opt.t_final / opt.dt));
    if (steps == 0) throw config_error("t_final is shorter than one step");

#ifdef CHIMERA_WITH_OPENMP
    if (opt.threads > 0) omp_set_num_threads(opt.threads);
#endif

    const std::vector<double> w1 = sample_frequencies(p.pop1);
    const std::vector<double> w2 = sample_frequencies(p.pop2);
    force_workspace ws;
    ws.init(n1, n2);

    std::vector<double> y(n1 + n2 + 1);
    std::copy(init.phases1.begin(), init.phases1.end(), y.begin());
    std::copy(init.phases2.begin(), init.phases2.end(),
              y.begin() + static_cast<std::ptrdiff_t>(n1));
    y[n1 + n2] = init.coupling;

    auto rhs = [&](const std::vector<double>& v, double t, std::vector<double>& out) {
        const double cval = v[n1 + n2];
        phasor z1, z2;
        phase_derivs(v.data(), w1.data(), w2.data(),
                     resolve_couplings(p, law.target, cval), p.coupling.phase_lag, ws,
                     out.data(), z1, z2);
        // The law closes over macroscopic observables only.
        const double r1 = std::min(std::hypot(z1.re, z1.im), 1.0);
        const double psi_red = std::atan2(z1.im, z1.re) - std::atan2(z2.im, z2.re);
        out[n1 + n2] = eval_law(law, r1, psi_red, cval, t);
    };

    trajectory traj;
    traj.reserve(static_cast<std::size_t>(steps / opt.record_stride) + 2);
    bool have_prev = false;
    double psi_prev = 0.0;
    double psi_acc = 0.0;
    auto record = [&](double t) {
        phasor z1, z2;
        population_phasors(y.data(), ws, z1, z2);
        const double r1v = std::min(std::hypot(z1.re, z1.im), 1.0);
        const double r2v = std::min(std::hypot(z2.re, z2.im), 1.0);
        const double a1 = std::atan2(z1.im, z1.re);
        const double a2 = std::atan2(z2.im, z2.re);
        // Reduced-convention phase difference, unwrapped across records.
        const double raw = wrap_pi(a1 - a2);
        if (have_prev) {
            psi_acc += wrap_pi(raw - psi_prev);
        } else {
            psi_acc = raw;
            have_prev = true;
        }
        psi_prev = raw;
        const double cv = y[n1 + n2];
        if (!std::isfinite(r1v + r2v + cv))
            throw numerical_error("state left the finite range", t);
        traj.push(t, r1v, wrap_two_pi(a1), r2v, wrap_two_pi(a2), psi_acc, cv);
    };

    rk4_workspace rk;
    record(0.0);
    for (std::uint64_t k = 1; k <= steps; ++k) {
        rk4_step(y, static_cast<double>(k - 1) * opt.dt, opt.dt, rhs, rk);
        if (k % opt.record_stride == 0 || k == steps)
            record(static_cast<double>(k) * opt.dt);
    }
    return traj;
}

} // namespace chimera
