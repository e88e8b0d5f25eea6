#include "chimera/gspt.hpp"

#include <algorithm>
#include <cmath>

#include "chimera/errors.hpp"
#include "chimera/meanfield.hpp"

namespace chimera {

namespace {

void require_open_unit(double rho1) {
    if (!(rho1 > 0.0 && rho1 < 1.0))
        throw config_error("rho1 must lie strictly in (0, 1)");
}

// Stationarity of the fast subsystem demands mu*cos(psi) = a(rho) and
// mu*sin(psi) = b(rho); the intercoupling manifold is just the polar form of
// that pair.
double inter_a(double rho, double delta1, double k1) {
    return rho * (2.0 * delta1 / (1.0 - rho * rho) - k1);
}
double inter_b(double rho, double omega_diff) {
    return -2.0 * omega_diff * rho / (3.0 * rho * rho + 1.0);
}

} // namespace

eig2 eigenvalues(const mat2& j) {
    const double tr = j.a11 + j.a22;
    const double det = j.a11 * j.a22 - j.a12 * j.a21;
    const double disc = tr * tr - 4.0 * det;
    eig2 e;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        e.l1 = {0.5 * (tr - s), 0.0};
        e.l2 = {0.5 * (tr + s), 0.0};
    } else {
        const double s = 0.5 * std::sqrt(-disc);
        e.l1 = {0.5 * tr, -s};
        e.l2 = {0.5 * tr, s};
    }
    return e;
}

stability classify(const eig2& e, double tol) {
    const double r1 = e.l1.real();
    const double r2 = e.l2.real();
    if (std::abs(r1) <= tol || std::abs(r2) <= tol) return stability::non_hyperbolic;
    if (r1 < 0.0 && r2 < 0.0) return stability::attracting;
    if (r1 > 0.0 && r2 > 0.0) return stability::repelling;
    return stability::saddle;
}

const char* to_string(stability s) {
    switch (s) {
    case stability::attracting: return "attracting";
    case stability::repelling: return "repelling";
    case stability::saddle: return "saddle";
    default: return "non_hyperbolic";
    }
}

const char* to_string(branch b) { return b == branch::plus ? "plus" : "minus"; }

mat2 inter_jacobian(double rho1, const system_params& p) {
    validate(p);
    const double om = p.omega_diff();
    if (!(rho1 >= 0.0 && rho1 < 1.0))
        throw config_error("rho1 must lie in [0, 1)");
    if (rho1 <= rho_floor && om != 0.0)
        throw config_error("intercoupling jacobian needs rho1 above the floor when "
                           "omega_diff is nonzero");
    const double d1 = p.pop1.width;
    const double k1 = p.coupling.k1;
    const double u = rho1 * rho1;
    const double one = 1.0 - u;
    const double q = 3.0 * u + 1.0;
    mat2 j;
    j.a11 = -d1 * (1.0 + u) / one + 0.5 * k1 * one;
    j.a12 = om * rho1 * one / q;
    j.a21 = (om == 0.0) ? 0.0 : (om / rho1) * (3.0 * u - 1.0) / q;
    j.a22 = -0.5 * (q / one) * (2.0 * d1 - k1 * one);
    return j;
}

mat2 intra_jacobian(double rho1, const system_params& p, branch br) {
    validate(p);
    require_open_unit(rho1);
    const double om = p.omega_diff();
    const double mu = p.coupling.mu;
    const double u = rho1 * rho1;
    const double one = 1.0 - u;
    const double q = 3.0 * u + 1.0;
    const double c = 2.0 * om / q;
    const double disc = (mu / rho1) * (mu / rho1) - c * c;
    if (disc < 0.0) throw no_real_branch_error(rho1);
    const double h = std::sqrt(disc);
    const double sign = (br == branch::plus) ? 1.0 : -1.0;
    mat2 j;
    j.a11 = -2.0 * p.pop1.width * u / one + sign * 0.5 * one * h;
    j.a12 = om * rho1 * one / q;
    j.a21 = (om == 0.0) ? 0.0 : (om / rho1) * (3.0 * u - 1.0) / q;
    j.a22 = sign * 0.5 * q * h;
    return j;
}

manifold_sample inter_manifold(double rho1, const system_params& p, branch br) {
    validate(p);
    require_open_unit(rho1);
    const double a = inter_a(rho1, p.pop1.width, p.coupling.k1);
    const double b = inter_b(rho1, p.omega_diff());
    const double mag = std::hypot(a, b);
    manifold_sample s;
    s.rho1 = rho1;
    s.br = br;
    s.coupling = (br == branch::plus) ? mag : -mag;
    s.psi = (mag == 0.0) ? 0.0
                         : wrap_pi(std::atan2(b / s.coupling, a / s.coupling));
    s.eig = eigenvalues(inter_jacobian(rho1, p));
    s.cls = classify(s.eig);
    return s;
}

manifold_sample intra_manifold(double rho1, const system_params& p, branch br) {
    validate(p);
    require_open_unit(rho1);
    const double mu = p.coupling.mu;
    const double q = 3.0 * rho1 * rho1 + 1.0;
    const double c = 2.0 * p.omega_diff() / q;
    const double disc = (mu / rho1) * (mu / rho1) - c * c;
    if (disc < 0.0) throw no_real_branch_error(rho1);
    const double h = std::sqrt(disc);
    const double sign = (br == branch::plus) ? 1.0 : -1.0;
    manifold_sample s;
    s.rho1 = rho1;
    s.br = br;
    s.coupling = 2.0 * p.pop1.width / (1.0 - rho1 * rho1) + sign * h;
    if (mu == 0.0) {
        s.psi = 0.0; // only reachable with omega_diff = 0; psi then decouples
    } else {
        s.psi = wrap_pi(std::atan2(-c * rho1 / mu, -sign * rho1 * h / mu));
    }
    s.eig = eigenvalues(intra_jacobian(rho1, p, br));
    s.cls = classify(s.eig);
    return s;
}

bool hyperbolicity_condition(double k1, double delta1) {
    if (!(delta1 > 0.0)) throw config_error("delta1 must be positive");
    return k1 < 2.0 * delta1;
}

bool connectivity_check(double mu, double omega_diff) {
    return std::abs(mu) >= std::abs(omega_diff) / std::sqrt(3.0);
}

namespace {

// det(J) restricted to the manifold; a real eigenvalue crossing zero is
// exactly a sign change of the determinant.
std::optional<double> manifold_det(double rho, const system_params& p,
                                   fast_system sys, branch br) {
    try {
        const mat2 j = (sys == fast_system::inter) ? inter_jacobian(rho, p)
                                                   : intra_jacobian(rho, p, br);
        return j.a11 * j.a22 - j.a12 * j.a21;
    } catch (const no_real_branch_error&) {
        return std::nullopt;
    }
}

void scan_det_roots(const system_params& p, fast_system sys, branch br,
                    std::vector<double>& roots) {
    constexpr std::size_t n = 4000;
    constexpr double lo = 1e-4;
    constexpr double hi = 1.0 - 1e-6;
    std::optional<double> prev;
    double prev_rho = lo;
    for (std::size_t i = 0; i <= n; ++i) {
        const double rho = lo + (hi - lo) * static_cast<double>(i) / n;
        const std::optional<double> det = manifold_det(rho, p, sys, br);
        if (det && prev && *det != 0.0 && *prev != 0.0 &&
            ((*det > 0.0) != (*prev > 0.0))) {
            double a = prev_rho;
            double b = rho;
            double fa = *prev;
            bool ok = true;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (a + b);
                const std::optional<double> fm = manifold_det(mid, p, sys, br);
                if (!fm) {
                    ok = false;
                    break;
                }
                if ((*fm > 0.0) == (fa > 0.0)) {
                    a = mid;
                    fa = *fm;
                } else {
                    b = mid;
                }
            }
            if (ok) roots.push_back(0.5 * (a + b));
        }
        prev = det;
        prev_rho = rho;
    }
}

} // namespace

fold_scan fold_points(const system_params& p, fast_system sys) {
    validate(p);
    fold_scan out;
    const double om = p.omega_diff();
    if (sys == fast_system::inter && om == 0.0) {
        // Triangular jacobian: the eigenvalues factor, so the loci are roots
        // of a quadratic in u = rho^2 plus the explicit a22 zero.
        const double d1 = p.pop1.width;
        const double k1 = p.coupling.k1;
        if (k1 == 2.0 * d1) out.boundary_degenerate = true;
        if (k1 != 0.0) {
            const double u2 = 1.0 - 2.0 * d1 / k1;
            if (u2 > 0.0 && u2 < 1.0) out.rho1.push_back(std::sqrt(u2));
            const double qa = 0.5 * k1;
            const double qb = -(k1 + d1);
            const double qc = 0.5 * k1 - d1;
            const double disc = qb * qb - 4.0 * qa * qc;
            if (disc >= 0.0) {
                const double s = std::sqrt(disc);
                for (const double u : {(-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)})
                    if (u > 0.0 && u < 1.0) out.rho1.push_back(std::sqrt(u));
            }
        }
    } else if (sys == fast_system::inter) {
        scan_det_roots(p, sys, branch::plus, out.rho1);
    } else {
        scan_det_roots(p, sys, branch::plus, out.rho1);
        scan_det_roots(p, sys, branch::minus, out.rho1);
    }
    std::sort(out.rho1.begin(), out.rho1.end());
    out.rho1.erase(std::unique(out.rho1.begin(), out.rho1.end(),
                               [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                   out.rho1.end());
    return out;
}

stability_report scan_manifold(const system_params& p, fast_system sys,
                               std::optional<branch> only, std::size_t n_points,
                               double tol) {
    validate(p);
    if (n_points < 2) throw config_error("manifold grid needs at least 2 points");
    stability_report rep;
    rep.sys = sys;
    const branch all[] = {branch::plus, branch::minus};
    for (const branch br : all) {
        if (only && *only != br) continue;
        for (std::size_t i = 1; i < n_points; ++i) {
            const double rho = static_cast<double>(i) / static_cast<double>(n_points);
            try {
                manifold_sample s = (sys == fast_system::inter)
                                        ? inter_manifold(rho, p, br)
                                        : intra_manifold(rho, p, br);
                s.cls = classify(s.eig, tol);
                rep.grid.push_back(s);
            } catch (const no_real_branch_error&) {
                ++rep.no_real_points;
            }
        }
    }
    const fold_scan folds = fold_points(p, sys);
    rep.folds = folds.rho1;
    rep.boundary_degenerate = folds.boundary_degenerate;
    bool any_non_hyperbolic = false;
    for (const manifold_sample& s : rep.grid)
        if (s.cls == stability::non_hyperbolic) any_non_hyperbolic = true;
    rep.hyperbolic_everywhere = rep.folds.empty() && !rep.boundary_degenerate &&
                                !any_non_hyperbolic && rep.no_real_points == 0;
    return rep;
}

std::vector<slow_equilibrium> chimera_equilibrium(const system_params& p,
                                                  const adaptive_law_spec& law,
                                                  fast_system sys, branch br) {
    validate(p);
    const nullcline_info nc = nullcline(law);
    if (!nc.coupling_of_rho1)
        throw config_error("equilibrium search needs a law whose nullcline is a "
                           "coupling-versus-rho1 curve");
    const auto& n_of = *nc.coupling_of_rho1;
    auto m_of = [&](double rho) -> std::optional<double> {
        try {
            const manifold_sample s = (sys == fast_system::inter)
                                          ? inter_manifold(rho, p, br)
                                          : intra_manifold(rho, p, br);
            return s.coupling;
        } catch (const no_real_branch_error&) {
            return std::nullopt;
        }
    };
    auto gap = [&](double rho) -> std::optional<double> {
        const std::optional<double> m = m_of(rho);
        if (!m) return std::nullopt;
        return n_of(rho) - *m;
    };

    std::vector<slow_equilibrium> out;
    constexpr std::size_t n = 4096;
    constexpr double lo = 1e-3;
    constexpr double hi = 1.0 - 1e-6;
    std::optional<double> prev;
    double prev_rho = lo;
    for (std::size_t i = 0; i <= n; ++i) {
        const double rho = lo + (hi - lo) * static_cast<double>(i) / n;
        const std::optional<double> g = gap(rho);
        if (g && prev && ((*g > 0.0) != (*prev > 0.0))) {
            double a = prev_rho;
            double b = rho;
            double fa = *prev;
            bool ok = true;
            for (int it = 0; it < 200 && ok; ++it) {
                const double mid = 0.5 * (a + b);
                const std::optional<double> fm = gap(mid);
                if (!fm) {
                    ok = false;
                    break;
                }
                if ((*fm > 0.0) == (fa > 0.0)) {
                    a = mid;
                    fa = *fm;
                } else {
                    b = mid;
                }
            }
            if (ok) {
                const double root = 0.5 * (a + b);
                const manifold_sample s = (sys == fast_system::inter)
                                              ? inter_manifold(root, p, br)
                                              : intra_manifold(root, p, br);
                slow_equilibrium eq;
                eq.rho1 = root;
                eq.coupling = s.coupling;
                eq.psi = s.psi;
                eq.br = br;
                eq.fast_cls = s.cls;
                const double h = 1e-7;
                const std::optional<double> gl = gap(root - h);
                const std::optional<double> gr = gap(root + h);
                const std::optional<double> ml = m_of(root - h);
                const std::optional<double> mr = m_of(root + h);
                if (gl && gr && ml && mr) {
                    eq.slow_slope = (*gr - *gl) / (2.0 * h);
                    const double m_slope = (*mr - *ml) / (2.0 * h);
                    // Along the manifold the slow flow moves rho1 toward the
                    // nullcline iff (n' - m')/m' < 0 at the crossing.
                    eq.slow_stable = (m_slope != 0.0) && (eq.slow_slope / m_slope < 0.0);
                }
                out.push_back(eq);
            }
        }
        prev = g;
        prev_rho = rho;
    }
    return out;
}

sync_coefficient_result sync_coefficient(double k2, double mu, double rho1, double psi) {
    const double denom = k2 + mu * rho1 * std::cos(psi);
    if (std::abs(denom) < 1e-12)
        throw numerical_error("transverse rate denominator vanishes");
    return {1.0 / denom, std::abs(k2) >= std::abs(mu)};
}

} // namespace chimera
