#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "chimera/adaptive_law.hpp"
#include "chimera/model.hpp"

namespace chimera {

enum class branch { plus, minus };
enum class fast_system { inter, intra };
enum class stability { attracting, repelling, saddle, non_hyperbolic };

// An eigenvalue real part within this tolerance of zero counts as zero.
inline constexpr double hyperbolicity_tol = 1e-8;

struct mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;
};
struct eig2 {
    std::complex<double> l1, l2;
};
eig2 eigenvalues(const mat2& j);

stability classify(const eig2& e, double tol = hyperbolicity_tol);
const char* to_string(stability s);
const char* to_string(branch b);

struct manifold_sample {
    double rho1 = 0.0;
    branch br = branch::plus;
    double coupling = 0.0; // mu on the inter manifold, k1 on the intra manifold
    double psi = 0.0;      // principal value
    eig2 eig;
    stability cls = stability::non_hyperbolic;
};

// Critical manifold of the intercoupling fast subsystem, parameterized by
// rho1 in (0, 1).
manifold_sample inter_manifold(double rho1, const system_params& p, branch br);

// Critical manifold of the intracoupling fast subsystem; throws
// no_real_branch_error where the discriminant is negative.
manifold_sample intra_manifold(double rho1, const system_params& p, branch br);

// Jacobians of the fast subsystem restricted to the critical manifold.
mat2 inter_jacobian(double rho1, const system_params& p);
mat2 intra_jacobian(double rho1, const system_params& p, branch br);

// Normal hyperbolicity of the intercoupling manifold over the whole rho1
// range at omega_diff = 0: holds iff k1 < 2*delta1.
bool hyperbolicity_condition(double k1, double delta1);

// Connectedness of the intracoupling manifold: |mu| >= |omega_diff|/sqrt(3).
bool connectivity_check(double mu, double omega_diff);

struct fold_scan {
    std::vector<double> rho1;        // sorted zero-eigenvalue loci
    bool boundary_degenerate = false; // eigenvalue zero pinned to rho1 = 0
};
fold_scan fold_points(const system_params& p, fast_system sys);

struct stability_report {
    fast_system sys = fast_system::inter;
    std::vector<manifold_sample> grid;
    std::vector<double> folds;
    bool boundary_degenerate = false;
    bool hyperbolic_everywhere = false;
    std::size_t no_real_points = 0; // intra grid points with no real branch
};
// Grid rho1 = i/n_points for i = 1..n_points-1, one pass per requested
// branch (both when `only` is empty).
stability_report scan_manifold(const system_params& p, fast_system sys,
                               std::optional<branch> only = std::nullopt,
                               std::size_t n_points = 1000,
                               double tol = hyperbolicity_tol);

struct slow_equilibrium {
    double rho1 = 0.0;
    double coupling = 0.0;
    double psi = 0.0;
    branch br = branch::plus;
    stability fast_cls = stability::non_hyperbolic;
    double slow_slope = 0.0; // d/drho1 [nullcline - manifold] at the root
    bool slow_stable = false;
};
// Intersections of the law's nullcline with the manifold branch, located by
// sign-change bracketing plus bisection; empty when no sign change exists.
std::vector<slow_equilibrium> chimera_equilibrium(const system_params& p,
                                                  const adaptive_law_spec& law,
                                                  fast_system sys, branch br);

struct sync_coefficient_result {
    double value = 0.0;
    bool guarantee_holds = false; // |k2| >= |mu|, the invariant-set condition
};
sync_coefficient_result sync_coefficient(double k2, double mu, double rho1,
                                         double psi);

} // namespace chimera
