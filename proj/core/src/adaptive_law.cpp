#include "chimera/adaptive_law.hpp"

#include <cmath>

#include "chimera/errors.hpp"

namespace chimera {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

double eval_law(const adaptive_law_spec& law, double rho1, double psi, double coupling,
                double t) {
    const double f = std::visit(
        overloaded{
            [](const constant_law&) { return 0.0; },
            [&](const linear_feedback& lf) { return -coupling + lf.gamma - lf.eta * rho1; },
            [&](const periodic_drive& pd) {
                return pd.amplitude_scale * std::cos(pd.drive_freq * t);
            },
            [&](const phase_feedback& pf) { return pf.sign * std::cos(psi); },
        },
        law.kind);
    return law.epsilon * f;
}

nullcline_info nullcline(const adaptive_law_spec& law) {
    nullcline_info info;
    if (std::holds_alternative<constant_law>(law.kind)) {
        info.flat = true;
        return info;
    }
    if (const auto* lf = std::get_if<linear_feedback>(&law.kind)) {
        info.coupling_of_rho1 = [gamma = lf->gamma, eta = lf->eta](double rho1) {
            return gamma - eta * rho1;
        };
    }
    // Periodic drive is non-autonomous and phase feedback has no coupling
    // dependence: neither yields a coupling-versus-rho1 curve.
    return info;
}

} // namespace chimera
