#pragma once

#include <functional>
#include <optional>
#include <variant>

namespace chimera {

// Which coupling constant evolves slowly: the intercoupling mu, or
// population 1's intracoupling k1.
enum class adaptive_target { inter, intra1 };

struct constant_law {};
struct linear_feedback {
    double gamma = 0.0;
    double eta = 0.0;
};
struct periodic_drive {
    double amplitude_scale = 1.0;
    double drive_freq = 0.0;
};
struct phase_feedback {
    double sign = -1.0; // +1 or -1
};
using law_kind =
    std::variant<constant_law, linear_feedback, periodic_drive, phase_feedback>;

struct adaptive_law_spec {
    adaptive_target target = adaptive_target::inter;
    double epsilon = 0.0; // timescale separation, >= 0
    law_kind kind = constant_law{};
};

// Slow derivative of the adaptive coupling at the given macroscopic state.
double eval_law(const adaptive_law_spec& law, double rho1, double psi,
                double coupling, double t);

// coupling*(rho1) where the law vanishes, when that locus is a function of
// rho1 alone.  `flat` marks the constant law (every value is a null point).
struct nullcline_info {
    std::optional<std::function<double(double)>> coupling_of_rho1;
    bool flat = false;
};
nullcline_info nullcline(const adaptive_law_spec& law);

} // namespace chimera
