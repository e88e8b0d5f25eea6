#include "chimera/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "chimera/errors.hpp"

namespace chimera {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Uniform double strictly inside (0, 1) built from the top 53 bits of the
// generator output.  std::uniform_real_distribution is implementation
// defined, which would break replay guarantees across standard libraries.
double unit_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw config_error(msg);
}

void validate_population(const population_spec& pop, const std::string& name) {
    require(pop.size >= 2, name + ".size must be at least 2");
    require(std::isfinite(pop.center_freq), name + ".center_freq must be finite");
    require(std::isfinite(pop.width) && pop.width >= 0.0,
            name + ".width must be finite and non-negative");
}

} // namespace

double wrap_two_pi(double angle) {
    double a = std::fmod(angle, two_pi);
    if (a < 0.0) a += two_pi;
    return a;
}

double wrap_pi(double angle) {
    double a = std::fmod(angle + std::numbers::pi, two_pi);
    if (a <= 0.0) a += two_pi;
    return a - std::numbers::pi;
}

void validate(const system_params& p) {
    validate_population(p.pop1, "pop1");
    validate_population(p.pop2, "pop2");
    require(std::isfinite(p.coupling.k1), "coupling.k1 must be finite");
    require(std::isfinite(p.coupling.k2), "coupling.k2 must be finite");
    require(std::isfinite(p.coupling.mu), "coupling.mu must be finite");
    require(std::isfinite(p.coupling.phase_lag), "coupling.phase_lag must be finite");
}

double cauchy_quantile(double p, double center, double width) {
    if (!(p > 0.0 && p < 1.0))
        throw config_error("quantile probability must lie strictly in (0, 1)");
    if (!std::isfinite(center)) throw config_error("quantile center must be finite");
    if (!(std::isfinite(width) && width >= 0.0))
        throw config_error("quantile width must be finite and non-negative");
    return center + width * std::tan(std::numbers::pi * (p - 0.5));
}

std::vector<double> sample_frequencies(const population_spec& pop) {
    validate_population(pop, "population");
    std::vector<double> w(pop.size);
    if (std::holds_alternative<deterministic_quantiles>(pop.sampling)) {
        const double n = static_cast<double>(pop.size);
        for (std::size_t i = 0; i < pop.size; ++i)
            w[i] = cauchy_quantile((static_cast<double>(i) + 0.5) / n,
                                   pop.center_freq, pop.width);
    } else {
        std::mt19937_64 rng(std::get<seeded_random>(pop.sampling).seed);
        for (auto& x : w)
            x = cauchy_quantile(unit_open(rng), pop.center_freq, pop.width);
    }
    return w;
}

std::vector<double> sample_phases(std::size_t n, double concentration, double center,
                                  std::uint64_t seed) {
    if (!(concentration >= 0.0 && concentration <= 1.0))
        throw config_error("phase concentration must lie in [0, 1]");
    if (!std::isfinite(center)) throw config_error("phase center must be finite");
    std::vector<double> th(n, center);
    if (concentration == 1.0) return th;
    // Wrapped-Cauchy draw: push a uniform angle through the Moebius map that
    // concentrates mass around the center with |mean phasor| = concentration.
    const double shrink = (1.0 - concentration) / (1.0 + concentration);
    std::mt19937_64 rng(seed);
    for (auto& x : th) {
        const double half = std::numbers::pi * (unit_open(rng) - 0.5);
        x = center + 2.0 * std::atan(shrink * std::tan(half));
    }
    return th;
}

order_param order_parameter(std::span<const double> phases) {
    if (phases.empty()) throw config_error("order parameter needs at least one phase");
    double x = 0.0;
    double y = 0.0;
    for (double th : phases) {
        x += std::cos(th);
        y += std::sin(th);
    }
    x /= static_cast<double>(phases.size());
    y /= static_cast<double>(phases.size());
    order_param op;
    op.magnitude = std::min(std::hypot(x, y), 1.0);
    op.phase = (x == 0.0 && y == 0.0) ? 0.0 : wrap_two_pi(std::atan2(y, x));
    return op;
}

} // namespace chimera
