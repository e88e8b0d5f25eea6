#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace chimera {

// Frequency sampling for one population: either symmetric Cauchy quantiles on
// the fixed grid p_i = (i - 1/2)/N (deterministic, tails clipped by
// construction), or i.i.d. inverse-CDF draws from a seeded generator.
struct deterministic_quantiles {};
struct seeded_random {
    std::uint64_t seed = 0;
};
using sampling_mode = std::variant<deterministic_quantiles, seeded_random>;

struct population_spec {
    std::size_t size = 0;
    double center_freq = 0.0; // Cauchy location
    double width = 0.0;       // Cauchy half-width at half-maximum, >= 0
    sampling_mode sampling = deterministic_quantiles{};
};

struct coupling_config {
    double k1 = 0.0;        // intracoupling of population 1
    double k2 = 0.0;        // intracoupling of population 2
    double mu = 0.0;        // intercoupling
    double phase_lag = 0.0; // beta, radians; acts at the network level only
};

struct system_params {
    population_spec pop1;
    population_spec pop2;
    coupling_config coupling;

    // Always derived from the two centers so it cannot go stale.
    double omega_diff() const { return pop2.center_freq - pop1.center_freq; }
};

struct order_param {
    double magnitude = 0.0; // in [0, 1]
    double phase = 0.0;     // wrapped to [0, 2*pi)
};

// Throws config_error naming the offending field.
void validate(const system_params& params);

// Inverse CDF of the Cauchy(center, width) distribution; p in (0, 1).
double cauchy_quantile(double p, double center, double width);

std::vector<double> sample_frequencies(const population_spec& pop);

// Wrapped-Cauchy draws whose mean resultant length is `concentration`;
// concentration = 1 collapses every phase onto `center`, 0 is uniform.
std::vector<double> sample_phases(std::size_t n, double concentration,
                                  double center, std::uint64_t seed);

order_param order_parameter(std::span<const double> phases);

// Wrap helpers shared across modules.
double wrap_two_pi(double angle); // into [0, 2*pi)
double wrap_pi(double angle);     // into (-pi, pi]

} // namespace chimera
