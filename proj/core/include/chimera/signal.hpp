#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "chimera/trajectory.hpp"

namespace chimera {

// Least-squares polynomial smoothing.  `window` must be odd, larger than
// `poly_order`, and no longer than the series; edge samples are fitted on the
// window truncated at the series boundary, so polynomial inputs are
// reproduced exactly everywhere.
std::vector<double> savitzky_golay(std::span<const double> series,
                                   std::size_t window, std::size_t poly_order);

struct oscillation_stats {
    double amplitude = 0.0;       // half the 10-90% quantile range
    std::optional<double> period; // from the dominant nonzero spectral peak
};
// Post-transient statistics; the first `transient_fraction` of the series is
// dropped.  `times` must be a uniform grid matching `series`.
oscillation_stats oscillation_metrics(std::span<const double> series,
                                      std::span<const double> times,
                                      double transient_fraction = 0.2);

enum class pattern_kind {
    synchronized,
    incoherent,
    stationary_chimera,
    breathing_chimera,
    unclassified
};
const char* to_string(pattern_kind k);

struct pattern_thresholds {
    double transient_fraction = 0.2;
    double incoherence_floor = 0.1; // max(0.1, 1.5/sqrt(N)) for a network
    double sync_r = 0.9;
    double quiet_amplitude = 0.05; // oscillation bound for "stationary"
    double chimera_r1_low_pad = 0.05;
    double chimera_r1_high = 0.85;
    double breathing_r2 = 0.8;

    static pattern_thresholds for_population_size(std::size_t n);
};

struct pattern_class {
    pattern_kind kind = pattern_kind::unclassified;
    double mean_r1 = 0.0, mean_r2 = 0.0;
    double osc_amplitude = 0.0;
    std::optional<double> osc_period;
};
pattern_class classify_pattern(const trajectory& traj,
                               const pattern_thresholds& th = {});

} // namespace chimera
