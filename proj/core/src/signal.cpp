#include "chimera/signal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "chimera/errors.hpp"

namespace chimera {

namespace {

// Gaussian elimination with partial pivoting on a small dense system; the
// normal-equation matrices here are at most (order+1)^2.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b,
                                std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (a[piv * n + col] == 0.0)
            throw numerical_error("singular least-squares system");
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c)
                std::swap(a[piv * n + c], a[col * n + c]);
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / a[col * n + col];
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i * n + c] * x[c];
        x[i] = s / a[i * n + i];
    }
    return x;
}

// Least-squares polynomial fit over series[lo, hi) with abscissae normalized
// to (j - center)/scale, evaluated back at the center sample.
double fit_at(std::span<const double> series, std::size_t lo, std::size_t hi,
              std::size_t center, std::size_t degree, double scale) {
    const std::size_t len = hi - lo;
    const std::size_t deg = std::min(degree, len - 1);
    const std::size_t n = deg + 1;
    std::vector<double> g(n * n, 0.0);
    std::vector<double> rhs(n, 0.0);
    std::vector<double> powers(2 * deg + 1, 0.0);
    for (std::size_t j = lo; j < hi; ++j) {
        const double x = (static_cast<double>(j) - static_cast<double>(center)) / scale;
        double xp = 1.0;
        for (std::size_t k = 0; k <= 2 * deg; ++k) {
            powers[k] += xp;
            xp *= x;
        }
        xp = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            rhs[k] += xp * series[j];
            xp *= x;
        }
    }
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) g[r * n + c] = powers[r + c];
    // Value at the center is the constant coefficient.
    return solve_dense(std::move(g), std::move(rhs), n)[0];
}

// Iterative radix-2 FFT (decimation in time), forward transform.
void fft_inplace(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> step(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= step;
            }
        }
    }
}

} // namespace

std::vector<double> savitzky_golay(std::span<const double> series, std::size_t window,
                                   std::size_t poly_order) {
    if (window % 2 == 0) throw config_error("filter window must be odd");
    if (poly_order >= window)
        throw config_error("filter order must be smaller than the window");
    if (series.size() < window)
        throw config_error("series shorter than the filter window");
    const std::size_t m = window / 2;
    const std::size_t n = series.size();
    const double scale = (m == 0) ? 1.0 : static_cast<double>(m);
    std::vector<double> out(n);

    // Interior samples share one set of convolution weights: the fit of a
    // polynomial evaluated at the window center is linear in the samples.
    std::vector<double> weights(window, 0.0);
    if (n >= window) {
        const std::size_t deg = poly_order;
        const std::size_t nc = deg + 1;
        std::vector<double> g(nc * nc, 0.0);
        for (std::size_t r = 0; r < nc; ++r)
            for (std::size_t c = 0; c < nc; ++c) {
                double s = 0.0;
                for (std::size_t j = 0; j < window; ++j) {
                    const double x =
                        (static_cast<double>(j) - static_cast<double>(m)) / scale;
                    s += std::pow(x, static_cast<double>(r + c));
                }
                g[r * nc + c] = s;
            }
        std::vector<double> e0(nc, 0.0);
        e0[0] = 1.0;
        const std::vector<double> coeff = solve_dense(std::move(g), std::move(e0), nc);
        for (std::size_t j = 0; j < window; ++j) {
            const double x = (static_cast<double>(j) - static_cast<double>(m)) / scale;
            double xp = 1.0;
            double w = 0.0;
            for (std::size_t k = 0; k < nc; ++k) {
                w += coeff[k] * xp;
                xp *= x;
            }
            weights[j] = w;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (i >= m && i + m < n) {
            double s = 0.0;
            for (std::size_t j = 0; j < window; ++j) s += weights[j] * series[i - m + j];
            out[i] = s;
        } else {
            const std::size_t lo = (i >= m) ? i - m : 0;
            const std::size_t hi = std::min(n, i + m + 1);
            out[i] = fit_at(series, lo, hi, i, poly_order, scale);
        }
    }
    return out;
}

oscillation_stats oscillation_metrics(std::span<const double> series,
                                      std::span<const double> times,
                                      double transient_fraction) {
    if (series.size() != times.size())
        throw config_error("series and times must have equal length");
    if (series.size() < 16) throw config_error("series needs at least 16 samples");
    if (!(transient_fraction >= 0.0 && transient_fraction < 1.0))
        throw config_error("transient fraction must lie in [0, 1)");
    const auto start =
        static_cast<std::size_t>(transient_fraction * static_cast<double>(series.size()));
    const std::size_t len = series.size() - start;
    if (len < 16) throw config_error("post-transient series needs at least 16 samples");

    std::vector<double> sorted(series.begin() + static_cast<std::ptrdiff_t>(start),
                               series.end());
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(len - 1);
        const auto i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        return (i + 1 < len) ? sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
                             : sorted[len - 1];
    };
    oscillation_stats st;
    st.amplitude = 0.5 * (quantile(0.9) - quantile(0.1));
    if (!(st.amplitude > 0.0)) return st;

    const double mean =
        std::accumulate(series.begin() + static_cast<std::ptrdiff_t>(start),
                        series.end(), 0.0) /
        static_cast<double>(len);
    std::size_t pad = 1;
    while (pad < 4 * len) pad <<= 1;
    std::vector<std::complex<double>> buf(pad);
    for (std::size_t i = 0; i < len; ++i) {
        // Hann window keeps leakage from swamping nearby bins.
        const double w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                               static_cast<double>(i) /
                                               static_cast<double>(len - 1)));
        buf[i] = (series[start + i] - mean) * w;
    }
    fft_inplace(buf);
    std::size_t peak = 0;
    double peak_mag = 0.0;
    for (std::size_t k = 1; k <= pad / 2; ++k) {
        const double mag = std::abs(buf[k]);
        if (mag > peak_mag) {
            peak_mag = mag;
            peak = k;
        }
    }
    if (peak == 0 || peak_mag == 0.0) return st;
    // Parabolic refinement of the peak bin.
    double delta = 0.0;
    if (peak + 1 <= pad / 2 && peak >= 2) {
        const double ml = std::abs(buf[peak - 1]);
        const double mr = std::abs(buf[peak + 1]);
        const double denom = ml - 2.0 * peak_mag + mr;
        if (denom != 0.0) delta = std::clamp(0.5 * (ml - mr) / denom, -0.5, 0.5);
    }
    const double dt = (times[times.size() - 1] - times[start]) /
                      static_cast<double>(len - 1);
    const double freq = (static_cast<double>(peak) + delta) /
                        (static_cast<double>(pad) * dt);
    if (freq > 0.0) st.period = 1.0 / freq;
    return st;
}

pattern_thresholds pattern_thresholds::for_population_size(std::size_t n) {
    pattern_thresholds th;
    if (n > 0)
        th.incoherence_floor =
            std::max(0.1, 1.5 / std::sqrt(static_cast<double>(n)));
    return th;
}

const char* to_string(pattern_kind k) {
    switch (k) {
    case pattern_kind::synchronized: return "synchronized";
    case pattern_kind::incoherent: return "incoherent";
    case pattern_kind::stationary_chimera: return "stationary_chimera";
    case pattern_kind::breathing_chimera: return "breathing_chimera";
    default: return "unclassified";
    }
}

pattern_class classify_pattern(const trajectory& traj, const pattern_thresholds& th) {
    if (traj.size() < 20)
        throw config_error("trajectory too short to classify");
    const auto start =
        static_cast<std::size_t>(th.transient_fraction * static_cast<double>(traj.size()));
    const std::size_t len = traj.size() - start;
    const double m1 =
        std::accumulate(traj.r1.begin() + static_cast<std::ptrdiff_t>(start),
                        traj.r1.end(), 0.0) /
        static_cast<double>(len);
    const double m2 =
        std::accumulate(traj.r2.begin() + static_cast<std::ptrdiff_t>(start),
                        traj.r2.end(), 0.0) /
        static_cast<double>(len);
    const oscillation_stats osc =
        oscillation_metrics(traj.r1, traj.t, th.transient_fraction);

    pattern_class pc;
    pc.mean_r1 = m1;
    pc.mean_r2 = m2;
    pc.osc_amplitude = osc.amplitude;
    pc.osc_period = osc.period;

    const double low = th.incoherence_floor + th.chimera_r1_low_pad;
    if (m1 > th.sync_r && m2 > th.sync_r && osc.amplitude < th.quiet_amplitude) {
        pc.kind = pattern_kind::synchronized;
    } else if (m1 < th.incoherence_floor && m2 < th.incoherence_floor) {
        pc.kind = pattern_kind::incoherent;
    } else if (m2 > th.sync_r && m1 >= low && m1 <= th.chimera_r1_high &&
               osc.amplitude < th.quiet_amplitude) {
        pc.kind = pattern_kind::stationary_chimera;
    } else if (m2 > th.breathing_r2 && osc.amplitude >= th.quiet_amplitude &&
               osc.period.has_value()) {
        pc.kind = pattern_kind::breathing_chimera;
    } else {
        pc.kind = pattern_kind::unclassified;
    }
    return pc;
}

} // namespace chimera
