#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "chimera/errors.hpp"
#include "chimera/model.hpp"

using namespace chimera;

namespace {

constexpr double pi = std::numbers::pi;

double empirical_r(const std::vector<double>& phases) {
    double x = 0.0, y = 0.0;
    for (double th : phases) {
        x += std::cos(th);
        y += std::sin(th);
    }
    return std::hypot(x, y) / static_cast<double>(phases.size());
}

template <class F>
std::string config_message(F&& f) {
    try {
        f();
    } catch (const config_error& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("cauchy quantile closed form") {
    CHECK(cauchy_quantile(0.5, 3.25, 0.7) == 3.25);
    CHECK(std::abs(cauchy_quantile(0.9, 0.0, 2.0) - 6.155367074350506) <= 1e-12);
    CHECK(cauchy_quantile(0.25, 5.0, 0.0) == 5.0);
    CHECK_THROWS_AS(cauchy_quantile(0.0, 0.0, 1.0), config_error);
    CHECK_THROWS_AS(cauchy_quantile(1.0, 0.0, 1.0), config_error);
    CHECK_THROWS_AS(cauchy_quantile(-0.2, 0.0, 1.0), config_error);
    CHECK_THROWS_AS(cauchy_quantile(0.5, 0.0, -1.0), config_error);
}

TEST_CASE("cauchy quantile is symmetric about the center") {
    for (double p : {0.01, 0.1, 0.3, 0.45}) {
        const double lo = cauchy_quantile(p, 1.5, 0.8);
        const double hi = cauchy_quantile(1.0 - p, 1.5, 0.8);
        CHECK(std::abs(0.5 * (lo + hi) - 1.5) <= 1e-9);
    }
}

TEST_CASE("deterministic frequency grid") {
    population_spec pop{1000, 0.0, 1.0, deterministic_quantiles{}};
    const auto w = sample_frequencies(pop);
    REQUIRE(w.size() == 1000);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) CHECK(w[i] < w[i + 1]);
    // symmetric grid: tails mirror and the central pair straddles the center
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(std::abs(w[i] + w[w.size() - 1 - i]) <= 1e-9);
    CHECK(std::abs(0.5 * (w[499] + w[500])) <= 1e-12);
    CHECK(std::abs(w[0] - cauchy_quantile(0.5 / 1000.0, 0.0, 1.0)) <= 1e-12);
    CHECK(std::abs(w[0] + 636.6192487687345) <= 1e-9);
}

TEST_CASE("deterministic grid recenters and rescales") {
    population_spec base{64, 0.0, 1.0, deterministic_quantiles{}};
    population_spec moved{64, 5.05, 0.1, deterministic_quantiles{}};
    const auto a = sample_frequencies(base);
    const auto b = sample_frequencies(moved);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(std::abs(b[i] - (5.05 + 0.1 * a[i])) <= 1e-12);
}

TEST_CASE("seeded frequency draws replay") {
    population_spec pop{512, 5.05, 0.1, seeded_random{42}};
    const auto a = sample_frequencies(pop);
    const auto b = sample_frequencies(pop);
    CHECK(a == b);
    pop.sampling = seeded_random{43};
    const auto c = sample_frequencies(pop);
    CHECK(a != c);
}

TEST_CASE("seeded frequency draws center on the location") {
    population_spec pop{20001, 2.0, 1.0, seeded_random{7}};
    auto w = sample_frequencies(pop);
    std::nth_element(w.begin(), w.begin() + 10000, w.end());
    CHECK(std::abs(w[10000] - 2.0) <= 0.05);
}

TEST_CASE("population validation names the offending field") {
    population_spec pop{1, 0.0, 1.0, deterministic_quantiles{}};
    CHECK(config_message([&] { sample_frequencies(pop); }).find("size") !=
          std::string::npos);
    pop.size = 10;
    pop.width = -1.0;
    CHECK(config_message([&] { sample_frequencies(pop); }).find("width") !=
          std::string::npos);
}

TEST_CASE("phase sampling hits the requested concentration") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto ph = sample_phases(1000, 0.99, 0.0, seed);
        const double r = empirical_r(ph);
        CHECK(r >= 0.98);
        CHECK(r <= 1.0);
    }
    const auto uniform = sample_phases(10000, 0.0, 0.0, 3);
    CHECK(empirical_r(uniform) < 0.05);
    const auto mid = sample_phases(20000, 0.5, 1.0, 11);
    CHECK(std::abs(empirical_r(mid) - 0.5) <= 0.02);
}

TEST_CASE("phase sampling edge cases and replay") {
    const auto locked = sample_phases(64, 1.0, 0.7, 9);
    for (double th : locked) CHECK(th == 0.7);
    const auto a = sample_phases(256, 0.3, -0.2, 5);
    const auto b = sample_phases(256, 0.3, -0.2, 5);
    CHECK(a == b);
    CHECK_THROWS_AS(sample_phases(10, -0.1, 0.0, 1), config_error);
    CHECK_THROWS_AS(sample_phases(10, 1.1, 0.0, 1), config_error);
}

TEST_CASE("phase sampling centers the cluster") {
    const auto ph = sample_phases(50000, 0.8, 1.3, 21);
    const auto op = order_parameter(ph);
    CHECK(std::abs(wrap_pi(op.phase - 1.3)) <= 0.05);
    CHECK(std::abs(op.magnitude - 0.8) <= 0.01);
}

TEST_CASE("order parameter on hand-checkable inputs") {
    const std::vector<double> two{0.0, pi / 2.0};
    auto op = order_parameter(two);
    CHECK(std::abs(op.magnitude - 0.7071067811865476) <= 1e-12);
    CHECK(std::abs(op.phase - 0.7853981633974483) <= 1e-12);

    const std::vector<double> locked(17, 2.0);
    op = order_parameter(locked);
    CHECK(op.magnitude <= 1.0);
    CHECK(std::abs(op.magnitude - 1.0) <= 1e-12);
    CHECK(std::abs(op.phase - 2.0) <= 1e-12);

    const std::vector<double> antipodal{0.0, pi};
    op = order_parameter(antipodal);
    CHECK(op.magnitude <= 1e-15);

    const std::vector<double> empty;
    CHECK_THROWS_AS(order_parameter(empty), config_error);
}

TEST_CASE("order parameter stays in range") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto ph = sample_phases(97, 0.4, 2.9, seed);
        const auto op = order_parameter(ph);
        CHECK(op.magnitude >= 0.0);
        CHECK(op.magnitude <= 1.0);
        CHECK(op.phase >= 0.0);
        CHECK(op.phase < 2.0 * pi);
    }
}

TEST_CASE("angle wrapping") {
    CHECK(wrap_two_pi(0.0) == 0.0);
    CHECK(std::abs(wrap_two_pi(-0.1) - (2.0 * pi - 0.1)) <= 1e-12);
    CHECK(std::abs(wrap_two_pi(7.0 * pi) - pi) <= 1e-9);
    CHECK(wrap_pi(0.0) == 0.0);
    CHECK(std::abs(wrap_pi(pi) - pi) <= 1e-12);
    CHECK(std::abs(wrap_pi(-pi) - pi) <= 1e-12); // (-pi, pi] convention
    CHECK(std::abs(wrap_pi(1.5 * pi) + 0.5 * pi) <= 1e-12);
    for (double a : {-9.7, -3.2, -0.4, 0.9, 4.4, 11.0}) {
        const double w = wrap_pi(a);
        CHECK(w > -pi);
        CHECK(w <= pi);
        CHECK(std::abs(std::sin(w - a)) <= 1e-9); // same angle mod 2*pi
    }
}

TEST_CASE("system parameter validation") {
    system_params p;
    p.pop1 = {1000, 5.05, 1.0, deterministic_quantiles{}};
    p.pop2 = {1000, 5.06, 0.1, deterministic_quantiles{}};
    p.coupling = {0.9, 9.0, 3.0, 0.0};
    CHECK_NOTHROW(validate(p));
    CHECK(std::abs(p.omega_diff() - 0.01) <= 1e-12);

    auto bad = p;
    bad.pop2.width = std::nan("");
    CHECK(config_message([&] { validate(bad); }).find("pop2") != std::string::npos);
    bad = p;
    bad.coupling.mu = std::numeric_limits<double>::infinity();
    CHECK(config_message([&] { validate(bad); }).find("mu") != std::string::npos);
}
