#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace chimera {

// Invalid parameters or malformed configuration input.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Integration or evaluation produced a non-finite or singular result.
// `at_time()` is NaN when the failure is not tied to a simulation time.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what,
                             double t = std::nan(""))
        : std::runtime_error(std::isnan(t) ? what
                                           : what + " at t=" + std::to_string(t)),
          t_(t) {}
    double at_time() const { return t_; }

private:
    double t_;
};

// Requested branch of the intracoupling manifold has no real solution there.
class no_real_branch_error : public std::runtime_error {
public:
    explicit no_real_branch_error(double rho1)
        : std::runtime_error("no real manifold branch at rho1=" +
                             std::to_string(rho1)),
          rho1_(rho1) {}
    double rho1() const { return rho1_; }

private:
    double rho1_;
};

} // namespace chimera
