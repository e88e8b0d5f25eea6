#pragma once

#include <cstddef>
#include <vector>

namespace chimera {

struct rk4_workspace {
    std::vector<double> k1, k2, k3, k4, tmp;

    void resize(std::size_t n) {
        if (k1.size() != n) {
            k1.resize(n);
            k2.resize(n);
            k3.resize(n);
            k4.resize(n);
            tmp.resize(n);
        }
    }
};

// Classical fixed-step fourth-order Runge-Kutta.  `f(y, t, dydt)` writes the
// derivative of y into dydt.
template <class Rhs>
void rk4_step(std::vector<double>& y, double t, double dt, Rhs&& f,
              rk4_workspace& ws) {
    const std::size_t n = y.size();
    ws.resize(n);
    f(y, t, ws.k1);
    for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + 0.5 * dt * ws.k1[i];
    f(ws.tmp, t + 0.5 * dt, ws.k2);
    for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + 0.5 * dt * ws.k2[i];
    f(ws.tmp, t + 0.5 * dt, ws.k3);
    for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + dt * ws.k3[i];
    f(ws.tmp, t + dt, ws.k4);
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i)
        y[i] += w * (ws.k1[i] + 2.0 * ws.k2[i] + 2.0 * ws.k3[i] + ws.k4[i]);
}

} // namespace chimera
