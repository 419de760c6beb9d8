#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace opdyn::detail {

// Scratch buffers for one classical RK4 integration; reused across steps.
struct Rk4Workspace {
  explicit Rk4Workspace(std::size_t n) : k1(n), k2(n), k3(n), k4(n), tmp(n) {}
  std::vector<double> k1, k2, k3, k4, tmp;
};

// Advances x by one step h of dx/dt = f(x), assuming ws.k1 already holds
// f(x). `f(x, out)` writes the velocity.
template <class Field>
void rk4_advance(Field&& f, std::span<double> x, double h, Rk4Workspace& ws) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = x[i] + 0.5 * h * ws.k1[i];
  f(std::span<const double>(ws.tmp), std::span<double>(ws.k2));
  for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = x[i] + 0.5 * h * ws.k2[i];
  f(std::span<const double>(ws.tmp), std::span<double>(ws.k3));
  for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = x[i] + h * ws.k3[i];
  f(std::span<const double>(ws.tmp), std::span<double>(ws.k4));
  const double w = h / 6.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] += w * (ws.k1[i] + 2.0 * ws.k2[i] + 2.0 * ws.k3[i] + ws.k4[i]);
  }
}

// One full step. On return ws.k1 holds f evaluated at the state before the step.
template <class Field>
void rk4_step(Field&& f, std::span<double> x, double h, Rk4Workspace& ws) {
  f(std::span<const double>(x), std::span<double>(ws.k1));
  rk4_advance(f, x, h, ws);
}

}  // namespace opdyn::detail
