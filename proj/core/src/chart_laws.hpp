#pragma once

// First-kind chart formulas shared by the numeric group models and the
// symbolic reduced-equation builder; T is double or Expr.

#include <array>

namespace lieco::detail {

template <typename T>
std::array<T, 4> right_deriv_first_g4(const std::array<T, 4>& u, const std::array<T, 4>& du) {
  const T& a = u[0];
  const T& b = u[1];
  const T& c = u[2];
  return {du[0], du[1], du[2] - (b * du[0] - a * du[1]) / 2.0,
          du[3] - (a * b + b * b + c * 3.0) * du[0] / 6.0 +
              (a * a + a * b - c * 3.0) * du[1] / 6.0 + (a + b) * du[2] / 2.0};
}

template <typename T>
std::array<T, 4> right_deriv_first_g4bar(const std::array<T, 4>& u, const std::array<T, 4>& du) {
  const T& a = u[0];
  const T& b = u[1];
  const T& c = u[2];
  return {du[0], du[1], du[2] - (b * du[0] - a * du[1]) / 2.0,
          du[3] + (a * du[2] - c * du[0]) / 2.0 + a * (a * du[1] - b * du[0]) / 6.0};
}

/// Ad(u) w for the rigid-body group in first-kind coordinates.
template <typename T>
std::array<T, 4> adjoint_first_g4_apply(const std::array<T, 4>& u, const std::array<T, 4>& w) {
  const T& a = u[0];
  const T& b = u[1];
  const T& c = u[2];
  return {w[0], w[1], -b * w[0] + a * w[1] + w[2],
          (-b * (a + b) / 2.0 - c) * w[0] + (a * (a + b) / 2.0 - c) * w[1] + (a + b) * w[2] + w[3]};
}

/// Ad(u) w for the chained-form group in first-kind coordinates.
template <typename T>
std::array<T, 4> adjoint_first_g4bar_apply(const std::array<T, 4>& u, const std::array<T, 4>& w) {
  const T& a = u[0];
  const T& b = u[1];
  const T& c = u[2];
  return {w[0], w[1], -b * w[0] + a * w[1] + w[2],
          (-c - a * b / 2.0) * w[0] + (a * a / 2.0) * w[1] + a * w[2] + w[3]};
}

}  // namespace lieco::detail
