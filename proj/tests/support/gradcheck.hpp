#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "hire/tensor.hpp"

namespace hire::testing {

inline constexpr double kFiniteStep = 1e-5;
// Denominator floor so entries whose true gradient is ~0 are judged absolutely.
inline constexpr double kRelativeFloor = 1e-6;

inline double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), kRelativeFloor});
}

/// Central differences of `value` around every entry of `params`, compared to
/// `analytic` (same order and shapes). Returns the worst relative error.
inline double finite_difference_error(const std::vector<Matrix*>& params, const std::vector<Matrix>& analytic,
                                      const std::function<double()>& value, double h = kFiniteStep) {
  double worst = 0.0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    Matrix& m = *params[p];
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double saved = m.data[i];
      m.data[i] = saved + h;
      const double up = value();
      m.data[i] = saved - h;
      const double down = value();
      m.data[i] = saved;
      worst = std::max(worst, relative_error(analytic[p].data[i], (up - down) / (2.0 * h)));
    }
  }
  return worst;
}

using OpBuilder = std::function<Tensor(Tape&, const std::vector<Tensor>&)>;

/// Gradient check of a scalar-valued tape expression of the given inputs.
inline double op_gradient_error(std::vector<Matrix> inputs, const OpBuilder& build, double h = kFiniteStep) {
  std::vector<Matrix> analytic;
  {
    Tape tape;
    std::vector<Tensor> vars;
    for (const Matrix& m : inputs) vars.push_back(tape.variable(m));
    tape.backward(build(tape, vars));
    for (const Tensor& v : vars) analytic.push_back(tape.grad_or_zero(v));
  }
  std::vector<Matrix*> ptrs;
  for (Matrix& m : inputs) ptrs.push_back(&m);
  auto value = [&] {
    Tape tape;
    std::vector<Tensor> vars;
    for (const Matrix& m : inputs) vars.push_back(tape.variable(m));
    return build(tape, vars).item();
  };
  return finite_difference_error(ptrs, analytic, value, h);
}

/// Weighted sum with fixed weights, turning any tensor into a scalar whose
/// gradient exercises every output entry differently.
inline Tensor weighted_sum(Tape& tape, const Tensor& t, std::uint64_t seed) {
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  Matrix w(t.rows(), t.cols());
  for (double& x : w.data) x = rng.uniform(-1.0, 1.0);
  return sum(mul(t, tape.constant(std::move(w))), Axis::kAll);
}

inline Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Matrix m(r, c);
  for (double& x : m.data) x = rng.uniform(lo, hi);
  return m;
}

/// Entries bounded away from zero, for kinked operations.
inline Matrix random_away_from_zero(std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(r, c);
  for (double& x : m.data) {
    do x = rng.uniform(-1.0, 1.0);
    while (std::abs(x) < 1e-2);
  }
  return m;
}

}  // namespace hire::testing
