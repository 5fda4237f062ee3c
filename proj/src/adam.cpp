#include "hire/adam.hpp"

#include <cmath>

#include "hire/error.hpp"

namespace hire {

void adam_step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads, AdamState& state,
               double lr, double weight_decay) {
  if (params.size() != grads.size()) {
    throw ShapeError("adam: " + std::to_string(params.size()) + " parameters but " + std::to_string(grads.size()) +
                     " gradients");
  }
  if (state.m.empty() && state.step == 0) {
    for (const Matrix* p : params) {
      state.m.emplace_back(p->rows, p->cols, 0.0);
      state.v.emplace_back(p->rows, p->cols, 0.0);
    }
  }
  if (state.m.size() != params.size()) throw ShapeError("adam: state holds a different parameter count");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i]->same_shape(*grads[i]) || !params[i]->same_shape(state.m[i])) {
      throw ShapeError("adam: parameter " + std::to_string(i) + " is " + params[i]->shape_string() + ", gradient " +
                       grads[i]->shape_string() + ", moment " + state.m[i].shape_string());
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    std::vector<double>& p = params[i]->data;
    const std::vector<double>& g = grads[i]->data;
    std::vector<double>& m = state.m[i].data;
    std::vector<double>& v = state.v[i].data;
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double gj = g[j] + weight_decay * p[j];
      m[j] = state.beta1 * m[j] + (1.0 - state.beta1) * gj;
      v[j] = state.beta2 * v[j] + (1.0 - state.beta2) * gj * gj;
      p[j] -= lr * (m[j] / c1) / (std::sqrt(v[j] / c2) + state.eps);
    }
  }
}

}  // namespace hire
