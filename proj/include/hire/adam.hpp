#pragma once

#include <vector>

#include "hire/tensor.hpp"

namespace hire {

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::size_t step = 0;
  std::vector<Matrix> m;
  std::vector<Matrix> v;
};

/// One bias-corrected Adam update in place. Weight decay is folded into the
/// gradient (g + wd * p) before the moment update. Moments are allocated on
/// the first call; later calls must pass the same parameter shapes.
void adam_step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads, AdamState& state,
               double lr, double weight_decay);

}  // namespace hire
