#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "gradcheck.hpp"
#include "hire/distill.hpp"

namespace hire::testing {

/// One randomized gradient check: draw inputs (and any constants the
/// expression closes over) from the rng, then build a scalar from them.
struct OpInstance {
  std::vector<Matrix> inputs;
  OpBuilder build;
};

struct OpCase {
  std::string name;
  std::function<OpInstance(Rng&)> make;
};

inline double worst_case_error(const OpCase& c, std::uint64_t seeds) {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    Rng rng(seed * 7919 + 13);
    OpInstance inst = c.make(rng);
    worst = std::max(worst, op_gradient_error(std::move(inst.inputs), inst.build));
  }
  return worst;
}

/// Every differentiable tape operation, each reduced to a scalar by a fixed
/// random weighting so that all output entries carry distinct sensitivities.
inline std::vector<OpCase> tensor_op_cases() {
  using V = const std::vector<Tensor>&;
  auto unary = [](const char* name, std::size_t r, std::size_t c, double lo, double hi,
                  std::function<Tensor(const Tensor&)> op, std::uint64_t tag) {
    return OpCase{name, [=](Rng& rng) {
                    return OpInstance{{random_matrix(r, c, rng, lo, hi)},
                                      [=](Tape& t, V v) { return weighted_sum(t, op(v[0]), tag); }};
                  }};
  };
  auto binary = [](const char* name, std::size_t r0, std::size_t c0, std::size_t r1, std::size_t c1,
                   std::function<Tensor(const Tensor&, const Tensor&)> op, std::uint64_t tag) {
    return OpCase{name, [=](Rng& rng) {
                    std::vector<Matrix> in = {random_matrix(r0, c0, rng), random_matrix(r1, c1, rng)};
                    return OpInstance{std::move(in), [=](Tape& t, V v) { return weighted_sum(t, op(v[0], v[1]), tag); }};
                  }};
  };
  const std::vector<std::vector<std::size_t>> lists = {{1, 2}, {}, {0, 0, 2}, {3}};
  const std::vector<std::size_t> picks = {2, 0, 2};

  std::vector<OpCase> cases = {
      binary("matmul", 3, 4, 4, 2, [](auto& a, auto& b) { return matmul(a, b); }, 1),
      unary("transpose", 2, 5, -1, 1, [](auto& a) { return transpose(a); }, 2),
      binary("add", 3, 3, 3, 3, [](auto& a, auto& b) { return add(a, b); }, 3),
      binary("sub", 3, 2, 3, 2, [](auto& a, auto& b) { return sub(a, b); }, 4),
      binary("mul", 4, 2, 4, 2, [](auto& a, auto& b) { return mul(a, b); }, 5),
      unary("scale", 2, 2, -1, 1, [](auto& a) { return scale(a, -1.7); }, 6),
      unary("add_scalar", 2, 3, -1, 1, [](auto& a) { return add_scalar(a, 0.3); }, 7),
      binary("add_row", 4, 3, 1, 3, [](auto& a, auto& b) { return add_row(a, b); }, 8),
      unary("tanh", 3, 3, -2, 2, [](auto& a) { return tanh(a); }, 10),
      unary("exp", 3, 2, -2, 2, [](auto& a) { return exp(a); }, 11),
      unary("log", 2, 4, 0.2, 3.0, [](auto& a) { return log(a); }, 12),
      unary("sum rows", 4, 3, -1, 1, [](auto& a) { return sum(a, Axis::kRows); }, 13),
      unary("sum cols", 4, 3, -1, 1, [](auto& a) { return sum(a, Axis::kCols); }, 14),
      unary("mean rows", 4, 3, -1, 1, [](auto& a) { return mean(a, Axis::kRows); }, 15),
      unary("mean cols", 4, 3, -1, 1, [](auto& a) { return mean(a, Axis::kCols); }, 16),
      unary("softmax", 3, 4, -3, 3, [](auto& a) { return softmax_rows(a, 2.5); }, 17),
      unary("log_softmax", 3, 4, -3, 3, [](auto& a) { return log_softmax_rows(a, 1.5); }, 18),
      unary("select_rows", 3, 2, -1, 1, [picks](auto& a) { return select_rows(a, picks); }, 19),
      unary("neighbor_mean", 4, 3, -1, 1, [lists](auto& a) { return neighbor_mean(a, lists); }, 21),
      unary("pairwise_sq_dist", 3, 4, -1, 1, [](auto& a) { return pairwise_sq_dist(a); }, 22),
  };
  // Kinked at zero: keep entries off the kink.
  cases.push_back({"relu", [](Rng& rng) {
                     return OpInstance{{random_away_from_zero(3, 4, rng)},
                                       [](Tape& t, V v) { return weighted_sum(t, relu(v[0]), 9); }};
                   }});
  cases.push_back({"mean all", [](Rng& rng) {
                     return OpInstance{{random_matrix(4, 3, rng)},
                                       [](Tape&, V v) { return mean(mul(v[0], v[0]), Axis::kAll); }};
                   }});
  cases.push_back({"concat_rows", [](Rng& rng) {
                     return OpInstance{{random_matrix(2, 3, rng), random_matrix(1, 3, rng)}, [](Tape& t, V v) {
                                         const std::vector<Tensor> parts = {v[0], v[1], v[0]};
                                         return weighted_sum(t, concat_rows(parts), 20);
                                       }};
                   }});
  return cases;
}

/// The distillation loss building blocks, each with random hyperparameters.
inline std::vector<OpCase> loss_piece_cases() {
  using V = const std::vector<Tensor>&;
  std::vector<OpCase> cases;
  cases.push_back({"cross_entropy", [](Rng& rng) {
                     const std::vector<std::size_t> y = {1, 0, 3};
                     return OpInstance{{random_matrix(3, 4, rng, -2, 2)},
                                       [y](Tape&, V v) { return cross_entropy(v[0], y); }};
                   }});
  cases.push_back({"kd_loss", [](Rng& rng) {
                     const Matrix zt = random_matrix(3, 4, rng, -2, 2);
                     const double tau = rng.uniform(1.0, 10.0);
                     return OpInstance{{random_matrix(3, 4, rng, -2, 2)},
                                       [zt, tau](Tape&, V v) { return kd_loss(v[0], zt, tau); }};
                   }});
  for (KernelMode mode : {KernelMode::kExact, KernelMode::kTaylor2})
    cases.push_back({"metacorr " + to_string(mode), [mode](Rng& rng) {
                       const double sigma = rng.uniform(0.5, 2.0);
                       return OpInstance{{random_matrix(3, 4, rng)}, [sigma, mode](Tape& t, V v) {
                                           return weighted_sum(t, metacorr(v[0], sigma, mode), 23);
                                         }};
                     }});
  cases.push_back({"type_attention", [](Rng& rng) {
                     std::vector<Matrix> in = {random_matrix(3, 4, rng), random_matrix(5, 4, rng),
                                               random_matrix(1, 5, rng), random_matrix(5, 1, rng)};
                     return OpInstance{std::move(in), [](Tape& t, V v) {
                                         const BoundAttention a{v[1], v[2], v[3]};
                                         return weighted_sum(t, type_attention(v[0], a), 24);
                                       }};
                   }});
  cases.push_back({"rkd_from_corr", [](Rng& rng) {
                     const Matrix mt = random_matrix(3, 3, rng);
                     return OpInstance{{random_matrix(1, 3, rng, 0.1, 1), random_matrix(3, 3, rng)},
                                       [mt](Tape& t, V v) { return rkd_from_corr(v[0], v[1], t.constant(mt)); }};
                   }});
  return cases;
}

/// Teacher, student and attention on the six-node three-type graph.
struct LossFixture {
  HetGraph g;
  GraphInput input;
  ModelParams teacher, student;
  AttentionParams att;
  std::vector<std::size_t> rows = {0, 1};
  std::vector<std::size_t> labels;

  explicit LossFixture(std::uint64_t seed) : g(three_type_graph(seed)), input(g) {
    Rng rng(seed + 50);
    teacher = init_model(g, rng, 4);
    student = init_model(g, rng, 4);
    att = init_attention(4, rng, 3);
    for (double& b : att.bias.data) b = rng.uniform(-0.5, 0.5);
    labels = {g.labels[0], g.labels[1]};
  }

  HireLoss loss(Tape& tape, const DistillConfig& cfg, const TeacherOutputs& frozen, bool trainable,
                BoundModel* bm = nullptr, BoundAttention* ba = nullptr) {
    const BoundModel b = bind(tape, student, trainable);
    const BoundAttention a = bind(tape, att, trainable);
    Rng unused(0);
    const ForwardOutput out = forward(tape, input, b, 0.0, unused, Mode::kEval);
    if (bm) *bm = b;
    if (ba) *ba = a;
    return hire_loss(out, frozen, rows, labels, a, cfg);
  }
};

/// Worst relative error of the full objective's gradient with respect to
/// every student and attention parameter, kernel mode alternating by seed.
inline double full_loss_gradient_error(std::uint64_t seed) {
  LossFixture f(seed);
  DistillConfig cfg;
  cfg.alpha = 0.6;
  cfg.beta = 2.0;
  cfg.tau = 1.0 + static_cast<double>(seed % 10);
  cfg.sigma = 1.5;
  cfg.kernel = seed % 2 == 0 ? KernelMode::kExact : KernelMode::kTaylor2;
  const TeacherOutputs frozen = teacher_outputs(f.input, f.teacher, cfg);
  Tape tape;
  BoundModel bm;
  BoundAttention ba;
  const HireLoss l = f.loss(tape, cfg, frozen, true, &bm, &ba);
  tape.backward(l.total);
  std::vector<Matrix> analytic = model_list(gradients(tape, bm));
  std::vector<Matrix*> params = f.student.pointers();
  const AttentionParams ag = gradients(tape, ba);
  ag.for_each([&](const std::string&, const Matrix& m) { analytic.push_back(m); });
  f.att.for_each([&](const std::string&, Matrix& m) { params.push_back(&m); });
  auto value = [&] {
    Tape t;
    return f.loss(t, cfg, frozen, false).total.item();
  };
  return finite_difference_error(params, analytic, value);
}

}  // namespace hire::testing
