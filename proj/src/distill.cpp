#include "hire/distill.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "hire/error.hpp"

namespace hire {

std::string to_string(KernelMode mode) { return mode == KernelMode::kExact ? "exact" : "taylor2"; }

std::string to_string(Variant variant) {
  switch (variant) {
    case Variant::kCE:
      return "ce";
    case Variant::kNKD:
      return "nkd";
    case Variant::kRKD:
      return "rkd";
    case Variant::kHIRE:
      return "hire";
  }
  return "hire";
}

KernelMode parse_kernel_mode(const std::string& text) {
  if (text == "exact") return KernelMode::kExact;
  if (text == "taylor2") return KernelMode::kTaylor2;
  throw ConfigError("unknown kernel mode '" + text + "' (expected exact or taylor2)");
}

Variant parse_variant(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "ce") return Variant::kCE;
  if (t == "nkd") return Variant::kNKD;
  if (t == "rkd") return Variant::kRKD;
  if (t == "hire") return Variant::kHIRE;
  throw ConfigError("unknown variant '" + text + "' (expected ce, nkd, rkd or hire)");
}

double DistillConfig::effective_alpha() const {
  return variant == Variant::kNKD || variant == Variant::kHIRE ? alpha : 0.0;
}

double DistillConfig::effective_beta() const {
  return variant == Variant::kRKD || variant == Variant::kHIRE ? beta : 0.0;
}

void DistillConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
  if (!(beta >= 0.0)) throw ConfigError("beta must be non-negative");
  if (!(tau >= 1.0)) throw ConfigError("tau must be at least 1");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
}

// ---------------------------------------------------------------------------
// Attention parameters

void AttentionParams::for_each(const std::function<void(const std::string&, Matrix&)>& fn) {
  fn("attention.weight", weight);
  fn("attention.bias", bias);
  fn("attention.query", query);
}

void AttentionParams::for_each(const std::function<void(const std::string&, const Matrix&)>& fn) const {
  fn("attention.weight", weight);
  fn("attention.bias", bias);
  fn("attention.query", query);
}

AttentionParams init_attention(std::size_t hidden, Rng& rng, std::size_t attention_dim) {
  const std::size_t da = attention_dim == 0 ? hidden : attention_dim;
  AttentionParams p;
  p.weight = glorot_init(da, hidden, rng);
  p.bias = Matrix(1, da, 0.0);
  p.query = glorot_init(da, 1, rng);
  return p;
}

BoundAttention bind(Tape& tape, const AttentionParams& params, bool trainable) {
  auto put = [&](const Matrix& m) { return trainable ? tape.variable(m) : tape.constant(m); };
  return BoundAttention{put(params.weight), put(params.bias), put(params.query)};
}

AttentionParams gradients(const Tape& tape, const BoundAttention& bound) {
  return AttentionParams{tape.grad_or_zero(bound.weight), tape.grad_or_zero(bound.bias),
                         tape.grad_or_zero(bound.query)};
}

// ---------------------------------------------------------------------------
// Node-level losses

Tensor cross_entropy(const Tensor& logits, std::span<const std::size_t> labels) {
  const std::size_t n = logits.rows();
  const std::size_t c = logits.cols();
  if (n == 0) throw DegenerateInputError("cross_entropy over zero rows");
  if (labels.size() != n) {
    throw ShapeError("cross_entropy: " + std::to_string(labels.size()) + " labels for " + std::to_string(n) + " rows");
  }
  Matrix onehot(n, c, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] >= c) {
      throw ValidationError("cross_entropy: label " + std::to_string(labels[i]) + " out of range for " +
                            std::to_string(c) + " classes");
    }
    onehot(i, labels[i]) = 1.0;
  }
  Tape& tape = *logits.tape();
  Tensor picked = sum(mul(log_softmax_rows(logits, 1.0), tape.constant(std::move(onehot))), Axis::kAll);
  return scale(picked, -1.0 / static_cast<double>(n));
}

Tensor kd_loss(const Tensor& student_logits, const Matrix& teacher_logits, double tau) {
  if (!(tau > 0.0)) throw ConfigError("temperature must be positive");
  if (!student_logits.matrix().same_shape(teacher_logits)) {
    throw ShapeError("kd_loss: student " + student_logits.matrix().shape_string() + " vs teacher " +
                     teacher_logits.shape_string());
  }
  const std::size_t n = teacher_logits.rows;
  if (n == 0) throw DegenerateInputError("kd_loss over zero rows");
  // Teacher soft labels and their negative entropy sum_ij p log p (0 log 0 = 0).
  Matrix p(teacher_logits.rows, teacher_logits.cols);
  double neg_entropy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < p.cols; ++j) mx = std::max(mx, teacher_logits(i, j) / tau);
    double s = 0.0;
    for (std::size_t j = 0; j < p.cols; ++j) s += std::exp(teacher_logits(i, j) / tau - mx);
    const double lse = mx + std::log(s);
    for (std::size_t j = 0; j < p.cols; ++j) {
      const double lp = teacher_logits(i, j) / tau - lse;
      p(i, j) = std::exp(lp);
      if (p(i, j) > 0.0) neg_entropy += p(i, j) * lp;
    }
  }
  Tape& tape = *student_logits.tape();
  Tensor cross = sum(mul(log_softmax_rows(student_logits, tau), tape.constant(std::move(p))), Axis::kAll);
  // sum KL = sum p log p - sum p log q
  Tensor kl_sum = add_scalar(scale(cross, -1.0), neg_entropy);
  return scale(kl_sum, tau * tau / static_cast<double>(n));
}

NkdParts nkd_loss(const Tensor& student_logits, const Matrix& teacher_logits, std::span<const std::size_t> labels,
                  double alpha, double tau) {
  if (!(tau > 0.0)) throw ConfigError("temperature must be positive");
  Tensor ce = cross_entropy(student_logits, labels);
  Tensor kd = kd_loss(student_logits, teacher_logits, tau);
  if (alpha == 0.0) return NkdParts{ce, ce, kd};
  Tensor total = add(scale(ce, 1.0 - alpha), scale(kd, alpha));
  return NkdParts{total, ce, kd};
}

// ---------------------------------------------------------------------------
// Relation-level losses

Tensor type_mean_embeddings(std::span<const Tensor> hidden_by_type) {
  if (hidden_by_type.empty()) throw DegenerateInputError("no node types to average");
  std::vector<Tensor> rows;
  rows.reserve(hidden_by_type.size());
  for (std::size_t k = 0; k < hidden_by_type.size(); ++k) {
    if (hidden_by_type[k].rows() == 0) {
      throw DegenerateInputError("node type " + std::to_string(k) + " has no nodes to average");
    }
    rows.push_back(mean(hidden_by_type[k], Axis::kRows));
  }
  return concat_rows(rows);
}

Matrix type_mean_embeddings(std::span<const Matrix> hidden_by_type) {
  Tape tape;
  std::vector<Tensor> h;
  for (const Matrix& m : hidden_by_type) h.push_back(tape.constant(m));
  return type_mean_embeddings(h).matrix();
}

double rbf_similarity(std::span<const double> x, std::span<const double> y, double sigma, KernelMode mode) {
  if (x.size() != y.size()) throw ShapeError("rbf_similarity: vector lengths differ");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
  const double s = -d2 / (2.0 * sigma * sigma);
  return mode == KernelMode::kExact ? std::exp(s) : 1.0 + s + 0.5 * s * s;
}

Tensor metacorr(const Tensor& type_means, double sigma, KernelMode mode) {
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  Tensor s = scale(pairwise_sq_dist(type_means), -1.0 / (2.0 * sigma * sigma));
  if (mode == KernelMode::kExact) return exp(s);
  return add_scalar(add(s, scale(mul(s, s), 0.5)), 1.0);
}

Matrix metacorr(const Matrix& type_means, double sigma, KernelMode mode) {
  Tape tape;
  return metacorr(tape.constant(type_means), sigma, mode).matrix();
}

Tensor type_attention(const Tensor& type_means, const BoundAttention& att) {
  if (type_means.cols() != att.weight.cols()) {
    throw ShapeError("type_attention: embeddings of width " + std::to_string(type_means.cols()) +
                     " vs attention weight " + att.weight.matrix().shape_string());
  }
  Tensor hidden = tanh(add_row(matmul(type_means, transpose(att.weight)), att.bias));
  Tensor scores = matmul(hidden, att.query);  // K x 1
  return softmax_rows(transpose(scores), 1.0);
}

Tensor rkd_from_corr(const Tensor& alpha, const Tensor& student_corr, const Tensor& teacher_corr) {
  Tensor diff = sub(student_corr, teacher_corr);
  Tensor per_row = sum(mul(diff, diff), Axis::kCols);  // K x 1
  if (alpha.rows() != 1 || alpha.cols() != per_row.rows()) {
    throw ShapeError("rkd: attention row " + alpha.matrix().shape_string() + " vs " +
                     std::to_string(per_row.rows()) + " types");
  }
  return matmul(alpha, per_row);
}

RkdParts rkd_loss(std::span<const Tensor> hidden_s, const Matrix& teacher_corr, const BoundAttention& att,
                  const DistillConfig& cfg) {
  if (hidden_s.size() != teacher_corr.rows || teacher_corr.rows != teacher_corr.cols) {
    throw ValidationError("rkd: student has " + std::to_string(hidden_s.size()) + " node types, teacher " +
                          teacher_corr.shape_string());
  }
  Tensor means = type_mean_embeddings(hidden_s);
  Tensor corr_s = metacorr(means, cfg.sigma, cfg.kernel);
  Tensor alpha = type_attention(means, att);
  Tensor loss = rkd_from_corr(alpha, corr_s, means.tape()->constant(teacher_corr));
  return RkdParts{loss, alpha};
}

RkdParts rkd_loss(std::span<const Tensor> hidden_s, std::span<const Matrix> hidden_t, const BoundAttention& att,
                  const DistillConfig& cfg) {
  if (hidden_s.size() != hidden_t.size()) {
    throw ValidationError("rkd: student has " + std::to_string(hidden_s.size()) + " node types, teacher " +
                          std::to_string(hidden_t.size()));
  }
  for (std::size_t k = 0; k < hidden_s.size(); ++k) {
    if (hidden_s[k].cols() != hidden_t[k].cols) throw ValidationError("rkd: embedding widths differ");
  }
  return rkd_loss(hidden_s, metacorr(type_mean_embeddings(hidden_t), cfg.sigma, cfg.kernel), att, cfg);
}

TeacherOutputs teacher_outputs(const GraphInput& input, const ModelParams& teacher, const DistillConfig& cfg) {
  Tape tape;
  Rng unused(0);
  ForwardOutput out = forward(tape, input, bind(tape, teacher, false), 0.0, unused, Mode::kEval);
  TeacherOutputs t;
  t.logits = out.logits.matrix();
  for (const Tensor& h : out.hidden) t.hidden.push_back(h.matrix());
  t.type_means = type_mean_embeddings(std::span<const Matrix>(t.hidden));
  t.corr = metacorr(t.type_means, cfg.sigma, cfg.kernel);
  return t;
}

HireLoss hire_loss(const ForwardOutput& student, const TeacherOutputs& teacher, std::span<const std::size_t> rows,
                   std::span<const std::size_t> labels, const BoundAttention& att, const DistillConfig& cfg) {
  cfg.validate();
  Tape& tape = *student.logits.tape();
  Tensor logits = select_rows(student.logits, rows);
  Matrix teacher_rows(rows.size(), teacher.logits.cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < teacher.logits.cols; ++j) teacher_rows(i, j) = teacher.logits(rows[i], j);

  const double alpha = cfg.effective_alpha();
  const double beta = cfg.effective_beta();
  NkdParts nkd = nkd_loss(logits, teacher_rows, labels, alpha, cfg.tau);
  RkdParts rkd = rkd_loss(student.hidden, teacher.corr, att, cfg);

  HireLoss out;
  out.total = beta == 0.0 ? nkd.total : add(nkd.total, scale(rkd.loss, beta));
  out.ce = nkd.ce.item();
  out.kd = nkd.kd.item();
  out.rkd = rkd.loss.item();
  const auto a = rkd.attention.values();
  out.attention.assign(a.begin(), a.end());
  const auto at = type_attention(tape.constant(teacher.type_means), att).values();
  out.teacher_attention.assign(at.begin(), at.end());
  return out;
}

}  // namespace hire
