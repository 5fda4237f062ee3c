#pragma once

#include <span>
#include <string>
#include <vector>

#include "hire/rgcn.hpp"
#include "hire/rng.hpp"
#include "hire/tensor.hpp"

namespace hire {

enum class KernelMode { kExact, kTaylor2 };
enum class Variant { kCE, kNKD, kRKD, kHIRE };

std::string to_string(KernelMode mode);
std::string to_string(Variant variant);
KernelMode parse_kernel_mode(const std::string& text);
Variant parse_variant(const std::string& text);

struct DistillConfig {
  double alpha = 0.5;
  double beta = 1.0;
  double tau = 8.0;
  double sigma = 1.0;
  KernelMode kernel = KernelMode::kExact;
  Variant variant = Variant::kHIRE;

  /// alpha after variant gating: CE and RKD drop the soft-label term.
  double effective_alpha() const;
  /// beta after variant gating: CE and NKD drop the relation term.
  double effective_beta() const;
  /// Throws ConfigError for alpha outside [0,1], beta < 0, tau < 1, sigma <= 0.
  void validate() const;
};

/// Type-attention layer: score_i = q^T tanh(W h_i + b), softmax over types.
struct AttentionParams {
  Matrix weight;  // d_a x d_hidden
  Matrix bias;    // 1 x d_a
  Matrix query;   // d_a x 1

  void for_each(const std::function<void(const std::string&, Matrix&)>& fn);
  void for_each(const std::function<void(const std::string&, const Matrix&)>& fn) const;

  friend bool operator==(const AttentionParams&, const AttentionParams&) = default;
};

/// Glorot weight and query, zero bias. d_a defaults to the hidden size.
AttentionParams init_attention(std::size_t hidden, Rng& rng, std::size_t attention_dim = 0);

struct BoundAttention {
  Tensor weight;
  Tensor bias;
  Tensor query;
};

BoundAttention bind(Tape& tape, const AttentionParams& params, bool trainable);
AttentionParams gradients(const Tape& tape, const BoundAttention& bound);

/// Mean over rows of -log softmax(logits)[label].
Tensor cross_entropy(const Tensor& logits, std::span<const std::size_t> labels);

/// tau^2 * (1/N) * sum_i KL(p_t^tau || p_s^tau); the teacher side is constant.
Tensor kd_loss(const Tensor& student_logits, const Matrix& teacher_logits, double tau);

struct NkdParts {
  Tensor total;
  Tensor ce;
  Tensor kd;
};

/// (1 - alpha) * CE + alpha * KD. alpha == 0 returns the CE tensor itself.
NkdParts nkd_loss(const Tensor& student_logits, const Matrix& teacher_logits, std::span<const std::size_t> labels,
                  double alpha, double tau);

/// K x d matrix whose row k is the mean embedding of node type k.
Tensor type_mean_embeddings(std::span<const Tensor> hidden_by_type);
Matrix type_mean_embeddings(std::span<const Matrix> hidden_by_type);

/// exp(s) or 1 + s + s^2/2 with s = -||x - y||^2 / (2 sigma^2).
double rbf_similarity(std::span<const double> x, std::span<const double> y, double sigma, KernelMode mode);

/// Pairwise kernel matrix between the rows of H.
Tensor metacorr(const Tensor& type_means, double sigma, KernelMode mode);
Matrix metacorr(const Matrix& type_means, double sigma, KernelMode mode);

/// 1 x K attention coefficients over the rows of H.
Tensor type_attention(const Tensor& type_means, const BoundAttention& att);

/// sum_{i,j} alpha_i (Ms_ij - Mt_ij)^2 with alpha a 1 x K row.
Tensor rkd_from_corr(const Tensor& alpha, const Tensor& student_corr, const Tensor& teacher_corr);

struct RkdParts {
  Tensor loss;
  Tensor attention;  // 1 x K student coefficients
};

/// Relation-level loss against a precomputed, frozen teacher kernel matrix.
RkdParts rkd_loss(std::span<const Tensor> hidden_s, const Matrix& teacher_corr, const BoundAttention& att,
                  const DistillConfig& cfg);
/// Same, deriving the teacher kernel matrix from teacher embeddings.
RkdParts rkd_loss(std::span<const Tensor> hidden_s, std::span<const Matrix> hidden_t, const BoundAttention& att,
                  const DistillConfig& cfg);

/// Teacher outputs computed once in eval mode and frozen.
struct TeacherOutputs {
  Matrix logits;               // all target nodes
  std::vector<Matrix> hidden;  // per node type
  Matrix type_means;           // K x d
  Matrix corr;                 // metacorr of type_means under the run's kernel
};

TeacherOutputs teacher_outputs(const GraphInput& input, const ModelParams& teacher, const DistillConfig& cfg);

struct HireLoss {
  Tensor total;
  double ce = 0.0;
  double kd = 0.0;
  double rkd = 0.0;
  std::vector<double> attention;          // student coefficients
  std::vector<double> teacher_attention;  // shared attention on teacher means, diagnostic only
};

/// Total objective NKD + beta * RKD with variant gating; all parts are
/// evaluated for logging even when their weight is zero.
HireLoss hire_loss(const ForwardOutput& student, const TeacherOutputs& teacher, std::span<const std::size_t> rows,
                   std::span<const std::size_t> labels, const BoundAttention& att, const DistillConfig& cfg);

}  // namespace hire
