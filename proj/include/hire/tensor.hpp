#pragma once

// Dense 2-D tensors on a recorded tape with reverse-mode differentiation.
//
// Values live in a Matrix. A Tensor is a lightweight handle to a node on a
// Tape; forward operations append nodes, Tape::backward walks them in reverse.
// Recorded values are never mutated, so a finished tape may be read from
// several threads.

#include <cstddef>
#include <deque>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hire/rng.hpp"

namespace hire {

/// Row-major dense matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
  Matrix(std::size_t r, std::size_t c, std::vector<double> values);

  /// Build from nested rows; every row must have the same length.
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> values);

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::size_t size() const { return data.size(); }
  bool same_shape(const Matrix& other) const { return rows == other.rows && cols == other.cols; }
  std::string shape_string() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

enum class Axis { kRows, kCols, kAll };

class Tape;

/// Handle to one recorded node. Cheap to copy; valid while its Tape lives.
class Tensor {
 public:
  Tensor() = default;

  std::size_t rows() const;
  std::size_t cols() const;
  std::span<const double> values() const;
  const Matrix& matrix() const;
  double at(std::size_t r, std::size_t c) const { return matrix()(r, c); }
  /// Value of a 1x1 tensor.
  double item() const;
  bool requires_grad() const;
  /// Accumulated gradient after Tape::backward, absent when none reached this node.
  std::optional<Matrix> grad() const;

  Tape* tape() const { return tape_; }
  std::size_t index() const { return index_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Tensor(Tape* tape, std::size_t index) : tape_(tape), index_(index) {}

  Tape* tape_ = nullptr;
  std::size_t index_ = 0;
};

class Tape {
 public:
  /// Propagates the node's output gradient into its parents' gradients.
  using BackwardFn = std::function<void(Tape&, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Tensor constant(Matrix value);
  Tensor variable(Matrix value);

  /// Append a node. `requires_grad` is the OR over parents by convention.
  Tensor record(Matrix value, std::vector<std::size_t> parents, BackwardFn backward);

  /// Reverse sweep from a 1x1 output. Gradients accumulate into any previous
  /// gradient buffers, so call clear_grads() between independent sweeps.
  void backward(const Tensor& output);
  void clear_grads();

  std::size_t size() const { return nodes_.size(); }
  const Matrix& value(std::size_t i) const { return nodes_[i].value; }
  bool requires_grad(std::size_t i) const { return nodes_[i].requires_grad; }
  const std::vector<std::size_t>& parents(std::size_t i) const { return nodes_[i].parents; }
  const std::optional<Matrix>& grad(std::size_t i) const { return nodes_[i].grad; }
  /// Gradient of node i, zeros when absent.
  Matrix grad_or_zero(const Tensor& t) const;

  /// Gradient buffer of node i, allocated on first use. Only valid for nodes
  /// that require gradients.
  Matrix& grad_buffer(std::size_t i);

 private:
  struct Node {
    Matrix value;
    std::vector<std::size_t> parents;
    BackwardFn backward;
    bool requires_grad = false;
    std::optional<Matrix> grad;
  };

  std::deque<Node> nodes_;  // stable addresses: values stay valid as the tape grows
};

// Forward operations. All operands must live on the same tape.

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor add_scalar(const Tensor& a, double offset);
/// a (n x c) plus a 1 x c row repeated over every row.
Tensor add_row(const Tensor& a, const Tensor& row);

Tensor relu(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor exp(const Tensor& a);
Tensor log(const Tensor& a);

Tensor sum(const Tensor& a, Axis axis);
Tensor mean(const Tensor& a, Axis axis);

/// Row-wise softmax of z / tau with max subtraction.
Tensor softmax_rows(const Tensor& z, double tau);
/// Row-wise log-softmax of z / tau; finite even when probabilities underflow.
Tensor log_softmax_rows(const Tensor& z, double tau);

Tensor select_rows(const Tensor& a, std::span<const std::size_t> rows);
Tensor concat_rows(std::span<const Tensor> parts);

/// Row u of the result is the mean of rows `lists[u]` of `src` (multiplicity
/// counted); empty lists give a zero row.
Tensor neighbor_mean(const Tensor& src, const std::vector<std::vector<std::size_t>>& lists);

/// K x K matrix of squared Euclidean distances between the rows of h.
Tensor pairwise_sq_dist(const Tensor& h);

/// Glorot/Xavier uniform in +-sqrt(6 / (rows + cols)).
Matrix glorot_init(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace hire
