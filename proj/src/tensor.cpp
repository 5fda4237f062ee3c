#include "hire/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hire/error.hpp"

namespace hire {

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t r, std::size_t c, std::vector<double> values)
    : rows(r), cols(c), data(std::move(values)) {
  if (data.size() != rows * cols) {
    throw ShapeError("matrix value count " + std::to_string(data.size()) + " does not match shape " +
                     shape_string());
  }
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> values) {
  Matrix m;
  m.rows = values.size();
  m.cols = m.rows == 0 ? 0 : values.begin()->size();
  m.data.reserve(m.rows * m.cols);
  for (const auto& row : values) {
    if (row.size() != m.cols) throw ShapeError("ragged rows in Matrix::from_rows");
    m.data.insert(m.data.end(), row.begin(), row.end());
  }
  return m;
}

std::string Matrix::shape_string() const {
  std::ostringstream os;
  os << rows << "x" << cols;
  return os.str();
}

// ---------------------------------------------------------------------------
// Tensor handle

std::size_t Tensor::rows() const { return matrix().rows; }
std::size_t Tensor::cols() const { return matrix().cols; }
std::span<const double> Tensor::values() const { return matrix().data; }
const Matrix& Tensor::matrix() const {
  if (!tape_) throw ContractError("use of an unbound tensor handle");
  return tape_->value(index_);
}

double Tensor::item() const {
  const Matrix& m = matrix();
  if (m.rows != 1 || m.cols != 1) throw ContractError("item() on a " + m.shape_string() + " tensor");
  return m.data[0];
}

bool Tensor::requires_grad() const { return tape_ && tape_->requires_grad(index_); }

std::optional<Matrix> Tensor::grad() const {
  if (!tape_) return std::nullopt;
  return tape_->grad(index_);
}

// ---------------------------------------------------------------------------
// Tape

Tensor Tape::constant(Matrix value) {
  nodes_.push_back(Node{std::move(value), {}, nullptr, false, std::nullopt});
  return Tensor(this, nodes_.size() - 1);
}

Tensor Tape::variable(Matrix value) {
  nodes_.push_back(Node{std::move(value), {}, nullptr, true, std::nullopt});
  return Tensor(this, nodes_.size() - 1);
}

Tensor Tape::record(Matrix value, std::vector<std::size_t> parents, BackwardFn backward) {
  bool needs = false;
  for (std::size_t p : parents) {
    if (p >= nodes_.size()) throw ContractError("tape parent index out of order");
    needs = needs || nodes_[p].requires_grad;
  }
  nodes_.push_back(Node{std::move(value), std::move(parents), needs ? std::move(backward) : nullptr,
                        needs, std::nullopt});
  return Tensor(this, nodes_.size() - 1);
}

Matrix& Tape::grad_buffer(std::size_t i) {
  Node& n = nodes_[i];
  if (!n.grad) n.grad = Matrix(n.value.rows, n.value.cols, 0.0);
  return *n.grad;
}

Matrix Tape::grad_or_zero(const Tensor& t) const {
  const Node& n = nodes_[t.index()];
  if (n.grad) return *n.grad;
  return Matrix(n.value.rows, n.value.cols, 0.0);
}

void Tape::clear_grads() {
  for (Node& n : nodes_) n.grad.reset();
}

void Tape::backward(const Tensor& output) {
  if (output.tape() != this) throw ContractError("backward() on a tensor from another tape");
  const std::size_t out = output.index();
  const Matrix& v = nodes_[out].value;
  if (v.rows != 1 || v.cols != 1) {
    throw ContractError("backward() needs a 1x1 output, got " + v.shape_string());
  }
  if (!nodes_[out].requires_grad) return;
  grad_buffer(out).data[0] += 1.0;
  for (std::size_t i = out + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.backward && n.grad) n.backward(*this, i);
  }
}

// ---------------------------------------------------------------------------
// Operations

namespace {

Tape& same_tape(const Tensor& a, const Tensor& b) {
  if (!a.valid() || !b.valid() || a.tape() != b.tape()) {
    throw ContractError("operands live on different tapes");
  }
  return *a.tape();
}

Tape& tape_of(const Tensor& a) {
  if (!a.valid()) throw ContractError("use of an unbound tensor handle");
  return *a.tape();
}

void require_same_shape(const char* op, const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " + b.shape_string());
  }
}

// The kernels work on restrict-qualified raw pointers: indexing through the
// vectors lets the compiler assume the output may alias their internals,
// which blocks vectorization.

// out += a * b^T   (a: m x n, b: k x n, out: m x k). Row-axpy form over a
// transposed copy of b, so the inner loop runs along contiguous output rows.
void gemm_nt(const Matrix& a, const Matrix& b, Matrix& out) {
  const std::size_t m = a.rows, n = a.cols, k = b.rows;
  std::vector<double> bt(n * k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t t = 0; t < n; ++t) bt[t * k + j] = b.data[j * n + t];
  const double* __restrict ap = a.data.data();
  const double* __restrict btp = bt.data();
  double* __restrict op = out.data.data();
  for (std::size_t i = 0; i < m; ++i) {
    double* __restrict orow = op + i * k;
    for (std::size_t t = 0; t < n; ++t) {
      const double av = ap[i * n + t];
      const double* __restrict btr = btp + t * k;
      for (std::size_t j = 0; j < k; ++j) orow[j] += av * btr[j];
    }
  }
}

// out += a^T * b   (a: k x m, b: k x n, out: m x n)
void gemm_tn(const Matrix& a, const Matrix& b, Matrix& out) {
  const std::size_t k = a.rows, m = a.cols, n = b.cols;
  const double* __restrict ap = a.data.data();
  const double* __restrict bp = b.data.data();
  double* __restrict op = out.data.data();
  for (std::size_t t = 0; t < k; ++t) {
    const double* __restrict ar = ap + t * m;
    const double* __restrict br = bp + t * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double av = ar[i];
      double* __restrict orow = op + i * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += av * br[j];
    }
  }
}

// out += a * b   (a: m x k, b: k x n)
void gemm_nn(const Matrix& a, const Matrix& b, Matrix& out) {
  const std::size_t m = a.rows, k = a.cols, n = b.cols;
  const double* __restrict ap = a.data.data();
  const double* __restrict bp = b.data.data();
  double* __restrict op = out.data.data();
  for (std::size_t i = 0; i < m; ++i) {
    double* __restrict orow = op + i * n;
    for (std::size_t t = 0; t < k; ++t) {
      const double av = ap[i * k + t];
      const double* __restrict brow = bp + t * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
    }
  }
}

template <typename F>
Tensor unary(const Tensor& a, F&& f, Tape::BackwardFn backward) {
  Tape& tape = tape_of(a);
  const Matrix& av = a.matrix();
  Matrix out(av.rows, av.cols);
  for (std::size_t i = 0; i < av.size(); ++i) out.data[i] = f(av.data[i]);
  return tape.record(std::move(out), {a.index()}, std::move(backward));
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  Tape& tape = same_tape(a, b);
  const Matrix& av = a.matrix();
  const Matrix& bv = b.matrix();
  if (av.cols != bv.rows) {
    throw ShapeError("matmul: inner dimensions differ, " + av.shape_string() + " x " + bv.shape_string());
  }
  Matrix out(av.rows, bv.cols, 0.0);
  gemm_nn(av, bv, out);
  const std::size_t ia = a.index(), ib = b.index();
  return tape.record(std::move(out), {ia, ib}, [ia, ib](Tape& t, std::size_t self) {
    const Matrix& g = *t.grad(self);
    if (t.requires_grad(ia)) gemm_nt(g, t.value(ib), t.grad_buffer(ia));
    if (t.requires_grad(ib)) gemm_tn(t.value(ia), g, t.grad_buffer(ib));
  });
}

Tensor transpose(const Tensor& a) {
  Tape& tape = tape_of(a);
  const Matrix& av = a.matrix();
  Matrix out(av.cols, av.rows);
  for (std::size_t i = 0; i < av.rows; ++i)
    for (std::size_t j = 0; j < av.cols; ++j) out(j, i) = av(i, j);
  const std::size_t ia = a.index();
  return tape.record(std::move(out), {ia}, [ia](Tape& t, std::size_t self) {
    const Matrix& g = *t.grad(self);
    Matrix& ga = t.grad_buffer(ia);
    for (std::size_t i = 0; i < ga.rows; ++i)
      for (std::size_t j = 0; j < ga.cols; ++j) ga(i, j) += g(j, i);
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  Tape& tape = same_tape(a, b);
  require_same_shape("add", a.matrix(), b.matrix());
  const Matrix& av = a.matrix();
  const Matrix& bv = b.matrix();
  Matrix out(av.rows, av.cols);
  for (std::size_t i = 0; i < av.size(); ++i) out.data[i] = av.data[i] + bv.data[i];
  const std::size_t ia = a.index(), ib = b.index();
  return tape.record(std::move(out), {ia, ib}, [ia, ib](Tape& t, std::size_t self) {
    const Matrix& g = *t.grad(self);
    for (std::size_t p : {ia, ib}) {
      if (!t.requires_grad(p)) continue;
      Matrix& gp = t.grad_buffer(p);
      for (std::size_t i = 0; i < g.size(); ++i) gp.data[i] += g.data[i];
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  Tape& tape = same_tape(a, b);
  require_same_shape("sub", a.matrix(), b.matrix());
  const Matrix& av = a.matrix();
  const Matrix& bv = b.matrix();
  Matrix out(av.rows, av.cols);
  for (std::size_t i = 0; i < av.size(); ++i) out.data[i] = av.data[i] - bv.data[i];
  const std::size_t ia = a.index(), ib = b.index();
  return tape.record(std::move(out), {ia, ib}, [ia, ib](Tape& t, std::size_t self) {
    const Matrix& g = *t.grad(self);
    if (t.requires_grad(ia)) {
      Matrix& ga = t.grad_buffer(ia);
      for (std::size_t i = 0; i < g.size(); ++i) ga.data[i] += g.data[i];
    }
    if (t.requires_grad(ib)) {
      Matrix& gb = t.grad_buffer(ib);
      for (std::size_t i = 0; i < g.size(); ++i) gb.data[i] -= g.data[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  Tape& tape = same_tape(a, b);
  require_same_shape("mul", a.matrix(), b.matrix());
  const Matrix& av = a.matrix();
  const Matrix& bv = b.matrix();
  Matrix out(av.rows, av.cols);
  for (std::size_t i = 0; i < av.size(); ++i) out.data[i] = av.data[i] * bv.data[i];
  const std::size_t ia = a.index(), ib = b.index();
  return tape.record(std::move(out), {ia, ib}, [ia, ib](Tape& t, std::size_t self) {
    const Matrix& g = *t.grad(self);
    if (t.requires_grad(ia)) {
      const Matrix& bv = t.value(ib);
      Matrix& ga = t.grad_buffer(ia);
      for (std::size_t i = 0; i < g.size(); ++i) ga.data[i] += g.data[i] * bv.data[i];
    }
    if (t.requires_grad(ib)) {
      const Matrix& av = t.value(ia);
      Matrix& gb = t.grad_buffer(ib);
      for (std::size_t i = 0; i < g.size(); ++i) gb.data[i] += g.data[i] * av.data[i];
    }
  });
}

Tensor scale(const Tensor& a, double factor) {
  const std::size_t ia = a.index();
  return unary(
      a, [factor](double x) { return factor * x; },
      [ia, factor](Tape& t, std::size_t self) {
        const Matrix& g = *t.grad(self);
        Matrix& ga = t.grad_buffer(ia);
        for (std::size_t i = 0; i < g.size(); ++i) ga.data[i] += factor * g.data[i];
      });
}

Tensor add_scalar(const Tensor& a, double offset) {
  const std::size_t ia = a.index();
  return unary(
      a, [offset](double x) { return x + offset; },
      [ia](Tape& t, std::size_t self) {
        const Matrix& g = *t.grad(self);
        Matrix& ga = t.grad_buffer(ia);
        for (std::size_t i = 0; i < g.size(); ++i) ga.data[i] += g.data[i];
      });
}

Tensor add_row(const Tensor& a, const Tensor& row) {
  Tape& tape = same_tape(a, row);
  const Matrix& av = a.matrix();
  const Matrix& rv = row.matrix();
  if (rv.rows != 1 || rv.cols != av.cols) {
    throw ShapeError("add_row: expected a 1x" + std::to_string(av.cols) + " row, got " + rv.shape_string());
  }
  Matrix out(av.rows, av.cols);
  for (std::size_t i = 0; i < av.rows; ++i)
    for (std::size_t j = 0; j < av.cols; ++j) out(i, j) = av(i, j) + rv.data[j];
  const std::size_t ia = a.index(), ir = row.index();
  return tape.record(std::move(out), {ia, ir}, [ia, ir](Tape& t, std::size_t self) {
    const Matrix& g = *t.grad(self);
    if (t.requires_grad(ia)) {
      Matrix& ga = t.grad_buffer(ia);
      for (std::size_t i = 0; i < g.size(); ++i) ga.data[i] += g.data[i];
    }
    if (t.requires_grad(ir)) {
      Matrix& gr = t.grad_buffer(ir);
      for (std::size_t i = 0; i < g.rows; ++i)
        for (std::size_t j = 0; j < g.cols; ++j) gr.data[j] += g(i, j);
    }
  });
}

Tensor relu(const Tensor& a) {
  const std::size_t ia = a.index();
  return unary(
      a, [](double x) { return x > 0.0 ? x : 0.0; },
      [ia](Tape& t, std::size_t self) {
        const Matrix& g = *t.grad(self);
        const Matrix& av = t.value(ia);
        Matrix& ga = t.grad_buffer(ia);
        // relu'(0) = 0
        for (std::size_t i = 0; i < g.size(); ++i)
          if (av.data[i] > 0.0) ga.data[i] += g.data[i];
      });
}

Tensor tanh(const Tensor& a) {
  const std::size_t ia = a.index();
  return unary(
      a, [](double x) { return std::tanh(x); },
      [ia](Tape& t, std::size_t self) {
        const Matrix& g = *t.grad(self);
        const Matrix& y = t.value(self);
        Matrix& ga = t.grad_buffer(ia);
        for (std::size_t i = 0; i < g.size(); ++i) ga.data[i] += g.data[i] * (1.0 - y.data[i] * y.data[i]);
      });
}

Tensor exp(const Tensor& a) {
  const std::size_t ia = a.index();
  return unary(
      a, [](double x) { return std::exp(x); },
      [ia](Tape& t, std::size_t self) {
        const Matrix& g = *t.grad(self);
        const Matrix& y = t.value(self);
        Matrix& ga = t.grad_buffer(ia);
        for (std::size_t i = 0; i < g.size(); ++i) ga.data[i] += g.data[i] * y.data[i];
      });
}

Tensor log(const Tensor& a) {
  for (double x : a.values()) {
    if (!(x > 0.0)) throw DomainError("log: non-positive input " + std::to_string(x));
  }
  const std::size_t ia = a.index();
  return unary(
      a, [](double x) { return std::log(x); },
      [ia](Tape& t, std::size_t self) {
        const Matrix& g = *t.grad(self);
        const Matrix& av = t.value(ia);
        Matrix& ga = t.grad_buffer(ia);
        for (std::size_t i = 0; i < g.size(); ++i) ga.data[i] += g.data[i] / av.data[i];
      });
}

namespace {

Tensor reduce(const Tensor& a, Axis axis, bool average) {
  Tape& tape = tape_of(a);
  const Matrix& av = a.matrix();
  if (av.size() == 0) throw DegenerateInputError("reduction over an empty " + av.shape_string() + " tensor");
  Matrix out;
  double denom = 1.0;
  switch (axis) {
    case Axis::kRows:
      out = Matrix(1, av.cols, 0.0);
      for (std::size_t i = 0; i < av.rows; ++i)
        for (std::size_t j = 0; j < av.cols; ++j) out.data[j] += av(i, j);
      denom = static_cast<double>(av.rows);
      break;
    case Axis::kCols:
      out = Matrix(av.rows, 1, 0.0);
      for (std::size_t i = 0; i < av.rows; ++i)
        for (std::size_t j = 0; j < av.cols; ++j) out.data[i] += av(i, j);
      denom = static_cast<double>(av.cols);
      break;
    case Axis::kAll:
      out = Matrix(1, 1, 0.0);
      for (double x : av.data) out.data[0] += x;
      denom = static_cast<double>(av.size());
      break;
  }
  if (average)
    for (double& x : out.data) x /= denom;
  const double factor = average ? 1.0 / denom : 1.0;
  const std::size_t ia = a.index();
  return tape.record(std::move(out), {ia}, [ia, axis, factor](Tape& t, std::size_t self) {
    const Matrix& g = *t.grad(self);
    Matrix& ga = t.grad_buffer(ia);
    for (std::size_t i = 0; i < ga.rows; ++i) {
      for (std::size_t j = 0; j < ga.cols; ++j) {
        const double gv = axis == Axis::kRows ? g.data[j] : axis == Axis::kCols ? g.data[i] : g.data[0];
        ga(i, j) += factor * gv;
      }
    }
  });
}

void check_tau(double tau) {
  if (!(tau > 0.0)) throw ConfigError("softmax temperature must be positive, got " + std::to_string(tau));
}

}  // namespace

Tensor sum(const Tensor& a, Axis axis) { return reduce(a, axis, false); }
Tensor mean(const Tensor& a, Axis axis) { return reduce(a, axis, true); }

Tensor softmax_rows(const Tensor& z, double tau) {
  check_tau(tau);
  Tape& tape = tape_of(z);
  const Matrix& zv = z.matrix();
  Matrix out(zv.rows, zv.cols);
  for (std::size_t i = 0; i < zv.rows; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < zv.cols; ++j) mx = std::max(mx, zv(i, j) / tau);
    double s = 0.0;
    for (std::size_t j = 0; j < zv.cols; ++j) {
      out(i, j) = std::exp(zv(i, j) / tau - mx);
      s += out(i, j);
    }
    for (std::size_t j = 0; j < zv.cols; ++j) out(i, j) /= s;
  }
  const std::size_t iz = z.index();
  return tape.record(std::move(out), {iz}, [iz, tau](Tape& t, std::size_t self) {
    const Matrix& g = *t.grad(self);
    const Matrix& p = t.value(self);
    Matrix& gz = t.grad_buffer(iz);
    for (std::size_t i = 0; i < p.rows; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < p.cols; ++j) dot += g(i, j) * p(i, j);
      for (std::size_t j = 0; j < p.cols; ++j) gz(i, j) += p(i, j) * (g(i, j) - dot) / tau;
    }
  });
}

Tensor log_softmax_rows(const Tensor& z, double tau) {
  check_tau(tau);
  Tape& tape = tape_of(z);
  const Matrix& zv = z.matrix();
  Matrix out(zv.rows, zv.cols);
  for (std::size_t i = 0; i < zv.rows; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < zv.cols; ++j) mx = std::max(mx, zv(i, j) / tau);
    double s = 0.0;
    for (std::size_t j = 0; j < zv.cols; ++j) s += std::exp(zv(i, j) / tau - mx);
    const double lse = mx + std::log(s);
    for (std::size_t j = 0; j < zv.cols; ++j) out(i, j) = zv(i, j) / tau - lse;
  }
  const std::size_t iz = z.index();
  return tape.record(std::move(out), {iz}, [iz, tau](Tape& t, std::size_t self) {
    const Matrix& g = *t.grad(self);
    const Matrix& lp = t.value(self);
    Matrix& gz = t.grad_buffer(iz);
    for (std::size_t i = 0; i < lp.rows; ++i) {
      double gs = 0.0;
      for (std::size_t j = 0; j < lp.cols; ++j) gs += g(i, j);
      for (std::size_t j = 0; j < lp.cols; ++j) gz(i, j) += (g(i, j) - std::exp(lp(i, j)) * gs) / tau;
    }
  });
}

Tensor select_rows(const Tensor& a, std::span<const std::size_t> rows) {
  Tape& tape = tape_of(a);
  const Matrix& av = a.matrix();
  Matrix out(rows.size(), av.cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= av.rows) {
      throw ShapeError("select_rows: row " + std::to_string(rows[r]) + " out of range for " + av.shape_string());
    }
    std::copy_n(&av.data[rows[r] * av.cols], av.cols, &out.data[r * av.cols]);
  }
  const std::size_t ia = a.index();
  std::vector<std::size_t> picked(rows.begin(), rows.end());
  return tape.record(std::move(out), {ia}, [ia, picked = std::move(picked)](Tape& t, std::size_t self) {
    const Matrix& g = *t.grad(self);
    Matrix& ga = t.grad_buffer(ia);
    for (std::size_t r = 0; r < picked.size(); ++r)
      for (std::size_t j = 0; j < g.cols; ++j) ga(picked[r], j) += g(r, j);
  });
}

Tensor concat_rows(std::span<const Tensor> parts) {
  if (parts.empty()) throw DegenerateInputError("concat_rows of zero tensors");
  Tape& tape = tape_of(parts[0]);
  const std::size_t cols = parts[0].cols();
  std::size_t rows = 0;
  std::vector<std::size_t> parents;
  for (const Tensor& p : parts) {
    same_tape(parts[0], p);
    if (p.cols() != cols) {
      throw ShapeError("concat_rows: column count " + std::to_string(p.cols()) + " vs " + std::to_string(cols));
    }
    rows += p.rows();
    parents.push_back(p.index());
  }
  Matrix out(rows, cols);
  std::size_t offset = 0;
  for (const Tensor& p : parts) {
    std::copy(p.values().begin(), p.values().end(), out.data.begin() + static_cast<std::ptrdiff_t>(offset));
    offset += p.matrix().size();
  }
  return tape.record(std::move(out), parents, [parents](Tape& t, std::size_t self) {
    const Matrix& g = *t.grad(self);
    std::size_t off = 0;
    for (std::size_t p : parents) {
      const std::size_t n = t.value(p).size();
      if (t.requires_grad(p)) {
        Matrix& gp = t.grad_buffer(p);
        for (std::size_t i = 0; i < n; ++i) gp.data[i] += g.data[off + i];
      }
      off += n;
    }
  });
}

Tensor neighbor_mean(const Tensor& src, const std::vector<std::vector<std::size_t>>& lists) {
  Tape& tape = tape_of(src);
  const Matrix& sv = src.matrix();
  Matrix out(lists.size(), sv.cols, 0.0);
  for (std::size_t u = 0; u < lists.size(); ++u) {
    if (lists[u].empty()) continue;
    double* orow = &out.data[u * sv.cols];
    for (std::size_t v : lists[u]) {
      if (v >= sv.rows) throw ShapeError("neighbor_mean: source index out of range");
      const double* srow = &sv.data[v * sv.cols];
      for (std::size_t j = 0; j < sv.cols; ++j) orow[j] += srow[j];
    }
    const double inv = 1.0 / static_cast<double>(lists[u].size());
    for (std::size_t j = 0; j < sv.cols; ++j) orow[j] *= inv;
  }
  const std::size_t is = src.index();
  // The adjacency outlives the tape in every caller; a pointer avoids copying it per layer.
  const auto* adj = &lists;
  return tape.record(std::move(out), {is}, [is, adj](Tape& t, std::size_t self) {
    const Matrix& g = *t.grad(self);
    Matrix& gs = t.grad_buffer(is);
    for (std::size_t u = 0; u < adj->size(); ++u) {
      const auto& nbrs = (*adj)[u];
      if (nbrs.empty()) continue;
      const double inv = 1.0 / static_cast<double>(nbrs.size());
      const double* grow = &g.data[u * g.cols];
      for (std::size_t v : nbrs) {
        double* srow = &gs.data[v * gs.cols];
        for (std::size_t j = 0; j < g.cols; ++j) srow[j] += inv * grow[j];
      }
    }
  });
}

Tensor pairwise_sq_dist(const Tensor& h) {
  Tape& tape = tape_of(h);
  const Matrix& hv = h.matrix();
  const std::size_t k = hv.rows;
  Matrix out(k, k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < hv.cols; ++c) {
        const double d = hv(i, c) - hv(j, c);
        s += d * d;
      }
      out(i, j) = s;
      out(j, i) = s;
    }
  }
  const std::size_t ih = h.index();
  return tape.record(std::move(out), {ih}, [ih](Tape& t, std::size_t self) {
    const Matrix& g = *t.grad(self);
    const Matrix& hv = t.value(ih);
    Matrix& gh = t.grad_buffer(ih);
    for (std::size_t i = 0; i < hv.rows; ++i) {
      for (std::size_t j = 0; j < hv.rows; ++j) {
        if (i == j) continue;
        const double w = 2.0 * (g(i, j) + g(j, i));
        for (std::size_t c = 0; c < hv.cols; ++c) gh(i, c) += w * (hv(i, c) - hv(j, c));
      }
    }
  });
}

Matrix glorot_init(std::size_t rows, std::size_t cols, Rng& rng) {
  if (rows == 0 || cols == 0) {
    throw ShapeError("glorot_init: dimensions must be positive, got " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (double& x : m.data) x = rng.uniform(-bound, bound);
  return m;
}

}  // namespace hire
