#include "hire/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hire/error.hpp"

namespace hire {

F1Scores micro_macro_f1(std::span<const std::size_t> pred, std::span<const std::size_t> gold, std::size_t num_classes) {
  if (pred.empty()) throw DegenerateInputError("F1 over an empty prediction set");
  if (pred.size() != gold.size()) throw ShapeError("F1: prediction and gold lengths differ");
  std::vector<double> tp(num_classes, 0.0), fp(num_classes, 0.0), fn(num_classes, 0.0);
  double correct = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] >= num_classes || gold[i] >= num_classes) throw ValidationError("F1: label out of range");
    if (pred[i] == gold[i]) {
      tp[pred[i]] += 1.0;
      correct += 1.0;
    } else {
      fp[pred[i]] += 1.0;
      fn[gold[i]] += 1.0;
    }
  }
  F1Scores s;
  s.micro = correct / static_cast<double>(pred.size());
  s.precision.resize(num_classes);
  s.recall.resize(num_classes);
  s.f1.resize(num_classes);
  double macro = 0.0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    s.precision[c] = tp[c] + fp[c] > 0.0 ? tp[c] / (tp[c] + fp[c]) : 0.0;
    s.recall[c] = tp[c] + fn[c] > 0.0 ? tp[c] / (tp[c] + fn[c]) : 0.0;
    const double denom = 2.0 * tp[c] + fp[c] + fn[c];
    s.f1[c] = denom > 0.0 ? 2.0 * tp[c] / denom : 0.0;
    macro += s.f1[c];
  }
  s.macro = num_classes > 0 ? macro / static_cast<double>(num_classes) : 0.0;
  return s;
}

namespace {

struct Contingency {
  std::map<std::pair<std::size_t, std::size_t>, double> joint;
  std::map<std::size_t, double> rows;
  std::map<std::size_t, double> cols;
  double n = 0.0;
};

Contingency contingency(std::span<const std::size_t> a, std::span<const std::size_t> b, const char* what) {
  if (a.empty()) throw DegenerateInputError(std::string(what) + " of empty partitions");
  if (a.size() != b.size()) throw ShapeError(std::string(what) + ": partition lengths differ");
  Contingency t;
  for (std::size_t i = 0; i < a.size(); ++i) {
    t.joint[{a[i], b[i]}] += 1.0;
    t.rows[a[i]] += 1.0;
    t.cols[b[i]] += 1.0;
  }
  t.n = static_cast<double>(a.size());
  return t;
}

double entropy(const std::map<std::size_t, double>& counts, double n) {
  double h = 0.0;
  for (const auto& [_, c] : counts) {
    const double p = c / n;
    h -= p * std::log(p);
  }
  return h;
}

double choose2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

double nmi(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  const Contingency t = contingency(a, b, "nmi");
  if (t.rows.size() == 1 && t.cols.size() == 1) return 1.0;
  double mi = 0.0;
  for (const auto& [key, c] : t.joint) {
    const double pij = c / t.n;
    const double pi = t.rows.at(key.first) / t.n;
    const double pj = t.cols.at(key.second) / t.n;
    mi += pij * std::log(pij / (pi * pj));
  }
  const double norm = 0.5 * (entropy(t.rows, t.n) + entropy(t.cols, t.n));
  if (norm <= 0.0) return 0.0;
  return std::clamp(mi / norm, 0.0, 1.0);
}

double ari(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  const Contingency t = contingency(a, b, "ari");
  double index = 0.0;
  for (const auto& [_, c] : t.joint) index += choose2(c);
  double sa = 0.0, sb = 0.0;
  for (const auto& [_, c] : t.rows) sa += choose2(c);
  for (const auto& [_, c] : t.cols) sb += choose2(c);
  const double pairs = choose2(t.n);
  if (pairs == 0.0) return 1.0;
  const double expected = sa * sb / pairs;
  const double max_index = 0.5 * (sa + sb);
  // Zero denominator only when both partitions are all-in-one or all-singletons,
  // in which case they coincide.
  if (max_index - expected == 0.0) return 1.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace hire
