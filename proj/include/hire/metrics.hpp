#pragma once

#include <span>
#include <vector>

namespace hire {

struct F1Scores {
  double micro = 0.0;
  double macro = 0.0;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
};

/// Single-label multiclass F1. Micro equals accuracy; macro is the unweighted
/// mean of per-class F1, where a class absent from both sides scores 0.
F1Scores micro_macro_f1(std::span<const std::size_t> pred, std::span<const std::size_t> gold, std::size_t num_classes);

/// Mutual information over the arithmetic mean of the two entropies (natural
/// log). Two single-cluster partitions score 1.
double nmi(std::span<const std::size_t> a, std::span<const std::size_t> b);

/// Adjusted Rand index from the contingency table; 1 when the partitions are
/// identical up to relabeling.
double ari(std::span<const std::size_t> a, std::span<const std::size_t> b);

}  // namespace hire
