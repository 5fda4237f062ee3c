#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hire/hetgraph.hpp"
#include "hire/history.hpp"
#include "hire/metrics.hpp"
#include "hire/rgcn.hpp"

namespace hire {

struct MetricsReport {
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
  std::string split;
  std::uint64_t seed = 0;
  bool cluster_all_nodes = false;
};

/// Target-node indices of "train", "val" or "test".
const std::vector<std::size_t>& split_rows(const HetGraph& g, const std::string& split);

struct Inference {
  Matrix logits;         // all target nodes
  Matrix target_hidden;  // layer-2 embeddings of all target nodes
};

Inference infer(const GraphInput& input, const ModelParams& params);

/// Classification scores of the given target rows.
F1Scores classification_scores(const Inference& inf, const HetGraph& g, const std::vector<std::size_t>& rows);

/// Eval-mode metrics on a split. k-means (k = num_classes) runs on the split's
/// embeddings, or on all target nodes when cluster_all_nodes is set.
MetricsReport evaluate_model(const HetGraph& g, const ModelParams& params, const std::string& split,
                             std::uint64_t seed = 0, bool cluster_all_nodes = false);

struct AttentionPoint {
  std::size_t epoch = 0;
  std::string type;
  double coefficient = 0.0;
};

/// One row per (epoch, node type), epochs in order.
std::vector<AttentionPoint> attention_trace(const RunHistory& history);

}  // namespace hire
