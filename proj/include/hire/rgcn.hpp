#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hire/hetgraph.hpp"
#include "hire/rng.hpp"
#include "hire/tensor.hpp"

namespace hire {

/// One RGCN layer: a weight per relation (d_in(src) x d_out) and a self-loop
/// weight per node type (d_in(type) x d_out).
struct RgcnLayerParams {
  std::vector<Matrix> relation_weights;  // indexed like HetGraph::relations
  std::vector<Matrix> self_weights;      // indexed like HetGraph::node_types
  bool activation = true;

  friend bool operator==(const RgcnLayerParams&, const RgcnLayerParams&) = default;
};

struct ModelParams {
  RgcnLayerParams layer1;
  RgcnLayerParams layer2;
  Matrix classifier_weight;  // hidden x num_classes
  Matrix classifier_bias;    // 1 x num_classes

  /// Visit every parameter matrix in a fixed order with a stable name.
  void for_each(const std::function<void(const std::string&, Matrix&)>& fn);
  void for_each(const std::function<void(const std::string&, const Matrix&)>& fn) const;
  std::vector<Matrix*> pointers();

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

inline constexpr std::size_t kDefaultHidden = 16;

/// Glorot weights, zero classifier bias. Draw order: layer1 relations, layer1
/// self loops, layer2 relations, layer2 self loops, classifier.
ModelParams init_model(const HetGraph& g, Rng& rng, std::size_t hidden = kDefaultHidden);

/// Zero-filled parameters of the right shapes.
ModelParams zero_model(const HetGraph& g, std::size_t hidden = kDefaultHidden);

/// Shape check of params against the graph; throws ConfigError when a
/// relation or node type lacks its weight or shapes disagree.
void check_params(const HetGraph& g, const ModelParams& params);

/// Per-relation incoming neighbor lists, built once per graph.
class GraphInput {
 public:
  explicit GraphInput(const HetGraph& g);

  const HetGraph& graph() const { return *graph_; }
  const NeighborLists& incoming(std::size_t relation) const { return incoming_[relation]; }

 private:
  const HetGraph* graph_;
  std::vector<NeighborLists> incoming_;
};

/// Tape tensors bound to one forward pass.
struct BoundLayer {
  std::vector<Tensor> relation_weights;
  std::vector<Tensor> self_weights;
  bool activation = true;
};

struct BoundModel {
  BoundLayer layer1;
  BoundLayer layer2;
  Tensor classifier_weight;
  Tensor classifier_bias;
};

/// Place parameters on the tape, as variables or constants.
BoundModel bind(Tape& tape, const ModelParams& params, bool trainable);

/// Gradients of a trainable binding, in ModelParams layout.
ModelParams gradients(const Tape& tape, const BoundModel& bound);

/// h'_u = act( sum_r mean_{v in N_u^r} W_r h_v + W_0 h_u ).
std::vector<Tensor> rgcn_layer(const std::vector<Tensor>& h_by_type, const GraphInput& input, const BoundLayer& layer);

enum class Mode { kTrain, kEval };

struct ForwardOutput {
  std::vector<Tensor> hidden;  // layer-2 embeddings per node type
  Tensor logits;               // target-type logits, n_target x num_classes
};

/// layer1 (relu) -> inverted dropout (train mode) -> layer2 (linear) -> classifier.
ForwardOutput forward(Tape& tape, const GraphInput& input, const BoundModel& model, double dropout_rate, Rng& rng,
                      Mode mode);

/// Row-wise argmax, ties to the lowest class index.
std::vector<std::size_t> predict(const Matrix& logits);

}  // namespace hire
