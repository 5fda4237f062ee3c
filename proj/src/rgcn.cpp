#include "hire/rgcn.hpp"

#include "hire/error.hpp"

namespace hire {

namespace {

template <typename Params, typename Fn>
void visit(Params& p, Fn&& fn) {
  auto layer = [&](auto& l, const std::string& prefix) {
    for (std::size_t r = 0; r < l.relation_weights.size(); ++r)
      fn(prefix + ".relation." + std::to_string(r), l.relation_weights[r]);
    for (std::size_t t = 0; t < l.self_weights.size(); ++t) fn(prefix + ".self." + std::to_string(t), l.self_weights[t]);
  };
  layer(p.layer1, "layer1");
  layer(p.layer2, "layer2");
  fn(std::string("classifier.weight"), p.classifier_weight);
  fn(std::string("classifier.bias"), p.classifier_bias);
}

}  // namespace

void ModelParams::for_each(const std::function<void(const std::string&, Matrix&)>& fn) { visit(*this, fn); }

void ModelParams::for_each(const std::function<void(const std::string&, const Matrix&)>& fn) const {
  visit(*this, fn);
}

std::vector<Matrix*> ModelParams::pointers() {
  std::vector<Matrix*> out;
  for_each([&](const std::string&, Matrix& m) { out.push_back(&m); });
  return out;
}

namespace {

RgcnLayerParams make_layer(const HetGraph& g, const std::vector<std::size_t>& in_dims, std::size_t out_dim,
                           bool activation, Rng* rng) {
  RgcnLayerParams layer;
  layer.activation = activation;
  auto make = [&](std::size_t rows) {
    if (rng && rows > 0) return glorot_init(rows, out_dim, *rng);
    return Matrix(rows, out_dim, 0.0);
  };
  for (const Relation& r : g.relations) layer.relation_weights.push_back(make(in_dims[r.src_type]));
  for (std::size_t t = 0; t < g.num_types(); ++t) layer.self_weights.push_back(make(in_dims[t]));
  return layer;
}

ModelParams make_model(const HetGraph& g, std::size_t hidden, Rng* rng) {
  if (hidden == 0) throw ConfigError("hidden size must be positive");
  std::vector<std::size_t> dims;
  for (const NodeType& t : g.node_types) dims.push_back(t.feature_dim);
  ModelParams p;
  p.layer1 = make_layer(g, dims, hidden, true, rng);
  p.layer2 = make_layer(g, std::vector<std::size_t>(g.num_types(), hidden), hidden, false, rng);
  p.classifier_weight = rng ? glorot_init(hidden, g.num_classes, *rng) : Matrix(hidden, g.num_classes, 0.0);
  p.classifier_bias = Matrix(1, g.num_classes, 0.0);
  return p;
}

void check_layer(const HetGraph& g, const RgcnLayerParams& l, const std::vector<std::size_t>& in_dims,
                 std::size_t out_dim, const char* name) {
  if (l.relation_weights.size() != g.relations.size()) {
    throw ConfigError(std::string(name) + ": " + std::to_string(l.relation_weights.size()) +
                      " relation weights for " + std::to_string(g.relations.size()) + " relations");
  }
  if (l.self_weights.size() != g.num_types()) {
    throw ConfigError(std::string(name) + ": self-loop weights do not cover every node type");
  }
  for (std::size_t r = 0; r < g.relations.size(); ++r) {
    const Matrix& w = l.relation_weights[r];
    if (w.rows != in_dims[g.relations[r].src_type] || w.cols != out_dim) {
      throw ConfigError(std::string(name) + ": weight of relation '" + g.relations[r].name + "' has shape " +
                        w.shape_string());
    }
  }
  for (std::size_t t = 0; t < g.num_types(); ++t) {
    const Matrix& w = l.self_weights[t];
    if (w.rows != in_dims[t] || w.cols != out_dim) {
      throw ConfigError(std::string(name) + ": self-loop weight of '" + g.node_types[t].name + "' has shape " +
                        w.shape_string());
    }
  }
}

}  // namespace

ModelParams init_model(const HetGraph& g, Rng& rng, std::size_t hidden) { return make_model(g, hidden, &rng); }

ModelParams zero_model(const HetGraph& g, std::size_t hidden) { return make_model(g, hidden, nullptr); }

void check_params(const HetGraph& g, const ModelParams& p) {
  const std::size_t hidden = p.classifier_weight.rows;
  std::vector<std::size_t> dims;
  for (const NodeType& t : g.node_types) dims.push_back(t.feature_dim);
  check_layer(g, p.layer1, dims, hidden, "layer1");
  check_layer(g, p.layer2, std::vector<std::size_t>(g.num_types(), hidden), hidden, "layer2");
  if (p.classifier_weight.cols != g.num_classes || p.classifier_bias.rows != 1 ||
      p.classifier_bias.cols != g.num_classes) {
    throw ConfigError("classifier width does not match num_classes");
  }
}

GraphInput::GraphInput(const HetGraph& g) : graph_(&g) {
  incoming_.reserve(g.relations.size());
  for (std::size_t r = 0; r < g.relations.size(); ++r) incoming_.push_back(neighbor_lists(g, r));
}

BoundModel bind(Tape& tape, const ModelParams& params, bool trainable) {
  auto put = [&](const Matrix& m) { return trainable ? tape.variable(m) : tape.constant(m); };
  auto layer = [&](const RgcnLayerParams& l) {
    BoundLayer b;
    b.activation = l.activation;
    for (const Matrix& w : l.relation_weights) b.relation_weights.push_back(put(w));
    for (const Matrix& w : l.self_weights) b.self_weights.push_back(put(w));
    return b;
  };
  BoundModel m;
  m.layer1 = layer(params.layer1);
  m.layer2 = layer(params.layer2);
  m.classifier_weight = put(params.classifier_weight);
  m.classifier_bias = put(params.classifier_bias);
  return m;
}

ModelParams gradients(const Tape& tape, const BoundModel& bound) {
  auto layer = [&](const BoundLayer& b) {
    RgcnLayerParams l;
    l.activation = b.activation;
    for (const Tensor& t : b.relation_weights) l.relation_weights.push_back(tape.grad_or_zero(t));
    for (const Tensor& t : b.self_weights) l.self_weights.push_back(tape.grad_or_zero(t));
    return l;
  };
  ModelParams g;
  g.layer1 = layer(bound.layer1);
  g.layer2 = layer(bound.layer2);
  g.classifier_weight = tape.grad_or_zero(bound.classifier_weight);
  g.classifier_bias = tape.grad_or_zero(bound.classifier_bias);
  return g;
}

std::vector<Tensor> rgcn_layer(const std::vector<Tensor>& h_by_type, const GraphInput& input, const BoundLayer& layer) {
  const HetGraph& g = input.graph();
  if (h_by_type.size() != g.num_types()) throw ContractError("rgcn_layer: embeddings do not cover every node type");
  if (layer.relation_weights.size() != g.relations.size()) {
    throw ConfigError("rgcn_layer: every graph relation needs a weight");
  }
  if (layer.self_weights.size() != g.num_types()) throw ConfigError("rgcn_layer: missing self-loop weights");
  std::vector<Tensor> out;
  out.reserve(g.num_types());
  for (std::size_t t = 0; t < g.num_types(); ++t) out.push_back(matmul(h_by_type[t], layer.self_weights[t]));
  for (std::size_t r = 0; r < g.relations.size(); ++r) {
    const Relation& rel = g.relations[r];
    // mean-then-project equals project-then-mean by linearity
    Tensor agg = neighbor_mean(h_by_type[rel.src_type], input.incoming(r));
    out[rel.dst_type] = add(out[rel.dst_type], matmul(agg, layer.relation_weights[r]));
  }
  if (layer.activation)
    for (Tensor& h : out) h = relu(h);
  return out;
}

namespace {

Tensor dropout(Tape& tape, const Tensor& x, double rate, Rng& rng) {
  Matrix mask(x.rows(), x.cols());
  const double keep_scale = 1.0 / (1.0 - rate);
  for (double& m : mask.data) m = rng.uniform() < rate ? 0.0 : keep_scale;
  return mul(x, tape.constant(std::move(mask)));
}

}  // namespace

ForwardOutput forward(Tape& tape, const GraphInput& input, const BoundModel& model, double dropout_rate, Rng& rng,
                      Mode mode) {
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw ConfigError("dropout rate must lie in [0, 1), got " + std::to_string(dropout_rate));
  }
  const HetGraph& g = input.graph();
  std::vector<Tensor> h;
  h.reserve(g.num_types());
  for (const Matrix& f : g.features) h.push_back(tape.constant(f));
  h = rgcn_layer(h, input, model.layer1);
  if (mode == Mode::kTrain && dropout_rate > 0.0)
    for (Tensor& t : h) t = dropout(tape, t, dropout_rate, rng);
  h = rgcn_layer(h, input, model.layer2);
  Tensor logits = add_row(matmul(h[g.target_type], model.classifier_weight), model.classifier_bias);
  return ForwardOutput{std::move(h), logits};
}

std::vector<std::size_t> predict(const Matrix& logits) {
  std::vector<std::size_t> out(logits.rows, 0);
  for (std::size_t i = 0; i < logits.rows; ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < logits.cols; ++j)
      if (logits(i, j) > logits(i, best)) best = j;
    out[i] = best;
  }
  return out;
}

}  // namespace hire
