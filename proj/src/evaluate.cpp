#include "hire/evaluate.hpp"

#include "hire/error.hpp"
#include "hire/kmeans.hpp"

namespace hire {

const std::vector<std::size_t>& split_rows(const HetGraph& g, const std::string& split) {
  if (split == "train") return g.splits.train;
  if (split == "val") return g.splits.val;
  if (split == "test") return g.splits.test;
  throw ConfigError("unknown split '" + split + "' (expected train, val or test)");
}

Inference infer(const GraphInput& input, const ModelParams& params) {
  Tape tape;
  Rng unused(0);
  ForwardOutput out = forward(tape, input, bind(tape, params, false), 0.0, unused, Mode::kEval);
  return Inference{out.logits.matrix(), out.hidden[input.graph().target_type].matrix()};
}

F1Scores classification_scores(const Inference& inf, const HetGraph& g, const std::vector<std::size_t>& rows) {
  const std::vector<std::size_t> all = predict(inf.logits);
  std::vector<std::size_t> pred, gold;
  pred.reserve(rows.size());
  gold.reserve(rows.size());
  for (std::size_t r : rows) {
    pred.push_back(all.at(r));
    gold.push_back(g.labels.at(r));
  }
  return micro_macro_f1(pred, gold, g.num_classes);
}

namespace {

Matrix gather_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
  Matrix out(rows.size(), m.cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out(i, j) = m(rows[i], j);
  return out;
}

}  // namespace

MetricsReport evaluate_model(const HetGraph& g, const ModelParams& params, const std::string& split,
                             std::uint64_t seed, bool cluster_all_nodes) {
  const std::vector<std::size_t>& rows = split_rows(g, split);
  if (rows.empty()) throw DegenerateInputError("split '" + split + "' is empty");
  check_params(g, params);
  const GraphInput input(g);
  const Inference inf = infer(input, params);

  MetricsReport rep;
  rep.split = split;
  rep.seed = seed;
  rep.cluster_all_nodes = cluster_all_nodes;
  const F1Scores f = classification_scores(inf, g, rows);
  rep.micro_f1 = f.micro;
  rep.macro_f1 = f.macro;
  rep.precision = f.precision;
  rep.recall = f.recall;
  rep.f1 = f.f1;

  std::vector<std::size_t> cluster_rows = rows;
  if (cluster_all_nodes) {
    cluster_rows.resize(g.num_targets());
    for (std::size_t i = 0; i < cluster_rows.size(); ++i) cluster_rows[i] = i;
  }
  std::vector<std::size_t> gold;
  gold.reserve(cluster_rows.size());
  for (std::size_t r : cluster_rows) gold.push_back(g.labels.at(r));
  Rng rng = Rng::substream(seed, "kmeans");
  const std::size_t k = std::min(g.num_classes, cluster_rows.size());
  const KMeansResult km = kmeans(gather_rows(inf.target_hidden, cluster_rows), k, rng);
  rep.nmi = nmi(km.assignment, gold);
  rep.ari = ari(km.assignment, gold);
  return rep;
}

std::vector<AttentionPoint> attention_trace(const RunHistory& history) {
  std::vector<AttentionPoint> out;
  for (const EpochRecord& e : history.epochs) {
    for (std::size_t t = 0; t < e.attention.size(); ++t) {
      const std::string name = t < history.type_names.size() ? history.type_names[t] : std::to_string(t);
      out.push_back(AttentionPoint{e.epoch, name, e.attention[t]});
    }
  }
  return out;
}

}  // namespace hire
