#include "hire/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "hire/error.hpp"
#include "json.hpp"

namespace hire {

using nlohmann::json;

void validate_schema(const SyntheticSchema& schema) {
  if (schema.node_types.empty()) throw ConfigError("schema has no node types");
  for (const NodeType& t : schema.node_types) {
    if (t.count == 0) throw ConfigError("node type '" + t.name + "' has zero nodes");
  }
  if (schema.num_classes < 1) throw ConfigError("num_classes must be positive");
  if (!(schema.p_in > 0.0 && schema.p_in < 1.0)) throw ConfigError("p_in must lie in (0, 1)");
  if (!(schema.mu >= 0.0)) throw ConfigError("mu must be non-negative");
  if (!(schema.label_noise_rate >= 0.0 && schema.label_noise_rate < 1.0)) {
    throw ConfigError("label_noise_rate must lie in [0, 1)");
  }
  if (schema.label_noise_rate > 0.0 && schema.num_classes < 2) {
    throw ConfigError("label noise needs at least two classes");
  }
  auto find = [&](const std::string& name) -> const NodeType& {
    for (const NodeType& t : schema.node_types)
      if (t.name == name) return t;
    throw ConfigError("schema references unknown node type '" + name + "'");
  };
  find(schema.target_type);
  for (const SyntheticRelation& r : schema.relations) {
    const double pairs = static_cast<double>(find(r.src).count) * static_cast<double>(find(r.dst).count);
    if (static_cast<double>(r.edges) > pairs) {
      throw ConfigError("relation '" + r.name + "' asks for " + std::to_string(r.edges) + " edges but only " +
                        std::to_string(static_cast<std::size_t>(pairs)) + " node pairs exist");
    }
  }
}

namespace {

// Class-mean vector of a d-dimensional feature space: coordinates j with
// j % C == c share the mass, scaled so distinct class means sit mu apart.
std::vector<double> class_mean(std::size_t dim, std::size_t num_classes, std::size_t cls, double mu) {
  std::vector<double> m(dim, 0.0);
  if (dim == 0) return m;
  std::size_t n = 0;
  for (std::size_t j = cls % dim; j < dim; j += num_classes) ++n;
  if (n == 0) return m;
  const double v = mu / std::sqrt(2.0 * static_cast<double>(n));
  for (std::size_t j = cls % dim; j < dim; j += num_classes) m[j] += v;
  return m;
}

}  // namespace

SyntheticDraw draw_synthetic(const SyntheticSchema& schema, Rng& rng) {
  validate_schema(schema);
  const std::uint64_t base = rng.next_u64();
  Rng class_rng = Rng::substream(base, "classes");
  Rng edge_rng = Rng::substream(base, "edges");
  Rng feature_rng = Rng::substream(base, "features");
  Rng noise_rng = Rng::substream(base, "label-noise");
  Rng split_rng = Rng::substream(base, "split");

  HetGraph g;
  g.node_types = schema.node_types;
  g.num_classes = schema.num_classes;
  const std::size_t kTypes = g.node_types.size();
  const std::size_t C = schema.num_classes;
  g.target_type = g.type_index(schema.target_type);

  // Latent class of every node of every type.
  std::vector<std::vector<std::size_t>> latent(kTypes);
  std::vector<std::vector<std::vector<std::size_t>>> by_class(kTypes, std::vector<std::vector<std::size_t>>(C));
  for (std::size_t t = 0; t < kTypes; ++t) {
    latent[t].resize(g.node_types[t].count);
    for (std::size_t i = 0; i < latent[t].size(); ++i) {
      latent[t][i] = class_rng.below(C);
      by_class[t][latent[t][i]].push_back(i);
    }
  }

  for (const SyntheticRelation& sr : schema.relations) {
    Relation rel;
    rel.name = sr.name;
    rel.src_type = g.type_index(sr.src);
    rel.dst_type = g.type_index(sr.dst);
    // The anchor endpoint cycles through a shuffled order of its type so that
    // coverage is even; the target type anchors whenever it takes part.
    const bool anchor_is_src = rel.src_type == g.target_type || rel.dst_type != g.target_type;
    const std::size_t anchor_type = anchor_is_src ? rel.src_type : rel.dst_type;
    const std::size_t other_type = anchor_is_src ? rel.dst_type : rel.src_type;
    std::vector<std::size_t> order(g.node_types[anchor_type].count);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    edge_rng.shuffle(std::span<std::size_t>(order));
    const std::size_t n_other = g.node_types[other_type].count;
    rel.edges.reserve(sr.edges);
    for (std::size_t e = 0; e < sr.edges; ++e) {
      const std::size_t a = order[e % order.size()];
      std::size_t b;
      const auto& pool = by_class[other_type][latent[anchor_type][a]];
      if (edge_rng.bernoulli(schema.p_in) && !pool.empty()) {
        b = pool[edge_rng.below(pool.size())];
      } else {
        b = edge_rng.below(n_other);
      }
      rel.edges.push_back(anchor_is_src ? Edge{a, b} : Edge{b, a});
    }
    g.relations.push_back(std::move(rel));
  }

  // Features: target nodes around their own class mean, other nodes around
  // the mixture of their neighbors' class means.
  g.features.resize(kTypes);
  std::vector<std::vector<std::vector<double>>> class_mix(kTypes);
  for (std::size_t t = 0; t < kTypes; ++t) class_mix[t].assign(g.node_types[t].count, std::vector<double>(C, 0.0));
  for (const Relation& r : g.relations) {
    for (const auto& [s, d] : r.edges) {
      class_mix[r.src_type][s][latent[r.dst_type][d]] += 1.0;
      class_mix[r.dst_type][d][latent[r.src_type][s]] += 1.0;
    }
  }
  for (std::size_t t = 0; t < kTypes; ++t) {
    const std::size_t dim = g.node_types[t].feature_dim;
    std::vector<std::vector<double>> means(C);
    for (std::size_t c = 0; c < C; ++c) means[c] = class_mean(dim, C, c, schema.mu);
    Matrix f(g.node_types[t].count, dim);
    for (std::size_t i = 0; i < f.rows; ++i) {
      std::vector<double> mean(dim, 0.0);
      const auto& mix = class_mix[t][i];
      double total = 0.0;
      for (double w : mix) total += w;
      if (t == g.target_type || total == 0.0) {
        mean = means[latent[t][i]];
      } else {
        for (std::size_t c = 0; c < C; ++c)
          for (std::size_t j = 0; j < dim; ++j) mean[j] += mix[c] / total * means[c][j];
      }
      for (std::size_t j = 0; j < dim; ++j) f(i, j) = mean[j] + feature_rng.normal();
    }
    g.features[t] = std::move(f);
  }

  // Observed labels: exactly round(rate * N) nodes move to another class.
  const std::size_t n = g.num_targets();
  g.labels = latent[g.target_type];
  const auto flips = static_cast<std::size_t>(std::llround(schema.label_noise_rate * static_cast<double>(n)));
  if (flips > 0) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    noise_rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t k = 0; k < flips; ++k) {
      const std::size_t i = order[k];
      const std::size_t shift = 1 + noise_rng.below(C - 1);
      g.labels[i] = (g.labels[i] + shift) % C;
    }
  }

  add_inverse_relations(g);
  g = split_target_nodes(std::move(g), 1.0, split_rng);
  validate(g);
  const std::size_t target = g.target_type;
  return SyntheticDraw{std::move(g), std::move(latent[target])};
}

HetGraph generate_synthetic(const SyntheticSchema& schema, Rng& rng) { return draw_synthetic(schema, rng).graph; }

HetGraph generate_synthetic(const SyntheticSchema& schema) {
  Rng rng(schema.seed);
  return generate_synthetic(schema, rng);
}

namespace {

std::size_t scaled(std::size_t count, double scale, std::size_t floor_at) {
  const auto v = static_cast<std::size_t>(std::llround(static_cast<double>(count) * scale));
  return std::max(v, floor_at);
}

SyntheticSchema build_preset(const std::string& name) {
  SyntheticSchema s;
  constexpr std::size_t kDim = 32;
  if (name == "acm-like") {
    s.node_types = {{"paper", 4025, kDim}, {"author", 17351, kDim}, {"field", 72, kDim}};
    s.relations = {{"paper-author", "paper", "author", 13407}, {"paper-field", "paper", "field", 4025}};
    s.target_type = "paper";
    s.num_classes = 3;
  } else if (name == "imdb-like") {
    s.node_types = {{"movie", 4278, kDim}, {"director", 2081, kDim}, {"actor", 5257, kDim}};
    s.relations = {{"movie-director", "movie", "director", 4278}, {"movie-actor", "movie", "actor", 12828}};
    s.target_type = "movie";
    s.num_classes = 3;
  } else if (name == "dblp-like") {
    s.node_types = {{"author", 4057, kDim}, {"paper", 14328, kDim}, {"term", 7723, kDim}, {"conf", 20, kDim}};
    s.relations = {{"paper-author", "paper", "author", 19645},
                   {"paper-term", "paper", "term", 85810},
                   {"paper-conf", "paper", "conf", 14328}};
    s.target_type = "author";
    s.num_classes = 4;
  } else {
    throw ConfigError("unknown schema preset '" + name + "'");
  }
  return s;
}

}  // namespace

std::vector<std::string> preset_names() { return {"acm-like", "imdb-like", "dblp-like"}; }

SyntheticSchema preset_schema(const std::string& name, double scale) {
  if (!(scale > 0.0)) throw ConfigError("scale must be positive");
  SyntheticSchema s = build_preset(name);
  scale_schema(s, scale);
  return s;
}

void scale_schema(SyntheticSchema& s, double scale) {
  if (!(scale > 0.0)) throw ConfigError("scale must be positive");
  for (NodeType& t : s.node_types) t.count = scaled(t.count, scale, 1);
  for (SyntheticRelation& r : s.relations) r.edges = scaled(r.edges, scale, 0);
}

namespace {

template <typename T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("schema field '") + key + "': " + e.what());
  }
}

}  // namespace

SyntheticSchema parse_schema(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed schema file: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("schema file must hold a JSON object");
  SyntheticSchema s;
  if (doc.contains("preset")) {
    s = preset_schema(field<std::string>(doc, "preset"), doc.value("scale", 1.0));
  } else {
    for (const json& t : field<json>(doc, "node_types")) {
      s.node_types.push_back({field<std::string>(t, "name"), field<std::size_t>(t, "count"),
                              field<std::size_t>(t, "feature_dim")});
    }
    for (const json& r : doc.value("relations", json::array())) {
      s.relations.push_back({field<std::string>(r, "name"), field<std::string>(r, "src"),
                             field<std::string>(r, "dst"), field<std::size_t>(r, "edges")});
    }
    s.target_type = field<std::string>(doc, "target_type");
    s.num_classes = field<std::size_t>(doc, "num_classes");
    if (doc.contains("scale")) scale_schema(s, field<double>(doc, "scale"));
  }
  if (doc.contains("p_in")) s.p_in = field<double>(doc, "p_in");
  if (doc.contains("mu")) s.mu = field<double>(doc, "mu");
  if (doc.contains("label_noise_rate")) s.label_noise_rate = field<double>(doc, "label_noise_rate");
  if (doc.contains("seed")) s.seed = field<std::uint64_t>(doc, "seed");
  validate_schema(s);
  return s;
}

}  // namespace hire
