#pragma once

#include <cstdint>
#include <vector>

#include "hire/hetgraph.hpp"
#include "hire/rgcn.hpp"
#include "hire/rng.hpp"

namespace hire::testing {

/// Six nodes: four "item" targets (3 features, 2 classes) and two "tag"
/// nodes (2 features), joined by one relation plus its inverse.
inline HetGraph tiny_graph(std::uint64_t seed) {
  Rng rng(seed);
  HetGraph g;
  g.node_types = {{"item", 4, 3}, {"tag", 2, 2}};
  for (const NodeType& t : g.node_types) {
    Matrix f(t.count, t.feature_dim);
    for (double& x : f.data) x = rng.normal();
    g.features.push_back(std::move(f));
  }
  Relation r;
  r.name = "item-tag";
  r.src_type = 0;
  r.dst_type = 1;
  r.edges = {{0, 0}, {1, 0}, {2, 1}, {3, 1}, {1, 1}};
  g.relations.push_back(r);
  add_inverse_relations(g);
  g.target_type = 0;
  g.num_classes = 2;
  g.labels = {0, 1, 0, 1};
  g.splits.train = {0, 1};
  g.splits.val = {2};
  g.splits.test = {3};
  validate(g);
  return g;
}

/// Six nodes over three types so that relation-level terms have off-diagonal
/// structure. No test split.
inline HetGraph three_type_graph(std::uint64_t seed) {
  Rng rng(seed);
  HetGraph g;
  g.node_types = {{"p", 3, 3}, {"a", 2, 2}, {"f", 1, 2}};
  for (const NodeType& t : g.node_types) {
    Matrix f(t.count, t.feature_dim);
    for (double& x : f.data) x = rng.normal();
    g.features.push_back(std::move(f));
  }
  Relation pa{"p-a", 0, 1, {{0, 0}, {1, 1}, {2, 0}}, false};
  Relation pf{"p-f", 0, 2, {{0, 0}, {2, 0}}, false};
  g.relations = {pa, pf};
  add_inverse_relations(g);
  g.target_type = 0;
  g.num_classes = 3;
  g.labels = {0, 1, 2};
  g.splits.train = {0, 1};
  g.splits.val = {2};
  validate(g);
  return g;
}

inline std::vector<Matrix*> model_pointers(ModelParams& p) { return p.pointers(); }

inline std::vector<Matrix> model_list(const ModelParams& p) {
  std::vector<Matrix> out;
  p.for_each([&](const std::string&, const Matrix& m) { out.push_back(m); });
  return out;
}

}  // namespace hire::testing
