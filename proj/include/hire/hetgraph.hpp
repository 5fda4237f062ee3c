#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hire/rng.hpp"
#include "hire/tensor.hpp"

namespace hire {

using Edge = std::pair<std::size_t, std::size_t>;

struct Relation {
  std::string name;
  std::size_t src_type = 0;
  std::size_t dst_type = 0;
  std::vector<Edge> edges;  // (src index, dst index)
  /// Set on companions created by add_inverse_relations(); not serialized.
  bool inverse = false;
};

struct NodeType {
  std::string name;
  std::size_t count = 0;
  std::size_t feature_dim = 0;
};

struct Splits {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;

  friend bool operator==(const Splits&, const Splits&) = default;
};

/// Typed node sets, per-type features, named directed relations, and labels
/// plus splits on a single target type.
struct HetGraph {
  std::vector<NodeType> node_types;
  std::vector<Matrix> features;  // one count x feature_dim matrix per type
  std::vector<Relation> relations;
  std::size_t target_type = 0;
  std::size_t num_classes = 0;
  std::vector<std::size_t> labels;
  Splits splits;

  std::size_t num_types() const { return node_types.size(); }
  std::size_t type_index(const std::string& name) const;
  std::size_t relation_index(const std::string& name) const;
  std::size_t num_targets() const { return node_types.at(target_type).count; }
};

/// Name given to the companion of relation `name`.
std::string inverse_name(const std::string& name);

/// Append a reversed companion for each relation that lacks one. Idempotent.
void add_inverse_relations(HetGraph& g);

/// Throws ValidationError naming the first violated invariant.
void validate(const HetGraph& g);

/// Parse and validate a graph JSON document; inverse relations are added.
HetGraph parse_graph(const std::string& text);
HetGraph load_graph(const std::filesystem::path& path);

/// Serialize forward relations only; loading restores the inverses.
std::string serialize_graph(const HetGraph& g);
void save_graph(const HetGraph& g, const std::filesystem::path& path);

/// Shuffle the target nodes, carve a 2:1:7 train-pool/validation/test split
/// with floor arithmetic, and keep the first `train_fraction` of the pool.
HetGraph split_target_nodes(HetGraph g, double train_fraction, Rng& rng);

/// Keep the first floor(fraction * |train|) train nodes.
void restrict_train(HetGraph& g, double train_fraction);

/// Incoming neighbor lists for every node of the relation's destination type.
using NeighborLists = std::vector<std::vector<std::size_t>>;
NeighborLists neighbor_lists(const HetGraph& g, const std::string& relation);
NeighborLists neighbor_lists(const HetGraph& g, std::size_t relation);

/// Stable FNV-1a digest over type names, counts, relation triples and class count.
std::string schema_fingerprint(const HetGraph& g);

}  // namespace hire
