#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hire/hetgraph.hpp"
#include "hire/rng.hpp"

namespace hire {

struct SyntheticRelation {
  std::string name;
  std::string src;
  std::string dst;
  std::size_t edges = 0;
};

/// Generator knobs. Every target node draws a latent class; edges prefer
/// endpoints of the same latent class with probability `p_in`; features are
/// Gaussian around class means whose pairwise distance is `mu`.
struct SyntheticSchema {
  std::vector<NodeType> node_types;
  std::vector<SyntheticRelation> relations;
  std::string target_type;
  std::size_t num_classes = 0;
  double p_in = 0.8;
  double mu = 2.0;
  double label_noise_rate = 0.0;
  std::uint64_t seed = 0;
};

/// Checks counts and the ranges p_in in (0,1), mu >= 0, noise in [0,1).
void validate_schema(const SyntheticSchema& schema);

struct SyntheticDraw {
  HetGraph graph;
  std::vector<std::size_t> latent;  // target-node classes before label noise
};

/// Draw a graph from the schema. Splits use the 2:1:7 rule with the full
/// train pool; labels carry exactly round(noise * N) flips.
SyntheticDraw draw_synthetic(const SyntheticSchema& schema, Rng& rng);
HetGraph generate_synthetic(const SyntheticSchema& schema, Rng& rng);
/// Same, with the stream seeded from schema.seed.
HetGraph generate_synthetic(const SyntheticSchema& schema);

/// Built-in schemas: "acm-like", "imdb-like", "dblp-like". Node and edge
/// counts are multiplied by `scale` (rounded, at least one node per type).
SyntheticSchema preset_schema(const std::string& name, double scale = 1.0);
std::vector<std::string> preset_names();

/// Multiply node and edge counts by `scale` with the preset rounding rule.
void scale_schema(SyntheticSchema& schema, double scale);

/// Schema document: either {"preset": name, "scale": s, ...overrides} or a
/// full listing of node_types / relations / target_type / num_classes. An
/// optional "scale" applies to either form.
SyntheticSchema parse_schema(const std::string& text);

}  // namespace hire
