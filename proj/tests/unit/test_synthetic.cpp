#include <cmath>
#include <set>

#include "doctest.h"
#include "hire/error.hpp"
#include "hire/synthetic.hpp"

using namespace hire;

TEST_CASE("acm-like preset mirrors the published counts") {
  const SyntheticSchema s = preset_schema("acm-like");
  REQUIRE(s.node_types.size() == 3);
  CHECK(s.node_types[0].count == 4025);
  CHECK(s.node_types[1].count == 17351);
  CHECK(s.node_types[2].count == 72);
  REQUIRE(s.relations.size() == 2);
  CHECK(s.relations[0].edges == 13407);
  CHECK(s.relations[1].edges == 4025);
  CHECK(s.num_classes == 3);
}

TEST_CASE("other presets") {
  const SyntheticSchema imdb = preset_schema("imdb-like");
  CHECK(imdb.node_types.size() == 3);
  CHECK(imdb.num_classes == 3);
  const SyntheticSchema dblp = preset_schema("dblp-like");
  CHECK(dblp.node_types.size() == 4);
  CHECK(dblp.num_classes == 4);
  CHECK(dblp.node_types[3].count == 20);
  CHECK_THROWS_AS(preset_schema("cora-like"), ConfigError);
  CHECK(preset_names().size() == 3);
}

TEST_CASE("scaled preset keeps every type") {
  const SyntheticSchema s = preset_schema("dblp-like", 0.01);
  for (const NodeType& t : s.node_types) CHECK(t.count >= 1);
  CHECK(s.node_types[0].count == 41);
}

TEST_CASE("noise-free labels equal the latent classes") {
  SyntheticSchema s = preset_schema("acm-like", 0.05);
  s.label_noise_rate = 0.0;
  Rng rng(3);
  const SyntheticDraw d = draw_synthetic(s, rng);
  CHECK(d.graph.labels == d.latent);
}

TEST_CASE("label noise rate") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SyntheticSchema s = preset_schema("acm-like", 0.05);
    s.node_types[0].count = 2000;
    s.label_noise_rate = 0.15;
    s.seed = seed;
    Rng rng(seed);
    const SyntheticDraw d = draw_synthetic(s, rng);
    std::size_t flips = 0;
    for (std::size_t i = 0; i < d.latent.size(); ++i) flips += d.latent[i] != d.graph.labels[i];
    CHECK(std::abs(static_cast<double>(flips) / 2000.0 - 0.15) <= 0.03);
  }
}

TEST_CASE("generation is deterministic per seed") {
  SyntheticSchema s = preset_schema("acm-like", 0.03);
  s.seed = 17;
  CHECK(serialize_graph(generate_synthetic(s)) == serialize_graph(generate_synthetic(s)));
  SyntheticSchema t = s;
  t.seed = 18;
  CHECK(serialize_graph(generate_synthetic(s)) != serialize_graph(generate_synthetic(t)));
}

TEST_CASE("generated graphs are valid with inverses and counts") {
  for (const std::string& name : preset_names()) {
    const SyntheticSchema s = preset_schema(name, 0.02);
    const HetGraph g = generate_synthetic(s);
    CHECK_NOTHROW(validate(g));
    CHECK(g.relations.size() == 2 * s.relations.size());
    for (std::size_t i = 0; i < s.relations.size(); ++i) CHECK(g.relations[i].edges.size() == s.relations[i].edges);
    CHECK(g.splits.train.size() == g.num_targets() * 2 / 10);
  }
}

TEST_CASE("affinity makes neighbors share classes") {
  SyntheticSchema s = preset_schema("acm-like", 0.1);
  s.p_in = 0.9;
  Rng rng(5);
  const SyntheticDraw d = draw_synthetic(s, rng);
  // Authors mostly take the class of the papers they attach to.
  const HetGraph& g = d.graph;
  const Relation& pa = g.relations[0];
  std::vector<std::vector<std::size_t>> votes(g.node_types[1].count, std::vector<std::size_t>(3, 0));
  for (const auto& [p, a] : pa.edges) ++votes[a][d.latent[p]];
  std::size_t agree = 0, total = 0;
  for (const auto& [p, a] : pa.edges) {
    const auto& v = votes[a];
    const std::size_t best = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    agree += best == d.latent[p];
    ++total;
  }
  CHECK(static_cast<double>(agree) / static_cast<double>(total) > 0.8);
}

TEST_CASE("class means are separated by mu") {
  SyntheticSchema s = preset_schema("acm-like", 0.5);
  s.mu = 3.0;
  Rng rng(2);
  const SyntheticDraw d = draw_synthetic(s, rng);
  const Matrix& x = d.graph.features[0];
  std::vector<std::vector<double>> mean(3, std::vector<double>(x.cols, 0.0));
  std::vector<double> count(3, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    count[d.latent[i]] += 1.0;
    for (std::size_t j = 0; j < x.cols; ++j) mean[d.latent[i]][j] += x(i, j);
  }
  double dist = 0.0;
  for (std::size_t j = 0; j < x.cols; ++j) {
    const double diff = mean[0][j] / count[0] - mean[1][j] / count[1];
    dist += diff * diff;
  }
  CHECK(std::sqrt(dist) == doctest::Approx(3.0).epsilon(0.15));
}

TEST_CASE("schema validation") {
  SyntheticSchema s = preset_schema("acm-like", 0.01);
  SUBCASE("p_in") {
    s.p_in = 1.0;
    CHECK_THROWS_AS(validate_schema(s), ConfigError);
  }
  SUBCASE("mu") {
    s.mu = -1.0;
    CHECK_THROWS_AS(validate_schema(s), ConfigError);
  }
  SUBCASE("noise") {
    s.label_noise_rate = 1.0;
    CHECK_THROWS_AS(validate_schema(s), ConfigError);
  }
  SUBCASE("too many edges") {
    s.relations[1].edges = s.node_types[0].count * s.node_types[2].count + 1;
    CHECK_THROWS_AS(validate_schema(s), ConfigError);
  }
  SUBCASE("unknown endpoint") {
    s.relations[0].dst = "venue";
    CHECK_THROWS_AS(validate_schema(s), ConfigError);
  }
}

TEST_CASE("schema documents") {
  const SyntheticSchema a = parse_schema(R"({"preset": "dblp-like", "scale": 0.1, "p_in": 0.7, "seed": 4})");
  CHECK(a.node_types.size() == 4);
  CHECK(a.p_in == 0.7);
  CHECK(a.seed == 4);
  const SyntheticSchema b = parse_schema(R"({
    "node_types": [{"name": "u", "count": 10, "feature_dim": 4}, {"name": "v", "count": 5, "feature_dim": 2}],
    "relations": [{"name": "uv", "src": "u", "dst": "v", "edges": 12}],
    "target_type": "u", "num_classes": 2, "mu": 3.5})");
  CHECK(b.node_types[1].count == 5);
  CHECK(b.mu == 3.5);
  CHECK_NOTHROW(generate_synthetic(b));
  CHECK_THROWS_AS(parse_schema("{not json"), ParseError);
  const SyntheticSchema c = parse_schema(R"({
    "node_types": [{"name": "u", "count": 10, "feature_dim": 4}, {"name": "v", "count": 5, "feature_dim": 2}],
    "relations": [{"name": "uv", "src": "u", "dst": "v", "edges": 12}],
    "target_type": "u", "num_classes": 2, "scale": 2.0})");
  CHECK(c.node_types[0].count == 20);
  CHECK(c.relations[0].edges == 24);
}
