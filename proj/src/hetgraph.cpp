#include "hire/hetgraph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "hire/error.hpp"
#include "json.hpp"

namespace hire {

using nlohmann::json;

std::size_t HetGraph::type_index(const std::string& name) const {
  for (std::size_t i = 0; i < node_types.size(); ++i)
    if (node_types[i].name == name) return i;
  throw ValidationError("unknown node type '" + name + "'");
}

std::size_t HetGraph::relation_index(const std::string& name) const {
  for (std::size_t i = 0; i < relations.size(); ++i)
    if (relations[i].name == name) return i;
  throw ValidationError("unknown relation '" + name + "'");
}

std::string inverse_name(const std::string& name) { return "rev_" + name; }

void add_inverse_relations(HetGraph& g) {
  std::set<std::string> names;
  for (const Relation& r : g.relations) names.insert(r.name);
  const std::size_t n = g.relations.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Relation& r = g.relations[i];
    if (r.inverse) continue;
    const std::string inv = inverse_name(r.name);
    if (names.count(inv)) continue;
    Relation rev;
    rev.name = inv;
    rev.src_type = r.dst_type;
    rev.dst_type = r.src_type;
    rev.inverse = true;
    rev.edges.reserve(r.edges.size());
    for (const auto& [s, d] : r.edges) rev.edges.emplace_back(d, s);
    names.insert(inv);
    g.relations.push_back(std::move(rev));
  }
}

void validate(const HetGraph& g) {
  if (g.node_types.empty()) throw ValidationError("graph has no node types");
  std::set<std::string> type_names;
  for (const NodeType& t : g.node_types) {
    if (!type_names.insert(t.name).second) throw ValidationError("duplicate node type '" + t.name + "'");
  }
  if (g.features.size() != g.node_types.size()) {
    throw ValidationError("feature matrices given for " + std::to_string(g.features.size()) + " of " +
                          std::to_string(g.node_types.size()) + " node types");
  }
  for (std::size_t i = 0; i < g.node_types.size(); ++i) {
    const Matrix& f = g.features[i];
    if (f.rows != g.node_types[i].count || f.cols != g.node_types[i].feature_dim) {
      throw ValidationError("features of type '" + g.node_types[i].name + "' have shape " + f.shape_string() +
                            ", expected " + std::to_string(g.node_types[i].count) + "x" +
                            std::to_string(g.node_types[i].feature_dim));
    }
    for (double x : f.data)
      if (!std::isfinite(x)) throw ValidationError("non-finite feature in type '" + g.node_types[i].name + "'");
  }
  std::set<std::string> rel_names;
  for (const Relation& r : g.relations) {
    if (!rel_names.insert(r.name).second) throw ValidationError("duplicate relation '" + r.name + "'");
    if (r.src_type >= g.num_types() || r.dst_type >= g.num_types()) {
      throw ValidationError("relation '" + r.name + "' references an unknown node type");
    }
    const std::size_t ns = g.node_types[r.src_type].count;
    const std::size_t nd = g.node_types[r.dst_type].count;
    for (const auto& [s, d] : r.edges) {
      if (s >= ns || d >= nd) {
        throw ValidationError("relation '" + r.name + "' edge (" + std::to_string(s) + "," + std::to_string(d) +
                              ") out of range for counts " + std::to_string(ns) + "/" + std::to_string(nd));
      }
    }
  }
  if (g.target_type >= g.num_types()) throw ValidationError("target_type out of range");
  if (g.num_classes == 0) throw ValidationError("num_classes must be positive");
  const std::size_t n = g.num_targets();
  if (g.labels.size() != n) {
    throw ValidationError("labels length " + std::to_string(g.labels.size()) + " differs from target count " +
                          std::to_string(n));
  }
  for (std::size_t y : g.labels)
    if (y >= g.num_classes) throw ValidationError("label " + std::to_string(y) + " >= num_classes");
  std::vector<char> seen(n, 0);
  for (const auto* part : {&g.splits.train, &g.splits.val, &g.splits.test}) {
    for (std::size_t i : *part) {
      if (i >= n) throw ValidationError("split index " + std::to_string(i) + " out of range");
      if (seen[i]) throw ValidationError("splits are not disjoint at target node " + std::to_string(i));
      seen[i] = 1;
    }
  }
  for (const Relation& r : g.relations) {
    if (r.inverse) continue;
    const std::string inv = inverse_name(r.name);
    if (!rel_names.count(inv)) throw ValidationError("relation '" + r.name + "' lacks its inverse '" + inv + "'");
    const Relation& rev = g.relations[g.relation_index(inv)];
    std::vector<Edge> forward = r.edges, backward;
    backward.reserve(rev.edges.size());
    for (const auto& [s, d] : rev.edges) backward.emplace_back(d, s);
    std::sort(forward.begin(), forward.end());
    std::sort(backward.begin(), backward.end());
    if (rev.src_type != r.dst_type || rev.dst_type != r.src_type || forward != backward) {
      throw ValidationError("relation '" + inv + "' does not reverse '" + r.name + "'");
    }
  }
}

namespace {

template <typename T>
T get_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ValidationError(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(where + ": bad value for '" + key + "': " + e.what());
  }
}

}  // namespace

HetGraph parse_graph(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed graph file: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("graph file must hold a JSON object");

  HetGraph g;
  const json& types = doc.value("node_types", json::array());
  if (!types.is_array()) throw ValidationError("node_types must be an array");
  for (const json& t : types) {
    NodeType nt;
    nt.name = get_field<std::string>(t, "name", "node_types");
    nt.count = get_field<std::size_t>(t, "count", "node_types");
    nt.feature_dim = get_field<std::size_t>(t, "feature_dim", "node_types");
    g.node_types.push_back(nt);
  }

  const json features = doc.value("features", json::object());
  for (const NodeType& nt : g.node_types) {
    std::vector<double> values;
    if (features.contains(nt.name)) {
      values = get_field<std::vector<double>>(features, nt.name.c_str(), "features");
    }
    if (values.size() != nt.count * nt.feature_dim) {
      throw ValidationError("features of type '" + nt.name + "' hold " + std::to_string(values.size()) +
                            " values, expected " + std::to_string(nt.count * nt.feature_dim));
    }
    g.features.emplace_back(nt.count, nt.feature_dim, std::move(values));
  }

  for (const json& r : doc.value("relations", json::array())) {
    Relation rel;
    rel.name = get_field<std::string>(r, "name", "relations");
    rel.src_type = g.type_index(get_field<std::string>(r, "src", "relation '" + rel.name + "'"));
    rel.dst_type = g.type_index(get_field<std::string>(r, "dst", "relation '" + rel.name + "'"));
    for (const auto& e : get_field<std::vector<std::vector<std::size_t>>>(r, "edges", "relation " + rel.name)) {
      if (e.size() != 2) throw ValidationError("relation '" + rel.name + "' has an edge without two endpoints");
      rel.edges.emplace_back(e[0], e[1]);
    }
    g.relations.push_back(std::move(rel));
  }

  g.target_type = g.type_index(get_field<std::string>(doc, "target_type", "graph"));
  g.num_classes = get_field<std::size_t>(doc, "num_classes", "graph");
  g.labels = get_field<std::vector<std::size_t>>(doc, "labels", "graph");
  if (doc.contains("splits")) {
    const json& s = doc.at("splits");
    g.splits.train = get_field<std::vector<std::size_t>>(s, "train", "splits");
    g.splits.val = get_field<std::vector<std::size_t>>(s, "val", "splits");
    g.splits.test = get_field<std::vector<std::size_t>>(s, "test", "splits");
  }

  // A relation named rev_<x> that reverses <x> is an inverse already present in the file.
  for (Relation& r : g.relations) {
    if (r.name.rfind("rev_", 0) == 0) {
      const std::string base = r.name.substr(4);
      for (const Relation& other : g.relations) {
        if (other.name == base && other.src_type == r.dst_type && other.dst_type == r.src_type) r.inverse = true;
      }
    }
  }
  add_inverse_relations(g);
  validate(g);
  return g;
}

HetGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open graph file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_graph(ss.str());
}

namespace {

// 17 significant digits, the round-trip width for binary64.
void write_double(std::ostream& os, double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  os << buf;
}

void write_string(std::ostream& os, const std::string& s) { os << json(s).dump(); }

void write_indices(std::ostream& os, const std::vector<std::size_t>& v) {
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  os << ']';
}

}  // namespace

std::string serialize_graph(const HetGraph& g) {
  std::ostringstream os;
  os << "{\n  \"node_types\": [";
  for (std::size_t i = 0; i < g.node_types.size(); ++i) {
    const NodeType& t = g.node_types[i];
    os << (i ? ",\n    " : "\n    ") << "{\"name\": ";
    write_string(os, t.name);
    os << ", \"count\": " << t.count << ", \"feature_dim\": " << t.feature_dim << "}";
  }
  os << "\n  ],\n  \"features\": {";
  for (std::size_t i = 0; i < g.node_types.size(); ++i) {
    os << (i ? ",\n    " : "\n    ");
    write_string(os, g.node_types[i].name);
    os << ": [";
    const auto& data = g.features[i].data;
    for (std::size_t k = 0; k < data.size(); ++k) {
      if (k) os << ',';
      write_double(os, data[k]);
    }
    os << ']';
  }
  os << "\n  },\n  \"relations\": [";
  bool first = true;
  for (const Relation& r : g.relations) {
    if (r.inverse) continue;
    os << (first ? "\n    " : ",\n    ") << "{\"name\": ";
    first = false;
    write_string(os, r.name);
    os << ", \"src\": ";
    write_string(os, g.node_types[r.src_type].name);
    os << ", \"dst\": ";
    write_string(os, g.node_types[r.dst_type].name);
    os << ", \"edges\": [";
    for (std::size_t k = 0; k < r.edges.size(); ++k) {
      if (k) os << ',';
      os << '[' << r.edges[k].first << ',' << r.edges[k].second << ']';
    }
    os << "]}";
  }
  os << "\n  ],\n  \"target_type\": ";
  write_string(os, g.node_types[g.target_type].name);
  os << ",\n  \"num_classes\": " << g.num_classes << ",\n  \"labels\": ";
  write_indices(os, g.labels);
  os << ",\n  \"splits\": {\"train\": ";
  write_indices(os, g.splits.train);
  os << ", \"val\": ";
  write_indices(os, g.splits.val);
  os << ", \"test\": ";
  write_indices(os, g.splits.test);
  os << "}\n}\n";
  return os.str();
}

void save_graph(const HetGraph& g, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write graph file " + path.string());
  out << serialize_graph(g);
}

HetGraph split_target_nodes(HetGraph g, double train_fraction, Rng& rng) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw ConfigError("train_fraction must lie in (0, 1], got " + std::to_string(train_fraction));
  }
  const std::size_t n = g.num_targets();
  if (n < g.num_classes) {
    throw DegenerateInputError("only " + std::to_string(n) + " target nodes for " + std::to_string(g.num_classes) +
                               " classes");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(std::span<std::size_t>(order));
  const std::size_t pool = n * 2 / 10;
  const std::size_t val = n / 10;
  g.splits.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(pool));
  g.splits.val.assign(order.begin() + static_cast<std::ptrdiff_t>(pool),
                      order.begin() + static_cast<std::ptrdiff_t>(pool + val));
  g.splits.test.assign(order.begin() + static_cast<std::ptrdiff_t>(pool + val), order.end());
  restrict_train(g, train_fraction);
  return g;
}

void restrict_train(HetGraph& g, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw ConfigError("train_fraction must lie in (0, 1], got " + std::to_string(train_fraction));
  }
  // Small epsilon so that e.g. 0.2 * 805 lands on 161 rather than 160.99999.
  const auto keep = static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(g.splits.train.size()) + 1e-9));
  g.splits.train.resize(std::min(keep, g.splits.train.size()));
}

NeighborLists neighbor_lists(const HetGraph& g, std::size_t relation) {
  const Relation& r = g.relations.at(relation);
  NeighborLists lists(g.node_types[r.dst_type].count);
  for (const auto& [s, d] : r.edges) lists[d].push_back(s);
  return lists;
}

NeighborLists neighbor_lists(const HetGraph& g, const std::string& relation) {
  return neighbor_lists(g, g.relation_index(relation));
}

std::string schema_fingerprint(const HetGraph& g) {
  std::ostringstream canon;
  for (const NodeType& t : g.node_types) canon << "T:" << t.name << ':' << t.count << ':' << t.feature_dim << ';';
  for (const Relation& r : g.relations)
    canon << "R:" << r.name << ':' << g.node_types[r.src_type].name << ':' << g.node_types[r.dst_type].name << ';';
  canon << "C:" << g.num_classes << ";target:" << g.node_types[g.target_type].name;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace hire
