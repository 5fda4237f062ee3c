#include "hire/checkpoint.hpp"

#include <map>

#include "hire/config.hpp"
#include "hire/error.hpp"
#include "hire/json_writer.hpp"

namespace hire {

namespace {

Json matrix_entry(const std::string& name, const Matrix& m) {
  Json j;
  j["name"] = name;
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  j["data"] = m.data;
  return j;
}

using NamedMatrices = std::map<std::string, Matrix>;

NamedMatrices read_matrices(const Json& list) {
  if (!list.is_array()) throw ParseError("checkpoint parameter list must be an array");
  NamedMatrices out;
  for (const Json& e : list) {
    Matrix m(e.at("rows").get<std::size_t>(), e.at("cols").get<std::size_t>(), 0.0);
    m.data = e.at("data").get<std::vector<double>>();
    const std::string name = e.at("name").get<std::string>();
    if (m.data.size() != m.rows * m.cols) throw ParseError("checkpoint parameter '" + name + "' has a wrong length");
    if (!out.emplace(name, std::move(m)).second) throw ParseError("duplicate checkpoint parameter '" + name + "'");
  }
  return out;
}

// Moves each named matrix into its slot; every slot must be filled exactly once.
template <typename Params>
void fill(Params& p, NamedMatrices& named, const char* what) {
  p.for_each([&](const std::string& name, Matrix& slot) {
    auto it = named.find(name);
    if (it == named.end()) throw ParseError(std::string(what) + " parameter '" + name + "' is missing");
    slot = std::move(it->second);
    named.erase(it);
  });
  if (!named.empty()) throw ParseError(std::string("unexpected ") + what + " parameter '" + named.begin()->first + "'");
}

ModelParams skeleton(std::size_t relations, std::size_t types) {
  ModelParams p;
  p.layer1.activation = true;
  p.layer2.activation = false;
  for (RgcnLayerParams* l : {&p.layer1, &p.layer2}) {
    l->relation_weights.resize(relations);
    l->self_weights.resize(types);
  }
  return p;
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  Json j;
  j["format_version"] = ckpt.format_version;
  j["kind"] = ckpt.kind == CheckpointKind::kTeacher ? "teacher" : "student";
  j["schema_fingerprint"] = ckpt.schema_fingerprint;
  j["seed"] = ckpt.seed;
  j["architecture"] = {{"relations", ckpt.params.layer1.relation_weights.size()},
                       {"node_types", ckpt.params.layer1.self_weights.size()}};
  Json params = Json::array();
  ckpt.params.for_each([&](const std::string& name, const Matrix& m) { params.push_back(matrix_entry(name, m)); });
  j["params"] = std::move(params);
  if (ckpt.attention) {
    Json att = Json::array();
    ckpt.attention->for_each([&](const std::string& name, const Matrix& m) { att.push_back(matrix_entry(name, m)); });
    j["attention"] = std::move(att);
  }
  j["config"] = to_json(ckpt.config);
  j["metrics"] = to_json(ckpt.metrics);
  return dump_json(j);
}

Checkpoint parse_checkpoint(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed checkpoint: ") + e.what());
  }
  Checkpoint c;
  try {
    c.format_version = j.at("format_version").get<int>();
    if (c.format_version != kCheckpointFormat) {
      throw SchemaMismatchError("checkpoint format version " + std::to_string(c.format_version) +
                                " is not supported (expected " + std::to_string(kCheckpointFormat) + ")");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "teacher") {
      c.kind = CheckpointKind::kTeacher;
    } else if (kind == "student") {
      c.kind = CheckpointKind::kStudent;
    } else {
      throw ParseError("unknown checkpoint kind '" + kind + "'");
    }
    c.schema_fingerprint = j.at("schema_fingerprint").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    const Json& arch = j.at("architecture");
    c.params = skeleton(arch.at("relations").get<std::size_t>(), arch.at("node_types").get<std::size_t>());
    NamedMatrices named = read_matrices(j.at("params"));
    fill(c.params, named, "model");
    if (j.contains("attention")) {
      AttentionParams att;
      NamedMatrices named_att = read_matrices(j.at("attention"));
      fill(att, named_att, "attention");
      c.attention = std::move(att);
    }
    c.config = train_from_json(j.at("config"));
    c.metrics = metrics_from_json(j.at("metrics"));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("invalid checkpoint: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(std::string("invalid checkpoint: ") + e.what());
  }
  return c;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  write_text(path, serialize_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return parse_checkpoint(read_text(path)); }

void check_compatible(const Checkpoint& ckpt, const HetGraph& g) {
  const std::string fp = schema_fingerprint(g);
  if (ckpt.schema_fingerprint != fp) {
    throw SchemaMismatchError("checkpoint schema " + ckpt.schema_fingerprint + " does not match graph schema " + fp);
  }
  try {
    check_params(g, ckpt.params);
  } catch (const ConfigError& e) {
    throw SchemaMismatchError(std::string("checkpoint parameters do not fit the graph: ") + e.what());
  }
}

}  // namespace hire
