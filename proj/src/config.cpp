#include "hire/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "hire/error.hpp"

namespace hire {

std::string to_string(Selection selection) { return selection == Selection::kLastEpoch ? "last" : "best-val"; }

Selection parse_selection(const std::string& text) {
  if (text == "best-val") return Selection::kBestValidation;
  if (text == "last") return Selection::kLastEpoch;
  throw ConfigError("unknown selection '" + text + "' (expected best-val or last)");
}

namespace {

void reject_unknown(const Json& j, const char* block, std::initializer_list<const char*> known) {
  if (!j.is_object()) throw ConfigError(std::string(block) + " must be a JSON object");
  const std::set<std::string> allowed(known.begin(), known.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + block);
  }
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

template <typename T>
T take(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  T out{};
  read(j, key, out);
  return out;
}

}  // namespace

Json to_json(const DistillConfig& cfg) {
  Json j;
  j["variant"] = to_string(cfg.variant);
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["tau"] = cfg.tau;
  j["sigma"] = cfg.sigma;
  j["kernel"] = to_string(cfg.kernel);
  return j;
}

Json to_json(const TrainConfig& cfg) {
  Json j;
  j["learning_rate"] = cfg.learning_rate;
  j["weight_decay"] = cfg.weight_decay;
  j["dropout"] = cfg.dropout;
  j["epochs"] = cfg.epochs;
  j["seed"] = cfg.seed;
  j["train_fraction"] = cfg.train_fraction;
  j["selection"] = to_string(cfg.selection);
  j["hidden"] = cfg.hidden;
  j["init_student_from_teacher"] = cfg.init_student_from_teacher;
  j["distill"] = to_json(cfg.distill);
  return j;
}

Json to_json(const MetricsReport& r) {
  Json j;
  j["split"] = r.split;
  j["seed"] = r.seed;
  j["cluster_all_nodes"] = r.cluster_all_nodes;
  j["micro_f1"] = r.micro_f1;
  j["macro_f1"] = r.macro_f1;
  j["nmi"] = r.nmi;
  j["ari"] = r.ari;
  j["per_class"] = {{"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1}};
  return j;
}

DistillConfig distill_from_json(const Json& j, DistillConfig base) {
  reject_unknown(j, "distill block", {"variant", "alpha", "beta", "tau", "sigma", "kernel"});
  if (j.contains("variant")) base.variant = parse_variant(take<std::string>(j, "variant"));
  if (j.contains("kernel")) base.kernel = parse_kernel_mode(take<std::string>(j, "kernel"));
  read(j, "alpha", base.alpha);
  read(j, "beta", base.beta);
  read(j, "tau", base.tau);
  read(j, "sigma", base.sigma);
  return base;
}

TrainConfig train_from_json(const Json& j, TrainConfig base) {
  reject_unknown(j, "train block",
                 {"learning_rate", "weight_decay", "dropout", "epochs", "seed", "train_fraction", "selection",
                  "hidden", "init_student_from_teacher", "distill"});
  read(j, "learning_rate", base.learning_rate);
  read(j, "weight_decay", base.weight_decay);
  read(j, "dropout", base.dropout);
  read(j, "epochs", base.epochs);
  read(j, "seed", base.seed);
  read(j, "train_fraction", base.train_fraction);
  if (j.contains("selection")) base.selection = parse_selection(take<std::string>(j, "selection"));
  read(j, "hidden", base.hidden);
  read(j, "init_student_from_teacher", base.init_student_from_teacher);
  if (j.contains("distill")) base.distill = distill_from_json(j.at("distill"), base.distill);
  return base;
}

MetricsReport metrics_from_json(const Json& j) {
  MetricsReport r;
  r.split = take<std::string>(j, "split");
  r.seed = take<std::uint64_t>(j, "seed");
  r.cluster_all_nodes = take<bool>(j, "cluster_all_nodes");
  r.micro_f1 = take<double>(j, "micro_f1");
  r.macro_f1 = take<double>(j, "macro_f1");
  r.nmi = take<double>(j, "nmi");
  r.ari = take<double>(j, "ari");
  const Json pc = take<Json>(j, "per_class");
  r.precision = take<std::vector<double>>(pc, "precision");
  r.recall = take<std::vector<double>>(pc, "recall");
  r.f1 = take<std::vector<double>>(pc, "f1");
  return r;
}

void ExperimentConfig::validate() const {
  if (graph_path.has_value() == schema.has_value()) {
    throw ConfigError("experiment config needs exactly one of 'graph' or 'schema'");
  }
  if (split != "train" && split != "val" && split != "test") {
    throw ConfigError("unknown split '" + split + "' (expected train, val or test)");
  }
  if (seeds.empty()) throw ConfigError("seed list is empty");
  if (variants.empty()) throw ConfigError("variant list is empty");
  train.validate();
}

ExperimentConfig parse_experiment(const std::string& text, const std::filesystem::path& base_dir) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed config: ") + e.what());
  }
  reject_unknown(doc, "config",
                 {"graph", "schema", "schema_file", "train", "out", "seeds", "variants", "sweep", "split",
                  "cluster_all", "workers"});
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  ExperimentConfig cfg;
  const int sources = static_cast<int>(doc.contains("graph")) + static_cast<int>(doc.contains("schema")) +
                      static_cast<int>(doc.contains("schema_file"));
  if (sources != 1) throw ConfigError("experiment config needs exactly one of 'graph', 'schema' or 'schema_file'");
  if (doc.contains("graph")) cfg.graph_path = resolve(take<std::string>(doc, "graph"));
  if (doc.contains("schema")) {
    const Json& s = doc.at("schema");
    if (s.is_string()) {
      cfg.schema = Json{{"preset", s.get<std::string>()}};
    } else if (s.is_object()) {
      cfg.schema = s;
    } else {
      throw ConfigError("'schema' must be a preset name or a schema object");
    }
  }
  if (doc.contains("schema_file")) {
    const std::filesystem::path p = resolve(take<std::string>(doc, "schema_file"));
    try {
      cfg.schema = Json::parse(read_text(p));
    } catch (const Json::parse_error& e) {
      throw ParseError("malformed schema file " + p.string() + ": " + e.what());
    }
  }

  if (doc.contains("train")) cfg.train = train_from_json(doc.at("train"));
  if (doc.contains("out")) cfg.out_dir = resolve(take<std::string>(doc, "out"));
  read(doc, "seeds", cfg.seeds);
  if (doc.contains("variants")) {
    cfg.variants.clear();
    for (const std::string& v : take<std::vector<std::string>>(doc, "variants")) cfg.variants.push_back(parse_variant(v));
  }
  if (doc.contains("sweep")) {
    const Json& sw = doc.at("sweep");
    reject_unknown(sw, "sweep block", {"axis", "tau", "alpha", "beta"});
    if (sw.contains("axis")) cfg.sweep_axis = parse_sweep_axis(take<std::string>(sw, "axis"));
    read(sw, "tau", cfg.grid_overrides.tau);
    read(sw, "alpha", cfg.grid_overrides.alpha);
    read(sw, "beta", cfg.grid_overrides.beta);
  }
  read(doc, "split", cfg.split);
  read(doc, "cluster_all", cfg.cluster_all);
  read(doc, "workers", cfg.workers);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  return parse_experiment(read_text(path), path.parent_path());
}

SweepGrids sweep_grids(const ExperimentConfig& cfg) {
  SweepGrids g = grids_for_axis(cfg.sweep_axis, cfg.train.distill);
  if (!cfg.grid_overrides.tau.empty()) g.tau = cfg.grid_overrides.tau;
  if (!cfg.grid_overrides.alpha.empty()) g.alpha = cfg.grid_overrides.alpha;
  if (!cfg.grid_overrides.beta.empty()) g.beta = cfg.grid_overrides.beta;
  return g;
}

SyntheticSchema resolve_schema(const Json& schema_doc, std::optional<double> scale) {
  Json doc = schema_doc;
  if (scale) doc["scale"] = *scale;
  return parse_schema(doc.dump());
}

HetGraph materialize_graph(const ExperimentConfig& cfg, std::optional<double> scale) {
  if (cfg.graph_path) return load_graph(*cfg.graph_path);
  if (!cfg.schema) throw ConfigError("experiment config has no graph source");
  return generate_synthetic(resolve_schema(*cfg.schema, scale));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace hire
