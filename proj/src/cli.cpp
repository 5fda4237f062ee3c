#include "hire/cli.hpp"

#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hire/checkpoint.hpp"
#include "hire/config.hpp"
#include "hire/error.hpp"
#include "hire/reports.hpp"

namespace hire {

namespace fs = std::filesystem;

namespace {

// Flag values that override the experiment config when given.
struct Overrides {
  std::string config;
  std::optional<std::string> graph;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> variant;
  std::optional<double> alpha, beta, tau, sigma;
  std::optional<std::string> kernel;
  std::optional<double> train_fraction;
  std::optional<double> scale;
  std::optional<std::size_t> epochs;
  std::optional<std::string> selection;
  std::optional<std::string> split;
  std::optional<std::size_t> workers;
  bool cluster_all = false;
  std::string teacher;
  std::string checkpoint;
  std::string axes;
  std::string preset;
};

template <typename T>
void opt(CLI::App* cmd, const std::string& name, std::optional<T>& slot, const std::string& help) {
  cmd->add_option_function<T>(name, [&slot](const T& v) { slot = v; }, help);
}

void add_experiment_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "experiment config JSON");
  opt(cmd, "--graph", o.graph, "graph JSON (replaces the config's graph source)");
  opt(cmd, "--out", o.out, "output directory");
  opt(cmd, "--seed", o.seed, "training seed; sweep and ablate run this seed only");
  opt(cmd, "--variant", o.variant, "ce, nkd, rkd or hire");
  opt(cmd, "--alpha", o.alpha, "soft-label weight in [0,1]");
  opt(cmd, "--beta", o.beta, "relation-level weight");
  opt(cmd, "--tau", o.tau, "temperature >= 1");
  opt(cmd, "--sigma", o.sigma, "kernel bandwidth");
  opt(cmd, "--kernel", o.kernel, "exact or taylor2");
  opt(cmd, "--train-fraction", o.train_fraction, "portion of the train split used");
  opt(cmd, "--scale", o.scale, "count multiplier for schema-generated graphs");
  opt(cmd, "--epochs", o.epochs, "training epochs");
  opt(cmd, "--selection", o.selection, "best-val or last");
  opt(cmd, "--split", o.split, "evaluation split: train, val or test");
  opt(cmd, "--workers", o.workers, "worker threads for sweep/ablate (0 = all cores)");
  cmd->add_flag("--cluster-all", o.cluster_all, "cluster all target nodes instead of the split");
}

ExperimentConfig experiment(const Overrides& o) {
  ExperimentConfig cfg;
  if (!o.config.empty()) {
    cfg = load_experiment(o.config);
  } else if (!o.graph) {
    throw ConfigError("pass --config or --graph");
  }
  if (o.graph) {
    cfg.graph_path = fs::path(*o.graph);
    cfg.schema.reset();
  }
  if (o.scale && !cfg.schema) throw ConfigError("--scale applies only to schema-generated graphs");
  if (o.out) cfg.out_dir = *o.out;
  if (o.seed) {
    cfg.train.seed = *o.seed;
    cfg.seeds = {*o.seed};
  }
  DistillConfig& d = cfg.train.distill;
  if (o.variant) d.variant = parse_variant(*o.variant);
  if (o.alpha) d.alpha = *o.alpha;
  if (o.beta) d.beta = *o.beta;
  if (o.tau) d.tau = *o.tau;
  if (o.sigma) d.sigma = *o.sigma;
  if (o.kernel) d.kernel = parse_kernel_mode(*o.kernel);
  if (o.train_fraction) cfg.train.train_fraction = *o.train_fraction;
  if (o.epochs) cfg.train.epochs = *o.epochs;
  if (o.selection) cfg.train.selection = parse_selection(*o.selection);
  if (o.split) cfg.split = *o.split;
  if (o.workers) cfg.workers = *o.workers;
  if (o.cluster_all) cfg.cluster_all = true;
  cfg.validate();
  return cfg;
}

Checkpoint load_teacher(const std::string& path, const HetGraph& g) {
  Checkpoint c = load_checkpoint(path);
  if (c.kind != CheckpointKind::kTeacher) throw ConfigError(path + " is not a teacher checkpoint");
  check_compatible(c, g);
  return c;
}

void report(std::ostream& out, const std::string& what, const MetricsReport& m) {
  out << what << ": " << m.split << " micro_f1=" << format_metric(m.micro_f1) << " macro_f1=" << format_metric(m.macro_f1)
      << " nmi=" << format_metric(m.nmi) << " ari=" << format_metric(m.ari) << '\n';
}

void cmd_gen(const Overrides& o, std::ostream& out) {
  if (o.preset.empty() == o.config.empty()) throw ConfigError("gen needs exactly one of --preset or --config");
  if (!o.out) throw ConfigError("gen needs --out <graph.json>");
  Json doc;
  if (!o.preset.empty()) {
    doc = Json{{"preset", o.preset}};
  } else {
    try {
      doc = Json::parse(read_text(o.config));
    } catch (const Json::parse_error& e) {
      throw ParseError("malformed schema file " + o.config + ": " + e.what());
    }
  }
  SyntheticSchema schema = resolve_schema(doc, o.scale);
  if (o.seed) schema.seed = *o.seed;
  const HetGraph g = generate_synthetic(schema);
  save_graph(g, *o.out);
  out << "wrote " << *o.out << ": " << g.num_types() << " node types, " << g.num_targets() << " "
      << g.node_types[g.target_type].name << " targets, " << g.num_classes << " classes\n";
}

void cmd_train_teacher(const Overrides& o, std::ostream& out) {
  const ExperimentConfig cfg = experiment(o);
  const HetGraph g = materialize_graph(cfg, o.scale);
  const TeacherRun run = pretrain_teacher(g, cfg.train);
  Checkpoint c;
  c.kind = CheckpointKind::kTeacher;
  c.schema_fingerprint = schema_fingerprint(g);
  c.params = run.params;
  c.config = cfg.train;
  c.seed = cfg.train.seed;
  c.metrics = evaluate_model(g, run.params, cfg.split, cfg.train.seed, cfg.cluster_all);
  save_checkpoint(c, cfg.out_dir / "teacher.json");
  write_text(cfg.out_dir / "metrics.json", dump_json(to_json(c.metrics)));
  write_text(cfg.out_dir / "history.csv", history_csv(run.history));
  report(out, "teacher", c.metrics);
}

void cmd_distill(const Overrides& o, std::ostream& out) {
  if (o.teacher.empty()) throw ConfigError("distill needs --teacher <checkpoint>");
  const ExperimentConfig cfg = experiment(o);
  const HetGraph g = materialize_graph(cfg, o.scale);
  const Checkpoint teacher = load_teacher(o.teacher, g);
  const StudentRun run = distill_student(g, teacher.params, cfg.train);
  Checkpoint c;
  c.kind = CheckpointKind::kStudent;
  c.schema_fingerprint = schema_fingerprint(g);
  c.params = run.params;
  c.attention = run.attention;
  c.config = cfg.train;
  c.seed = cfg.train.seed;
  c.metrics = evaluate_model(g, run.params, cfg.split, cfg.train.seed, cfg.cluster_all);
  save_checkpoint(c, cfg.out_dir / "student.json");
  write_text(cfg.out_dir / "metrics.json", dump_json(to_json(c.metrics)));
  write_text(cfg.out_dir / "history.csv", history_csv(run.history));
  write_text(cfg.out_dir / "attention.csv", attention_csv(run.history));
  report(out, "student (" + to_string(cfg.train.distill.variant) + ")", c.metrics);
}

void cmd_eval(const Overrides& o, std::ostream& out) {
  if (o.checkpoint.empty()) throw ConfigError("eval needs --checkpoint <file>");
  HetGraph g;
  std::string split = o.split.value_or("test");
  bool cluster_all = o.cluster_all;
  if (o.graph) {
    g = load_graph(*o.graph);
  } else if (!o.config.empty()) {
    const ExperimentConfig cfg = load_experiment(o.config);
    g = materialize_graph(cfg, o.scale);
    if (!o.split) split = cfg.split;
    cluster_all = cluster_all || cfg.cluster_all;
  } else {
    throw ConfigError("eval needs --graph or --config");
  }
  const Checkpoint c = load_checkpoint(o.checkpoint);
  check_compatible(c, g);
  const MetricsReport m = evaluate_model(g, c.params, split, o.seed.value_or(c.seed), cluster_all);
  const std::string text = dump_json(to_json(m));
  if (o.out) {
    write_text(*o.out, text);
    report(out, "eval", m);
  } else {
    out << text;
  }
}

void cmd_sweep(const Overrides& o, std::ostream& out) {
  if (o.teacher.empty()) throw ConfigError("sweep needs --teacher <checkpoint>");
  ExperimentConfig cfg = experiment(o);
  if (!o.axes.empty()) cfg.sweep_axis = parse_sweep_axis(o.axes);
  const HetGraph g = materialize_graph(cfg, o.scale);
  const Checkpoint teacher = load_teacher(o.teacher, g);
  const std::vector<SweepRow> rows = grid_sweep(g, teacher.params, cfg.train, sweep_grids(cfg), cfg.seeds, cfg.workers);
  write_text(cfg.out_dir / "sweep.csv", sweep_csv(rows));
  out << "wrote " << (cfg.out_dir / "sweep.csv").string() << ": " << rows.size() << " rows\n";
}

void cmd_ablate(const Overrides& o, std::ostream& out) {
  if (o.teacher.empty()) throw ConfigError("ablate needs --teacher <checkpoint>");
  const ExperimentConfig cfg = experiment(o);
  const HetGraph g = materialize_graph(cfg, o.scale);
  const Checkpoint teacher = load_teacher(o.teacher, g);
  const std::vector<AblationRow> rows =
      ablation_runs(g, teacher.params, cfg.train, cfg.variants, cfg.seeds, cfg.split, cfg.workers);
  const std::string csv = ablation_csv(rows);
  write_text(cfg.out_dir / "ablation.csv", csv);
  out << csv;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heterogeneous-graph knowledge distillation: RGCN teacher, NKD + RKD student"};
  app.name("hire");
  app.require_subcommand(1);
  Overrides o;

  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic graph file");
  gen->add_option("--preset", o.preset, "acm-like, imdb-like or dblp-like");
  gen->add_option("--config", o.config, "schema JSON file");
  opt(gen, "--scale", o.scale, "count multiplier");
  opt(gen, "--seed", o.seed, "generator seed");
  opt(gen, "--out", o.out, "graph JSON to write");

  CLI::App* train = app.add_subcommand("train-teacher", "pretrain the teacher with cross-entropy");
  add_experiment_flags(train, o);

  CLI::App* distill = app.add_subcommand("distill", "distill a student from a teacher checkpoint");
  add_experiment_flags(distill, o);
  distill->add_option("--teacher", o.teacher, "teacher checkpoint");

  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint on a graph split");
  eval->add_option("--checkpoint", o.checkpoint, "checkpoint file");
  eval->add_option("--config", o.config, "experiment config providing the graph");
  opt(eval, "--graph", o.graph, "graph JSON");
  opt(eval, "--split", o.split, "train, val or test");
  opt(eval, "--seed", o.seed, "k-means seed (default: the checkpoint's)");
  opt(eval, "--scale", o.scale, "count multiplier for schema-generated graphs");
  opt(eval, "--out", o.out, "metrics JSON to write (default: stdout)");
  eval->add_flag("--cluster-all", o.cluster_all, "cluster all target nodes");

  CLI::App* sweep = app.add_subcommand("sweep", "grid sweep over tau, alpha and beta");
  add_experiment_flags(sweep, o);
  sweep->add_option("--teacher", o.teacher, "teacher checkpoint");
  sweep->add_option("--axes", o.axes, "full, tau, alpha or beta");

  CLI::App* ablate = app.add_subcommand("ablate", "compare ce, nkd, rkd and hire over the seed list");
  add_experiment_flags(ablate, o);
  ablate->add_option("--teacher", o.teacher, "teacher checkpoint");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (gen->parsed()) cmd_gen(o, out);
    if (train->parsed()) cmd_train_teacher(o, out);
    if (distill->parsed()) cmd_distill(o, out);
    if (eval->parsed()) cmd_eval(o, out);
    if (sweep->parsed()) cmd_sweep(o, out);
    if (ablate->parsed()) cmd_ablate(o, out);
  } catch (const SchemaMismatchError& e) {
    err << "error: schema mismatch: " << e.what() << '\n';
    return kExitIncompatible;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DegenerateInputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace hire
