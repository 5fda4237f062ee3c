#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hire/evaluate.hpp"
#include "hire/hetgraph.hpp"
#include "hire/json_writer.hpp"
#include "hire/sweep.hpp"
#include "hire/synthetic.hpp"
#include "hire/trainer.hpp"

namespace hire {

std::string to_string(Selection selection);
Selection parse_selection(const std::string& text);

Json to_json(const DistillConfig& cfg);
Json to_json(const TrainConfig& cfg);
Json to_json(const MetricsReport& report);

/// Fields absent from `j` keep their value in `base`. Unknown keys and
/// ill-typed values throw ConfigError.
DistillConfig distill_from_json(const Json& j, DistillConfig base = {});
TrainConfig train_from_json(const Json& j, TrainConfig base = {});
MetricsReport metrics_from_json(const Json& j);

/// One experiment: a graph (file or generated), training settings, outputs,
/// and the ablation and sweep definitions.
struct ExperimentConfig {
  std::optional<std::filesystem::path> graph_path;
  /// Schema document in the parse_schema format.
  std::optional<Json> schema;
  TrainConfig train;
  std::filesystem::path out_dir = "out";
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  std::vector<Variant> variants = {Variant::kCE, Variant::kNKD, Variant::kRKD, Variant::kHIRE};
  SweepAxis sweep_axis = SweepAxis::kFull;
  /// Non-empty lists replace the corresponding default grid.
  SweepGrids grid_overrides;
  std::string split = "test";
  bool cluster_all = false;
  std::size_t workers = 0;

  /// Exactly one graph source, a known split, non-empty seeds and variants,
  /// and a valid train block.
  void validate() const;
};

/// Relative paths inside the document resolve against `base_dir`.
ExperimentConfig parse_experiment(const std::string& text, const std::filesystem::path& base_dir);
ExperimentConfig load_experiment(const std::filesystem::path& path);

/// Grids for the configured axis after overrides.
SweepGrids sweep_grids(const ExperimentConfig& cfg);

/// The schema with an optional scale override applied.
SyntheticSchema resolve_schema(const Json& schema_doc, std::optional<double> scale = std::nullopt);

/// Load the graph file or generate one from the schema.
HetGraph materialize_graph(const ExperimentConfig& cfg, std::optional<double> scale = std::nullopt);

/// Whole file as a string; IoError naming the path on failure.
std::string read_text(const std::filesystem::path& path);
/// Creates parent directories; IoError naming the path on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace hire
