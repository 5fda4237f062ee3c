#pragma once

#include <cstdint>
#include <vector>

#include "hire/distill.hpp"
#include "hire/hetgraph.hpp"
#include "hire/history.hpp"
#include "hire/rgcn.hpp"

namespace hire {

enum class Selection { kBestValidation, kLastEpoch };

struct TrainConfig {
  double learning_rate = 0.01;
  double weight_decay = 5e-4;
  double dropout = 0.0;
  std::size_t epochs = 200;
  std::uint64_t seed = 0;
  DistillConfig distill;
  /// Portion of the graph's train split that is used, taken from the front.
  double train_fraction = 1.0;
  Selection selection = Selection::kBestValidation;
  std::size_t hidden = kDefaultHidden;
  /// Start the student from the teacher's weights instead of a fresh draw.
  bool init_student_from_teacher = false;

  /// Throws ConfigError on epochs < 1, learning_rate <= 0, weight_decay < 0,
  /// dropout outside [0,1), train_fraction outside (0,1] or a bad distill block.
  void validate() const;
};

/// Train rows after applying cfg.train_fraction; throws when none remain.
std::vector<std::size_t> training_rows(const HetGraph& g, double train_fraction);

struct TeacherRun {
  ModelParams params;
  RunHistory history;
};

struct StudentRun {
  ModelParams params;
  AttentionParams attention;
  RunHistory history;
};

/// Full-batch cross-entropy training. Returns the selected epoch's parameters.
TeacherRun pretrain_teacher(const HetGraph& g, const TrainConfig& cfg);

/// Distill a student of the teacher's architecture under cfg.distill. The
/// student and attention parameters share one Adam instance. Throws
/// SchemaMismatchError when the teacher does not fit the graph.
StudentRun distill_student(const HetGraph& g, const ModelParams& teacher, const TrainConfig& cfg);

}  // namespace hire
