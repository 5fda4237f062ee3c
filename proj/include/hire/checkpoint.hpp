#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "hire/distill.hpp"
#include "hire/evaluate.hpp"
#include "hire/hetgraph.hpp"
#include "hire/rgcn.hpp"
#include "hire/trainer.hpp"

namespace hire {

inline constexpr int kCheckpointFormat = 1;

enum class CheckpointKind { kTeacher, kStudent };

struct Checkpoint {
  int format_version = kCheckpointFormat;
  CheckpointKind kind = CheckpointKind::kTeacher;
  std::string schema_fingerprint;
  ModelParams params;
  std::optional<AttentionParams> attention;  // students only
  TrainConfig config;
  std::uint64_t seed = 0;
  MetricsReport metrics;
};

/// JSON text with every parameter as a named row-major array.
std::string serialize_checkpoint(const Checkpoint& ckpt);
/// ParseError on malformed text, SchemaMismatchError on an unknown format version.
Checkpoint parse_checkpoint(const std::string& text);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// SchemaMismatchError unless the checkpoint was trained on g's schema and
/// its parameter shapes fit g.
void check_compatible(const Checkpoint& ckpt, const HetGraph& g);

}  // namespace hire
