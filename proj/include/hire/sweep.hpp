#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hire/hetgraph.hpp"
#include "hire/rgcn.hpp"
#include "hire/trainer.hpp"

namespace hire {

/// Run body(0..n-1) on up to `workers` threads (0 picks the hardware count).
/// The first exception thrown by any call is rethrown after all threads stop.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body);

struct SweepGrids {
  std::vector<double> tau;
  std::vector<double> alpha;
  std::vector<double> beta;

  std::size_t cells() const { return tau.size() * alpha.size() * beta.size(); }
};

/// tau in 1..10, alpha in 0, 0.1, ..., 1, beta in {0.01, 0.1, 1, 10, 100}.
SweepGrids full_grids();

enum class SweepAxis { kFull, kTau, kAlpha, kBeta };

SweepAxis parse_sweep_axis(const std::string& text);

/// The full grids, or one axis of them with the other two pinned to base.
SweepGrids grids_for_axis(SweepAxis axis, const DistillConfig& base);

struct SweepRow {
  double tau = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  double test_micro_f1 = 0.0;
  double test_macro_f1 = 0.0;
};

/// One distill_student run per (seed, tau, alpha, beta) cell on up to
/// `workers` threads (0 picks the hardware count). Rows come back in
/// seed-major, then tau, alpha, beta order regardless of scheduling.
std::vector<SweepRow> grid_sweep(const HetGraph& g, const ModelParams& teacher, const TrainConfig& base,
                                 const SweepGrids& grids, const std::vector<std::uint64_t>& seeds,
                                 std::size_t workers = 0);

struct AblationRow {
  Variant variant = Variant::kHIRE;
  std::uint64_t seed = 0;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
};

/// One student per (variant, seed), variant-major, scored on `split`.
std::vector<AblationRow> ablation_runs(const HetGraph& g, const ModelParams& teacher, const TrainConfig& base,
                                       const std::vector<Variant>& variants, const std::vector<std::uint64_t>& seeds,
                                       const std::string& split = "test", std::size_t workers = 0);

}  // namespace hire
