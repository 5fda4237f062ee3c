#include "hire/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "hire/error.hpp"
#include "hire/evaluate.hpp"

namespace hire {

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

SweepGrids full_grids() {
  SweepGrids g;
  for (int t = 1; t <= 10; ++t) g.tau.push_back(t);
  for (int a = 0; a <= 10; ++a) g.alpha.push_back(a / 10.0);
  g.beta = {0.01, 0.1, 1.0, 10.0, 100.0};
  return g;
}

SweepAxis parse_sweep_axis(const std::string& text) {
  if (text == "full") return SweepAxis::kFull;
  if (text == "tau") return SweepAxis::kTau;
  if (text == "alpha") return SweepAxis::kAlpha;
  if (text == "beta") return SweepAxis::kBeta;
  throw ConfigError("unknown sweep axis '" + text + "' (expected full, tau, alpha or beta)");
}

SweepGrids grids_for_axis(SweepAxis axis, const DistillConfig& base) {
  SweepGrids g = full_grids();
  if (axis == SweepAxis::kFull) return g;
  if (axis != SweepAxis::kTau) g.tau = {base.tau};
  if (axis != SweepAxis::kAlpha) g.alpha = {base.alpha};
  if (axis != SweepAxis::kBeta) g.beta = {base.beta};
  return g;
}

std::vector<SweepRow> grid_sweep(const HetGraph& g, const ModelParams& teacher, const TrainConfig& base,
                                 const SweepGrids& grids, const std::vector<std::uint64_t>& seeds,
                                 std::size_t workers) {
  if (grids.cells() == 0) throw ConfigError("sweep grids must be nonempty");
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");

  std::vector<SweepRow> rows;
  for (std::uint64_t seed : seeds)
    for (double tau : grids.tau)
      for (double alpha : grids.alpha)
        for (double beta : grids.beta) rows.push_back(SweepRow{tau, alpha, beta, seed, 0.0, 0.0});

  const GraphInput input(g);
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    TrainConfig cfg = base;
    cfg.seed = rows[i].seed;
    cfg.distill.tau = rows[i].tau;
    cfg.distill.alpha = rows[i].alpha;
    cfg.distill.beta = rows[i].beta;
    const StudentRun run = distill_student(g, teacher, cfg);
    const F1Scores f = classification_scores(infer(input, run.params), g, g.splits.test);
    rows[i].test_micro_f1 = f.micro;
    rows[i].test_macro_f1 = f.macro;
  });
  return rows;
}

std::vector<AblationRow> ablation_runs(const HetGraph& g, const ModelParams& teacher, const TrainConfig& base,
                                       const std::vector<Variant>& variants, const std::vector<std::uint64_t>& seeds,
                                       const std::string& split, std::size_t workers) {
  if (variants.empty() || seeds.empty()) throw ConfigError("ablation needs at least one variant and one seed");
  const std::vector<std::size_t>& rows_eval = split_rows(g, split);
  if (rows_eval.empty()) throw DegenerateInputError("split '" + split + "' is empty");
  std::vector<AblationRow> rows;
  for (Variant v : variants)
    for (std::uint64_t seed : seeds) rows.push_back(AblationRow{v, seed, 0.0, 0.0});
  const GraphInput input(g);
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    TrainConfig cfg = base;
    cfg.seed = rows[i].seed;
    cfg.distill.variant = rows[i].variant;
    const StudentRun run = distill_student(g, teacher, cfg);
    const F1Scores f = classification_scores(infer(input, run.params), g, rows_eval);
    rows[i].micro_f1 = f.micro;
    rows[i].macro_f1 = f.macro;
  });
  return rows;
}

}  // namespace hire
