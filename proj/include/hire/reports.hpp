#pragma once

#include <string>
#include <vector>

#include "hire/history.hpp"
#include "hire/sweep.hpp"

namespace hire {

/// "%.6f".
std::string format_metric(double x);

/// epoch,total,ce,kd,rkd,att_<type>...,val_micro_f1 (attention columns only
/// when the run recorded coefficients).
std::string history_csv(const RunHistory& history);

/// epoch,type,coefficient, one row per epoch and node type.
std::string attention_csv(const RunHistory& history);

/// tau,alpha,beta,seed,test_micro_f1,test_macro_f1.
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct SummaryStat {
  double mean = 0.0;
  double std = 0.0;  // population
};

SummaryStat summarize(const std::vector<double>& values);

/// variant,seed,test_micro_f1,test_macro_f1 per run, then a mean row and a
/// std row per variant with "mean" / "std" in the seed column.
std::string ablation_csv(const std::vector<AblationRow>& rows);

}  // namespace hire
