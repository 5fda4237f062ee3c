#pragma once

#include <string>
#include <vector>

namespace hire {

struct EpochRecord {
  std::size_t epoch = 0;
  double total = 0.0;
  double ce = 0.0;
  double kd = 0.0;
  double rkd = 0.0;
  std::vector<double> attention;  // one coefficient per node type; empty for teacher runs
  double val_micro_f1 = 0.0;
};

struct RunHistory {
  std::vector<std::string> type_names;
  std::vector<EpochRecord> epochs;
  std::size_t selected_epoch = 0;
};

}  // namespace hire
