#include "hire/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hire/error.hpp"
#include "hire/evaluate.hpp"

namespace hire {

std::string format_metric(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

namespace {

// Compact rendering of grid values such as 0.1 or 100.
std::string format_param(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

bool has_attention(const RunHistory& h) {
  for (const EpochRecord& e : h.epochs) {
    if (!e.attention.empty()) return true;
  }
  return false;
}

}  // namespace

std::string history_csv(const RunHistory& history) {
  const bool att = has_attention(history);
  std::ostringstream os;
  os << "epoch,total,ce,kd,rkd";
  if (att) {
    for (const std::string& t : history.type_names) os << ",att_" << t;
  }
  os << ",val_micro_f1\n";
  for (const EpochRecord& e : history.epochs) {
    os << e.epoch << ',' << format_metric(e.total) << ',' << format_metric(e.ce) << ',' << format_metric(e.kd) << ','
       << format_metric(e.rkd);
    if (att) {
      if (e.attention.size() != history.type_names.size()) throw ShapeError("history attention width mismatch");
      for (double a : e.attention) os << ',' << format_metric(a);
    }
    os << ',' << format_metric(e.val_micro_f1) << '\n';
  }
  return os.str();
}

std::string attention_csv(const RunHistory& history) {
  std::ostringstream os;
  os << "epoch,type,coefficient\n";
  for (const AttentionPoint& p : attention_trace(history)) {
    os << p.epoch << ',' << p.type << ',' << format_metric(p.coefficient) << '\n';
  }
  return os.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "tau,alpha,beta,seed,test_micro_f1,test_macro_f1\n";
  for (const SweepRow& r : rows) {
    os << format_param(r.tau) << ',' << format_param(r.alpha) << ',' << format_param(r.beta) << ',' << r.seed << ','
       << format_metric(r.test_micro_f1) << ',' << format_metric(r.test_macro_f1) << '\n';
  }
  return os.str();
}

SummaryStat summarize(const std::vector<double>& values) {
  if (values.empty()) throw DegenerateInputError("summary of no values");
  SummaryStat s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(var / static_cast<double>(values.size()));
  return s;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  os << "variant,seed,test_micro_f1,test_macro_f1\n";
  std::vector<Variant> order;
  for (const AblationRow& r : rows) {
    os << to_string(r.variant) << ',' << r.seed << ',' << format_metric(r.micro_f1) << ',' << format_metric(r.macro_f1)
       << '\n';
    if (std::find(order.begin(), order.end(), r.variant) == order.end()) order.push_back(r.variant);
  }
  for (Variant v : order) {
    std::vector<double> micro, macro;
    for (const AblationRow& r : rows) {
      if (r.variant != v) continue;
      micro.push_back(r.micro_f1);
      macro.push_back(r.macro_f1);
    }
    const SummaryStat mi = summarize(micro), ma = summarize(macro);
    os << to_string(v) << ",mean," << format_metric(mi.mean) << ',' << format_metric(ma.mean) << '\n';
    os << to_string(v) << ",std," << format_metric(mi.std) << ',' << format_metric(ma.std) << '\n';
  }
  return os.str();
}

}  // namespace hire
