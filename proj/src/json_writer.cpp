#include "hire/json_writer.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace hire {

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  if (x == 0.0 && std::signbit(x)) return "-0.0";  // "-0" would parse back as integer zero
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

bool is_scalar(const Json& v) { return !v.is_object() && !v.is_array(); }

void write(std::ostringstream& os, const Json& v, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(depth + 1) * 2, ' ');
  if (v.is_number_float()) {
    os << format_double(v.get<double>());
  } else if (v.is_object()) {
    if (v.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) os << ",\n";
      first = false;
      os << inner << Json(it.key()).dump() << ": ";
      write(os, it.value(), depth + 1);
    }
    os << '\n' << pad << '}';
  } else if (v.is_array()) {
    bool flat = true;
    for (const Json& e : v) flat = flat && is_scalar(e);
    if (v.empty() || flat) {
      os << '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        write(os, v[i], depth + 1);
      }
      os << ']';
      return;
    }
    os << "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os << ",\n";
      os << inner;
      write(os, v[i], depth + 1);
    }
    os << '\n' << pad << ']';
  } else {
    os << v.dump();
  }
}

}  // namespace

std::string dump_json(const Json& value) {
  std::ostringstream os;
  write(os, value, 0);
  os << '\n';
  return os.str();
}

}  // namespace hire
