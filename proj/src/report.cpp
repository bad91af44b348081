#include "agmonlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace agmonlab {

double check_scale(double lhs, double rhs) {
  return std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string VerificationReport::to_json_string() const {
  nlohmann::ordered_json j;
  j["check"] = check;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  j["margin"] = margin;
  j["tol"] = tol;
  j["pass"] = pass;
  j["notes"] = notes;
  return j.dump();
}

}  // namespace agmonlab
