#pragma once

#include <string>
#include <vector>

namespace agmonlab {

// One named check with its two sides, margin and verdict. Serializes to
// {"check","lhs","rhs","margin","tol","pass","notes"}.
struct VerificationReport {
  std::string check;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::vector<std::string> notes;

  std::string to_json_string() const;
};

// max(1, |lhs|, |rhs|): the scale used by all relative tolerances.
double check_scale(double lhs, double rhs);

// Formats a double with 17 significant digits (report/CSV output).
std::string fmt_double(double v);

}  // namespace agmonlab
