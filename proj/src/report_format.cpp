#include "gmrdr/report_format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace gmrdr {

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

double round_sig(double x, int digits) {
  if (!std::isfinite(x)) {
    return x;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

std::vector<double> round_sig(std::vector<double> xs, int digits) {
  for (double& x : xs) {
    x = round_sig(x, digits);
  }
  return xs;
}

}  // namespace gmrdr
