#pragma once

#include <string>
#include <vector>

namespace gmrdr {

// Output values are pinned to 10 significant digits so emitted CSV/JSON is
// stable across platforms.
double round_sig(double x, int digits = 10);
std::vector<double> round_sig(std::vector<double> xs, int digits = 10);

// Shortest decimal form at 10 significant digits ("%.10g").
std::string format_number(double x);

}  // namespace gmrdr
