#pragma once

#include <string>

namespace mtnn {

/// Doubles are written with 17 significant digits so text round trips are
/// bitwise exact.
std::string fmt17(double v);

double parse_double(const std::string& token, const std::string& path, int lineno);

}  // namespace mtnn
