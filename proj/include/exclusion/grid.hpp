#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "exclusion/errors.hpp"

namespace exclusion {

/// Parses "start:stop:step" into start, start+step, ... up to stop inclusive
/// (stop is included when within half a step). A single number yields itself;
/// a comma list "a,b,c" is taken verbatim.
inline std::vector<double> parse_grid(const std::string& spec) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ParameterError("bad grid value '" + s + "' in '" + spec + "'");
    }
    detail::require(used == s.size() && std::isfinite(v), "bad grid value '" + s + "' in '" + spec + "'");
    return v;
  };
  std::vector<std::string> parts;
  const char sep = spec.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, sep);) parts.push_back(item);
  detail::require(!parts.empty(), "empty grid");

  if (sep == ',') {
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(number(p));
    return out;
  }
  detail::require(parts.size() == 3, "grid must look like start:stop:step");
  const double start = number(parts[0]);
  const double stop = number(parts[1]);
  const double step = number(parts[2]);
  detail::require(step > 0.0, "grid step must be positive");
  detail::require(stop >= start, "grid stop must be >= start");
  const auto count = static_cast<long>(std::floor((stop - start) / step + 0.5));
  detail::require(count < 10'000'000, "grid too long");
  std::vector<double> out;
  for (long i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

}  // namespace exclusion
