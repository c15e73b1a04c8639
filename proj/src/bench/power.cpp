#include <charconv>
#include <fstream>
#include <string>

#include "edgetrack/bench.hpp"

namespace edgetrack {

std::optional<double> sample_power(const std::filesystem::path& sensor) {
  if (sensor.empty()) return std::nullopt;
  std::ifstream in(sensor);
  std::string token;
  if (!in || !(in >> token)) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

}  // namespace edgetrack
