#pragma once

#include <cmath>
#include <optional>
#include <string>

#include <lavrentiev/experiments.hpp>

namespace lavrentiev::cli {

struct VscStudy {
  int n = 400;
  VscVariant variant{};
  double beta = 0.0;
  RadialSampler sampler{};
  /// Fail when the fitted coefficient exceeds this value.
  std::optional<double> bound = std::sqrt(2.0) * (1.0 + 1e-10);
};

struct FracpowStudy {
  int n = 200;
  DunfordSpec dunford{};
  double tolerance = 1e-4;
};

/// Everything a config file can set.
struct RunConfig {
  ExperimentConfig experiment;
  VscStudy vsc;
  FracpowStudy fracpow;
};

/// Command-line overrides; they take precedence over the file.
struct Overrides {
  std::optional<int> n;
  std::optional<std::uint64_t> seed;
  std::optional<double> delta0;
  std::optional<std::string> out;
};

/// Parses a TOML config. Unknown keys and out-of-range values throw
/// ConfigError naming the key; syntax errors (including duplicate keys)
/// carry the line number.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_string(const std::string& text, const std::string& source_name = "<string>");

void apply_overrides(RunConfig& cfg, const Overrides& o);

}  // namespace lavrentiev::cli
