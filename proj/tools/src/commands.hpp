#pragma once

#include <ostream>
#include <string>

#include "config.hpp"

namespace lavrentiev::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_check_failed = 1,
  exit_config = 2,
  exit_solver = 3,
};

struct CommandContext {
  bool verbose = false;
  /// CSV goes here when no output path is configured.
  std::ostream* out = nullptr;
  /// Human-readable summary.
  std::ostream* err = nullptr;
};

int cmd_rates(const RunConfig& cfg, const CommandContext& ctx);
int cmd_rules(const RunConfig& cfg, const CommandContext& ctx);
int cmd_distance(const RunConfig& cfg, const CommandContext& ctx);
int cmd_vsc(const RunConfig& cfg, const CommandContext& ctx);
int cmd_fracpow(const RunConfig& cfg, const CommandContext& ctx);
int cmd_selftest(const CommandContext& ctx);

}  // namespace lavrentiev::cli
