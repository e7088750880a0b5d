#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "config.hpp"

namespace bheat::cli {

struct RunContext {
  std::uint64_t seed = 1;
  std::filesystem::path out;
  bool strict = false;
  int threads = 0;  // 0 = runtime default
};

/// Dispatches on config key "subcommand", writes artifacts plus manifest.json
/// into ctx.out. Throws ConfigError (exit 2), AcceptanceError (exit 3) or
/// std::runtime_error (numerical failure, exit 4).
void run_scenario(Config& config, const RunContext& ctx);

}  // namespace bheat::cli
