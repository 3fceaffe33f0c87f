#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tentative::cli {

struct Environment {
  std::optional<std::string> resample_seed;  // RESAMPLE_SEED

  static Environment from_process();
};

/// Runs one command. `args` excludes the program name. Returns 0 on success,
/// 1 for data or domain errors and 2 for usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment& env = Environment::from_process());

}  // namespace tentative::cli
