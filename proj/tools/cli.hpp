#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  /// Command-specific parameters; every numeric value is an exact string.
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool certificates = false;
  std::string output;  ///< empty: standard output
  std::string format = "json";
};

const std::vector<std::string>& commands();

/// Parses argv (without the program name). --config supplies a JSON
/// RunConfig; flags given on the command line override it.
RunConfig parse_args(const std::vector<std::string>& args);

/// Executes `config`, writing the artifact to config.output (or `out`) and
/// diagnostics to `err`. Returns 0, 1 (check failure) or 2 (usage error).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with usage errors mapped to exit code 2.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mdim::cli
