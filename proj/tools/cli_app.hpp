#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qdisc::cli {

enum class Command { validate, certify, optimize };
enum class Init { uniform, srm, file };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
  Command command = Command::optimize;
  std::filesystem::path input_path;
  /// Generates the m-state shifted-basis ensemble instead of reading a file.
  std::optional<std::size_t> example_shifted;
  /// Measurement for certify, or the starting point with --init file.
  std::filesystem::path povm_path;
  double tol = 1e-8;
  std::optional<std::size_t> max_iters;
  bool line_search = true;
  Init init = Init::uniform;
  std::vector<double> p_grid = {0.0, 0.01, 0.02, 0.05, 0.1, 0.2};
  std::filesystem::path output_dir = ".";
  std::uint64_t seed = 0;
};

/// Parses argv into a config. Returns the exit code to use if parsing ended
/// the run (help, usage error), std::nullopt to proceed.
std::optional<int> parse_args(int argc, const char* const* argv, RunConfig& cfg,
                              std::ostream& out, std::ostream& err);

/// Executes one command and returns the process exit code.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdisc::cli
