#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "dsaddle/tolerance.hpp"

namespace dsaddle::cli {

enum class Subcommand { Diagnose, Invert, Generate, Verify };
enum class OutputFormat { Text, Json };

// Exit codes. Diagnose maps its verdict onto 0/1/2.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSingular = 1;
inline constexpr int kExitUndetermined = 2;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;

struct RunConfig {
  Subcommand command = Subcommand::Diagnose;
  std::filesystem::path input_dir;
  std::filesystem::path output_dir;
  std::filesystem::path spec_path;
  ToleranceConfig tol;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  OutputFormat format = OutputFormat::Text;
  bool allow_dense = false;
  bool oracle = false;
};

/// Executes one subcommand. Reports go to out, diagnostics to err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace dsaddle::cli
