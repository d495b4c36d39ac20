#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "classd/dsp_chain.hpp"
#include "classd/report.hpp"

namespace classd::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kInternalError = 1;
inline constexpr int kInputError = 2;
inline constexpr int kNoFeasible = 3;
inline constexpr int kQualityFloor = 4;

struct RunConfig {
  std::string input;
  std::string output;
  ChainConfig chain;
  std::string pe_lib;     // empty: built-in library
  std::string scenario;
  std::optional<double> deadline_ms;
  std::vector<std::string> pins;  // NAME=hw|sw
  report::Format format = report::Format::Text;
  double snr_floor_db = 60.0;

  // generate
  double freq_hz = 1000.0;
  double level_dbfs = -6.0;
  double duration_s = 4.3;
  std::optional<double> noise_dbfs;
  std::uint64_t seed = 1;
};

int cmd_convert(const RunConfig& cfg, std::ostream& out);
int cmd_profile(const RunConfig& cfg, std::ostream& out);
int cmd_explore(const RunConfig& cfg, std::ostream& out);
int cmd_roundtrip(const RunConfig& cfg, std::ostream& out);
int cmd_generate(const RunConfig& cfg, std::ostream& out);

/// Parses `args` (without the program name), runs the subcommand and maps
/// errors onto the exit statuses above.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace classd::cli
