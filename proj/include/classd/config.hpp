#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "classd/dse.hpp"
#include "classd/profiler.hpp"

namespace classd {

/// Parses a decimal literal such as "988.1" into an integer count of
/// 10^-decimals units (988.1 with decimals = 3 gives 988100). Throws
/// ParseError on malformed text or excess precision.
std::int64_t parse_fixed(std::string_view text, int decimals);

/// Processing-element library. Grammar (one block per PE; '#' starts a
/// comment; see docs/formats.md):
///
///   pe <name>
///     description <free text>
///     category    DSP | Microproc. | Microcontrol. | FPGA
///     cost        <US$>
///     freq_mhz    <MHz>
///     weights     add=<n> mul=<n> mac=<n> cmp=<n> mem=<n>
///     code_size   S0=<n> S1=<n> ...
///   end
std::vector<ProcessingElement> parse_pe_library(std::string_view text);
std::vector<ProcessingElement> load_pe_library(const std::filesystem::path& path);

/// Exploration scenario: behavior estimates, cost model and, optionally,
/// whole-design cycle counts per PE.
///
///   deadline_ms    <ms>
///   sw_fixed_cost  <US$>
///   hw_total_cost  <US$>
///   behavior <name> t_hw=<ms> t_sw=<ms> [hw_cost=<US$>] [code_size=<n>]
///   cycles   <pe-name> <count>
///
/// When no row carries hw_cost, shares are derived from code_size.
struct Scenario {
  dse::EstimateTable table;
  dse::CostModel cost_model;
  std::vector<std::pair<std::string, std::uint64_t>> cycles;
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);

}  // namespace classd
