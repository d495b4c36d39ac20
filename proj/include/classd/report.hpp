#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "classd/dse.hpp"
#include "classd/profiler.hpp"

namespace classd::report {

enum class Format { Text, Csv };

/// One row of the whole-design estimate table.
struct PeEstimate {
  const ProcessingElement* pe = nullptr;
  std::uint64_t cycles = 0;
  Rational seconds;
  bool meets_goal = false;
};

std::vector<PeEstimate> estimate_all(const std::vector<std::pair<std::string, std::uint64_t>>& cycles,
                                     const std::vector<ProcessingElement>& pes,
                                     const Rational& playback_s);

/// Element / Type / Cycles / time (s) / Goal.
void write_pe_estimates(std::ostream& os, const std::vector<PeEstimate>& rows, Format fmt);

/// Operation counts per behavior and kind with per-PE cycles and times.
void write_op_counts(std::ostream& os, const OpCountVector& counts,
                     const std::vector<ProcessingElement>& pes, Format fmt);

/// Per-behavior HW time, HW cost share and DSP time, with totals.
void write_behavior_table(std::ostream& os, const dse::EstimateTable& table, Format fmt);

void write_options(std::ostream& os, const std::vector<dse::PartitionOption>& options,
                   const std::optional<dse::PartitionOption>& selected, Format fmt);

/// The four hand-picked mappings (S3; S1,S2,S3; LINE,MOLD; MOLD) and the
/// option 3 vs option 4 comparison. Skipped when the table lacks a behavior.
void write_reference_options(std::ostream& os, const dse::EstimateTable& table,
                             const dse::CostModel& cm, Format fmt);

std::string seconds_2dp(const Rational& s);

}  // namespace classd::report
