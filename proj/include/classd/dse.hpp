#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace classd::dse {

// Money in integral cents, time in integral microseconds. Rounding happens
// only when values are displayed.
using Cents = std::int64_t;
using Micros = std::int64_t;

/// Per-behavior estimates on the two selected PEs.
struct BehaviorEstimate {
  std::string name;
  Micros t_hw = 0;
  Micros t_sw = 0;  // on the DSP
  Cents hw_cost_share = 0;
};

struct CostModel {
  Cents sw_fixed_cost = 900;   // DSP 8.00 plus one unit of memory
  Cents hw_total_cost = 3500;
  Micros deadline = 4'300'000;
};

/// Behavior table; names are unique and every time is positive.
class EstimateTable {
 public:
  EstimateTable() = default;
  explicit EstimateTable(std::vector<BehaviorEstimate> rows);

  const std::vector<BehaviorEstimate>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  /// Throws UnknownBehavior.
  std::size_t index_of(const std::string& name) const;
  /// Bitmask over row indices; throws UnknownBehavior.
  std::uint32_t mask_of(const std::vector<std::string>& names) const;
  std::vector<std::string> names_of(std::uint32_t mask) const;

  Micros total_hw() const;
  Micros total_sw() const;
  Cents total_share() const;

 private:
  std::vector<BehaviorEstimate> rows_;
};

struct PartitionOption {
  std::uint32_t hw_mask = 0;
  std::vector<std::string> hw_set;
  Micros t_dsp = 0;
  Micros t_hw = 0;
  Micros t_total = 0;
  Cents cost = 0;
  bool feasible = false;

  std::size_t hw_count() const { return hw_set.size(); }
};

enum class Side { Hw, Sw };

/// Splits `hw_total` in proportion to code size. Cents are apportioned by
/// largest remainder; cents left over within a group of tied remainders go to
/// evenly spaced members of the group (first member first). Shares always
/// sum to `hw_total`.
std::vector<Cents> hw_cost_share(std::span<const std::uint64_t> code_sizes, Cents hw_total);

PartitionOption evaluate(std::uint32_t hw_mask, const EstimateTable& table, const CostModel& cm);
PartitionOption evaluate(const std::vector<std::string>& hw_set, const EstimateTable& table,
                         const CostModel& cm);

inline constexpr std::size_t kMaxBehaviors = 20;

/// Every mapping of the unpinned behaviors, sorted by feasibility, then
/// cost, then total time, then number of HW behaviors, then mask.
std::vector<PartitionOption> enumerate(const EstimateTable& table, const CostModel& cm,
                                       const std::map<std::string, Side>& pins = {});

/// Cheapest option meeting `cm.deadline` (feasibility is re-evaluated);
/// ties go to the faster, then the smaller HW set. Throws NoFeasibleOption.
PartitionOption select(std::span<const PartitionOption> options, const CostModel& cm);

struct Comparison {
  /// How much faster `a` is, relative to `a`'s total time.
  double time_delta_pct = 0.0;
  /// How much of `a`'s cost the difference represents.
  double cost_delta_pct = 0.0;
};

/// `a` is the costlier, faster option.
Comparison compare(const PartitionOption& a, const PartitionOption& b);

/// "3731.3" from 3'731'300 us (one decimal, half away from zero).
std::string format_ms(Micros t);
/// "10.60" from 1060 cents.
std::string format_money(Cents c);
std::string format_set(const std::vector<std::string>& names);

}  // namespace classd::dse
