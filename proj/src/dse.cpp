#include "classd/dse.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <tuple>

#include "classd/error.hpp"

namespace classd::dse {
namespace {

bool better(const PartitionOption& a, const PartitionOption& b) {
  return std::make_tuple(!a.feasible, a.cost, a.t_total, a.hw_count(), a.hw_mask) <
         std::make_tuple(!b.feasible, b.cost, b.t_total, b.hw_count(), b.hw_mask);
}

std::string fixed(std::int64_t value, std::int64_t unit, int decimals) {
  // Round half away from zero to `decimals` places of value / unit.
  std::int64_t step = unit;
  for (int i = 0; i < decimals; ++i) step /= 10;
  const bool neg = value < 0;
  std::int64_t mag = neg ? -value : value;
  mag = (mag + step / 2) / step;
  std::int64_t scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  std::string out = std::to_string(mag / scale);
  if (decimals > 0) {
    std::string frac = std::to_string(mag % scale);
    frac.insert(frac.begin(), static_cast<std::size_t>(decimals) - frac.size(), '0');
    out += '.' + frac;
  }
  return (neg && mag != 0 ? "-" : "") + out;
}

}  // namespace

EstimateTable::EstimateTable(std::vector<BehaviorEstimate> rows) : rows_(std::move(rows)) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    if (r.t_hw <= 0 || r.t_sw <= 0) {
      throw InvalidArgument("behavior " + r.name + ": execution times must be positive");
    }
    if (r.hw_cost_share < 0) throw InvalidArgument("behavior " + r.name + ": negative cost");
    for (std::size_t j = 0; j < i; ++j) {
      if (rows_[j].name == r.name) throw InvalidArgument("duplicate behavior " + r.name);
    }
  }
}

std::size_t EstimateTable::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].name == name) return i;
  }
  throw UnknownBehavior("unknown behavior '" + name + "'");
}

std::uint32_t EstimateTable::mask_of(const std::vector<std::string>& names) const {
  std::uint32_t mask = 0;
  for (const auto& n : names) mask |= 1u << index_of(n);
  return mask;
}

std::vector<std::string> EstimateTable::names_of(std::uint32_t mask) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (mask & (1u << i)) out.push_back(rows_[i].name);
  }
  return out;
}

Micros EstimateTable::total_hw() const {
  return std::accumulate(rows_.begin(), rows_.end(), Micros{0},
                         [](Micros s, const BehaviorEstimate& r) { return s + r.t_hw; });
}

Micros EstimateTable::total_sw() const {
  return std::accumulate(rows_.begin(), rows_.end(), Micros{0},
                         [](Micros s, const BehaviorEstimate& r) { return s + r.t_sw; });
}

Cents EstimateTable::total_share() const {
  return std::accumulate(rows_.begin(), rows_.end(), Cents{0},
                         [](Cents s, const BehaviorEstimate& r) { return s + r.hw_cost_share; });
}

std::vector<Cents> hw_cost_share(std::span<const std::uint64_t> code_sizes, Cents hw_total) {
  if (hw_total < 0) throw InvalidArgument("negative hardware cost");
  unsigned __int128 sum = 0;
  for (auto s : code_sizes) sum += s;
  if (sum == 0) throw AllZeroSizes("all code sizes are zero");

  const std::size_t n = code_sizes.size();
  std::vector<Cents> share(n);
  std::vector<unsigned __int128> rem(n);
  Cents assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned __int128 scaled = static_cast<unsigned __int128>(hw_total) * code_sizes[i];
    share[i] = static_cast<Cents>(scaled / sum);
    rem[i] = scaled % sum;
    assigned += share[i];
  }
  std::size_t left = static_cast<std::size_t>(hw_total - assigned);
  if (left == 0) return share;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });

  std::size_t pos = 0;
  while (left > 0) {
    std::size_t end = pos;
    while (end < n && rem[order[end]] == rem[order[pos]]) ++end;
    const std::size_t group = end - pos;
    if (group <= left) {
      for (std::size_t i = pos; i < end; ++i) ++share[order[i]];
      left -= group;
    } else {
      for (std::size_t j = 0; j < left; ++j) ++share[order[pos + j * group / left]];
      left = 0;
    }
    pos = end;
  }
  return share;
}

PartitionOption evaluate(std::uint32_t hw_mask, const EstimateTable& table, const CostModel& cm) {
  const auto& rows = table.rows();
  if (rows.size() < 32 && (hw_mask >> rows.size()) != 0) {
    throw UnknownBehavior("mapping refers to behaviors outside the table");
  }
  PartitionOption o;
  o.hw_mask = hw_mask;
  o.hw_set = table.names_of(hw_mask);
  o.cost = cm.sw_fixed_cost;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (hw_mask & (1u << i)) {
      o.t_hw += rows[i].t_hw;
      o.cost += rows[i].hw_cost_share;
    } else {
      o.t_dsp += rows[i].t_sw;
    }
  }
  o.t_total = o.t_dsp + o.t_hw;
  o.feasible = o.t_total < cm.deadline;
  return o;
}

PartitionOption evaluate(const std::vector<std::string>& hw_set, const EstimateTable& table,
                         const CostModel& cm) {
  return evaluate(table.mask_of(hw_set), table, cm);
}

std::vector<PartitionOption> enumerate(const EstimateTable& table, const CostModel& cm,
                                       const std::map<std::string, Side>& pins) {
  const std::size_t n = table.size();
  if (n > kMaxBehaviors) {
    throw TooManyBehaviors(std::to_string(n) + " behaviors; exhaustive search is limited to " +
                           std::to_string(kMaxBehaviors));
  }
  std::uint32_t pinned = 0, forced_hw = 0;
  for (const auto& [name, side] : pins) {
    const std::uint32_t bit = 1u << table.index_of(name);
    pinned |= bit;
    if (side == Side::Hw) forced_hw |= bit;
  }

  std::vector<std::size_t> free_bits;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(pinned & (1u << i))) free_bits.push_back(i);
  }
  const std::uint32_t count = 1u << free_bits.size();
  std::vector<PartitionOption> out;
  out.reserve(count);
  for (std::uint32_t combo = 0; combo < count; ++combo) {
    std::uint32_t mask = forced_hw;
    for (std::size_t j = 0; j < free_bits.size(); ++j) {
      if (combo & (1u << j)) mask |= 1u << free_bits[j];
    }
    out.push_back(evaluate(mask, table, cm));
  }
  std::sort(out.begin(), out.end(), better);
  return out;
}

PartitionOption select(std::span<const PartitionOption> options, const CostModel& cm) {
  const PartitionOption* best = nullptr;
  for (const auto& o : options) {
    if (!(o.t_total < cm.deadline)) continue;
    if (best == nullptr ||
        std::make_tuple(o.cost, o.t_total, o.hw_count(), o.hw_mask) <
            std::make_tuple(best->cost, best->t_total, best->hw_count(), best->hw_mask)) {
      best = &o;
    }
  }
  if (best == nullptr) {
    throw NoFeasibleOption("no mapping finishes within " + format_ms(cm.deadline) + " ms");
  }
  PartitionOption chosen = *best;
  chosen.feasible = true;
  return chosen;
}

Comparison compare(const PartitionOption& a, const PartitionOption& b) {
  Comparison c;
  if (a.t_total != 0) {
    c.time_delta_pct = static_cast<double>(b.t_total - a.t_total) / a.t_total * 100.0;
  }
  if (a.cost != 0) c.cost_delta_pct = static_cast<double>(a.cost - b.cost) / a.cost * 100.0;
  return c;
}

std::string format_ms(Micros t) { return fixed(t, 1000, 1); }
std::string format_money(Cents c) { return fixed(c, 100, 2); }

std::string format_set(const std::vector<std::string>& names) {
  if (names.empty()) return "-";
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ',';
    out += n;
  }
  return out;
}

}  // namespace classd::dse
