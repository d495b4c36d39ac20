#include "classd/report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>

#include "classd/error.hpp"

namespace classd::report {
namespace {

std::string fmt_double(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string csv_set(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : " ") + n;
  return out;
}

const std::vector<std::vector<std::string>>& reference_sets() {
  static const std::vector<std::vector<std::string>> sets = {
      {"S3"}, {"S1", "S2", "S3"}, {"LINE", "MOLD"}, {"MOLD"}};
  return sets;
}

}  // namespace

std::string seconds_2dp(const Rational& s) {
  // Half away from zero on the exact fraction.
  const unsigned __int128 scaled = static_cast<unsigned __int128>(s.num) * 200 / s.den;
  const auto hundredths = static_cast<std::uint64_t>((scaled + 1) / 2);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%llu.%02llu",
                static_cast<unsigned long long>(hundredths / 100),
                static_cast<unsigned long long>(hundredths % 100));
  return buf;
}

std::vector<PeEstimate> estimate_all(
    const std::vector<std::pair<std::string, std::uint64_t>>& cycles,
    const std::vector<ProcessingElement>& pes, const Rational& playback_s) {
  std::vector<PeEstimate> rows;
  for (const auto& [name, count] : cycles) {
    const ProcessingElement* pe = nullptr;
    for (const auto& p : pes) {
      if (p.name == name) pe = &p;
    }
    if (pe == nullptr) throw InvalidArgument("cycle count for unknown PE '" + name + "'");
    PeEstimate row{pe, count, exec_time(count, *pe), false};
    row.meets_goal = meets_realtime(row.seconds, playback_s);
    rows.push_back(row);
  }
  return rows;
}

void write_pe_estimates(std::ostream& os, const std::vector<PeEstimate>& rows, Format fmt) {
  if (fmt == Format::Csv) {
    os << "element,type,cycles,time_s,goal\n";
    for (const auto& r : rows) {
      os << r.pe->name << ',' << (r.pe->is_hardware() ? "HW" : "SW") << ',' << r.cycles << ','
         << fmt_double(r.seconds.to_double(), 6) << ',' << (r.meets_goal ? "1" : "0") << '\n';
    }
    return;
  }
  os << std::left << std::setw(9) << "Element" << std::setw(6) << "Type" << std::right
     << std::setw(14) << "Cycles" << std::setw(16) << "Exec time (s)" << "  Goal\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(9) << r.pe->name << std::setw(6)
       << (r.pe->is_hardware() ? "HW" : "SW") << std::right << std::setw(14) << r.cycles
       << std::setw(16) << seconds_2dp(r.seconds) << (r.meets_goal ? "  X" : "") << '\n';
  }
}

void write_op_counts(std::ostream& os, const OpCountVector& counts,
                     const std::vector<ProcessingElement>& pes, Format fmt) {
  std::vector<CycleEstimate> est;
  for (const auto& pe : pes) est.push_back(cycles(counts, pe));

  if (fmt == Format::Csv) {
    os << "behavior,kind,count";
    for (const auto& pe : pes) os << ',' << pe.name << "_cycles," << pe.name << "_time_s";
    os << '\n';
    for (Behavior b : kAllBehaviors) {
      for (OpKind k : kAllOpKinds) {
        const std::uint64_t n = counts.get(b, k);
        os << to_string(b) << ',' << to_string(k) << ',' << n;
        for (const auto& pe : pes) {
          const std::uint64_t c = n == 0 ? 0 : n * pe.weights[index(k)].value_or(0);
          os << ',' << c << ',' << fmt_double(exec_time(c, pe).to_double(), 9);
        }
        os << '\n';
      }
    }
    for (Behavior b : kAllBehaviors) {
      os << to_string(b) << ",all," << counts.total(b);
      for (std::size_t i = 0; i < pes.size(); ++i) {
        const std::uint64_t c = est[i].per_behavior[index(b)];
        os << ',' << c << ',' << fmt_double(exec_time(c, pes[i]).to_double(), 9);
      }
      os << '\n';
    }
    return;
  }

  os << "Operation counts\n";
  os << std::left << std::setw(9) << "Behavior" << std::right;
  for (OpKind k : kAllOpKinds) os << std::setw(13) << to_string(k);
  os << std::setw(14) << "total" << '\n';
  for (Behavior b : kAllBehaviors) {
    os << std::left << std::setw(9) << to_string(b) << std::right;
    for (OpKind k : kAllOpKinds) os << std::setw(13) << counts.get(b, k);
    os << std::setw(14) << counts.total(b) << '\n';
  }
  os << "\nEstimated time per behavior (ms)\n";
  os << std::left << std::setw(9) << "Behavior" << std::right;
  for (const auto& pe : pes) os << std::setw(12) << pe.name;
  os << '\n';
  for (Behavior b : kAllBehaviors) {
    os << std::left << std::setw(9) << to_string(b) << std::right;
    for (std::size_t i = 0; i < pes.size(); ++i) {
      const double ms = exec_time(est[i].per_behavior[index(b)], pes[i]).to_double() * 1e3;
      os << std::setw(12) << fmt_double(ms, 1);
    }
    os << '\n';
  }
}

void write_behavior_table(std::ostream& os, const dse::EstimateTable& table, Format fmt) {
  const auto& rows = table.rows();
  if (fmt == Format::Csv) {
    os << "behavior,t_hw_ms,hw_cost_usd,t_dsp_ms\n";
    for (const auto& r : rows) {
      os << r.name << ',' << dse::format_ms(r.t_hw) << ',' << dse::format_money(r.hw_cost_share)
         << ',' << dse::format_ms(r.t_sw) << '\n';
    }
    os << "Total," << dse::format_ms(table.total_hw()) << ','
       << dse::format_money(table.total_share()) << ',' << dse::format_ms(table.total_sw())
       << '\n';
    return;
  }
  os << std::left << std::setw(9) << "" << std::right;
  for (const auto& r : rows) os << std::setw(9) << r.name;
  os << std::setw(10) << "Total" << '\n';
  auto line = [&](const char* label, auto&& cell, const std::string& total) {
    os << std::left << std::setw(9) << label << std::right;
    for (const auto& r : rows) os << std::setw(9) << cell(r);
    os << std::setw(10) << total << '\n';
  };
  line("dt HW", [](const auto& r) { return dse::format_ms(r.t_hw); },
       dse::format_ms(table.total_hw()));
  line("($) HW", [](const auto& r) { return dse::format_money(r.hw_cost_share); },
       dse::format_money(table.total_share()));
  line("dt DSP", [](const auto& r) { return dse::format_ms(r.t_sw); },
       dse::format_ms(table.total_sw()));
}

void write_options(std::ostream& os, const std::vector<dse::PartitionOption>& options,
                   const std::optional<dse::PartitionOption>& selected, Format fmt) {
  auto is_selected = [&](const dse::PartitionOption& o) {
    return selected && selected->hw_mask == o.hw_mask;
  };
  if (fmt == Format::Csv) {
    os << "rank,hw_set,t_dsp_ms,t_hw_ms,t_total_ms,cost_usd,feasible,selected\n";
    for (std::size_t i = 0; i < options.size(); ++i) {
      const auto& o = options[i];
      os << i + 1 << ',' << csv_set(o.hw_set) << ',' << dse::format_ms(o.t_dsp) << ','
         << dse::format_ms(o.t_hw) << ',' << dse::format_ms(o.t_total) << ','
         << dse::format_money(o.cost) << ',' << (o.feasible ? 1 : 0) << ','
         << (is_selected(o) ? 1 : 0) << '\n';
    }
    return;
  }
  os << "  " << std::right << std::setw(4) << "Rank" << "  " << std::left << std::setw(26)
     << "Mapped in HW" << std::right << std::setw(9) << "dt DSP" << std::setw(9) << "dt HW"
     << std::setw(10) << "dt total" << std::setw(12) << "Total cost" << "  Feasible\n";
  for (std::size_t i = 0; i < options.size(); ++i) {
    const auto& o = options[i];
    os << (is_selected(o) ? "* " : "  ") << std::right << std::setw(4) << i + 1 << "  "
       << std::left << std::setw(26) << dse::format_set(o.hw_set) << std::right << std::setw(9)
       << dse::format_ms(o.t_dsp) << std::setw(9) << dse::format_ms(o.t_hw) << std::setw(10)
       << dse::format_ms(o.t_total) << std::setw(12) << dse::format_money(o.cost)
       << (o.feasible ? "  yes" : "  no") << '\n';
  }
}

void write_reference_options(std::ostream& os, const dse::EstimateTable& table,
                             const dse::CostModel& cm, Format fmt) {
  std::vector<dse::PartitionOption> opts;
  try {
    for (const auto& set : reference_sets()) opts.push_back(dse::evaluate(set, table, cm));
  } catch (const UnknownBehavior&) {
    return;
  }
  const dse::Comparison cmp = dse::compare(opts[2], opts[3]);

  if (fmt == Format::Csv) {
    os << "option,hw_set,t_dsp_ms,t_hw_ms,t_total_ms,cost_usd\n";
    for (std::size_t i = 0; i < opts.size(); ++i) {
      const auto& o = opts[i];
      os << i + 1 << ',' << csv_set(o.hw_set) << ',' << dse::format_ms(o.t_dsp) << ','
         << dse::format_ms(o.t_hw) << ',' << dse::format_ms(o.t_total) << ','
         << dse::format_money(o.cost) << '\n';
    }
    os << "\ncomparison,time_improvement_pct,cost_increase_pct\n";
    os << "3 vs 4," << fmt_double(cmp.time_delta_pct, 2) << ','
       << fmt_double(cmp.cost_delta_pct, 2) << '\n';
    return;
  }
  os << std::right << std::setw(3) << "#" << "  " << std::left << std::setw(14) << "Mapped in HW"
     << std::right << std::setw(9) << "dt DSP" << std::setw(9) << "dt HW" << std::setw(10)
     << "dt total" << std::setw(12) << "Total cost" << '\n';
  for (std::size_t i = 0; i < opts.size(); ++i) {
    const auto& o = opts[i];
    os << std::right << std::setw(3) << i + 1 << "  " << std::left << std::setw(14)
       << dse::format_set(o.hw_set) << std::right << std::setw(9) << dse::format_ms(o.t_dsp)
       << std::setw(9) << dse::format_ms(o.t_hw) << std::setw(10) << dse::format_ms(o.t_total)
       << std::setw(12) << dse::format_money(o.cost) << '\n';
  }
  os << "Option 3 vs option 4: timing improves by " << fmt_double(cmp.time_delta_pct, 2)
     << "%, cost increases by " << fmt_double(cmp.cost_delta_pct, 2) << "%\n";
}

}  // namespace classd::report
