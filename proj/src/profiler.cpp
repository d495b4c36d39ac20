#include "classd/profiler.hpp"

#include <limits>
#include <string>

#include "classd/error.hpp"

namespace classd {
namespace {

constexpr std::array<std::string_view, kBehaviorCount> kBehaviorNames = {"S0", "S1", "S2",
                                                                         "S3", "LINE", "MOLD"};
constexpr std::array<std::string_view, kOpKindCount> kOpKindNames = {"add", "mul", "mac", "cmp",
                                                                     "mem"};
constexpr std::uint64_t kCounterMax = static_cast<std::uint64_t>(
    std::numeric_limits<std::int64_t>::max());

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (b > kCounterMax || a > kCounterMax - b) throw CounterOverflow("operation counter overflow");
  return a + b;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kCounterMax / a) throw CounterOverflow("cycle count overflow");
  return a * b;
}

}  // namespace

std::string_view to_string(Behavior b) { return kBehaviorNames[index(b)]; }
std::string_view to_string(OpKind k) { return kOpKindNames[index(k)]; }

Behavior parse_behavior(std::string_view name) {
  for (Behavior b : kAllBehaviors) {
    if (to_string(b) == name) return b;
  }
  throw UnknownBehavior("unknown behavior '" + std::string(name) + "'");
}

std::optional<OpKind> parse_op_kind(std::string_view name) {
  for (OpKind k : kAllOpKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

void OpCountVector::set(Behavior b, OpKind k, std::uint64_t n) {
  if (n > kCounterMax) throw CounterOverflow("operation counter overflow");
  counts_[index(b)][index(k)] = n;
}

void OpCountVector::add(Behavior b, OpKind k, std::uint64_t n) {
  auto& slot = counts_[index(b)][index(k)];
  slot = checked_add(slot, n);
}

std::uint64_t OpCountVector::total(Behavior b) const {
  std::uint64_t sum = 0;
  for (std::uint64_t n : counts_[index(b)]) sum = checked_add(sum, n);
  return sum;
}

std::uint64_t OpCountVector::total() const {
  std::uint64_t sum = 0;
  for (Behavior b : kAllBehaviors) sum = checked_add(sum, total(b));
  return sum;
}

OpCountVector& OpCountVector::operator+=(const OpCountVector& other) {
  for (Behavior b : kAllBehaviors) {
    for (OpKind k : kAllOpKinds) add(b, k, other.get(b, k));
  }
  return *this;
}

std::string_view to_string(PeCategory c) {
  switch (c) {
    case PeCategory::Dsp: return "DSP";
    case PeCategory::Microprocessor: return "Microproc.";
    case PeCategory::Microcontroller: return "Microcontrol.";
    case PeCategory::Fpga: return "FPGA";
  }
  return "?";
}

std::optional<PeCategory> parse_pe_category(std::string_view text) {
  for (PeCategory c : {PeCategory::Dsp, PeCategory::Microprocessor, PeCategory::Microcontroller,
                       PeCategory::Fpga}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

void ProcessingElement::validate() const {
  if (freq_hz == 0) throw InvalidArgument("PE " + name + ": frequency must be positive");
  if (cost_cents < 0) throw InvalidArgument("PE " + name + ": negative cost");
  for (const auto& w : weights) {
    if (w && *w < 1) throw InvalidArgument("PE " + name + ": weights must be >= 1");
  }
}

CycleEstimate cycles(const OpCountVector& counts, const ProcessingElement& pe) {
  CycleEstimate est;
  for (Behavior b : kAllBehaviors) {
    std::uint64_t sum = 0;
    for (OpKind k : kAllOpKinds) {
      const std::uint64_t n = counts.get(b, k);
      if (n == 0) continue;
      const auto& w = pe.weights[index(k)];
      if (!w) {
        throw MissingWeight("PE " + pe.name + " has no cycle weight for '" +
                            std::string(to_string(k)) + "'");
      }
      sum = checked_add(sum, checked_mul(n, *w));
    }
    est.per_behavior[index(b)] = sum;
    est.total = checked_add(est.total, sum);
  }
  return est;
}

Rational exec_time(std::uint64_t cycle_count, const ProcessingElement& pe) {
  if (pe.freq_hz == 0) throw InvalidArgument("PE " + pe.name + ": frequency must be positive");
  return Rational(cycle_count, pe.freq_hz);
}

bool meets_realtime(double t_seconds, double playback_seconds) {
  if (!(playback_seconds > 0)) throw InvalidArgument("playback duration must be positive");
  return t_seconds < playback_seconds;
}

bool meets_realtime(const Rational& t_seconds, const Rational& playback_seconds) {
  if (playback_seconds.num == 0) throw InvalidArgument("playback duration must be positive");
  return t_seconds < playback_seconds;
}

std::vector<ProcessingElement> default_pe_library() {
  using W = std::array<std::optional<std::uint32_t>, kOpKindCount>;
  // Order: add, mul, mac, cmp, mem.
  const W dsp_weights = {1, 1, 1, 1, 1};
  const W general_weights = {1, 2, 3, 1, 2};
  const W hw_weights = {1, 1, 1, 1, 1};

  std::vector<ProcessingElement> lib;
  lib.push_back({"DSP", "DSP 56600 Motorola", PeCategory::Dsp, 800, 60'000'000, dsp_weights, {}});
  lib.push_back({"uP", "Intel Pentium III", PeCategory::Microprocessor, 4000, 900'000'000,
                 general_weights, {}});
  lib.push_back({"uC", "Siemens 80166", PeCategory::Microcontroller, 100, 8'000'000,
                 general_weights, {}});
  // Code sizes are proportional to the per-behavior FPGA cost shares.
  lib.push_back({"HW", "Standard RTL processor", PeCategory::Fpga, 3500, 100'000'000, hw_weights,
                 {1, 817, 1073, 1065, 360, 160}});
  return lib;
}

}  // namespace classd
