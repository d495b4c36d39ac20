#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "classd/rational.hpp"

namespace classd {

/// The six leaf behaviors of the conversion FSM, in execution order.
enum class Behavior : std::uint8_t { S0, S1, S2, S3, LINE, MOLD };
inline constexpr std::size_t kBehaviorCount = 6;
inline constexpr std::array<Behavior, kBehaviorCount> kAllBehaviors = {
    Behavior::S0, Behavior::S1, Behavior::S2, Behavior::S3, Behavior::LINE, Behavior::MOLD};

enum class OpKind : std::uint8_t { Add, Mul, Mac, Cmp, Mem };
inline constexpr std::size_t kOpKindCount = 5;
inline constexpr std::array<OpKind, kOpKindCount> kAllOpKinds = {
    OpKind::Add, OpKind::Mul, OpKind::Mac, OpKind::Cmp, OpKind::Mem};

std::string_view to_string(Behavior b);
std::string_view to_string(OpKind k);
/// Throws UnknownBehavior for anything outside the six names.
Behavior parse_behavior(std::string_view name);
std::optional<OpKind> parse_op_kind(std::string_view name);

inline std::size_t index(Behavior b) { return static_cast<std::size_t>(b); }
inline std::size_t index(OpKind k) { return static_cast<std::size_t>(k); }

/// Per-behavior operation tallies.
class OpCountVector {
 public:
  std::uint64_t get(Behavior b, OpKind k) const { return counts_[index(b)][index(k)]; }
  void set(Behavior b, OpKind k, std::uint64_t n);
  /// Adds `n`; throws CounterOverflow past 2^63 - 1.
  void add(Behavior b, OpKind k, std::uint64_t n);

  std::uint64_t total(Behavior b) const;
  std::uint64_t total() const;

  OpCountVector& operator+=(const OpCountVector& other);
  friend OpCountVector operator+(OpCountVector a, const OpCountVector& b) { return a += b; }
  bool operator==(const OpCountVector&) const = default;

 private:
  std::array<std::array<std::uint64_t, kOpKindCount>, kBehaviorCount> counts_{};
};

/// Instrumentation sink for one conversion run.
class Profiler {
 public:
  void record(Behavior b, OpKind k, std::uint64_t n) { counts_.add(b, k, n); }
  void record(std::string_view behavior, OpKind k, std::uint64_t n) {
    record(parse_behavior(behavior), k, n);
  }
  void reset() { counts_ = {}; }
  const OpCountVector& counts() const { return counts_; }

 private:
  OpCountVector counts_;
};

enum class PeCategory : std::uint8_t { Dsp, Microprocessor, Microcontroller, Fpga };

std::string_view to_string(PeCategory c);
std::optional<PeCategory> parse_pe_category(std::string_view text);

/// A candidate execution component.
struct ProcessingElement {
  std::string name;
  std::string description;
  PeCategory category = PeCategory::Dsp;
  std::int64_t cost_cents = 0;
  std::uint64_t freq_hz = 0;
  std::array<std::optional<std::uint32_t>, kOpKindCount> weights{};
  std::array<std::optional<std::uint64_t>, kBehaviorCount> code_size{};

  bool is_hardware() const { return category == PeCategory::Fpga; }
  double freq_mhz() const { return static_cast<double>(freq_hz) / 1e6; }

  /// Throws InvalidArgument unless freq > 0, cost >= 0 and weights >= 1.
  void validate() const;
  bool operator==(const ProcessingElement&) const = default;
};

struct CycleEstimate {
  std::array<std::uint64_t, kBehaviorCount> per_behavior{};
  std::uint64_t total = 0;
};

/// Weighted cycle count of `counts` on `pe`. Throws MissingWeight (naming the
/// PE) when a kind with a nonzero count has no weight.
CycleEstimate cycles(const OpCountVector& counts, const ProcessingElement& pe);

/// Execution time in seconds as an exact fraction cycles / freq_hz.
Rational exec_time(std::uint64_t cycles, const ProcessingElement& pe);

/// Strict real-time test: t < playback.
bool meets_realtime(double t_seconds, double playback_seconds);
bool meets_realtime(const Rational& t_seconds, const Rational& playback_seconds);

/// The four reference components with the shipped weight tables.
std::vector<ProcessingElement> default_pe_library();

}  // namespace classd
