#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "classd/audio_io.hpp"
#include "classd/profiler.hpp"

namespace classd {

/// Real-valued samples in [-1, +1] at a given rate.
struct SampleStream {
  std::vector<double> samples;
  std::uint32_t sample_rate = 0;

  std::size_t size() const { return samples.size(); }
  bool operator==(const SampleStream&) const = default;
};

/// Odd-length, symmetric FIR used by every x2 interpolation stage.
struct FirKernel {
  std::vector<double> taps;

  std::size_t size() const { return taps.size(); }
  /// Delay in output samples, (taps - 1) / 2.
  std::size_t group_delay() const { return taps.empty() ? 0 : (taps.size() - 1) / 2; }
};

/// Quantizer codes in [0, 2^bits - 1].
struct QuantizedStream {
  std::vector<std::uint16_t> codes;
  unsigned bits = 7;
  std::uint32_t sample_rate = 0;

  std::uint32_t levels() const { return 1u << bits; }
  /// Signal value represented by a code, 2c / (2^bits - 1) - 1.
  double value(std::uint16_t code) const {
    return 2.0 * code / static_cast<double>(levels() - 1) - 1.0;
  }
};

struct ChainConfig {
  std::uint32_t input_rate = 44100;
  unsigned interp_stages = 3;
  unsigned quantizer_bits = 7;
  /// Order of the (1 - z^-1)^order noise transfer function; 0 is plain rounding.
  unsigned shaper_order = 2;
  bool linearize = true;
  std::size_t fir_taps = 63;

  std::uint32_t output_rate() const { return input_rate << interp_stages; }
  std::uint64_t pwm_clock_hz() const {
    return static_cast<std::uint64_t>(output_rate()) << quantizer_bits;
  }
  std::uint32_t frame_bits() const { return 1u << quantizer_bits; }
  /// Clock a direct 16-bit PWM at the input rate would need.
  std::uint64_t naive_clock_hz() const { return (std::uint64_t{1} << 16) * input_rate; }
  /// Total interpolation delay expressed in output samples.
  std::size_t group_delay_output_samples() const;

  /// Throws InvalidArgument for configurations outside the supported range.
  void validate() const;
};

/// Windowed-sinc (Blackman) lowpass with cutoff at a quarter of the output
/// rate. Each polyphase branch is normalized to unit DC gain, so the taps sum
/// to 2.
FirKernel design_interpolation_kernel(std::size_t taps = 63);

/// Generic Blackman windowed-sinc lowpass. `cutoff` is the -6 dB point as a
/// fraction of the sample rate; taps sum to `gain`.
std::vector<double> design_lowpass(std::size_t taps, double cutoff, double gain = 1.0);

// S0: PCM to [-1, +1).
SampleStream s0_condition(const PcmStream& pcm, Profiler* prof = nullptr);

// S1..S3: zero-stuff by two, convolve with the kernel, saturate.
SampleStream upsample2(const SampleStream& in, const FirKernel& kernel,
                       Behavior stage = Behavior::S1, Profiler* prof = nullptr);

// LINE: pre-correction approximating natural sampling against the PWM ramp.
SampleStream linearize(const SampleStream& in, unsigned quantizer_bits = 7,
                       Profiler* prof = nullptr);

// MOLD: error-feedback quantizer.
QuantizedStream noise_shape(const SampleStream& in, const ChainConfig& cfg,
                            Profiler* prof = nullptr);

// Counter/register/comparator waveform generator, left-aligned pulses.
PwmBitstream generate_pwm(const QuantizedStream& q);

/// Runs S0 -> S1 -> S2 -> S3 -> LINE -> MOLD -> waveform generator.
PwmBitstream convert(const PcmStream& pcm, const ChainConfig& cfg = {},
                     Profiler* prof = nullptr);

/// The chain up to and including the quantizer, for analysis.
QuantizedStream convert_to_codes(const PcmStream& pcm, const ChainConfig& cfg = {},
                                 Profiler* prof = nullptr);

}  // namespace classd
