#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "classd/audio_io.hpp"

namespace classd {

struct ToneSpec {
  double freq_hz = 1000.0;
  double level_dbfs = -6.0;  // peak level relative to 32768
  std::size_t samples = 189630;
  std::uint32_t sample_rate = 44100;
  /// Optional white Gaussian noise, RMS relative to full scale.
  std::optional<double> noise_dbfs;
  std::uint64_t seed = 1;
};

/// Sine tone rounded to 16-bit PCM.
PcmStream make_tone(const ToneSpec& spec);

/// Samples in `seconds` at `rate`, rounded to the nearest sample.
std::size_t samples_for(double seconds, std::uint32_t rate);

}  // namespace classd
