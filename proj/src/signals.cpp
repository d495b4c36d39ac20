#include "classd/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace classd {

PcmStream make_tone(const ToneSpec& spec) {
  PcmStream pcm;
  pcm.sample_rate = spec.sample_rate;
  pcm.samples.reserve(spec.samples);
  const double amp = 32768.0 * std::pow(10.0, spec.level_dbfs / 20.0);
  const double step = 2.0 * std::numbers::pi * spec.freq_hz / spec.sample_rate;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double noise_rms =
      spec.noise_dbfs ? 32768.0 * std::pow(10.0, *spec.noise_dbfs / 20.0) : 0.0;

  for (std::size_t i = 0; i < spec.samples; ++i) {
    double v = amp * std::sin(step * static_cast<double>(i));
    if (spec.noise_dbfs) v += noise_rms * gauss(rng);
    pcm.samples.push_back(static_cast<std::int16_t>(std::clamp(std::round(v), -32768.0, 32767.0)));
  }
  return pcm;
}

std::size_t samples_for(double seconds, std::uint32_t rate) {
  return static_cast<std::size_t>(std::llround(seconds * rate));
}

}  // namespace classd
