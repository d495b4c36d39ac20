#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>

#include "classd/audio_io.hpp"
#include "classd/dsp_chain.hpp"

namespace classd {

struct SpectrumReport {
  double fundamental_hz = 0.0;
  double snr_db = 0.0;
  double thd_db = 0.0;
  /// In-band (0-20 kHz) power outside DC, the fundamental and its
  /// harmonics, relative to the fundamental's power.
  double inband_noise_power = 0.0;
};

inline constexpr double kSnrCapDb = 140.0;
inline constexpr double kAudioBandHz = 20000.0;

struct DemodOptions {
  /// Samples (at the PWM frame rate) the output is advanced by; set this to
  /// the modulator's group delay so the result lines up with its input.
  std::size_t advance_frames = 0;
  double cutoff_hz = kAudioBandHz;
  double transition_hz = 4000.0;
  /// Order of the bit-rate CIC front end; must be even.
  unsigned cic_order = 4;
};

/// Demodulator options matching the group delay of `cfg`'s chain.
DemodOptions demod_options_for(const ChainConfig& cfg);

/// Reconstructs audio from a PWM bitstream.
///
/// Bits map to +/-1 and pass through an order-K CIC decimator down to the
/// frame rate, sampled at the frame center plus the CIC delay. A Blackman
/// windowed-sinc lowpass then band-limits to `cutoff_hz` and decimates to
/// `target_rate`. Finally the duty-to-level map of the waveform generator
/// (a code c gives c high bits out of 2^B) is inverted, so a constant code c
/// reads back as 2c / (2^B - 1) - 1.
SampleStream demodulate(const PwmBitstream& pwm, std::uint32_t target_rate,
                        const DemodOptions& opts = {});

struct MeasureOptions {
  /// Samples dropped at both ends before any comparison.
  std::size_t settle = 1024;
  /// Integer delays searched in each direction.
  std::size_t max_lag = 64;
  double band_hz = kAudioBandHz;
};

/// Compares `test` against `ref` after optimal integer delay and gain.
/// SNR is capped at kSnrCapDb, which is also reported when `ref` is silent.
/// THD and noise come from a Blackman-Harris FFT of `test` (largest power of
/// two that fits the settled region).
SpectrumReport measure(const SampleStream& ref, const SampleStream& test,
                       const MeasureOptions& opts = {});

/// Spectral metrics of a single signal (SNR field left at zero).
SpectrumReport analyze(const SampleStream& signal, const MeasureOptions& opts = {});

void write_report_text(std::ostream& os, const SpectrumReport& r);
void write_report_csv(std::ostream& os, const SpectrumReport& r);

}  // namespace classd
