#include "classd/verification.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "classd/error.hpp"
#include "classd/spectrum.hpp"

namespace classd {
namespace {

constexpr std::size_t kBinHalfWidth = 5;  // Blackman-Harris main lobe is +/-4 bins

double db(double ratio) { return 10.0 * std::log10(ratio); }

struct ToneBins {
  double fundamental_hz = 0.0;
  double fundamental = 0.0;
  double harmonics = 0.0;
  double noise = 0.0;
};

ToneBins split_tone(std::span<const double> x, double rate, double band_hz) {
  const std::size_t n = x.size();
  const std::vector<double> p = spectrum::power_spectrum(x);
  const std::size_t top = std::min(p.size() - 1, spectrum::bin_of(band_hz, rate, n));

  ToneBins t;
  std::size_t peak = 0;
  for (std::size_t k = kBinHalfWidth + 1; k <= top; ++k) {
    if (peak == 0 || p[k] > p[peak]) peak = k;
  }
  if (peak == 0 || p[peak] <= 0.0) return t;

  // Parabolic interpolation on log power refines the peak location.
  double offset = 0.0;
  if (peak + 1 < p.size() && p[peak - 1] > 0.0 && p[peak + 1] > 0.0) {
    const double l = std::log(p[peak - 1]), c = std::log(p[peak]), r = std::log(p[peak + 1]);
    const double den = l - 2.0 * c + r;
    if (den != 0.0) offset = 0.5 * (l - r) / den;
  }
  t.fundamental_hz = (static_cast<double>(peak) + offset) * rate / static_cast<double>(n);

  std::vector<bool> claimed(p.size(), false);
  auto take = [&](std::size_t center) {
    double sum = 0.0;
    const std::size_t lo = center > kBinHalfWidth ? center - kBinHalfWidth : 0;
    const std::size_t hi = std::min(p.size() - 1, center + kBinHalfWidth);
    for (std::size_t k = lo; k <= hi; ++k) {
      if (!claimed[k]) sum += p[k];
      claimed[k] = true;
    }
    return sum;
  };

  for (std::size_t k = 0; k <= kBinHalfWidth; ++k) claimed[k] = true;  // DC
  t.fundamental = take(peak);
  for (int h = 2;; ++h) {
    const double f = h * t.fundamental_hz;
    if (f > band_hz || f >= rate / 2.0) break;
    t.harmonics += take(spectrum::bin_of(f, rate, n));
  }
  for (std::size_t k = 0; k <= top; ++k) {
    if (!claimed[k]) t.noise += p[k];
  }
  return t;
}

void fill_spectral(SpectrumReport& r, std::span<const double> region, double rate,
                   double band_hz) {
  const std::size_t n = spectrum::floor_pow2(region.size());
  if (n < 64) return;
  const ToneBins t = split_tone(region.subspan(0, n), rate, band_hz);
  r.fundamental_hz = t.fundamental_hz;
  if (t.fundamental <= 0.0) return;
  r.thd_db = t.harmonics > 0.0 ? std::max(db(t.harmonics / t.fundamental), -kSnrCapDb)
                               : -kSnrCapDb;
  r.inband_noise_power = t.noise / t.fundamental;
}

}  // namespace

DemodOptions demod_options_for(const ChainConfig& cfg) {
  DemodOptions o;
  o.advance_frames = cfg.group_delay_output_samples();
  return o;
}

SampleStream demodulate(const PwmBitstream& pwm, std::uint32_t target_rate,
                        const DemodOptions& opts) {
  pwm.validate();
  const std::uint64_t r = pwm.frame_bits();
  const std::uint32_t frame_rate = pwm.frame_rate();
  if (target_rate == 0 || frame_rate % target_rate != 0) {
    throw InvalidArgument("target rate " + std::to_string(target_rate) +
                          " Hz does not divide the frame rate " + std::to_string(frame_rate) +
                          " Hz");
  }
  if (opts.cic_order == 0 || opts.cic_order % 2 != 0 || opts.cic_order > 6) {
    throw InvalidArgument("CIC order must be 2, 4 or 6");
  }
  const unsigned order = opts.cic_order;
  if (r > (std::uint64_t{1} << (60 / order))) throw MalformedStream("frame too long for CIC");

  SampleStream out;
  out.sample_rate = target_rate;
  const std::uint64_t frames = pwm.frame_count();
  const std::uint64_t factor = frame_rate / target_rate;
  if (frames / factor == 0) return out;

  // The CIC output at bit m is centered on m - K(R-1)/2. Sampling where that
  // center is a frame's midpoint aligns frame k with input sample k.
  const std::uint64_t center = r / 2 + order * (r - 1) / 2;
  const std::uint64_t phase = center % r;
  const std::uint64_t lead = center / r;

  // Integrator states, sampled once per frame at bit phase.
  const std::uint64_t samples = frames + lead;
  std::vector<std::uint64_t> tap(order + samples, 0);  // leading zeros: before the stream
  std::array<std::uint64_t, 6> acc{};
  const std::uint64_t last_bit = phase + r * (samples - 1);
  const std::uint64_t nbits = pwm.bit_count();
  std::uint64_t next = phase;
  std::size_t slot = order;
  for (std::uint64_t m = 0; m <= last_bit; ++m) {
    // Wrap-around arithmetic is exact for the final comb output.
    const std::uint64_t x = m < nbits ? (pwm.bit(m) ? 1u : static_cast<std::uint64_t>(-1)) : 0u;
    acc[0] += x;
    for (unsigned i = 1; i < order; ++i) acc[i] += acc[i - 1];
    if (m == next) {
      tap[slot++] = acc[order - 1];
      next += r;
    }
  }
  for (unsigned pass = 0; pass < order; ++pass) {
    for (std::size_t i = tap.size() - 1; i > 0; --i) tap[i] -= tap[i - 1];
  }

  double gain = 1.0;
  for (unsigned i = 0; i < order; ++i) gain *= static_cast<double>(r);
  std::vector<double> frame(frames);
  for (std::uint64_t k = 0; k < frames; ++k) {
    frame[k] = static_cast<double>(static_cast<std::int64_t>(tap[order + k + lead])) / gain;
  }

  // Band-limit and decimate.
  const double fr = static_cast<double>(frame_rate);
  const double cutoff = std::min(opts.cutoff_hz, 0.45 * target_rate);
  std::size_t taps = static_cast<std::size_t>(std::ceil(5.5 * fr / opts.transition_hz));
  if (taps % 2 == 0) ++taps;
  const std::vector<double> h = design_lowpass(taps, cutoff / fr);
  const std::uint64_t delay = (taps - 1) / 2 + opts.advance_frames;

  const double levels = static_cast<double>(r);
  const std::uint64_t n_out = frames / factor;
  out.samples.resize(n_out);
  for (std::uint64_t n = 0; n < n_out; ++n) {
    const std::int64_t m = static_cast<std::int64_t>(n * factor + delay);
    double y = 0.0;
    const std::int64_t j_lo = std::max<std::int64_t>(0, m - static_cast<std::int64_t>(frames) + 1);
    const std::int64_t j_hi = std::min<std::int64_t>(static_cast<std::int64_t>(taps) - 1, m);
    for (std::int64_t j = j_lo; j <= j_hi; ++j) y += h[j] * frame[m - j];
    out.samples[n] = std::clamp((y + 1.0) * levels / (levels - 1.0) - 1.0, -1.0, 1.0);
  }
  return out;
}

SpectrumReport measure(const SampleStream& ref, const SampleStream& test,
                       const MeasureOptions& opts) {
  if (ref.sample_rate != test.sample_rate) {
    throw LengthMismatch("sample rates differ: " + std::to_string(ref.sample_rate) + " vs " +
                         std::to_string(test.sample_rate));
  }
  if (ref.size() != test.size()) {
    throw LengthMismatch("lengths differ: " + std::to_string(ref.size()) + " vs " +
                         std::to_string(test.size()));
  }
  SpectrumReport rep;
  rep.snr_db = kSnrCapDb;
  const std::size_t n = ref.size();
  const std::size_t margin = opts.settle + opts.max_lag;
  if (n <= 2 * margin) return rep;

  const std::size_t lo = margin, hi = n - margin;
  const auto& r = ref.samples;
  const auto& t = test.samples;

  double rr = 0.0;
  for (std::size_t i = lo; i < hi; ++i) rr += r[i] * r[i];

  if (rr > 0.0) {
    // Delay that maximizes normalized correlation.
    const auto lag_max = static_cast<std::ptrdiff_t>(opts.max_lag);
    std::ptrdiff_t best = 0;
    double best_score = -1.0;
    for (std::ptrdiff_t d = -lag_max; d <= lag_max; ++d) {
      double tr = 0.0, tt = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        const double v = t[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + d)];
        tr += v * r[i];
        tt += v * v;
      }
      const double score = tt > 0.0 ? tr * tr / tt : 0.0;
      if (score > best_score) {
        best_score = score;
        best = d;
      }
    }
    double tr = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      tr += t[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + best)] * r[i];
    }
    const double g = tr / rr;
    double signal = 0.0, noise = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double s = g * r[i];
      const double e = t[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + best)] - s;
      signal += s * s;
      noise += e * e;
    }
    if (noise > 0.0 && signal > 0.0) rep.snr_db = std::min(db(signal / noise), kSnrCapDb);
    if (signal == 0.0) rep.snr_db = -kSnrCapDb;
  }

  fill_spectral(rep, std::span(t).subspan(lo, hi - lo), test.sample_rate, opts.band_hz);
  return rep;
}

SpectrumReport analyze(const SampleStream& signal, const MeasureOptions& opts) {
  SpectrumReport rep;
  const std::size_t n = signal.size();
  if (n <= 2 * opts.settle) return rep;
  fill_spectral(rep, std::span(signal.samples).subspan(opts.settle, n - 2 * opts.settle),
                signal.sample_rate, opts.band_hz);
  return rep;
}

void write_report_text(std::ostream& os, const SpectrumReport& r) {
  os << std::fixed << std::setprecision(2);
  os << "fundamental:        " << r.fundamental_hz << " Hz\n";
  os << "SNR:                " << r.snr_db << " dB\n";
  os << "THD:                " << r.thd_db << " dB\n";
  os << std::scientific << std::setprecision(3);
  os << "in-band noise:      " << r.inband_noise_power << " (relative to fundamental)\n";
  os << std::defaultfloat;
}

void write_report_csv(std::ostream& os, const SpectrumReport& r) {
  os << "fundamental_hz,snr_db,thd_db,inband_noise_power\n";
  os << std::fixed << std::setprecision(3) << r.fundamental_hz << ',' << r.snr_db << ','
     << r.thd_db << ',' << std::scientific << std::setprecision(6) << r.inband_noise_power
     << '\n'
     << std::defaultfloat;
}

}  // namespace classd
