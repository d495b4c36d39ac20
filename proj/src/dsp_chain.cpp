#include "classd/dsp_chain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "classd/error.hpp"

namespace classd {
namespace {

double saturate(double v) { return std::clamp(v, -1.0, 1.0); }

void count(Profiler* prof, Behavior b, OpKind k, std::uint64_t n) {
  if (prof != nullptr && n != 0) prof->record(b, k, n);
}

// Signed binomial coefficients of (1 - z^-1)^order, excluding the leading 1.
std::vector<double> ntf_feedback(unsigned order) {
  std::vector<double> c(order + 1, 0.0);
  c[0] = 1.0;
  for (unsigned i = 0; i < order; ++i) {
    for (unsigned j = i + 1; j > 0; --j) c[j] -= c[j - 1];
  }
  c.erase(c.begin());
  return c;
}

}  // namespace

std::size_t ChainConfig::group_delay_output_samples() const {
  const std::size_t per_stage = (fir_taps - 1) / 2;
  std::size_t total = 0;
  for (unsigned s = 0; s < interp_stages; ++s) total += per_stage << s;
  return total;
}

void ChainConfig::validate() const {
  if (input_rate == 0) throw InvalidArgument("input rate must be positive");
  if (interp_stages < 1 || interp_stages > 3) {
    throw InvalidArgument("interpolation stages must be 1..3 (behaviors S1..S3)");
  }
  if (quantizer_bits < 1 || quantizer_bits > 12) {
    throw InvalidArgument("quantizer bits must be 1..12");
  }
  if (shaper_order > 4) throw InvalidArgument("shaper order must be 0..4");
  if (fir_taps < 3 || fir_taps % 4 != 3) {
    throw InvalidArgument("interpolation kernel length must be 4k+3 (odd, centered halfband)");
  }
  if (pwm_clock_hz() > UINT32_MAX) throw InvalidArgument("PWM clock exceeds 32 bits");
}

std::vector<double> design_lowpass(std::size_t taps, double cutoff, double gain) {
  if (taps == 0 || taps % 2 == 0) throw InvalidArgument("lowpass length must be odd");
  if (!(cutoff > 0.0 && cutoff < 0.5)) throw InvalidArgument("cutoff must be in (0, 0.5)");
  std::vector<double> h(taps);
  const double mid = static_cast<double>(taps - 1) / 2.0;
  const double span = static_cast<double>(taps - 1);
  for (std::size_t n = 0; n < taps; ++n) {
    const double t = static_cast<double>(n) - mid;
    const double x = 2.0 * cutoff * t;
    const double sinc = t == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(n) / span;
    const double window = taps == 1 ? 1.0 : 0.42 - 0.5 * std::cos(phase) + 0.08 * std::cos(2 * phase);
    h[n] = 2.0 * cutoff * sinc * window;
  }
  double sum = 0.0;
  for (double v : h) sum += v;
  for (double& v : h) v *= gain / sum;
  // Exact symmetry regardless of rounding in the trig evaluation.
  for (std::size_t n = 0; n < taps / 2; ++n) {
    const double avg = 0.5 * (h[n] + h[taps - 1 - n]);
    h[n] = h[taps - 1 - n] = avg;
  }
  return h;
}

FirKernel design_interpolation_kernel(std::size_t taps) {
  FirKernel k{design_lowpass(taps, 0.25, 2.0)};
  // Unit gain per polyphase branch keeps both output phases at exactly the
  // input DC level.
  for (std::size_t phase = 0; phase < 2; ++phase) {
    double sum = 0.0;
    for (std::size_t n = phase; n < taps; n += 2) sum += k.taps[n];
    for (std::size_t n = phase; n < taps; n += 2) k.taps[n] /= sum;
  }
  return k;
}

SampleStream s0_condition(const PcmStream& pcm, Profiler* prof) {
  SampleStream out;
  out.sample_rate = pcm.sample_rate;
  out.samples.reserve(pcm.samples.size());
  for (std::int16_t s : pcm.samples) out.samples.push_back(static_cast<double>(s) / 32768.0);
  const std::uint64_t n = pcm.samples.size();
  count(prof, Behavior::S0, OpKind::Mul, n);
  count(prof, Behavior::S0, OpKind::Mem, 2 * n);
  return out;
}

SampleStream upsample2(const SampleStream& in, const FirKernel& kernel, Behavior stage,
                       Profiler* prof) {
  SampleStream out;
  out.sample_rate = in.sample_rate * 2;
  const std::size_t n_out = in.samples.size() * 2;
  if (n_out == 0) return out;

  std::vector<double> stuffed(n_out, 0.0);
  for (std::size_t i = 0; i < in.samples.size(); ++i) stuffed[2 * i] = in.samples[i];

  const std::size_t taps = kernel.taps.size();
  out.samples.resize(n_out);
  std::uint64_t macs = 0;
  for (std::size_t k = 0; k < n_out; ++k) {
    const std::size_t reach = std::min(taps, k + 1);
    double acc = 0.0;
    for (std::size_t j = 0; j < reach; ++j) acc += kernel.taps[j] * stuffed[k - j];
    macs += reach;
    out.samples[k] = saturate(acc);
  }
  count(prof, stage, OpKind::Mac, macs);
  count(prof, stage, OpKind::Mem, macs + n_out + 2 * in.samples.size());
  count(prof, stage, OpKind::Cmp, 2 * n_out);
  return out;
}

SampleStream linearize(const SampleStream& in, unsigned quantizer_bits, Profiler* prof) {
  SampleStream out;
  out.sample_rate = in.sample_rate;
  out.samples = in.samples;
  const std::size_t n = in.samples.size();
  if (n < 3) return out;

  // The ramp reaches level v at frame fraction g * (v + 1); it is centered on
  // the sample instant, so the crossing lies at offset s in [-1/2, 1/2].
  const double levels = static_cast<double>(1u << quantizer_bits);
  const double g = (levels - 1.0) / (2.0 * levels);
  const auto& x = in.samples;

  for (std::size_t k = 1; k + 1 < n; ++k) {
    // Quadratic through (k-1, k, k+1): x(k + s) = x_k + b s + a s^2.
    const double b = 0.5 * (x[k + 1] - x[k - 1]);
    const double a = 0.5 * (x[k + 1] - 2.0 * x[k] + x[k - 1]);
    // Crossing: s + 1/2 = g (1 + x(k + s)).
    const double alpha = g * a;
    const double beta = g * b - 1.0;
    const double gamma = g * (1.0 + x[k]) - 0.5;
    double s;
    const double disc = beta * beta - 4.0 * alpha * gamma;
    if (disc >= 0.0) {
      // Root nearest the linear solution, in cancellation-free form.
      s = 2.0 * gamma / (-beta + std::sqrt(disc));
    } else {
      s = -gamma / beta;
    }
    s = std::clamp(s, -0.5, 0.5);
    out.samples[k] = saturate(x[k] + s * (b + a * s));
  }

  const std::uint64_t m = n - 2;
  count(prof, Behavior::LINE, OpKind::Add, 7 * m);
  count(prof, Behavior::LINE, OpKind::Mul, 10 * m);
  count(prof, Behavior::LINE, OpKind::Mac, 2 * m);
  count(prof, Behavior::LINE, OpKind::Cmp, 5 * m);
  count(prof, Behavior::LINE, OpKind::Mem, 4 * m + 2);
  return out;
}

QuantizedStream noise_shape(const SampleStream& in, const ChainConfig& cfg, Profiler* prof) {
  QuantizedStream q;
  q.bits = cfg.quantizer_bits;
  q.sample_rate = in.sample_rate;
  q.codes.reserve(in.samples.size());

  // Work in level units, where codes are integers and the mid-scale tie is
  // exact: w = (x + 1) / 2 * (2^B - 1).
  const double top = static_cast<double>(q.levels() - 1);
  const std::vector<double> feedback = ntf_feedback(cfg.shaper_order);
  std::vector<double> err(cfg.shaper_order, 0.0);  // err[0] = e[k-1]

  for (double x : in.samples) {
    double v = (x + 1.0) * 0.5 * top;
    // v = w - sum c_j e[k-j], with e = v - q, gives q = w - (1 - z^-1)^n e.
    for (std::size_t j = 0; j < feedback.size(); ++j) v -= feedback[j] * err[j];
    const double code = std::round(std::clamp(v, 0.0, top));
    q.codes.push_back(static_cast<std::uint16_t>(code));
    if (!err.empty()) {
      std::copy_backward(err.begin(), err.end() - 1, err.end());
      err[0] = v - code;
    }
  }

  const std::uint64_t n = in.samples.size();
  const std::uint64_t order = cfg.shaper_order;
  count(prof, Behavior::MOLD, OpKind::Add, (3 + order) * n);
  count(prof, Behavior::MOLD, OpKind::Mul, (1 + order) * n);
  count(prof, Behavior::MOLD, OpKind::Cmp, 3 * n);
  count(prof, Behavior::MOLD, OpKind::Mem, (2 + order) * n);
  return q;
}

PwmBitstream generate_pwm(const QuantizedStream& q) {
  const std::uint64_t clock = static_cast<std::uint64_t>(q.sample_rate) * q.levels();
  if (clock == 0 || clock > UINT32_MAX) throw InvalidArgument("PWM clock out of range");
  PwmBitstream pwm(static_cast<std::uint32_t>(clock), q.levels());
  for (std::uint16_t c : q.codes) {
    if (c >= q.levels()) {
      throw InvalidArgument("code " + std::to_string(c) + " exceeds " +
                            std::to_string(q.bits) + "-bit range");
    }
    pwm.push_frame(c);
  }
  return pwm;
}

QuantizedStream convert_to_codes(const PcmStream& pcm, const ChainConfig& cfg, Profiler* prof) {
  cfg.validate();
  if (pcm.sample_rate != cfg.input_rate) {
    throw InvalidArgument("input is " + std::to_string(pcm.sample_rate) + " Hz, chain expects " +
                          std::to_string(cfg.input_rate) + " Hz");
  }
  const FirKernel kernel = design_interpolation_kernel(cfg.fir_taps);
  SampleStream s = s0_condition(pcm, prof);
  for (unsigned stage = 0; stage < cfg.interp_stages; ++stage) {
    s = upsample2(s, kernel, kAllBehaviors[1 + stage], prof);
  }
  if (cfg.linearize) s = linearize(s, cfg.quantizer_bits, prof);
  return noise_shape(s, cfg, prof);
}

PwmBitstream convert(const PcmStream& pcm, const ChainConfig& cfg, Profiler* prof) {
  return generate_pwm(convert_to_codes(pcm, cfg, prof));
}

}  // namespace classd
