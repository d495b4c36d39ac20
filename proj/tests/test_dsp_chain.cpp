#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "classd/dsp_chain.hpp"
#include "classd/error.hpp"
#include "classd/signals.hpp"
#include "classd/spectrum.hpp"
#include "classd/verification.hpp"

using namespace classd;

namespace {

SampleStream sine(double freq, double amp, std::size_t n, std::uint32_t rate, double phase = 0) {
  SampleStream s;
  s.sample_rate = rate;
  for (std::size_t i = 0; i < n; ++i) {
    s.samples.push_back(amp * std::sin(2 * std::numbers::pi * freq * i / rate + phase));
  }
  return s;
}

SampleStream constant(double c, std::size_t n, std::uint32_t rate) {
  return SampleStream{std::vector<double>(n, c), rate};
}

double duty_mean(const PwmBitstream& pwm, std::uint64_t first_frame = 0) {
  std::uint64_t ones = 0;
  const std::uint64_t begin = first_frame * pwm.frame_bits();
  for (std::uint64_t i = begin; i < pwm.bit_count(); ++i) ones += pwm.bit(i);
  return static_cast<double>(ones) / static_cast<double>(pwm.bit_count() - begin);
}

// In-band power of the quantization error (code value minus input).
double inband_error_power(const SampleStream& x, const QuantizedStream& q) {
  std::vector<double> err(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) err[i] = q.value(q.codes[i]) - x.samples[i];
  return spectrum::band_power(err, x.sample_rate, 0.0, 20000.0);
}

}  // namespace

TEST_CASE("s0 scales by 1/32768") {
  PcmStream pcm;
  pcm.samples = {0, 16384, -32768};
  const SampleStream s = s0_condition(pcm);
  CHECK(s.samples == std::vector<double>{0.0, 0.5, -1.0});
  CHECK(s.sample_rate == 44100);
  CHECK(s0_condition(PcmStream{}).samples.empty());
}

TEST_CASE("s0 keeps the length of a 4.3 s file") {
  ToneSpec spec;  // 189630 samples by default
  const SampleStream s = s0_condition(make_tone(spec));
  CHECK(s.size() == 189630);
  CHECK(s.sample_rate == 44100);
}

TEST_CASE("interpolation kernel shape") {
  const FirKernel k = design_interpolation_kernel(63);
  REQUIRE(k.size() == 63);
  double sum = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    CHECK(k.taps[i] == k.taps[k.size() - 1 - i]);
    sum += k.taps[i];
  }
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(k.taps[31] == doctest::Approx(1.0));
  CHECK(k.group_delay() == 31);
}

TEST_CASE("upsample2 basic laws") {
  const FirKernel k = design_interpolation_kernel();
  SUBCASE("zeros in, zeros out") {
    const SampleStream y = upsample2(constant(0.0, 100, 44100), k);
    CHECK(y.size() == 200);
    CHECK(y.sample_rate == 88200);
    for (double v : y.samples) CHECK(v == 0.0);
  }
  SUBCASE("DC passes at unity gain") {
    const SampleStream y = upsample2(constant(0.5, 200, 44100), k);
    for (std::size_t i = 64; i < y.size(); ++i) CHECK(y.samples[i] == doctest::Approx(0.5).epsilon(2e-3));
  }
  SUBCASE("empty input") { CHECK(upsample2(SampleStream{{}, 44100}, k).size() == 0); }
  SUBCASE("output is saturated") {
    const SampleStream y = upsample2(sine(20000, 1.0, 400, 44100), k);
    for (double v : y.samples) CHECK(std::abs(v) <= 1.0);
  }
}

TEST_CASE("upsample2 matches the polyphase form") {
  // y[2i + p] = sum_m h[2m + p] x[i - m], computed without zero-stuffing.
  const FirKernel k = design_interpolation_kernel();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  SampleStream x{{}, 44100};
  for (int i = 0; i < 300; ++i) x.samples.push_back(u(rng));
  const SampleStream y = upsample2(x, k);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t p = 0; p < 2; ++p) {
      double acc = 0;
      for (std::size_t m = 0; 2 * m + p < k.size() && m <= i; ++m) {
        acc += k.taps[2 * m + p] * x.samples[i - m];
      }
      CHECK(y.samples[2 * i + p] == doctest::Approx(acc).epsilon(1e-12));
    }
  }
}

TEST_CASE("three x2 stages reject images by at least 60 dB") {
  const FirKernel k = design_interpolation_kernel();
  SampleStream s = sine(1000, 32767.0 / 32768.0, 8192 + 512, 44100);
  for (Behavior b : {Behavior::S1, Behavior::S2, Behavior::S3}) s = upsample2(s, k, b);
  REQUIRE(s.sample_rate == 352800);
  const std::size_t n = 1 << 16;
  const std::span<const double> region(s.samples.data() + 2048, n);
  const auto p = spectrum::power_spectrum(region);
  const std::size_t f0 = spectrum::bin_of(1000, 352800, n);
  double fund = 0;
  for (std::size_t b = f0 - 5; b <= f0 + 5; ++b) fund += p[b];
  double worst = 0;
  for (std::size_t b = spectrum::bin_of(20000, 352800, n); b < p.size(); ++b) worst = std::max(worst, p[b]);
  const double rejection_db = 10 * std::log10(fund / worst);
  MESSAGE("image rejection " << rejection_db << " dB");
  CHECK(rejection_db >= 60.0);
}

TEST_CASE("linearize fixed points") {
  for (double c : {-0.9, -0.25, 0.0, 0.3, 0.99}) {
    const SampleStream y = linearize(constant(c, 50, 352800));
    for (double v : y.samples) CHECK(v == doctest::Approx(c).epsilon(1e-12));
  }
  const SampleStream z = linearize(constant(0.0, 20, 352800));
  for (double v : z.samples) CHECK(v == 0.0);
}

TEST_CASE("linearize keeps endpoints and solves the ramp crossing") {
  const SampleStream x = sine(3000, 0.9, 400, 352800, 0.3);
  const SampleStream y = linearize(x);
  CHECK(y.samples.front() == x.samples.front());
  CHECK(y.samples.back() == x.samples.back());

  // Oracle: bisection on f(s) = g(1 + q(s)) - s - 1/2 over [-1/2, 1/2].
  const double g = 127.0 / 256.0;
  for (std::size_t k = 1; k + 1 < x.size(); ++k) {
    const auto& v = x.samples;
    const double b = 0.5 * (v[k + 1] - v[k - 1]);
    const double a = 0.5 * (v[k + 1] - 2 * v[k] + v[k - 1]);
    auto q = [&](double s) { return v[k] + b * s + a * s * s; };
    auto f = [&](double s) { return g * (1 + q(s)) - s - 0.5; };
    double lo = -0.5, hi = 0.5;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (f(lo) * f(mid) <= 0 ? hi : lo) = mid;
    }
    CHECK(y.samples[k] == doctest::Approx(q(0.5 * (lo + hi))).epsilon(1e-9));
  }
}

TEST_CASE("noise shaper at mid-scale dithers between 63 and 64") {
  ChainConfig cfg;
  const QuantizedStream q = noise_shape(constant(0.0, 4000, 352800), cfg);
  double sum = 0;
  for (auto c : q.codes) {
    CHECK((c == 63 || c == 64));
    sum += c;
  }
  CHECK(std::abs(sum / q.codes.size() - 63.5) <= 0.5);
}

TEST_CASE("noise shaper rails at +1") {
  ChainConfig cfg;
  const QuantizedStream q = noise_shape(constant(1.0, 1000, 352800), cfg);
  for (std::size_t i = 10; i < q.codes.size(); ++i) CHECK(q.codes[i] == 127);
  const QuantizedStream lo = noise_shape(constant(-1.0, 1000, 352800), cfg);
  for (std::size_t i = 10; i < lo.codes.size(); ++i) CHECK(lo.codes[i] == 0);
}

TEST_CASE("order 0 is plain rounding") {
  ChainConfig cfg;
  cfg.shaper_order = 0;
  const SampleStream x = sine(1000, 0.5, 2000, 352800);
  const QuantizedStream q = noise_shape(x, cfg);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(q.codes[i] == std::lround((x.samples[i] + 1) / 2 * 127));
  }
}

TEST_CASE("second-order error feedback has NTF (1 - z^-1)^2") {
  // With e = v - q, q = w - (1 - z^-1)^2 e, so the quantization error
  // r = q - w satisfies r[k] = -(e[k] - 2e[k-1] + e[k-2]). Applying the
  // inverse recursion recovers e, which must stay within half an LSB.
  ChainConfig cfg;
  const SampleStream x = sine(1234, 0.6, 5000, 352800);
  const QuantizedStream q = noise_shape(x, cfg);
  double e1 = 0, e2 = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double w = (x.samples[k] + 1) / 2 * 127;
    const double r = q.codes[k] - w;
    const double e = -r + 2 * e1 - e2;
    CHECK(std::abs(e) <= 0.5 + 1e-9);
    e2 = e1;
    e1 = e;
  }
}

TEST_CASE("noise shaping lowers in-band noise by at least 20 dB at -6 dBFS") {
  ChainConfig shaped, plain;
  plain.shaper_order = 0;
  const SampleStream x = sine(1000, 0.5, 1 << 16, 352800);
  const double ps = inband_error_power(x, noise_shape(x, shaped));
  const double pu = inband_error_power(x, noise_shape(x, plain));
  const double gain_db = 10 * std::log10(pu / ps);
  MESSAGE("in-band noise reduction " << gain_db << " dB");
  CHECK(gain_db >= 20.0);
}

TEST_CASE("property: noise shaping helps for sines from 100 Hz to 10 kHz") {
  ChainConfig shaped, plain;
  plain.shaper_order = 0;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> freq(100, 10000), amp(0.05, 0.9), ph(0, 6.28);
  for (int trial = 0; trial < 12; ++trial) {
    const SampleStream x = sine(freq(rng), amp(rng), 1 << 15, 352800, ph(rng));
    CHECK(inband_error_power(x, noise_shape(x, shaped)) < inband_error_power(x, noise_shape(x, plain)));
  }
}

TEST_CASE("waveform generator frames") {
  QuantizedStream q;
  q.sample_rate = 352800;
  SUBCASE("code 64 is 50% duty") {
    q.codes = {64};
    const PwmBitstream p = generate_pwm(q);
    REQUIRE(p.bit_count() == 128);
    for (int i = 0; i < 128; ++i) CHECK(p.bit(i) == (i < 64));
  }
  SUBCASE("rails") {
    q.codes = {0, 127};
    const PwmBitstream p = generate_pwm(q);
    for (int i = 0; i < 128; ++i) CHECK_FALSE(p.bit(i));
    for (int i = 0; i < 127; ++i) CHECK(p.bit(128 + i));
    CHECK_FALSE(p.bit(255));
  }
  SUBCASE("clock") {
    q.codes = {1, 2, 3};
    CHECK(generate_pwm(q).clock_hz() == 45158400u);
  }
  SUBCASE("out of range code") {
    q.codes = {128};
    CHECK_THROWS_AS(generate_pwm(q), InvalidArgument);
  }
}

TEST_CASE("rate arithmetic") {
  const ChainConfig cfg;
  CHECK(cfg.output_rate() == 352800u);
  CHECK(cfg.pwm_clock_hz() == 45158400u);
  CHECK(cfg.naive_clock_hz() == 2890137600u);
  CHECK(cfg.group_delay_output_samples() == 217u);
}

TEST_CASE("convert of silence: 8N frames at 50% duty") {
  PcmStream pcm;
  pcm.samples.assign(500, 0);
  const PwmBitstream p = convert(pcm);
  CHECK(p.frame_count() == 4000);
  CHECK(p.clock_hz() == 45158400u);
  CHECK(std::abs(duty_mean(p) - 0.5) <= 1.0 / 128);
}

TEST_CASE("convert of a 4.3 s file: 1517040 frames") {
  ToneSpec spec;
  const PwmBitstream p = convert(make_tone(spec));
  CHECK(p.frame_count() == 1517040u);
  CHECK(p.bit_count() == 194181120u);
}

TEST_CASE("convert rejects the wrong input rate") {
  PcmStream pcm;
  pcm.sample_rate = 48000;
  pcm.samples = {0, 0};
  CHECK_THROWS_AS(convert(pcm), InvalidArgument);
}

TEST_CASE("convert is deterministic") {
  ToneSpec spec;
  spec.samples = 3000;
  spec.noise_dbfs = -30;
  const PcmStream pcm = make_tone(spec);
  CHECK(encode_pwm(convert(pcm)) == encode_pwm(convert(pcm)));
}

TEST_CASE("property: DC duty law") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-0.999, 0.999);
  ChainConfig cfg;
  for (int trial = 0; trial < 25; ++trial) {
    const double c = u(rng);
    QuantizedStream q = noise_shape(constant(c, 20000, 352800), cfg);
    const double duty = duty_mean(generate_pwm(q), 100);
    CHECK(std::abs(duty - (c + 1) / 2) <= 1.0 / 128);
  }
}

TEST_CASE("linearization improves THD of the demodulated output") {
  ToneSpec spec;
  spec.level_dbfs = 20 * std::log10(0.9);
  spec.samples = 40000;
  const PcmStream pcm = make_tone(spec);
  ChainConfig with, without;
  without.linearize = false;
  auto thd = [&](const ChainConfig& cfg) {
    const SampleStream y = demodulate(convert(pcm, cfg), 44100, demod_options_for(cfg));
    return measure(s0_condition(pcm), y).thd_db;
  };
  const double a = thd(with), b = thd(without);
  MESSAGE("THD linearized " << a << " dB, bypass " << b << " dB");
  CHECK(a < b);
}
