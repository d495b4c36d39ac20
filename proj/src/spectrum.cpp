#include "classd/spectrum.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

#include "classd/error.hpp"

namespace classd::spectrum {
namespace {

// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

std::vector<double> blackman_harris(std::size_t n) {
  constexpr double a0 = 0.35875, a1 = 0.48829, a2 = 0.14128, a3 = 0.01168;
  std::vector<double> w(n);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  // Periodic form, suited to spectral analysis.
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    w[i] = a0 - a1 * std::cos(t) + a2 * std::cos(2 * t) - a3 * std::cos(3 * t);
  }
  return w;
}

std::vector<double> power_spectrum(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw InvalidArgument("spectrum needs at least two samples");
  const std::vector<double> w = blackman_harris(n);
  double w2 = 0.0;
  for (double v : w) w2 += v * v;

  std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
  std::unique_ptr<fftw_complex, FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1))));
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < n; ++i) in.get()[i] = x[i] * w[i];
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  std::vector<double> p(n / 2 + 1);
  const double scale = 1.0 / (static_cast<double>(n) * w2);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double re = out.get()[k][0];
    const double im = out.get()[k][1];
    // Interior bins carry the power of their negative-frequency twin too.
    const bool twin = k != 0 && !(n % 2 == 0 && k == n / 2);
    p[k] = (re * re + im * im) * scale * (twin ? 2.0 : 1.0);
  }
  return p;
}

std::size_t bin_of(double freq_hz, double sample_rate, std::size_t n) {
  return static_cast<std::size_t>(std::llround(freq_hz * static_cast<double>(n) / sample_rate));
}

double band_power(std::span<const double> spectrum, double sample_rate, std::size_t n,
                  double f_lo, double f_hi) {
  double sum = 0.0;
  const double df = sample_rate / static_cast<double>(n);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double f = df * static_cast<double>(k);
    if (f >= f_lo && f <= f_hi) sum += spectrum[k];
  }
  return sum;
}

double band_power(std::span<const double> x, double sample_rate, double f_lo, double f_hi) {
  const std::vector<double> p = power_spectrum(x);
  return band_power(p, sample_rate, x.size(), f_lo, f_hi);
}

std::size_t floor_pow2(std::size_t n) {
  if (n == 0) return 0;
  std::size_t p = 1;
  while (p <= n / 2) p <<= 1;
  return p;
}

}  // namespace classd::spectrum
