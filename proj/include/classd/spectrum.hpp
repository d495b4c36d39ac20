#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace classd::spectrum {

/// Four-term Blackman-Harris window (-92 dB sidelobes).
std::vector<double> blackman_harris(std::size_t n);

/// One-sided power spectrum |X[k]|^2, k = 0..n/2, of the windowed input.
/// Normalized so that summing bins gives the mean-square power of the
/// input (for broadband content).
std::vector<double> power_spectrum(std::span<const double> x);

/// Bin index nearest to `freq_hz` for an FFT of length `n`.
std::size_t bin_of(double freq_hz, double sample_rate, std::size_t n);

/// Power summed over bins whose centers lie in [f_lo, f_hi].
double band_power(std::span<const double> spectrum, double sample_rate, std::size_t n,
                  double f_lo, double f_hi);

/// Band power of `x` computed over its full length.
double band_power(std::span<const double> x, double sample_rate, double f_lo, double f_hi);

/// Largest power of two not above n (0 for n = 0).
std::size_t floor_pow2(std::size_t n);

}  // namespace classd::spectrum
