#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace classd {

/// 16-bit PCM audio, downmixed to mono.
struct PcmStream {
  std::vector<std::int16_t> samples;
  std::uint32_t sample_rate = 44100;
  std::uint16_t channels = 1;

  double duration_s() const {
    return sample_rate == 0 ? 0.0 : static_cast<double>(samples.size()) / sample_rate;
  }

  bool operator==(const PcmStream&) const = default;
};

/// Packed PWM bit sequence, LSB-first within each byte.
///
/// Every frame holds `frame_bits` bits; `clock_hz` is the bit clock, so the
/// frame rate is `clock_hz / frame_bits`.
class PwmBitstream {
 public:
  PwmBitstream() = default;
  PwmBitstream(std::uint32_t clock_hz, std::uint32_t frame_bits);

  std::uint32_t clock_hz() const { return clock_hz_; }
  std::uint32_t frame_bits() const { return frame_bits_; }
  std::uint64_t bit_count() const { return bit_count_; }
  std::uint64_t frame_count() const { return frame_bits_ == 0 ? 0 : bit_count_ / frame_bits_; }
  std::uint32_t frame_rate() const { return frame_bits_ == 0 ? 0 : clock_hz_ / frame_bits_; }

  bool bit(std::uint64_t index) const {
    return (bytes_[index >> 3] >> (index & 7)) & 1u;
  }

  void push_bit(bool value);
  /// Appends one left-aligned pulse frame: `ones` high bits followed by
  /// `frame_bits - ones` low bits.
  void push_frame(std::uint32_t ones);

  std::span<const std::uint8_t> bytes() const { return bytes_; }

  /// Builds a stream from raw packed bytes. Throws MalformedStream when the
  /// byte count does not match `bit_count` or the invariants fail.
  static PwmBitstream from_packed(std::uint32_t clock_hz, std::uint32_t frame_bits,
                                  std::uint64_t bit_count, std::vector<std::uint8_t> bytes);

  /// Throws MalformedStream unless the bit count is a whole number of frames
  /// and the clock is a whole multiple of the frame length.
  void validate() const;

  bool operator==(const PwmBitstream&) const = default;

 private:
  std::uint32_t clock_hz_ = 0;
  std::uint32_t frame_bits_ = 0;
  std::uint64_t bit_count_ = 0;
  std::vector<std::uint8_t> bytes_;
};

// WAV (RIFF, PCM format code 1, 16-bit). Multi-channel data is downmixed by
// the arithmetic mean of each frame, truncated toward zero.
PcmStream parse_wav(std::span<const std::uint8_t> data);
PcmStream read_wav(const std::filesystem::path& path);

// Writes a canonical 44-byte-header mono/multichannel PCM-16 file. The
// samples are written interleaved as given; `pcm.channels` sets the header.
std::vector<std::uint8_t> encode_wav(const PcmStream& pcm);
void write_wav(const PcmStream& pcm, const std::filesystem::path& path);

// "PWM1" container: 16-byte header then the packed payload.
//   0  magic "PWM1"
//   4  clock_hz    u32 LE
//   8  frame_bits  u32 LE
//  12  bit count   u32 LE
//  16  payload, ceil(bit count / 8) bytes, LSB-first
inline constexpr std::size_t kPwmHeaderBytes = 16;

std::vector<std::uint8_t> encode_pwm(const PwmBitstream& stream);
PwmBitstream decode_pwm(std::span<const std::uint8_t> data);
void write_pwm(const PwmBitstream& stream, const std::filesystem::path& path);
PwmBitstream read_pwm(const std::filesystem::path& path);

// Whole-file helpers shared by the readers above.
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(std::span<const std::uint8_t> data, const std::filesystem::path& path);

}  // namespace classd
