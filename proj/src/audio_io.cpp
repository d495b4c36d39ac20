#include "classd/audio_io.hpp"

#include <cstring>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "classd/error.hpp"

namespace classd {
namespace {

std::uint16_t load_u16(std::span<const std::uint8_t> d, std::size_t at) {
  return static_cast<std::uint16_t>(d[at] | (d[at + 1] << 8));
}

std::uint32_t load_u32(std::span<const std::uint8_t> d, std::size_t at) {
  return static_cast<std::uint32_t>(d[at]) | (static_cast<std::uint32_t>(d[at + 1]) << 8) |
         (static_cast<std::uint32_t>(d[at + 2]) << 16) |
         (static_cast<std::uint32_t>(d[at + 3]) << 24);
}

void store_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void store_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xff));
  }
}

void store_tag(std::vector<std::uint8_t>& out, std::string_view tag) {
  out.insert(out.end(), tag.begin(), tag.end());
}

bool tag_is(std::span<const std::uint8_t> d, std::size_t at, std::string_view tag) {
  return std::memcmp(d.data() + at, tag.data(), 4) == 0;
}

struct WavFormat {
  std::uint16_t format_code;
  std::uint16_t channels;
  std::uint32_t sample_rate;
  std::uint16_t block_align;
  std::uint16_t bits_per_sample;
};

constexpr std::uint16_t kWavePcm = 1;

}  // namespace

PwmBitstream::PwmBitstream(std::uint32_t clock_hz, std::uint32_t frame_bits)
    : clock_hz_(clock_hz), frame_bits_(frame_bits) {}

void PwmBitstream::push_bit(bool value) {
  if ((bit_count_ & 7) == 0) bytes_.push_back(0);
  if (value) bytes_.back() |= static_cast<std::uint8_t>(1u << (bit_count_ & 7));
  ++bit_count_;
}

void PwmBitstream::push_frame(std::uint32_t ones) {
  if (ones > frame_bits_) throw InvalidArgument("pulse wider than frame");
  // Byte-aligned fast path: frames of whole bytes are the common case.
  if ((bit_count_ & 7) == 0 && (frame_bits_ & 7) == 0) {
    const std::size_t full = ones / 8;
    const std::size_t frame_bytes = frame_bits_ / 8;
    bytes_.insert(bytes_.end(), full, 0xff);
    if (full < frame_bytes) {
      bytes_.push_back(static_cast<std::uint8_t>((1u << (ones & 7)) - 1u));
      bytes_.insert(bytes_.end(), frame_bytes - full - 1, 0x00);
    }
    bit_count_ += frame_bits_;
    return;
  }
  for (std::uint32_t i = 0; i < frame_bits_; ++i) push_bit(i < ones);
}

PwmBitstream PwmBitstream::from_packed(std::uint32_t clock_hz, std::uint32_t frame_bits,
                                       std::uint64_t bit_count,
                                       std::vector<std::uint8_t> bytes) {
  if (bytes.size() != (bit_count + 7) / 8) {
    throw MalformedStream("payload holds " + std::to_string(bytes.size()) +
                          " bytes, expected " + std::to_string((bit_count + 7) / 8));
  }
  PwmBitstream s(clock_hz, frame_bits);
  s.bit_count_ = bit_count;
  s.bytes_ = std::move(bytes);
  // Padding bits past the end are not part of the stream.
  if (bit_count & 7) s.bytes_.back() &= static_cast<std::uint8_t>((1u << (bit_count & 7)) - 1u);
  s.validate();
  return s;
}

void PwmBitstream::validate() const {
  if (frame_bits_ == 0) throw MalformedStream("frame_bits must be positive");
  if (bit_count_ % frame_bits_ != 0) {
    throw MalformedStream("bit count " + std::to_string(bit_count_) +
                          " is not a multiple of frame_bits " + std::to_string(frame_bits_));
  }
  if (clock_hz_ == 0 || clock_hz_ % frame_bits_ != 0) {
    throw MalformedStream("clock_hz " + std::to_string(clock_hz_) +
                          " is not a whole multiple of frame_bits");
  }
}

PcmStream parse_wav(std::span<const std::uint8_t> d) {
  if (d.size() < 12) throw MalformedHeader("file too short for a RIFF header");
  if (!tag_is(d, 0, "RIFF")) throw MalformedHeader("missing RIFF magic");
  if (!tag_is(d, 8, "WAVE")) throw MalformedHeader("RIFF form type is not WAVE");

  std::optional<WavFormat> fmt;
  std::size_t pos = 12;
  while (pos + 8 <= d.size()) {
    const std::uint32_t size = load_u32(d, pos + 4);
    const std::size_t body = pos + 8;
    if (size > d.size() - body) throw MalformedHeader("chunk extends past end of file");

    if (tag_is(d, pos, "fmt ")) {
      if (size < 16) throw MalformedHeader("fmt chunk shorter than 16 bytes");
      fmt = WavFormat{load_u16(d, body), load_u16(d, body + 2), load_u32(d, body + 4),
                      load_u16(d, body + 12), load_u16(d, body + 14)};
      if (fmt->format_code != kWavePcm) {
        throw UnsupportedFormat("WAV format code " + std::to_string(fmt->format_code) +
                                " is not PCM");
      }
      if (fmt->bits_per_sample != 16) {
        throw UnsupportedFormat(std::to_string(fmt->bits_per_sample) +
                                "-bit samples; only 16-bit PCM is supported");
      }
      if (fmt->channels == 0 || fmt->sample_rate == 0 ||
          fmt->block_align != 2 * fmt->channels) {
        throw MalformedHeader("inconsistent fmt chunk");
      }
    } else if (tag_is(d, pos, "data")) {
      if (!fmt) throw MalformedHeader("data chunk before fmt chunk");
      if (size % fmt->block_align != 0) throw MalformedHeader("data chunk ends mid-frame");

      PcmStream pcm;
      pcm.sample_rate = fmt->sample_rate;
      pcm.channels = 1;
      const std::size_t frames = size / fmt->block_align;
      pcm.samples.reserve(frames);
      for (std::size_t f = 0; f < frames; ++f) {
        std::int32_t sum = 0;
        for (std::uint16_t c = 0; c < fmt->channels; ++c) {
          sum += static_cast<std::int16_t>(load_u16(d, body + f * fmt->block_align + 2 * c));
        }
        // Integer division truncates toward zero.
        pcm.samples.push_back(static_cast<std::int16_t>(sum / fmt->channels));
      }
      return pcm;
    }
    pos = body + size + (size & 1);
  }
  throw MalformedHeader(fmt ? "no data chunk" : "no fmt chunk");
}

PcmStream read_wav(const std::filesystem::path& path) { return parse_wav(read_file(path)); }

std::vector<std::uint8_t> encode_wav(const PcmStream& pcm) {
  const std::uint16_t channels = pcm.channels == 0 ? 1 : pcm.channels;
  const std::uint64_t data_bytes = pcm.samples.size() * 2;
  if (data_bytes > std::numeric_limits<std::uint32_t>::max() - 36) {
    throw IoFailure("too many samples for a RIFF file");
  }
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  store_tag(out, "RIFF");
  store_u32(out, static_cast<std::uint32_t>(36 + data_bytes));
  store_tag(out, "WAVE");
  store_tag(out, "fmt ");
  store_u32(out, 16);
  store_u16(out, kWavePcm);
  store_u16(out, channels);
  store_u32(out, pcm.sample_rate);
  store_u32(out, pcm.sample_rate * channels * 2);
  store_u16(out, static_cast<std::uint16_t>(channels * 2));
  store_u16(out, 16);
  store_tag(out, "data");
  store_u32(out, static_cast<std::uint32_t>(data_bytes));
  for (std::int16_t s : pcm.samples) store_u16(out, static_cast<std::uint16_t>(s));
  return out;
}

void write_wav(const PcmStream& pcm, const std::filesystem::path& path) {
  write_file(encode_wav(pcm), path);
}

std::vector<std::uint8_t> encode_pwm(const PwmBitstream& stream) {
  stream.validate();
  if (stream.bit_count() > std::numeric_limits<std::uint32_t>::max()) {
    throw IoFailure("PWM1 payload limited to 2^32-1 bits");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kPwmHeaderBytes + stream.bytes().size());
  store_tag(out, "PWM1");
  store_u32(out, stream.clock_hz());
  store_u32(out, stream.frame_bits());
  store_u32(out, static_cast<std::uint32_t>(stream.bit_count()));
  out.insert(out.end(), stream.bytes().begin(), stream.bytes().end());
  return out;
}

PwmBitstream decode_pwm(std::span<const std::uint8_t> d) {
  if (d.size() < kPwmHeaderBytes) throw MalformedHeader("PWM1 header truncated");
  if (!tag_is(d, 0, "PWM1")) throw MalformedHeader("missing PWM1 magic");
  const std::uint32_t clock = load_u32(d, 4);
  const std::uint32_t frame_bits = load_u32(d, 8);
  const std::uint32_t bits = load_u32(d, 12);
  const std::size_t expected = (static_cast<std::size_t>(bits) + 7) / 8;
  const std::size_t present = d.size() - kPwmHeaderBytes;
  if (present != expected) {
    throw MalformedHeader("PWM1 declares " + std::to_string(bits) + " bits (" +
                          std::to_string(expected) + " bytes) but payload has " +
                          std::to_string(present) + " bytes");
  }
  try {
    return PwmBitstream::from_packed(
        clock, frame_bits, bits,
        std::vector<std::uint8_t>(d.begin() + kPwmHeaderBytes, d.end()));
  } catch (const MalformedStream& e) {
    throw MalformedHeader(std::string("PWM1 header: ") + e.what());
  }
}

void write_pwm(const PwmBitstream& stream, const std::filesystem::path& path) {
  write_file(encode_pwm(stream), path);
}

PwmBitstream read_pwm(const std::filesystem::path& path) { return decode_pwm(read_file(path)); }

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (in.bad()) throw IoFailure("read failed: " + path.string());
  return data;
}

void write_file(std::span<const std::uint8_t> data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw IoFailure("write failed: " + path.string());
}

}  // namespace classd
