#include "textfx/core/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace textfx::wav {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}
void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

WavFile decode(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    fail(ErrorCode::SchemaError, "not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_len = 0;
  bool have_fmt = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t len = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (len < 16 || avail < 16) fail(ErrorCode::SchemaError, "truncated fmt chunk");
      format = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      rate = read_u32(chunk + 12);
      bits = read_u16(chunk + 22);
      if (format == kFormatExtensible) {
        if (len < 40 || avail < 40) fail(ErrorCode::SchemaError, "truncated extensible fmt chunk");
        format = read_u16(chunk + 8 + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = std::min<std::size_t>(len, avail);
    }
    pos = body + len + (len & 1);
  }
  if (!have_fmt) fail(ErrorCode::SchemaError, "missing fmt chunk");
  if (!data) fail(ErrorCode::SchemaError, "missing data chunk");
  if (channels < 1 || channels > 2) fail(ErrorCode::SchemaError, "only mono and stereo are supported");

  SampleFormat fmt;
  if (format == kFormatPcm && bits == 16)
    fmt = SampleFormat::Pcm16;
  else if (format == kFormatFloat && bits == 32)
    fmt = SampleFormat::Float32;
  else
    fail(ErrorCode::SchemaError, "unsupported sample format (need PCM16 or float32)");

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frames = data_len / (bytes_per_sample * channels);
  std::vector<std::vector<float>> ch(channels, std::vector<float>(frames));
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      const std::uint8_t* p = data + (n * channels + c) * bytes_per_sample;
      if (fmt == SampleFormat::Pcm16) {
        const auto v = static_cast<std::int16_t>(read_u16(p));
        ch[c][n] = static_cast<float>(v) / 32768.0f;
      } else {
        ch[c][n] = std::bit_cast<float>(read_u32(p));
      }
    }
  }
  return WavFile{AudioBuffer(static_cast<int>(rate), std::move(ch)), fmt};
}

WavFile read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::FileNotFound, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode(bytes);
}

std::vector<std::uint8_t> encode(const AudioBuffer& audio, SampleFormat format) {
  const auto channels = static_cast<std::uint16_t>(audio.channels());
  const std::uint16_t bits = format == SampleFormat::Pcm16 ? 16 : 32;
  const std::uint32_t block = channels * (bits / 8);
  const auto data_len = static_cast<std::uint32_t>(audio.frames() * block);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_len);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_len);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, format == SampleFormat::Pcm16 ? kFormatPcm : kFormatFloat);
  put_u16(out, channels);
  put_u32(out, static_cast<std::uint32_t>(audio.sample_rate()));
  put_u32(out, static_cast<std::uint32_t>(audio.sample_rate()) * block);
  put_u16(out, static_cast<std::uint16_t>(block));
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, data_len);
  for (std::size_t n = 0; n < audio.frames(); ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      const float v = audio.channel(c)[n];
      if (format == SampleFormat::Pcm16) {
        // Same 1/32768 scale as decode, so PCM16 round-trips exactly.
        const double scaled = std::clamp(std::round(static_cast<double>(v) * 32768.0), -32768.0, 32767.0);
        put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
      } else {
        put_u32(out, std::bit_cast<std::uint32_t>(v));
      }
    }
  }
  return out;
}

void write(const std::filesystem::path& path, const AudioBuffer& audio, SampleFormat format) {
  const auto bytes = encode(audio, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace textfx::wav
