#include "pcgseg/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace pcgseg {

namespace {

template <typename T>
T read_le(std::istream& in, const char* what) {
  std::uint8_t buf[sizeof(T)];
  in.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!in) raise(ErrorCode::BadFormat, std::string("truncated ") + what);
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

template <typename T>
void write_le(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

}  // namespace

AudioSegment read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::NotFound, path);

  char riff[4], wave[4];
  in.read(riff, 4);
  if (!in || std::memcmp(riff, "RIFF", 4) != 0) {
    raise(ErrorCode::BadFormat, "missing RIFF header");
  }
  read_le<std::uint32_t>(in, "RIFF size");
  in.read(wave, 4);
  if (!in || std::memcmp(wave, "WAVE", 4) != 0) {
    raise(ErrorCode::BadFormat, "missing WAVE tag");
  }

  bool have_fmt = false;
  std::uint16_t channels = 0, bits = 0, format = 0;
  std::uint32_t rate = 0;
  std::vector<std::int16_t> pcm;
  bool have_data = false;

  while (in.peek() != EOF) {
    char id[4];
    in.read(id, 4);
    if (!in) break;
    const auto size = read_le<std::uint32_t>(in, "chunk size");
    if (std::memcmp(id, "fmt ", 4) == 0) {
      format = read_le<std::uint16_t>(in, "format");
      channels = read_le<std::uint16_t>(in, "channels");
      rate = read_le<std::uint32_t>(in, "sample rate");
      read_le<std::uint32_t>(in, "byte rate");
      read_le<std::uint16_t>(in, "block align");
      bits = read_le<std::uint16_t>(in, "bits per sample");
      if (size > 16) in.seekg(size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      pcm.resize(size / 2);
      in.read(reinterpret_cast<char*>(pcm.data()),
              static_cast<std::streamsize>(pcm.size() * 2));
      if (!in) raise(ErrorCode::BadFormat, "truncated data chunk");
      have_data = true;
      if (size % 2 == 1) in.seekg(1, std::ios::cur);
    } else {
      in.seekg(size + (size % 2), std::ios::cur);
    }
  }

  if (!have_fmt) raise(ErrorCode::BadFormat, "missing fmt chunk");
  if (!have_data) raise(ErrorCode::BadFormat, "missing data chunk");
  if (format != 1) raise(ErrorCode::BadFormat, "format: expected PCM (1)");
  if (channels != 1) {
    raise(ErrorCode::BadFormat,
          "channels: expected mono, got " + std::to_string(channels));
  }
  if (bits != 16) {
    raise(ErrorCode::BadFormat,
          "bits_per_sample: expected 16, got " + std::to_string(bits));
  }
  if (rate != kCanonicalSampleRate) {
    raise(ErrorCode::BadFormat,
          "sample_rate: expected 500, got " + std::to_string(rate));
  }

  AudioSegment audio;
  audio.sample_rate_hz = static_cast<int>(rate);
  audio.samples.reserve(pcm.size());
  for (std::int16_t s : pcm) audio.samples.push_back(s / 32768.0);
  return audio;
}

void write_wav(const std::string& path, const AudioSegment& audio) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::NotFound, "cannot open " + path + " for writing");

  const std::uint32_t data_size =
      static_cast<std::uint32_t>(audio.samples.size() * 2);
  out.write("RIFF", 4);
  write_le<std::uint32_t>(out, 36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_le<std::uint32_t>(out, 16);
  write_le<std::uint16_t>(out, 1);  // PCM
  write_le<std::uint16_t>(out, 1);  // mono
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(audio.sample_rate_hz));
  write_le<std::uint32_t>(out,
                          static_cast<std::uint32_t>(audio.sample_rate_hz * 2));
  write_le<std::uint16_t>(out, 2);
  write_le<std::uint16_t>(out, 16);
  out.write("data", 4);
  write_le<std::uint32_t>(out, data_size);
  for (double s : audio.samples) {
    const double clipped = std::clamp(s, -1.0, 32767.0 / 32768.0);
    write_le<std::int16_t>(
        out, static_cast<std::int16_t>(std::lround(clipped * 32768.0)));
  }
}

}  // namespace pcgseg
