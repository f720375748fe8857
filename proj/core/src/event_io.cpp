#include "adv2e/event_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>

#include "adv2e/errors.hpp"
#include "adv2e/image_io.hpp"

namespace adv2e {
namespace {

constexpr std::string_view kTextTag = "# adv2e-events v1";
constexpr std::array<char, 6> kMagic = {'A', 'D', 'V', '2', 'E', '\0'};

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::vector<char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void check_sensor_fits(const EventStream& stream) {
  if (stream.sensor.width <= 0 || stream.sensor.height <= 0 || stream.sensor.width > 65535 ||
      stream.sensor.height > 65535) {
    throw BoundsError("sensor size must be within 1..65535");
  }
}

template <class T>
bool parse_int(std::string_view field, T& out) {
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc{} && ptr == field.data() + field.size();
}

void finish_stream(EventStream& stream) {
  if (!stream.is_sorted()) stream.sort();
}

template <class T>
void put_le(std::string& buf, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF));
  }
}

template <class T>
T get_le(const char* p) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  }
  return static_cast<T>(v);
}

}  // namespace

void write_events_text(const EventStream& stream, const std::filesystem::path& path) {
  check_sensor_fits(stream);
  std::string buf;
  buf.reserve(32 + stream.events.size() * 20);
  buf.append(kTextTag);
  buf += ' ' + std::to_string(stream.sensor.width) + ' ' + std::to_string(stream.sensor.height) +
         '\n';
  char line[64];
  for (const Event& e : stream.events) {
    const int n = std::snprintf(line, sizeof line, "%lld,%u,%u,%d\n",
                                static_cast<long long>(to_microseconds(e.t)),
                                static_cast<unsigned>(e.x), static_cast<unsigned>(e.y),
                                e.p > 0 ? 1 : 0);
    buf.append(line, static_cast<std::size_t>(n));
  }
  auto out = open_out(path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

EventStream read_events_text(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  const std::string_view text(bytes.data(), bytes.size());

  EventStream stream;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header = false;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!header) {
      if (line.substr(0, kTextTag.size()) != kTextTag) {
        throw ParseError(line_no, "missing '# adv2e-events v1' header");
      }
      std::string_view dims = line.substr(kTextTag.size());
      const auto w0 = dims.find_first_not_of(' ');
      const auto sp = dims.find(' ', w0);
      if (w0 == std::string_view::npos || sp == std::string_view::npos ||
          !parse_int(dims.substr(w0, sp - w0), stream.sensor.width) ||
          !parse_int(dims.substr(sp + 1), stream.sensor.height) || stream.sensor.width <= 0 ||
          stream.sensor.height <= 0) {
        throw ParseError(line_no, "bad sensor size in header");
      }
      header = true;
      continue;
    }
    if (line.empty()) continue;

    std::array<std::string_view, 4> fields;
    std::size_t start = 0;
    for (std::size_t f = 0; f < 4; ++f) {
      const auto comma = line.find(',', start);
      if ((f < 3) == (comma == std::string_view::npos)) {
        throw ParseError(line_no, "expected 't_us,x,y,p'");
      }
      fields[f] = line.substr(start, f < 3 ? comma - start : std::string_view::npos);
      start = comma + 1;
    }
    std::int64_t t_us = 0;
    long x = 0, y = 0;
    int p = 0;
    if (!parse_int(fields[0], t_us) || !parse_int(fields[1], x) || !parse_int(fields[2], y) ||
        !parse_int(fields[3], p) || t_us < 0 || (p != 0 && p != 1)) {
      throw ParseError(line_no, "malformed event '" + std::string(line) + "'");
    }
    if (!stream.sensor.contains(static_cast<int>(std::clamp(x, -1L, 65536L)),
                                static_cast<int>(std::clamp(y, -1L, 65536L)))) {
      throw BoundsError("line " + std::to_string(line_no) + ": event outside sensor");
    }
    stream.events.push_back(Event{static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                                  from_microseconds(t_us), static_cast<std::int8_t>(p ? 1 : -1)});
  }
  if (!header) throw ParseError(1, "empty file");
  finish_stream(stream);
  return stream;
}

void write_events_binary(const EventStream& stream, const std::filesystem::path& path) {
  check_sensor_fits(stream);
  std::string buf;
  buf.reserve(kBinaryHeaderSize + stream.events.size() * kBinaryRecordSize);
  buf.append(kMagic.data(), kMagic.size());
  put_le<std::uint16_t>(buf, kBinaryVersion);
  put_le<std::uint16_t>(buf, static_cast<std::uint16_t>(stream.sensor.width));
  put_le<std::uint16_t>(buf, static_cast<std::uint16_t>(stream.sensor.height));
  put_le<std::uint32_t>(buf, 0);
  for (const Event& e : stream.events) {
    put_le<std::uint64_t>(buf, static_cast<std::uint64_t>(to_microseconds(e.t)));
    put_le<std::uint16_t>(buf, e.x);
    put_le<std::uint16_t>(buf, e.y);
    put_le<std::uint8_t>(buf, e.p > 0 ? 1 : 0);
  }
  auto out = open_out(path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

EventStream read_events_binary(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  const std::size_t prefix = std::min(bytes.size(), kMagic.size());
  if (std::memcmp(bytes.data(), kMagic.data(), prefix) != 0) {
    throw BadMagic("not an adv2e binary event file: " + path.string());
  }
  if (bytes.size() < kBinaryHeaderSize) throw TruncatedFile("header cut short: " + path.string());
  const char* p = bytes.data();
  const auto version = get_le<std::uint16_t>(p + 6);
  if (version != kBinaryVersion) {
    throw BadMagic("unsupported binary version " + std::to_string(version));
  }
  EventStream stream;
  stream.sensor = {get_le<std::uint16_t>(p + 8), get_le<std::uint16_t>(p + 10)};
  const std::size_t body = bytes.size() - kBinaryHeaderSize;
  if (body % kBinaryRecordSize != 0) {
    throw TruncatedFile("file ends mid-record: " + path.string());
  }
  stream.events.reserve(body / kBinaryRecordSize);
  for (std::size_t off = kBinaryHeaderSize; off < bytes.size(); off += kBinaryRecordSize) {
    const auto t_us = get_le<std::uint64_t>(p + off);
    const auto x = get_le<std::uint16_t>(p + off + 8);
    const auto y = get_le<std::uint16_t>(p + off + 10);
    const auto pol = get_le<std::uint8_t>(p + off + 12);
    const std::size_t record = (off - kBinaryHeaderSize) / kBinaryRecordSize;
    if (pol > 1 || t_us > static_cast<std::uint64_t>(INT64_MAX)) {
      throw ParseError(record, "bad event record");
    }
    if (!stream.sensor.contains(x, y)) {
      throw BoundsError("record " + std::to_string(record) + ": event outside sensor");
    }
    stream.events.push_back(Event{x, y, from_microseconds(static_cast<std::int64_t>(t_us)),
                                  static_cast<std::int8_t>(pol ? 1 : -1)});
  }
  finish_stream(stream);
  return stream;
}

EventFormat detect_event_format(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile("cannot open " + path.string());
  std::array<char, 6> head{};
  in.read(head.data(), head.size());
  const auto got = static_cast<std::size_t>(in.gcount());
  if (got >= 1 && head[0] == '#') return EventFormat::kText;
  if (got > 0 && std::memcmp(head.data(), kMagic.data(), got) == 0) return EventFormat::kBinary;
  throw BadMagic("unrecognized event file: " + path.string());
}

EventStream read_events(const std::filesystem::path& path) {
  return detect_event_format(path) == EventFormat::kText ? read_events_text(path)
                                                         : read_events_binary(path);
}

void write_events(const EventStream& stream, const std::filesystem::path& path,
                  EventFormat format) {
  if (format == EventFormat::kText) {
    write_events_text(stream, path);
  } else {
    write_events_binary(stream, path);
  }
}

AccumulationImage accumulate(const EventStream& stream, double t0, double t1) {
  if (!(t1 > t0)) throw InvalidWindow("render window must satisfy t1 > t0");
  AccumulationImage img{stream.sensor, std::vector<int>(stream.sensor.pixel_count(), 0)};
  for (const Event& e : stream.events) {
    if (e.t < t0 || e.t > t1 || !stream.sensor.contains(e.x, e.y)) continue;
    img.counts[static_cast<std::size_t>(e.y) * static_cast<std::size_t>(stream.sensor.width) + e.x] += e.p;
  }
  return img;
}

std::vector<std::uint8_t> render_rgb(const AccumulationImage& image) {
  std::vector<std::uint8_t> rgb(image.counts.size() * 3);
  for (std::size_t i = 0; i < image.counts.size(); ++i) {
    const int c = std::clamp(image.counts[i], -kRenderClip, kRenderClip);
    const double s = static_cast<double>(std::abs(c)) / kRenderClip;
    const auto strong = static_cast<std::uint8_t>(std::lround(128.0 + 127.0 * s));
    const auto weak = static_cast<std::uint8_t>(std::lround(128.0 * (1.0 - s)));
    std::uint8_t r = 128, g = 128, b = 128;
    if (c > 0) {
      r = strong;
      g = b = weak;
    } else if (c < 0) {
      b = strong;
      r = g = weak;
    }
    rgb[3 * i] = r;
    rgb[3 * i + 1] = g;
    rgb[3 * i + 2] = b;
  }
  return rgb;
}

void render_accumulation(const EventStream& stream, double t0, double t1,
                         const std::filesystem::path& path) {
  const auto rgb = render_rgb(accumulate(stream, t0, t1));
  write_png_rgb(path, stream.sensor.width, stream.sensor.height, rgb);
}

}  // namespace adv2e
