#include "adv2e/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "adv2e/errors.hpp"

namespace adv2e {
namespace {

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint8_t to_byte(double v) noexcept {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

Frame decode_png(const std::vector<unsigned char>& bytes, const std::filesystem::path& path,
                 double timestamp) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw IoError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  Frame frame(static_cast<int>(image.width), static_cast<int>(image.height), timestamp);
  if (color) {
    for (std::size_t i = 0; i < frame.data.size(); ++i) {
      frame.data[i] = luma(buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2]);
    }
  } else {
    std::copy(buffer.begin(), buffer.end(), frame.data.begin());
  }
  return frame;
}

Frame decode_pgm(const std::vector<unsigned char>& bytes, const std::filesystem::path& path,
                 double timestamp) {
  std::size_t pos = 2;
  auto fail = [&](const std::string& why) -> IoError {
    return IoError("bad PGM " + path.string() + ": " + why);
  };
  auto next_int = [&]() {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    long v = 0;
    bool any = false;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos++] - '0');
      any = true;
      if (v > 1'000'000) throw fail("header value too large");
    }
    if (!any) throw fail("malformed header");
    return v;
  };
  const long width = next_int();
  const long height = next_int();
  const long maxval = next_int();
  if (maxval != 255) throw fail("only maxval 255 is supported");
  if (width <= 0 || height <= 0) throw fail("empty image");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw fail("malformed header");
  ++pos;
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - pos < n) throw fail("truncated pixel data");
  Frame frame(static_cast<int>(width), static_cast<int>(height), timestamp);
  std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
            bytes.begin() + static_cast<std::ptrdiff_t>(pos + n), frame.data.begin());
  return frame;
}

}  // namespace

Frame read_image(const std::filesystem::path& path, double timestamp) {
  const auto bytes = read_bytes(path);
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) {
    return decode_png(bytes, path, timestamp);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
    return decode_pgm(bytes, path, timestamp);
  }
  throw IoError("unsupported image format: " + path.string());
}

void write_png_gray(const std::filesystem::path& path, const Frame& frame) {
  std::vector<png_byte> buffer(frame.data.size());
  std::transform(frame.data.begin(), frame.data.end(), buffer.begin(), to_byte);
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(frame.width);
  image.height = static_cast<png_uint_32>(frame.height);
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    throw IoError("cannot write PNG " + path.string() + ": " + image.message);
  }
}

void write_png_rgb(const std::filesystem::path& path, int width, int height,
                   std::span<const std::uint8_t> rgb) {
  if (rgb.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3) {
    throw DimensionMismatch("RGB buffer size does not match image geometry");
  }
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, rgb.data(), 0, nullptr)) {
    throw IoError("cannot write PNG " + path.string() + ": " + image.message);
  }
}

void write_pgm(const std::filesystem::path& path, const Frame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << frame.width << ' ' << frame.height << "\n255\n";
  for (double v : frame.data) out.put(static_cast<char>(to_byte(v)));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace adv2e
