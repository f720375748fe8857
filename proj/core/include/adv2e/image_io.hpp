#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

#include "adv2e/types.hpp"

namespace adv2e {

/// Loads an 8-bit PNG (gray, gray+alpha, RGB, RGBA, palette) or a binary PGM
/// (P5, maxval 255) as a linear-intensity frame. Color input is reduced to
/// luma with BT.601 weights.
Frame read_image(const std::filesystem::path& path, double timestamp);

/// Writes intensities rounded and clamped to [0, 255].
void write_png_gray(const std::filesystem::path& path, const Frame& frame);
void write_pgm(const std::filesystem::path& path, const Frame& frame);

/// `rgb` holds width*height interleaved RGB triples.
void write_png_rgb(const std::filesystem::path& path, int width, int height,
                   std::span<const std::uint8_t> rgb);

/// BT.601 luma.
inline double luma(double r, double g, double b) noexcept {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

}  // namespace adv2e
