#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "adv2e/types.hpp"

namespace adv2e {

// Text format: header `# adv2e-events v1 <width> <height>`, then one
// `t_us,x,y,p` line per event with p in {0, 1}.
void write_events_text(const EventStream& stream, const std::filesystem::path& path);
EventStream read_events_text(const std::filesystem::path& path);

// Binary format, little-endian. 16-byte header: magic "ADV2E\0", u16 version (1),
// u16 width, u16 height, u32 reserved (0). Then 13-byte records:
// u64 t_us, u16 x, u16 y, u8 p.
inline constexpr std::uint16_t kBinaryVersion = 1;
inline constexpr std::size_t kBinaryHeaderSize = 16;
inline constexpr std::size_t kBinaryRecordSize = 13;

void write_events_binary(const EventStream& stream, const std::filesystem::path& path);
EventStream read_events_binary(const std::filesystem::path& path);

enum class EventFormat { kText, kBinary };

/// Detects the format from the leading bytes.
EventFormat detect_event_format(const std::filesystem::path& path);
EventStream read_events(const std::filesystem::path& path);
void write_events(const EventStream& stream, const std::filesystem::path& path,
                  EventFormat format);

/// Signed per-pixel event counts over [t0, t1].
struct AccumulationImage {
  SensorSize sensor;
  std::vector<int> counts;  // row-major
};

inline constexpr int kRenderClip = 3;

AccumulationImage accumulate(const EventStream& stream, double t0, double t1);

/// Gray for zero, toward red for positive and blue for negative counts,
/// saturating at +-kRenderClip. Returns width*height RGB triples.
std::vector<std::uint8_t> render_rgb(const AccumulationImage& image);

/// Throws InvalidWindow when t1 <= t0.
void render_accumulation(const EventStream& stream, double t0, double t1,
                         const std::filesystem::path& path);

}  // namespace adv2e
