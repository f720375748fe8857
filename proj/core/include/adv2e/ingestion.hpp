#pragma once

#include <filesystem>
#include <vector>

#include "adv2e/types.hpp"

namespace adv2e {

/// Timestamped frame sequence with constant geometry.
class FrameSource {
 public:
  /// Throws NonMonotonicTimestamps, GeometryMismatch, or IoError (< 2 frames).
  explicit FrameSource(std::vector<Frame> frames);

  const std::vector<Frame>& frames() const noexcept { return frames_; }
  const Frame& operator[](std::size_t i) const { return frames_[i]; }
  std::size_t size() const noexcept { return frames_.size(); }
  SensorSize sensor() const noexcept { return frames_.front().size(); }

  double start_time() const noexcept { return frames_.front().timestamp; }
  double end_time() const noexcept { return frames_.back().timestamp; }
  /// Mean spacing between adjacent frames (T_b).
  double base_interval() const noexcept;
  /// 1 / base_interval().
  double base_rate() const noexcept;

 private:
  std::vector<Frame> frames_;
};

/// Reads a manifest of `<relative-frame-path> <timestamp-seconds>` lines.
/// Paths resolve relative to the manifest's directory; `#` starts a comment.
FrameSource load_sequence(const std::filesystem::path& manifest_path);

/// Linear blend of I_n and I_(n+1) at l/L for l = 0..L-1, plus the last input
/// frame; yields (N-1)*L + 1 frames. Throws InvalidFactor when L < 1.
FrameSource interpolate_linear(const FrameSource& src, int factor);

}  // namespace adv2e
