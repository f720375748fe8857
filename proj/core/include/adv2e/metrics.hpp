#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "adv2e/types.hpp"

namespace adv2e {

inline constexpr int kDefaultVoxelBins = 5;

/// Polarity-signed temporal-bin accumulator, laid out [bin][row][column].
class VoxelGrid {
 public:
  /// Throws InvalidWindow when t_end <= t_start and InvalidFactor when bins < 1.
  VoxelGrid(int bins, SensorSize sensor, double t_start, double t_end);

  int bins() const noexcept { return bins_; }
  SensorSize sensor() const noexcept { return sensor_; }
  double t_start() const noexcept { return t_start_; }
  double t_end() const noexcept { return t_end_; }

  double& at(int bin, int x, int y) { return values_[index(bin, x, y)]; }
  double at(int bin, int x, int y) const { return values_[index(bin, x, y)]; }
  std::vector<double>& values() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::size_t index(int bin, int x, int y) const noexcept {
    return (static_cast<std::size_t>(bin) * static_cast<std::size_t>(sensor_.height) +
            static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(sensor_.width) +
           static_cast<std::size_t>(x);
  }

  int bins_;
  SensorSize sensor_;
  double t_start_;
  double t_end_;
  std::vector<double> values_;
};

/// Each event in [t_start, t_end] adds its polarity to the two temporal bins
/// around tau = (t - t_start) / (t_end - t_start) * (B - 1), split linearly.
/// Events outside the window are skipped and counted in `dropped` when given.
VoxelGrid build_voxel_grid(const EventStream& stream, int bins, double t_start, double t_end,
                           std::size_t* dropped = nullptr);

/// Euclidean distance over all cells. Throws DimensionMismatch unless both
/// grids share bins, sensor and window.
double voxel_distance(const VoxelGrid& a, const VoxelGrid& b);

struct Histogram {
  std::vector<double> edges;          // size counts.size() + 1, seconds
  std::vector<std::uint64_t> counts;
};

struct StatsReport {
  SensorSize sensor;
  std::uint64_t event_count = 0;
  std::uint64_t positive_count = 0;
  std::uint64_t negative_count = 0;
  std::uint64_t dropped_outside_window = 0;
  double t_first = 0.0;
  double t_last = 0.0;
  double duration = 0.0;             // seconds the rates are normalized by
  double mean_rate = 0.0;            // events / s
  double max_pixel_rate = 0.0;       // events / s of the busiest pixel
  Histogram inter_event_intervals;   // per-pixel gaps, log-spaced bins
};

/// Summary statistics. With a window, events outside it are dropped (and
/// counted) and rates are normalized by the window length; otherwise by the
/// span between the first and last event.
StatsReport stream_stats(const EventStream& stream,
                         std::optional<std::pair<double, double>> window = std::nullopt);

nlohmann::json stats_to_json(const StatsReport& report);

}  // namespace adv2e
