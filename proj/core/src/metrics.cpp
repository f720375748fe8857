#include "adv2e/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "adv2e/errors.hpp"

namespace adv2e {

VoxelGrid::VoxelGrid(int bins, SensorSize sensor, double t_start, double t_end)
    : bins_(bins), sensor_(sensor), t_start_(t_start), t_end_(t_end) {
  if (bins < 1) throw InvalidFactor("voxel grid needs at least one bin");
  if (!(t_end > t_start) || !std::isfinite(t_start) || !std::isfinite(t_end)) {
    throw InvalidWindow("voxel grid window must satisfy t_end > t_start");
  }
  values_.assign(static_cast<std::size_t>(bins) * sensor.pixel_count(), 0.0);
}

VoxelGrid build_voxel_grid(const EventStream& stream, int bins, double t_start, double t_end,
                           std::size_t* dropped) {
  VoxelGrid grid(bins, stream.sensor, t_start, t_end);
  const double scale = static_cast<double>(bins - 1) / (t_end - t_start);
  std::size_t skipped = 0;
  for (const Event& e : stream.events) {
    if (e.t < t_start || e.t > t_end || !stream.sensor.contains(e.x, e.y)) {
      ++skipped;
      continue;
    }
    const double tau = (e.t - t_start) * scale;
    int lower = static_cast<int>(std::floor(tau));
    double frac = tau - lower;
    if (lower >= bins - 1) {
      lower = bins - 1;
      frac = 0.0;
    }
    grid.at(lower, e.x, e.y) += e.p * (1.0 - frac);
    if (frac > 0.0) grid.at(lower + 1, e.x, e.y) += e.p * frac;
  }
  if (dropped) *dropped = skipped;
  return grid;
}

double voxel_distance(const VoxelGrid& a, const VoxelGrid& b) {
  if (a.bins() != b.bins() || a.sensor() != b.sensor() || a.t_start() != b.t_start() ||
      a.t_end() != b.t_end()) {
    throw DimensionMismatch("voxel grids differ in shape or window");
  }
  double sum = 0.0;
  const auto& va = a.values();
  const auto& vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double d = va[i] - vb[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

namespace {

Histogram interval_histogram(const EventStream& stream, const std::vector<const Event*>& kept) {
  Histogram h;
  if (kept.empty()) return h;
  h.edges = {0.0, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0};
  h.counts.assign(h.edges.size() - 1, 0);
  std::vector<double> last(stream.sensor.pixel_count(), -1.0);
  for (const Event* e : kept) {
    const std::size_t i = static_cast<std::size_t>(e->y) * static_cast<std::size_t>(stream.sensor.width) + e->x;
    if (last[i] >= 0.0) {
      const double gap = e->t - last[i];
      auto it = std::upper_bound(h.edges.begin(), h.edges.end(), gap);
      auto bin = static_cast<std::size_t>(std::distance(h.edges.begin(), it));
      bin = std::clamp<std::size_t>(bin, 1, h.counts.size()) - 1;
      ++h.counts[bin];
    }
    last[i] = e->t;
  }
  return h;
}

}  // namespace

StatsReport stream_stats(const EventStream& stream,
                         std::optional<std::pair<double, double>> window) {
  StatsReport r;
  r.sensor = stream.sensor;
  std::vector<const Event*> kept;
  kept.reserve(stream.events.size());
  for (const Event& e : stream.events) {
    const bool inside = !window || (e.t >= window->first && e.t <= window->second);
    if (inside && stream.sensor.contains(e.x, e.y)) {
      kept.push_back(&e);
    } else {
      ++r.dropped_outside_window;
    }
  }
  r.event_count = kept.size();
  std::vector<std::uint64_t> per_pixel(stream.sensor.pixel_count(), 0);
  for (const Event* e : kept) {
    (e->p > 0 ? r.positive_count : r.negative_count)++;
    ++per_pixel[static_cast<std::size_t>(e->y) * static_cast<std::size_t>(stream.sensor.width) + e->x];
  }
  if (!kept.empty()) {
    auto [lo, hi] = std::minmax_element(kept.begin(), kept.end(),
                                        [](const Event* a, const Event* b) { return a->t < b->t; });
    r.t_first = (*lo)->t;
    r.t_last = (*hi)->t;
  }
  r.duration = window ? window->second - window->first : r.t_last - r.t_first;
  if (r.duration > 0.0) {
    r.mean_rate = static_cast<double>(r.event_count) / r.duration;
    const auto busiest = per_pixel.empty() ? 0 : *std::max_element(per_pixel.begin(), per_pixel.end());
    r.max_pixel_rate = static_cast<double>(busiest) / r.duration;
  }
  r.inter_event_intervals = interval_histogram(stream, kept);
  return r;
}

nlohmann::json stats_to_json(const StatsReport& r) {
  return {
      {"width", r.sensor.width},
      {"height", r.sensor.height},
      {"event_count", r.event_count},
      {"positive_count", r.positive_count},
      {"negative_count", r.negative_count},
      {"dropped_outside_window", r.dropped_outside_window},
      {"t_first", r.t_first},
      {"t_last", r.t_last},
      {"duration", r.duration},
      {"mean_rate", r.mean_rate},
      {"max_pixel_rate", r.max_pixel_rate},
      {"inter_event_intervals",
       {{"edges", r.inter_event_intervals.edges}, {"counts", r.inter_event_intervals.counts}}},
  };
}

}  // namespace adv2e
