#include "adv2e/ingestion.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

#include "adv2e/errors.hpp"
#include "adv2e/image_io.hpp"
#include "adv2e/pixel_model.hpp"

namespace adv2e {

FrameSource::FrameSource(std::vector<Frame> frames) : frames_(std::move(frames)) {
  if (frames_.size() < 2) throw IoError("a frame sequence needs at least 2 frames");
  const SensorSize size = frames_.front().size();
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    const Frame& f = frames_[i];
    if (f.size() != size) {
      throw GeometryMismatch("frame " + std::to_string(i) + " is " + std::to_string(f.width) +
                             "x" + std::to_string(f.height) + ", expected " +
                             std::to_string(size.width) + "x" + std::to_string(size.height));
    }
    check_frame(f);
    if (!std::isfinite(f.timestamp) || f.timestamp < 0.0) {
      throw NonMonotonicTimestamps("frame " + std::to_string(i) + " has an invalid timestamp");
    }
    if (i > 0 && !(f.timestamp > frames_[i - 1].timestamp)) {
      throw NonMonotonicTimestamps("timestamp of frame " + std::to_string(i) +
                                   " does not increase");
    }
  }
}

double FrameSource::base_interval() const noexcept {
  return (end_time() - start_time()) / static_cast<double>(frames_.size() - 1);
}

double FrameSource::base_rate() const noexcept { return 1.0 / base_interval(); }

FrameSource load_sequence(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw MissingFile("cannot open manifest " + manifest_path.string());
  const auto base = manifest_path.parent_path();

  std::vector<Frame> frames;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);

    const auto split = line.find_last_of(" \t");
    if (split == std::string::npos) throw ParseError(line_no, "expected '<path> <timestamp>'");
    const std::string stamp = line.substr(split + 1);
    std::string rel = line.substr(0, split);
    rel.erase(rel.find_last_not_of(" \t") + 1);

    double t = 0.0;
    const auto [ptr, ec] = std::from_chars(stamp.data(), stamp.data() + stamp.size(), t);
    if (ec != std::errc{} || ptr != stamp.data() + stamp.size()) {
      throw ParseError(line_no, "bad timestamp '" + stamp + "'");
    }
    const std::filesystem::path frame_path = base / rel;
    if (!std::filesystem::exists(frame_path)) {
      throw MissingFile("frame file not found: " + frame_path.string());
    }
    frames.push_back(read_image(frame_path, t));
  }
  return FrameSource(std::move(frames));
}

FrameSource interpolate_linear(const FrameSource& src, int factor) {
  if (factor < 1) throw InvalidFactor("interpolation factor L must be >= 1");
  std::vector<Frame> out;
  out.reserve((src.size() - 1) * static_cast<std::size_t>(factor) + 1);
  for (std::size_t n = 0; n + 1 < src.size(); ++n) {
    const Frame& a = src[n];
    const Frame& b = src[n + 1];
    for (int l = 0; l < factor; ++l) {
      const double f = static_cast<double>(l) / factor;
      Frame frame(a.width, a.height, blend(a.timestamp, b.timestamp, f));
      for (std::size_t i = 0; i < frame.data.size(); ++i) {
        frame.data[i] = blend(a.data[i], b.data[i], f);
      }
      out.push_back(std::move(frame));
    }
  }
  out.push_back(src.frames().back());
  return FrameSource(std::move(out));
}

}  // namespace adv2e
