// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "adv2e/errors.hpp"
#include "adv2e/event_io.hpp"
#include "adv2e/image_io.hpp"
#include "adv2e/ingestion.hpp"
#include "adv2e/metrics.hpp"
#include "adv2e/pixel_model.hpp"
#include "adv2e/simulator.hpp"
#include "support/clips.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace adv2e;
using namespace adv2e::testing;

namespace {

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 8) failures_.push_back(what);
    failed_ = failed_ || !ok;
  }
  bool failed() const { return failed_; }
  const std::vector<std::string>& failures() const { return failures_; }
  void note(const std::string& s) { notes_.push_back(s); }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  bool failed_ = false;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<void(Check&)> body;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

SimConfig quiet(FilterMode mode = FilterMode::kAdv2e) {
  SimConfig c;
  c.filter_mode = mode;
  c.leak_rate = 0.0;
  c.shot_noise_rate = 0.0;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("adv2e_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<int> per_pixel_counts(const EventStream& s) {
  std::vector<int> c(s.sensor.pixel_count(), 0);
  for (const auto& e : s.events) ++c[static_cast<std::size_t>(e.y) * s.sensor.width + e.x];
  return c;
}

// 1 ---------------------------------------------------------------------------
void filter_oracle(Check& check) {
  for (double alpha : {0.01, 0.1, 0.5}) {
    // Bare update.
    double y = 0.0;
    double worst = 0.0;
    for (std::size_t n = 1; n <= 1000; ++n) {
      y = filter_step(y, 1.0, alpha);
      const double expected = step_response_closed_form(alpha, n);
      worst = std::max(worst, std::abs(y - expected) / expected);
    }
    check.expect(worst <= 1e-9, fmt("filter_step rel err %.3g", worst));

    // Through the pixel simulator: fixed cutoff, dt chosen to give alpha.
    SimConfig c = quiet(FilterMode::kFixed);
    const auto cfg = validate_config(c);
    const double dt = alpha / (2.0 * std::numbers::pi * c.cutoff_max);
    PixelSimulator px(cfg, 0, 0);
    px.initialize(0.0, kMaxIntensity, 0.0, dt);
    std::vector<Event> sink;
    worst = 0.0;
    for (std::size_t n = 1; n <= 1000; ++n) {
      px.step(n * dt, dt, kMaxIntensity, 1.0, sink);
      const double expected = step_response_closed_form(alpha, n);
      worst = std::max(worst, std::abs(px.state().filtered - expected) / expected);
    }
    check.expect(worst <= 1e-9, fmt("pixel simulator rel err %.3g", worst));
    check.note(fmt("alpha=%.2f ok", alpha));
  }
}

// 2 ---------------------------------------------------------------------------
void time_constant(Check& check) {
  SimConfig c = quiet(FilterMode::kAdv2e);
  const auto cfg = validate_config(c);
  const double fb = 24.0;
  const double dt = 1.0 / (fb * c.interp_factor * c.oversample_factor);
  const double omega = cutoff(kMaxIntensity, CutoffModel::from(c));
  PixelSimulator px(cfg, 0, 0);
  px.initialize(0.0, kMaxIntensity, 0.0, dt);
  const double final_value = filter_dc_gain(omega * dt);
  const double target = (1.0 - std::exp(-1.0)) * final_value;
  std::vector<Event> sink;
  double t63 = -1.0;
  for (int n = 1; n <= 100 && t63 < 0; ++n) {
    px.step(n * dt, dt, kMaxIntensity, 1.0, sink);
    if (px.state().filtered >= target) t63 = n * dt;
  }
  check.expect(t63 > 0 && std::abs(t63 - 1.0 / omega) <= dt,
               fmt("63.2%% reached at %.6g s", t63) + fmt(" vs 1/omega0 = %.6g s", 1.0 / omega));
  check.note(fmt("t63=%.3f ms", t63 * 1e3) + fmt(", 1/omega0=%.3f ms", 1e3 / omega));

  // Qualitative latency: the filtered first event trails the unfiltered one.
  const auto src = step_clip(1, 1, 12, fb, 25.0, kMaxIntensity, 2);
  const auto none = simulate(src, validate_config(quiet(FilterMode::kNone)));
  const auto adv = simulate(src, cfg);
  check.expect(!none.empty() && !adv.empty(), "step clip produced no events");
  if (!none.empty() && !adv.empty()) {
    const double lag = adv.events.front().t - none.events.front().t;
    check.expect(lag >= dt, fmt("first-event lag %.6g s below one step", lag));
    check.note(fmt("first-event lag %.3f ms", lag * 1e3));
  }
}

// 3 ---------------------------------------------------------------------------
void brightness_delay(Check& check) {
  SimConfig c = quiet(FilterMode::kAdv2e);
  c.log_eps = 1e-6;  // identical log steps at both levels
  const auto src = make_clip(2, 1, 8, 24.0, [](int x, int, double t) {
    const double background = x == 0 ? kMaxIntensity : kMaxIntensity / 10.0;
    return t < 1.5 / 24.0 ? background : background / 2.0;
  });
  const auto stream = simulate(src, validate_config(c));
  double first[2] = {-1.0, -1.0};
  for (const auto& e : stream.events) {
    if (first[e.x] < 0) first[e.x] = e.t;
  }
  check.expect(first[0] >= 0 && first[1] >= 0, "a pixel produced no events");
  check.expect(first[1] > first[0], fmt("dark first event %.6f", first[1]) +
                                        fmt(" not after bright %.6f", first[0]));
  check.note(fmt("bright %.3f ms", first[0] * 1e3) + fmt(", dark %.3f ms", first[1] * 1e3));
}

// 4 ---------------------------------------------------------------------------
void convergence_in_k(Check& check) {
  const auto src = quarter_wave_clip(64, 48, 240.0, 128.0, 60.0, 1.0);
  auto run = [&](int k) {
    SimConfig c = quiet(FilterMode::kAdv2e);
    c.oversample_factor = k;
    return simulate(src, validate_config(c));
  };
  const auto oracle = run(400);
  const auto oracle_grid = build_voxel_grid(oracle, 5, src.start_time(), src.end_time());
  const auto oracle_counts = per_pixel_counts(oracle);

  double previous = INFINITY;
  for (int k : {2, 5, 10, 40}) {
    const auto stream = run(k);
    const double d =
        voxel_distance(build_voxel_grid(stream, 5, src.start_time(), src.end_time()), oracle_grid);
    check.expect(d < previous, fmt("distance did not decrease at K=%g", k));
    previous = d;
    check.note(fmt("K=%g", k) + fmt(" d=%.2f", d));
    if (k == 10) {
      const auto counts = per_pixel_counts(stream);
      int worst = 0;
      for (std::size_t i = 0; i < counts.size(); ++i) {
        worst = std::max(worst, std::abs(counts[i] - oracle_counts[i]));
      }
      check.expect(worst <= 1, fmt("K=10 per-pixel count differs by %g", worst));
      check.note(fmt("K=10 max count diff %g", worst));
    }
  }
}

// 5 ---------------------------------------------------------------------------
void threshold_conservation(Check& check) {
  const auto src = random_walk_clip(64, 48, 30, 30.0, 2024);
  SimConfig c = quiet(FilterMode::kAdv2e);
  c.pos_threshold = 0.18;
  c.neg_threshold = 0.23;
  const auto r = simulate_detailed(src, validate_config(c), {.keep_states = true});
  std::vector<double> signed_sum(src.sensor().pixel_count(), 0.0);
  for (const auto& e : r.stream.events) {
    signed_sum[static_cast<std::size_t>(e.y) * 64 + e.x] += e.p > 0 ? c.pos_threshold : -c.neg_threshold;
  }
  const double bound = std::max(c.pos_threshold, c.neg_threshold);
  double worst = 0.0;
  for (std::size_t i = 0; i < signed_sum.size(); ++i) {
    const double net = r.final_states[i].filtered - r.initial_states[i].filtered;
    worst = std::max(worst, std::abs(signed_sum[i] - net));
  }
  check.expect(worst < bound, fmt("residual %.4f exceeds threshold", worst));
  check.note(fmt("%g events", static_cast<double>(r.stream.size())) + fmt(", max residual %.4f", worst));
}

// 6 ---------------------------------------------------------------------------
void mode_degeneracy(Check& check) {
  const auto dir = scratch_dir("degeneracy");
  const auto src = random_walk_clip(64, 48, 20, 30.0, 77);
  SimConfig c = quiet(FilterMode::kAdv2e);
  c.cutoff_floor_ratio = 1.0;
  write_events_binary(simulate(src, validate_config(c)), dir / "adv2e.bin");
  c.filter_mode = FilterMode::kFixed;
  write_events_binary(simulate(src, validate_config(c)), dir / "fixed.bin");
  const auto a = slurp(dir / "adv2e.bin");
  const auto b = slurp(dir / "fixed.bin");
  check.expect(a.size() > kBinaryHeaderSize, "no events produced");
  check.expect(a == b, "adv2e and fixed outputs differ");
  check.note(fmt("%g bytes identical", static_cast<double>(a.size())));
  fs::remove_all(dir);
}

// 7 ---------------------------------------------------------------------------
void noise_statistics(Check& check) {
  const auto src = constant_clip(64, 48, 101, 1.0, 128.0);  // 100 s
  SimConfig c = quiet(FilterMode::kNone);
  c.leak_rate = 0.1;
  c.oversample_factor = 1;  // static scene: over-sampling only adds steps
  double total = 0.0;
  bool only_positive = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    c.rng_seed = seed;
    const auto s = simulate(src, validate_config(c));
    for (const auto& e : s.events) only_positive = only_positive && e.p > 0;
    total += static_cast<double>(s.size());
  }
  const double mean = total / 10.0;
  const double expected = 0.1 * 100.0 * 64 * 48;
  check.expect(std::abs(mean - expected) <= 0.05 * expected,
               fmt("mean %.1f", mean) + fmt(" outside 5%% of %.0f", expected));
  check.expect(only_positive, "leak produced negative events");
  c.leak_rate = 0.0;
  check.expect(simulate(src, validate_config(c)).empty(), "events with noise disabled");
  check.note(fmt("mean positive count %.1f", mean) + fmt(" (target %.0f)", expected));
}

// 8 ---------------------------------------------------------------------------
void metric_properties(Check& check) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> value(0.0, 2.0);
  auto random_grid = [&]() {
    VoxelGrid g(5, {8, 6}, 0.0, 1.0);
    for (double& v : g.values()) v = value(rng);
    return g;
  };
  double worst_triangle = -INFINITY;
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_grid(), b = random_grid(), cgrid = random_grid();
    const double ab = voxel_distance(a, b), ba = voxel_distance(b, a);
    check.expect(ab == ba, "distance not symmetric");
    check.expect(ab >= 0.0, "negative distance");
    check.expect(voxel_distance(a, a) == 0.0, "non-zero self distance");
    const double slack = voxel_distance(a, cgrid) - (ab + voxel_distance(b, cgrid));
    worst_triangle = std::max(worst_triangle, slack);
    check.expect(slack <= 1e-12, "triangle inequality violated");
  }
  std::uniform_int_distribution<int> px(0, 7), py(0, 5), pol(0, 1), count(0, 400);
  std::uniform_real_distribution<double> t(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    for (bool mixed : {false, true}) {
      EventStream s{{8, 6}, {}};
      const int n = count(rng);
      double signed_total = 0.0;
      for (int i = 0; i < n; ++i) {
        const std::int8_t p = mixed ? (pol(rng) ? 1 : -1) : 1;
        s.events.push_back({static_cast<std::uint16_t>(px(rng)), static_cast<std::uint16_t>(py(rng)), t(rng), p});
        signed_total += p;
      }
      s.sort();
      const auto g = build_voxel_grid(s, 5, 0.0, 1.0);
      double abs_sum = 0.0, sum = 0.0;
      for (double v : g.values()) {
        abs_sum += std::abs(v);
        sum += v;
      }
      check.expect(std::abs(sum - signed_total) < 1e-9, "signed mass not conserved");
      if (!mixed) check.expect(std::abs(abs_sum - n) < 1e-9, "mass != event count");
    }
  }
  check.note(fmt("worst triangle slack %.3g", worst_triangle));
}

// 9 ---------------------------------------------------------------------------
void io_round_trip(Check& check) {
  const auto dir = scratch_dir("io");
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::int64_t> t(0, 3'600'000'000LL);
  std::uniform_int_distribution<int> x(0, 639), y(0, 479), p(0, 1);
  EventStream s{{640, 480}, {}};
  for (int i = 0; i < 100000; ++i) {
    s.events.push_back({static_cast<std::uint16_t>(x(rng)), static_cast<std::uint16_t>(y(rng)),
                        from_microseconds(t(rng)), static_cast<std::int8_t>(p(rng) ? 1 : -1)});
  }
  s.sort();
  write_events_text(s, dir / "e.txt");
  write_events_binary(s, dir / "e.bin");
  check.expect(read_events_text(dir / "e.txt") == s, "text round trip differs");
  check.expect(read_events_binary(dir / "e.bin") == s, "binary round trip differs");

  auto raises = [&](auto&& fn, auto tag) {
    try {
      fn();
    } catch (const decltype(tag)&) {
      return true;
    } catch (...) {
    }
    return false;
  };
  std::string bytes = slurp(dir / "e.bin");
  {
    std::string bad = bytes;
    bad[1] = 'Z';
    std::ofstream(dir / "magic.bin", std::ios::binary) << bad;
    check.expect(raises([&] { read_events_binary(dir / "magic.bin"); }, BadMagic("")),
                 "wrong magic not reported");
  }
  std::ofstream(dir / "cut.bin", std::ios::binary) << bytes.substr(0, bytes.size() - 7);
  check.expect(raises([&] { read_events_binary(dir / "cut.bin"); }, TruncatedFile("")),
               "truncation not reported");
  std::ofstream(dir / "bad.txt") << "# adv2e-events v1 640 480\nabc,3,7,1\n";
  bool line_ok = false;
  try {
    read_events_text(dir / "bad.txt");
  } catch (const ParseError& e) {
    line_ok = e.line() == 2;
  }
  check.expect(line_ok, "malformed text line not reported at line 2");
  fs::remove_all(dir);
}

// 10 --------------------------------------------------------------------------
void end_to_end_determinism(Check& check) {
  const auto dir = scratch_dir("determinism");
  const auto clip = random_walk_clip(64, 48, 12, 30.0, 10);
  {
    std::ofstream manifest(dir / "frames.txt");
    manifest << "# synthetic random walk\n";
    for (std::size_t n = 0; n < clip.size(); ++n) {
      const std::string name = "f" + std::to_string(n) + ".png";
      write_png_gray(dir / name, clip[n]);
      char stamp[64];
      std::snprintf(stamp, sizeof stamp, "%.17g", clip[n].timestamp);
      manifest << name << ' ' << stamp << '\n';
    }
  }
  SimConfig c;
  c.shot_noise_rate = 2.0;
  c.leak_rate = 0.5;
  c.rng_seed = 1234;
  const auto cfg = validate_config(c);
  std::string reference_bin, reference_txt;
  for (unsigned threads : {1u, 2u, 8u}) {
    const auto src = load_sequence(dir / "frames.txt");
    const auto stream = simulate(src, cfg, {.threads = threads});
    const auto bin = dir / ("t" + std::to_string(threads) + ".bin");
    const auto txt = dir / ("t" + std::to_string(threads) + ".txt");
    write_events_binary(stream, bin);
    write_events_text(stream, txt);
    if (threads == 1) {
      reference_bin = slurp(bin);
      reference_txt = slurp(txt);
      check.expect(stream.size() > 0, "no events");
      check.note(fmt("%g events", static_cast<double>(stream.size())));
    } else {
      check.expect(slurp(bin) == reference_bin, "binary differs at " + std::to_string(threads) + " threads");
      check.expect(slurp(txt) == reference_txt, "text differs at " + std::to_string(threads) + " threads");
    }
  }
  fs::remove_all(dir);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "filter oracle (closed-form step response, rel err <= 1e-9)", 1.0, filter_oracle},
      {2, "time constant (63.2% at 1/omega0 +- one step; filtered first event lags)", 1.0, time_constant},
      {3, "brightness-dependent delay (dark pixel fires later)", 1.0, brightness_delay},
      {4, "convergence in K (K=10 vs K=400 counts <= 1; distance decreasing)", 30.0, convergence_in_k},
      {5, "threshold conservation (residual < max threshold)", 10.0, threshold_conservation},
      {6, "mode degeneracy (floor ratio 1: adv2e == fixed bytes)", 5.0, mode_degeneracy},
      {7, "noise statistics (leak count within 5% of 30720)", 10.0, noise_statistics},
      {8, "metric properties (symmetry, identity, triangle, mass)", 5.0, metric_properties},
      {9, "I/O round trip (1e5 events, text + binary, corrupt files)", 5.0, io_round_trip},
      {10, "end-to-end determinism (1, 2, 8 threads byte-identical)", 30.0, end_to_end_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Check check;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (elapsed >= c.budget_s) {
      check.expect(false, fmt("runtime %.2f s", elapsed) + fmt(" exceeds %.0f s budget", c.budget_s));
    }
    std::string detail;
    for (const auto& n : check.notes()) detail += (detail.empty() ? "" : "; ") + n;
    std::printf("[%s] AC%-2d %s  (%.2f s)%s%s\n", check.failed() ? "FAIL" : "PASS", c.id, c.name,
                elapsed, detail.empty() ? "" : "  ", detail.c_str());
    for (const auto& f : check.failures()) std::printf("       - %s\n", f.c_str());
    failed += check.failed() ? 1 : 0;
    std::fflush(stdout);
  }
  std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
