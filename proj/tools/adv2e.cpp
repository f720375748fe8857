// adv2e command-line tool: simulate, compare, render, stats.

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "adv2e/config.hpp"
#include "adv2e/errors.hpp"
#include "adv2e/event_io.hpp"
#include "adv2e/ingestion.hpp"
#include "adv2e/metrics.hpp"
#include "adv2e/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kConfigError = 1, kIoError = 2, kInternalError = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw adv2e::MissingFile("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw adv2e::InvariantViolation("sha256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::pair<double, double> parse_window(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("window must be t0,t1");
  try {
    std::size_t used0 = 0, used1 = 0;
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    const double t0 = std::stod(a, &used0);
    const double t1 = std::stod(b, &used1);
    if (used0 != a.size() || used1 != b.size()) throw UsageError("window must be t0,t1");
    return {t0, t1};
  } catch (const std::logic_error&) {
    throw UsageError("window must be t0,t1");
  }
}

// Writes through `<path>.partial` and renames on success, so a failed run never
// leaves a file under the final name.
template <typename Writer>
void write_atomically(const fs::path& path, Writer&& writer) {
  fs::path partial = path;
  partial += ".partial";
  try {
    writer(partial);
    fs::rename(partial, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(partial, ec);
    throw;
  }
}

void write_text_atomically(const fs::path& path, const std::string& text) {
  write_atomically(path, [&](const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out.flush()) throw adv2e::IoError("cannot write " + p.string());
  });
}

adv2e::SimConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  if (!fs::is_regular_file(path)) throw UsageError("config file not found: " + path);
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  // A run manifest carries its resolved config under "config".
  if (j.is_object() && j.contains("config") && j.contains("tool")) j = j["config"];
  return adv2e::config_from_json(j);
}

struct SimulateArgs {
  std::string input, config, output, format = "binary", mode;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

int cmd_simulate(const SimulateArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  adv2e::SimConfig raw = load_config(args.config);
  if (!args.mode.empty()) {
    auto mode = adv2e::parse_filter_mode(args.mode);
    if (!mode) throw UsageError("unknown mode " + args.mode);
    raw.filter_mode = *mode;
  }
  if (args.seed) raw.rng_seed = *args.seed;
  const auto format = args.format == "text" ? adv2e::EventFormat::kText : adv2e::EventFormat::kBinary;
  const auto cfg = adv2e::validate_config(raw);

  const auto source = adv2e::load_sequence(args.input);
  const auto result = adv2e::simulate_detailed(source, cfg, {.threads = args.threads});
  adv2e::check_stream(result.stream);
  if (result.max_alpha > adv2e::kAlphaWarnThreshold) {
    std::cerr << "warning: filter coefficient reached " << result.max_alpha
              << "; raise interp_factor or oversample_factor for accurate filtering\n";
  }

  const fs::path output = args.output;
  write_atomically(output, [&](const fs::path& p) { adv2e::write_events(result.stream, p, format); });

  fs::path manifest_path = output;
  manifest_path += ".manifest.json";
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest = {
      {"tool", "adv2e"},
      {"version", ADV2E_VERSION},
      {"config", adv2e::config_to_json(cfg.get())},
      {"seed", cfg->rng_seed},
      {"input", {{"path", args.input}, {"sha256", sha256_hex(read_file(args.input))}}},
      {"outputs", {{"events", output.string()}, {"format", args.format}, {"manifest", manifest_path.string()}}},
      {"event_count", result.stream.size()},
      {"max_alpha", result.max_alpha},
      {"wall_clock_seconds", elapsed},
  };
  write_text_atomically(manifest_path, manifest.dump(2) + "\n");
  std::cerr << result.stream.size() << " events -> " << output.string() << "\n";
  return kOk;
}

int cmd_compare(const std::string& a_path, const std::string& b_path, int bins,
                const std::string& window_text) {
  const auto [t0, t1] = parse_window(window_text);
  const auto a = adv2e::read_events(a_path);
  const auto b = adv2e::read_events(b_path);
  const auto ga = adv2e::build_voxel_grid(a, bins, t0, t1);
  const auto gb = adv2e::build_voxel_grid(b, bins, t0, t1);
  const json report = {
      {"voxel_distance", adv2e::voxel_distance(ga, gb)},
      {"bins", bins},
      {"window", {t0, t1}},
      {"a", adv2e::stats_to_json(adv2e::stream_stats(a, std::pair{t0, t1}))},
      {"b", adv2e::stats_to_json(adv2e::stream_stats(b, std::pair{t0, t1}))},
  };
  std::cout << report.dump(2) << "\n";
  return kOk;
}

int cmd_render(const std::string& input, const std::string& window_text, const std::string& output) {
  const auto [t0, t1] = parse_window(window_text);
  if (t1 <= t0) throw adv2e::InvalidWindow("window end must be after start");
  const auto stream = adv2e::read_events(input);
  write_atomically(output, [&](const fs::path& p) { adv2e::render_accumulation(stream, t0, t1, p); });
  return kOk;
}

int cmd_stats(const std::string& input) {
  std::cout << adv2e::stats_to_json(adv2e::stream_stats(adv2e::read_events(input))).dump(2) << "\n";
  return kOk;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const adv2e::InvalidConfig& e) {
    std::string joined;
    for (const auto& v : e.violations()) joined += (joined.empty() ? "" : "; ") + v;
    std::cerr << "error: invalid config: " << joined << "\n";
    return kConfigError;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const adv2e::InvalidWindow& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const adv2e::InvalidFactor& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const adv2e::DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const adv2e::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adv2e: frame sequences to DVS events"};
  app.set_version_flag("--version", ADV2E_VERSION);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "convert a frame manifest into events");
  simulate->add_option("--input", sim.input, "frame manifest")->required();
  simulate->add_option("--config", sim.config, "JSON config or run manifest");
  simulate->add_option("--output", sim.output, "event file")->required();
  simulate->add_option("--format", sim.format)->check(CLI::IsMember({"text", "binary"}));
  simulate->add_option("--mode", sim.mode)->check(CLI::IsMember({"none", "fixed", "adv2e"}));
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--threads", sim.threads, "worker threads, 0 = all cores");

  std::string a, b, window, input, output;
  int bins = adv2e::kDefaultVoxelBins;
  auto* compare = app.add_subcommand("compare", "voxel-grid distance between two event files");
  compare->add_option("--a", a)->required();
  compare->add_option("--b", b)->required();
  compare->add_option("--bins", bins);
  compare->add_option("--window", window, "t0,t1 in seconds")->required();

  auto* render = app.add_subcommand("render", "accumulate events into a PNG");
  render->add_option("--input", input)->required();
  render->add_option("--window", window, "t0,t1 in seconds")->required();
  render->add_option("--output", output)->required();

  auto* stats = app.add_subcommand("stats", "summary statistics of an event file");
  stats->add_option("--input", input)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  if (simulate->parsed()) return guarded([&] { return cmd_simulate(sim); });
  if (compare->parsed()) return guarded([&] { return cmd_compare(a, b, bins, window); });
  if (render->parsed()) return guarded([&] { return cmd_render(input, window, output); });
  return guarded([&] { return cmd_stats(input); });
}
