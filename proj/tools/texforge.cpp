// texture-forge command line: GLCM computation, synthetic images, Haralick
// features and the scheme benchmark harness.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "texforge/texforge.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitCompute = 3;

struct ComputeArgs {
  std::string input;
  std::string output;
  int levels = 8;
  int distance = 1;
  int angle_deg = 0;
  std::string scheme = "serial";
  unsigned copies = 0;      // 0: plan-chosen
  std::size_t chunks = 0;   // 0: auto
  bool symmetric = false;
  bool normalize_out = false;
};

struct SynthArgs {
  std::string kind = "noise";
  std::string size = "256x256";
  std::uint32_t seed = 1;
  std::string output;
};

struct FeatureArgs {
  std::string input;
  int levels = 8;
  int distance = 1;
  int angle_deg = 0;
  std::string scheme = "serial";
  bool symmetric = false;
};

struct BenchArgs {
  std::vector<std::size_t> sizes{1024};
  std::vector<int> levels{8, 32};
  std::vector<std::string> images{"smooth", "noise"};
  std::vector<std::string> schemes{"serial", "shared", "privatized", "pipelined"};
  int repeats = 20;
  int distance = 1;
  int angle_deg = 0;
  std::size_t chunks = 8;
  std::uint32_t seed = 1;
  std::string ingest = "none";
  std::string output = "report.csv";
};

std::size_t auto_chunk_count(std::size_t height, int distance) {
  const std::size_t cap = height / (static_cast<std::size_t>(distance) + 1);
  const std::size_t k = cap < 8 ? cap : 8;
  return k < 1 ? 1 : k;
}

bool parse_size_spec(const std::string& spec, std::size_t& w, std::size_t& h) {
  const auto x = spec.find('x');
  if (x == std::string::npos || x == 0 || x + 1 >= spec.size()) return false;
  try {
    w = std::stoull(spec.substr(0, x));
    h = std::stoull(spec.substr(x + 1));
  } catch (...) {
    return false;
  }
  return w >= 2 && h >= 2;
}

ordered_json contention_json(const texforge::ContentionStats& s) {
  ordered_json j;
  j["total_votes"] = s.total_votes;
  j["hottest_cell_votes"] = s.hottest_cell_votes;
  j["hottest_cell"] = {s.hottest_cell_index.first, s.hottest_cell_index.second};
  j["concentration"] = s.concentration;
  if (!s.per_copy_hottest.empty()) j["per_copy_hottest"] = s.per_copy_hottest;
  return j;
}

struct GlcmRun {
  texforge::Glcm glcm;
  std::optional<texforge::ContentionStats> contention;
};

GlcmRun run_scheme(const std::string& scheme, const std::string& input_path,
                   const texforge::GlcmParams& params, unsigned copies, std::size_t chunks) {
  const unsigned workers = texforge::detect_worker_count();
  texforge::ExecutionPlan plan = texforge::plan(params.levels, texforge::kDefaultScratchBudget, workers);
  if (copies > 0) plan.copies = copies;

  if (scheme == "pipelined") {
    texforge::PgmChunkSource source(input_path, params.levels);
    const std::size_t k = chunks ? chunks : auto_chunk_count(source.height(), params.distance);
    return {texforge::compute_glcm_chunked(source, params, plan, k), std::nullopt};
  }

  const texforge::QuantizedImage img =
      texforge::quantize(texforge::load_pgm_file(input_path), params.levels);
  if (scheme == "serial") return {texforge::compute_glcm_serial(img, params), std::nullopt};
  if (scheme == "shared") {
    auto [g, stats] = texforge::compute_glcm_shared(img, params, plan);
    return {std::move(g), std::move(stats)};
  }
  auto [g, stats] = texforge::compute_glcm_privatized(img, params, plan);
  return {std::move(g), std::move(stats)};
}

texforge::PgmHeader read_header(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw texforge::PgmError("pgm: cannot open " + path);
  std::vector<std::uint8_t> head(4096);
  in.read(reinterpret_cast<char*>(head.data()), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in.gcount()));
  return texforge::parse_pgm_header(head);
}

int cmd_compute(const ComputeArgs& a) {
  const texforge::GlcmParams params{a.distance, texforge::angle_from_degrees(a.angle_deg), a.levels};
  const texforge::PgmHeader header = read_header(a.input);
  GlcmRun run = run_scheme(a.scheme, a.input, params, a.copies, a.chunks);

  std::ofstream out(a.output, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot create " << a.output << "\n";
    return kExitInput;
  }
  texforge::Glcm final = a.symmetric ? texforge::symmetrize(run.glcm) : run.glcm;
  if (a.normalize_out)
    texforge::write_probabilities_csv(texforge::normalize(final), out);
  else
    texforge::write_glcm_csv(final, out);

  ordered_json j;
  j["scheme"] = a.scheme;
  j["levels"] = a.levels;
  j["distance"] = a.distance;
  j["angle"] = a.angle_deg;
  j["total_votes"] = run.glcm.total();
  j["valid_pair_count"] = texforge::valid_pair_count(header.width, header.height, params);
  j["symmetric"] = a.symmetric;
  if (run.contention) j["contention"] = contention_json(*run.contention);
  std::cout << j.dump() << "\n";
  return kExitOk;
}

int cmd_synth(const SynthArgs& a) {
  std::size_t w = 0, h = 0;
  if (!parse_size_spec(a.size, w, h)) {
    std::cerr << "error: --size must look like 512x512 (both dims >= 2)\n";
    return kExitUsage;
  }
  const texforge::GrayImage img = a.kind == "smooth" ? texforge::synth_smooth(w, h, a.seed)
                                                     : texforge::synth_noise(w, h, a.seed);
  texforge::write_pgm_file(img, a.output);
  return kExitOk;
}

int cmd_features(const FeatureArgs& a) {
  const texforge::GlcmParams params{a.distance, texforge::angle_from_degrees(a.angle_deg), a.levels};
  GlcmRun run = run_scheme(a.scheme, a.input, params, 0, 0);
  texforge::Glcm final = a.symmetric ? texforge::symmetrize(run.glcm) : run.glcm;
  const texforge::FeatureVector f = texforge::extract_features(texforge::normalize(final));
  ordered_json j;
  j["energy"] = f.energy;
  j["contrast"] = f.contrast;
  j["homogeneity"] = f.homogeneity;
  j["entropy"] = f.entropy;
  j["correlation"] = f.correlation;
  std::cout << j.dump() << "\n";
  return kExitOk;
}

int cmd_bench(const BenchArgs& a) {
  const unsigned workers = texforge::detect_worker_count();
  std::vector<texforge::BenchRow> rows;

  for (std::size_t size : a.sizes) {
    for (const std::string& kind : a.images) {
      const texforge::GrayImage gray = kind == "smooth" ? texforge::synth_smooth(size, size, a.seed)
                                                        : texforge::synth_noise(size, size, a.seed);
      for (int levels : a.levels) {
        const texforge::QuantizedImage img = texforge::quantize(gray, levels);
        const texforge::GlcmParams params{a.distance, texforge::angle_from_degrees(a.angle_deg),
                                          levels};
        texforge::ExecutionPlan plan =
            texforge::plan(levels, texforge::kDefaultScratchBudget, workers);
        const std::size_t chunks =
            a.chunks ? a.chunks : auto_chunk_count(img.height, a.distance);

        // Synthetic transfer cost: calibrated against this configuration's
        // own parallel compute time so ingest ~= compute (or 2x).
        double ns_per_byte = 0.0;
        if (a.ingest != "none") {
          const double t_ref = texforge::time_once_ms(
              [&] { texforge::compute_glcm_privatized(img, params, plan); });
          ns_per_byte = t_ref * 1e6 / static_cast<double>(img.pixels.size());
          if (a.ingest == "doubled") ns_per_byte *= 2.0;
        }

        double serial_mean = 0.0;
        for (const std::string& scheme : a.schemes) {
          auto run_once = [&] {
            if (scheme == "serial") {
              texforge::detail::simulate_full_ingest(img.pixels.size(), ns_per_byte);
              texforge::compute_glcm_serial(img, params);
            } else if (scheme == "shared") {
              texforge::detail::simulate_full_ingest(img.pixels.size(), ns_per_byte);
              texforge::compute_glcm_shared(img, params, plan);
            } else if (scheme == "privatized") {
              texforge::detail::simulate_full_ingest(img.pixels.size(), ns_per_byte);
              texforge::compute_glcm_privatized(img, params, plan);
            } else {
              texforge::MemoryChunkSource mem(img);
              texforge::LatencyChunkSource src(mem, ns_per_byte);
              texforge::compute_glcm_chunked(src, params, plan, chunks);
            }
          };
          const texforge::TimingStats t = texforge::summarize_ms(
              texforge::time_repeats_ms(a.repeats, run_once));

          texforge::BenchRow row;
          row.scheme = scheme;
          row.image = kind;
          row.width = row.height = size;
          row.levels = levels;
          row.distance = a.distance;
          row.angle_deg = a.angle_deg;
          row.copies = scheme == "privatized" || scheme == "pipelined" ? plan.copies : 0;
          row.chunks = scheme == "pipelined" ? chunks : 0;
          row.timing = t;
          if (scheme == "serial") serial_mean = t.mean_ms;
          row.speedup_vs_serial = serial_mean > 0.0 ? serial_mean / t.mean_ms : 1.0;
          rows.push_back(row);

          std::printf("%zux%zu %s L=%-3d %-10s mean %8.3f ms  std %7.3f  median %8.3f  speedup %.2fx\n",
                      size, size, kind.c_str(), levels, scheme.c_str(), t.mean_ms, t.std_ms,
                      t.median_ms, rows.back().speedup_vs_serial);
        }
      }
    }
  }

  std::ofstream out(a.output, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot create " << a.output << "\n";
    return kExitInput;
  }
  texforge::write_bench_csv(rows, out);
  std::printf("report written to %s (%zu rows, %u workers)\n", a.output.c_str(), rows.size(),
              workers);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"texture-forge: gray-level co-occurrence matrix engine"};
  app.require_subcommand(1);

  ComputeArgs ca;
  CLI::App* compute = app.add_subcommand("compute", "Compute a GLCM and write it as CSV");
  compute->add_option("--input", ca.input, "Input PGM (binary P5, maxval 255)")->required();
  compute->add_option("--output", ca.output, "Output CSV path")->required();
  compute->add_option("--levels", ca.levels, "Gray levels L")->required()->check(CLI::Range(2, 256));
  compute->add_option("--distance", ca.distance, "Pixel distance d")->required()->check(CLI::PositiveNumber);
  compute->add_option("--angle", ca.angle_deg, "Direction in degrees")
      ->required()
      ->check(CLI::IsMember({0, 45, 90, 135}));
  compute->add_option("--scheme", ca.scheme, "Computation scheme")
      ->check(CLI::IsMember({"serial", "shared", "privatized", "pipelined"}));
  compute->add_option("--copies", ca.copies, "Sub-GLCM copies R (default: planned)")
      ->check(CLI::Range(1u, 64u));
  compute->add_option("--chunks", ca.chunks, "Chunk count K for pipelined (default: auto)")
      ->check(CLI::PositiveNumber);
  compute->add_flag("--symmetric", ca.symmetric, "Add the transpose before writing");
  compute->add_flag("--normalize", ca.normalize_out, "Write probabilities instead of counts");

  SynthArgs sa;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic test image as PGM");
  synth->add_option("--kind", sa.kind, "smooth | noise")
      ->required()
      ->check(CLI::IsMember({"smooth", "noise"}));
  synth->add_option("--size", sa.size, "WxH, e.g. 1024x1024")->required();
  synth->add_option("--seed", sa.seed, "RNG seed");
  synth->add_option("--output", sa.output, "Output PGM path")->required();

  FeatureArgs fa;
  CLI::App* features = app.add_subcommand("features", "Print Haralick-style features as JSON");
  features->add_option("--input", fa.input, "Input PGM")->required();
  features->add_option("--levels", fa.levels, "Gray levels L")->required()->check(CLI::Range(2, 256));
  features->add_option("--distance", fa.distance, "Pixel distance d")->required()->check(CLI::PositiveNumber);
  features->add_option("--angle", fa.angle_deg, "Direction in degrees")
      ->required()
      ->check(CLI::IsMember({0, 45, 90, 135}));
  features->add_option("--scheme", fa.scheme, "Computation scheme")
      ->check(CLI::IsMember({"serial", "shared", "privatized", "pipelined"}));
  features->add_flag("--symmetric", fa.symmetric, "Symmetrize before normalizing");

  BenchArgs ba;
  CLI::App* bench = app.add_subcommand("bench", "Benchmark the schemes and write a CSV report");
  bench->add_option("--sizes", ba.sizes, "Square image sizes")->delimiter(',');
  bench->add_option("--levels", ba.levels, "Gray levels to test")->delimiter(',');
  bench->add_option("--images", ba.images, "Image kinds (smooth,noise)")
      ->delimiter(',')
      ->check(CLI::IsMember({"smooth", "noise"}));
  bench->add_option("--schemes", ba.schemes, "Schemes to run")
      ->delimiter(',')
      ->check(CLI::IsMember({"serial", "shared", "privatized", "pipelined"}));
  bench->add_option("--repeats", ba.repeats, "Timed repetitions per scheme")->check(CLI::PositiveNumber);
  bench->add_option("--distance", ba.distance, "Pixel distance d")->check(CLI::PositiveNumber);
  bench->add_option("--angle", ba.angle_deg, "Direction in degrees")
      ->check(CLI::IsMember({0, 45, 90, 135}));
  bench->add_option("--chunks", ba.chunks, "Chunk count K for the pipelined scheme");
  bench->add_option("--seed", ba.seed, "Seed for the synthetic images");
  bench->add_option("--ingest", ba.ingest, "Synthetic transfer cost: none | matched | doubled")
      ->check(CLI::IsMember({"none", "matched", "doubled"}));
  bench->add_option("--output", ba.output, "Report CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (compute->parsed()) return cmd_compute(ca);
    if (synth->parsed()) return cmd_synth(sa);
    if (features->parsed()) return cmd_features(fa);
    if (bench->parsed()) return cmd_bench(ba);
  } catch (const texforge::PgmError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompute;
  }
  return kExitUsage;
}
