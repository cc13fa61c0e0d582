#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "texforge/glcm.hpp"
#include "texforge/image.hpp"
#include "texforge/parallel.hpp"
#include "texforge/pipeline.hpp"

namespace texforge {

/// Worker count from TEXTURE_FORGE_WORKERS, else hardware concurrency, else 1.
inline unsigned detect_worker_count() {
  if (const char* env = std::getenv("TEXTURE_FORGE_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

struct TimingStats {
  double mean_ms = 0.0;
  double std_ms = 0.0;
  double median_ms = 0.0;
};

template <typename Fn>
inline double time_once_ms(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

template <typename Fn>
inline std::vector<double> time_repeats_ms(int repeats, Fn&& fn) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(repeats));
  for (int i = 0; i < repeats; ++i) out.push_back(time_once_ms(fn));
  return out;
}

inline TimingStats summarize_ms(std::vector<double> samples) {
  TimingStats s;
  if (samples.empty()) return s;
  double sum = 0.0;
  for (double v : samples) sum += v;
  s.mean_ms = sum / static_cast<double>(samples.size());
  double sq = 0.0;
  for (double v : samples) sq += (v - s.mean_ms) * (v - s.mean_ms);
  s.std_ms = std::sqrt(sq / static_cast<double>(samples.size()));
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  s.median_ms = n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
  return s;
}

struct BenchRow {
  std::string scheme;
  std::string image;
  std::size_t width = 0;
  std::size_t height = 0;
  int levels = 0;
  int distance = 0;
  int angle_deg = 0;
  unsigned copies = 0;      // R, privatized/pipelined only
  std::size_t chunks = 0;   // K, pipelined only
  TimingStats timing;
  double speedup_vs_serial = 1.0;
};

inline void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "scheme,image,width,height,levels,distance,angle,copies,chunks,"
         "mean_ms,std_ms,median_ms,speedup_vs_serial\n";
  char buf[160];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%zu,%zu,%d,%d,%d,%u,%zu,%.6f,%.6f,%.6f,%.4f\n",
                  r.scheme.c_str(), r.image.c_str(), r.width, r.height, r.levels, r.distance,
                  r.angle_deg, r.copies, r.chunks, r.timing.mean_ms, r.timing.std_ms,
                  r.timing.median_ms, r.speedup_vs_serial);
    out << buf;
  }
}

// Ingestion latency injected into benchmark runs, mirroring a transfer link
// whose cost rivals the compute itself.
enum class IngestModel {
  none,     // data already resident; time compute only
  matched,  // full-image ingest tuned to ~1x the compute time
  doubled,  // ~2x the compute time
};

namespace detail {

inline void simulate_full_ingest(std::size_t bytes, double ns_per_byte) {
  if (ns_per_byte <= 0.0) return;
  std::this_thread::sleep_for(
      std::chrono::duration<double, std::nano>(ns_per_byte * static_cast<double>(bytes)));
}

}  // namespace detail

}  // namespace texforge
