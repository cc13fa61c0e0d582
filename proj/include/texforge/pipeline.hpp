#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "texforge/glcm.hpp"
#include "texforge/image.hpp"
#include "texforge/parallel.hpp"
#include "texforge/pgm.hpp"

namespace texforge {

struct PipelineError : std::runtime_error {
  std::size_t chunk_index;
  PipelineError(std::size_t index, const std::string& what)
      : std::runtime_error("chunk " + std::to_string(index) + ": " + what), chunk_index(index) {}
};

// One slice of a row-partitioned image. A chunk votes only for anchors in its
// owned rows; the halo rows [owned_row_end, buffer_row_end) are read-only.
struct ChunkSpec {
  std::size_t index = 0;
  std::size_t owned_row_start = 0;
  std::size_t owned_row_end = 0;
  std::size_t buffer_row_end = 0;
  std::size_t chunk_count = 1;

  std::size_t owned_rows() const { return owned_row_end - owned_row_start; }
  std::size_t buffer_rows() const { return buffer_row_end - owned_row_start; }
  bool operator==(const ChunkSpec&) const = default;
};

/// Splits [0, height) into K owned row ranges (first height mod K chunks get
/// one extra row) and appends the halo each direction needs: d rows for the
/// downward-pointing angles, none for 0 degrees, never past the image.
inline std::vector<ChunkSpec> partition(std::size_t width, std::size_t height,
                                        const GlcmParams& p, std::size_t chunk_count) {
  const auto d = static_cast<std::size_t>(p.distance);
  if (p.distance < 1 || d >= width || d >= height)
    throw std::invalid_argument("partition: degenerate geometry (d must be in [1, min(width, height)))");
  if (chunk_count < 1 || chunk_count > height)
    throw std::invalid_argument("partition: chunk count must be in [1, height]");
  if (height / chunk_count <= d && chunk_count > 1)
    throw std::invalid_argument("partition: too many chunks for this distance (chunk shorter than halo)");

  const std::size_t halo = p.angle == Angle::deg0 ? 0 : d;
  const std::size_t base = height / chunk_count;
  const std::size_t extra = height % chunk_count;
  std::vector<ChunkSpec> out(chunk_count);
  std::size_t row = 0;
  for (std::size_t i = 0; i < chunk_count; ++i) {
    ChunkSpec& c = out[i];
    c.index = i;
    c.chunk_count = chunk_count;
    c.owned_row_start = row;
    c.owned_row_end = row + base + (i < extra ? 1 : 0);
    c.buffer_row_end = i + 1 == chunk_count ? c.owned_row_end : c.owned_row_end + halo;
    row = c.owned_row_end;
  }
  return out;
}

// Pull interface for chunk ingestion. fetch() fills `out` with exactly the
// rows [owned_row_start, buffer_row_end), already quantized to levels().
class ChunkSource {
 public:
  virtual ~ChunkSource() = default;
  virtual std::size_t width() const = 0;
  virtual std::size_t height() const = 0;
  virtual int levels() const = 0;
  virtual void fetch(const ChunkSpec& spec, std::vector<std::uint8_t>& out) = 0;
};

class MemoryChunkSource final : public ChunkSource {
 public:
  explicit MemoryChunkSource(const QuantizedImage& img) : img_(img) {}
  std::size_t width() const override { return img_.width; }
  std::size_t height() const override { return img_.height; }
  int levels() const override { return img_.levels; }
  void fetch(const ChunkSpec& spec, std::vector<std::uint8_t>& out) override {
    const std::size_t begin = spec.owned_row_start * img_.width;
    const std::size_t end = spec.buffer_row_end * img_.width;
    out.assign(img_.pixels.begin() + static_cast<std::ptrdiff_t>(begin),
               img_.pixels.begin() + static_cast<std::ptrdiff_t>(end));
  }

 private:
  const QuantizedImage& img_;
};

// Streams a P5 file chunk by chunk, quantizing on the way in.
class PgmChunkSource final : public ChunkSource {
 public:
  PgmChunkSource(const std::string& path, int levels) : path_(path), levels_(levels) {
    if (levels < 2 || levels > 256)
      throw std::invalid_argument("PgmChunkSource: levels must be in [2, 256]");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PgmError("pgm: cannot open " + path);
    std::vector<std::uint8_t> head(4096);
    in.read(reinterpret_cast<char*>(head.data()), static_cast<std::streamsize>(head.size()));
    head.resize(static_cast<std::size_t>(in.gcount()));
    header_ = parse_pgm_header(head);
  }

  std::size_t width() const override { return header_.width; }
  std::size_t height() const override { return header_.height; }
  int levels() const override { return levels_; }

  void fetch(const ChunkSpec& spec, std::vector<std::uint8_t>& out) override {
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw PgmError("pgm: cannot open " + path_);
    const std::size_t count = spec.buffer_rows() * header_.width;
    out.resize(count);
    in.seekg(static_cast<std::streamoff>(header_.data_offset +
                                         spec.owned_row_start * header_.width));
    in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count) throw PgmError("pgm: truncated pixel data");
    for (auto& v : out) v = static_cast<std::uint8_t>((static_cast<unsigned>(v) * levels_) >> 8);
  }

 private:
  std::string path_;
  int levels_;
  PgmHeader header_;
};

namespace detail {

// One-time estimate of how late this machine's timed sleeps wake up, so the
// injected link rate is delivered accurately instead of rate + wake latency.
inline std::chrono::nanoseconds sleep_wake_bias() {
  static const std::chrono::nanoseconds bias = [] {
    using namespace std::chrono;
    std::array<nanoseconds, 3> samples{};
    for (auto& s : samples) {
      const auto t0 = steady_clock::now();
      std::this_thread::sleep_for(microseconds(1500));
      s = duration_cast<nanoseconds>(steady_clock::now() - t0) - microseconds(1500);
    }
    std::sort(samples.begin(), samples.end());
    return std::clamp(samples[1], nanoseconds(0), nanoseconds(3000000));
  }();
  return bias;
}

}  // namespace detail

// Adds a synthetic ingestion delay modelling a fixed-rate transfer link, so
// the overlap benefit is measurable without real DMA. fetch() returns once
// `bytes / rate` has elapsed since it was entered (the copy itself counts
// toward the transfer window).
class LatencyChunkSource final : public ChunkSource {
 public:
  LatencyChunkSource(ChunkSource& inner, double ns_per_byte)
      : inner_(inner), ns_per_byte_(ns_per_byte) {
    if (ns_per_byte_ > 0.0) detail::sleep_wake_bias();  // calibrate outside fetch
  }

  std::size_t width() const override { return inner_.width(); }
  std::size_t height() const override { return inner_.height(); }
  int levels() const override { return inner_.levels(); }

  void fetch(const ChunkSpec& spec, std::vector<std::uint8_t>& out) override {
    const auto entry = std::chrono::steady_clock::now();
    inner_.fetch(spec, out);
    if (ns_per_byte_ > 0.0) {
      const auto target =
          entry + std::chrono::nanoseconds(
                      std::llround(ns_per_byte_ * static_cast<double>(out.size())));
      // sleep most of the window, then yield-spin to the deadline; timed
      // sleeps alone wake late when the compute side keeps the cores busy
      const auto guard = detail::sleep_wake_bias() + std::chrono::microseconds(400);
      for (;;) {
        const auto now = std::chrono::steady_clock::now();
        if (now >= target) break;
        if (target - now > guard)
          std::this_thread::sleep_for(target - now - guard);
        else
          std::this_thread::yield();
      }
    }
    bytes_served_ += out.size();
  }

  std::uint64_t bytes_served() const { return bytes_served_; }

 private:
  ChunkSource& inner_;
  double ns_per_byte_;
  std::uint64_t bytes_served_ = 0;
};

enum class ChunkExecution {
  pipelined,   // ingest chunk i+1 while computing chunk i (two buffers)
  sequential,  // ingest then compute, one chunk at a time
};

namespace detail {

inline Glcm compute_chunk(const std::vector<std::uint8_t>& buffer, std::size_t width,
                          const ChunkSpec& spec, const GlcmParams& p,
                          const ExecutionPlan& plan) {
  const std::size_t buffer_height = spec.buffer_rows();
  // one worker stays reserved for the ingestion side of the pipeline
  const unsigned compute_workers = plan.worker_count > 1 ? plan.worker_count - 1 : 1;
  if (compute_workers > 1 && plan.copies >= 1) {
    ExecutionPlan chunk_plan = plan;
    chunk_plan.worker_count = compute_workers;
    const auto subs = privatized_subglcms_rows(buffer.data(), width, buffer_height, p, 0,
                                               spec.owned_rows(), chunk_plan);
    return reduce_subglcms(subs, p.levels);
  }
  return serial_glcm_rows(buffer.data(), width, buffer_height, p, 0, spec.owned_rows());
}

}  // namespace detail

/// Elementwise sum of per-chunk GLCMs. Order-independent.
inline Glcm merge_chunk_glcms(const std::vector<Glcm>& parts) {
  if (parts.empty()) throw std::invalid_argument("merge_chunk_glcms: no parts");
  Glcm out(parts.front().levels);
  for (const Glcm& part : parts) {
    if (part.levels != out.levels)
      throw std::invalid_argument("merge_chunk_glcms: level mismatch");
    for (std::size_t i = 0; i < out.counts.size(); ++i) out.counts[i] += part.counts[i];
  }
  return out;
}

/// Chunked GLCM with a depth-2 ingest/compute pipeline: a dedicated ingestion
/// activity fills a two-slot ring while the caller computes, so chunk i+1
/// streams in during the processing of chunk i. Exactly equal to the
/// unchunked serial result on the full image, for any K.
inline Glcm compute_glcm_chunked(ChunkSource& source, const GlcmParams& p,
                                 const ExecutionPlan& plan, std::size_t chunk_count,
                                 ChunkExecution mode = ChunkExecution::pipelined) {
  if (source.levels() != p.levels)
    throw std::invalid_argument("glcm: image levels do not match params levels");
  const std::size_t width = source.width();
  const std::vector<ChunkSpec> specs = partition(width, source.height(), p, chunk_count);

  std::vector<Glcm> parts;
  parts.reserve(specs.size());

  auto guarded_fetch = [&source](const ChunkSpec& spec, std::vector<std::uint8_t>& buf) {
    try {
      source.fetch(spec, buf);
    } catch (const PipelineError&) {
      throw;
    } catch (const std::exception& e) {
      throw PipelineError(spec.index, e.what());
    }
  };

  if (mode == ChunkExecution::sequential) {
    std::vector<std::uint8_t> buffer;
    for (const ChunkSpec& spec : specs) {
      guarded_fetch(spec, buffer);
      parts.push_back(detail::compute_chunk(buffer, width, spec, p, plan));
    }
    return merge_chunk_glcms(parts);
  }

  // Two buffer slots; slot i%2 cycles between the ingest side and the compute
  // side. A slot's buffer is touched only by its current owner.
  struct Ring {
    std::mutex m;
    std::condition_variable cv;
    std::vector<std::uint8_t> buffer[2];
    bool full[2] = {false, false};
    bool abort = false;
    std::exception_ptr error;
  } ring;

  std::thread ingest([&] {
    for (const ChunkSpec& spec : specs) {
      const std::size_t slot = spec.index % 2;
      {
        std::unique_lock lock(ring.m);
        ring.cv.wait(lock, [&] { return !ring.full[slot] || ring.abort; });
        if (ring.abort) return;
      }
      try {
        guarded_fetch(spec, ring.buffer[slot]);
      } catch (...) {
        std::lock_guard lock(ring.m);
        ring.error = std::current_exception();
        ring.abort = true;
        ring.cv.notify_all();
        return;
      }
      std::lock_guard lock(ring.m);
      ring.full[slot] = true;
      ring.cv.notify_all();
    }
  });

  std::exception_ptr compute_error;
  try {
    for (const ChunkSpec& spec : specs) {
      const std::size_t slot = spec.index % 2;
      {
        std::unique_lock lock(ring.m);
        ring.cv.wait(lock, [&] { return ring.full[slot] || ring.abort; });
        if (ring.abort) break;
      }
      parts.push_back(detail::compute_chunk(ring.buffer[slot], width, spec, p, plan));
      std::lock_guard lock(ring.m);
      ring.full[slot] = false;
      ring.cv.notify_all();
    }
  } catch (...) {
    compute_error = std::current_exception();
  }

  {
    std::lock_guard lock(ring.m);
    ring.abort = true;  // release the ingest side if the compute loop bailed
    ring.cv.notify_all();
  }
  ingest.join();
  if (ring.error) std::rethrow_exception(ring.error);
  if (compute_error) std::rethrow_exception(compute_error);
  return merge_chunk_glcms(parts);
}

}  // namespace texforge
