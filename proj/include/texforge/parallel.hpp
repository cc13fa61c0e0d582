#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "texforge/glcm.hpp"
#include "texforge/image.hpp"

namespace texforge {

inline constexpr std::size_t kDefaultScratchBudget = 49152;  // 48K per group

// Portable stand-in for a GPU launch configuration: worker groups with a
// bounded per-group scratch that holds `copies` private sub-GLCMs.
struct ExecutionPlan {
  unsigned worker_count = 1;      // concurrent OS workers
  unsigned group_size = 512;      // voting lanes per group
  unsigned copies = 1;            // sub-GLCMs per group (R)
  std::size_t scratch_budget = kDefaultScratchBudget;  // bytes per group
  unsigned groups_per_unit = 2;   // planned resident groups per execution unit (n_b)
  bool degraded = false;          // scratch could not honor the preferred layout
};

struct ContentionStats {
  std::uint64_t total_votes = 0;
  std::uint64_t hottest_cell_votes = 0;
  std::pair<int, int> hottest_cell_index = {0, 0};     // (row, col), lowest flat index on ties
  std::vector<std::uint64_t> per_copy_hottest;         // privatized mode: one entry per sub-GLCM
  double concentration = 0.0;                          // hottest / total
};

/// Sizes copies and groups against the per-group scratch budget.
/// Per-copy counters are 32 bits, so one sub-GLCM costs 4*L^2 bytes.
inline ExecutionPlan plan(int levels, std::size_t scratch_budget, unsigned worker_count) {
  if (levels < 2 || levels > 256) throw std::invalid_argument("plan: levels must be in [2, 256]");
  if (worker_count == 0) worker_count = 1;

  ExecutionPlan out;
  out.worker_count = worker_count;
  out.group_size = 512;
  out.scratch_budget = scratch_budget;

  const std::size_t sub_bytes = static_cast<std::size_t>(levels) * levels * sizeof(std::uint32_t);
  std::size_t copies = scratch_budget / (2 * sub_bytes);
  if (copies >= 1) {
    out.groups_per_unit = 2;
  } else {
    // Cannot keep two groups resident; shrink before giving up on privatization.
    out.groups_per_unit = 1;
    out.degraded = true;
    copies = scratch_budget / sub_bytes;
    if (copies < 1) copies = 1;  // scratch cannot hold even one copy
  }
  out.copies = static_cast<unsigned>(copies < 8 ? copies : 8);
  return out;
}

inline ExecutionPlan plan(int levels) {
  unsigned hw = std::thread::hardware_concurrency();
  return plan(levels, kDefaultScratchBudget, hw ? hw : 1);
}

namespace detail {

struct RowRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Contiguous striping of [0, height) into `parts` near-equal pieces.
inline std::vector<RowRange> stripe_rows(std::size_t height, std::size_t parts) {
  if (parts == 0) parts = 1;
  if (parts > height) parts = height;
  std::vector<RowRange> out(parts);
  const std::size_t base = height / parts;
  const std::size_t extra = height % parts;
  std::size_t row = 0;
  for (std::size_t i = 0; i < parts; ++i) {
    const std::size_t rows = base + (i < extra ? 1 : 0);
    out[i] = {row, row + rows};
    row += rows;
  }
  return out;
}

inline ContentionStats stats_from_counts(const Glcm& g) {
  ContentionStats s;
  s.total_votes = g.total();
  std::size_t best = 0;
  for (std::size_t i = 0; i < g.counts.size(); ++i)
    if (g.counts[i] > g.counts[best]) best = i;
  s.hottest_cell_votes = g.counts[best];
  s.hottest_cell_index = {static_cast<int>(best) / g.levels, static_cast<int>(best) % g.levels};
  s.concentration =
      s.total_votes ? static_cast<double>(s.hottest_cell_votes) / static_cast<double>(s.total_votes) : 0.0;
  return s;
}

template <typename Fn>
inline void run_on_workers(unsigned worker_count, std::size_t task_count, Fn&& body) {
  if (worker_count <= 1 || task_count <= 1) {
    for (std::size_t t = 0; t < task_count; ++t) body(t);
    return;
  }
  const unsigned threads = worker_count < task_count ? worker_count : static_cast<unsigned>(task_count);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t t = w; t < task_count; t += threads) body(t);
    });
  for (auto& th : pool) th.join();
}

// Shared-accumulator voting over an anchor-row window.
inline void shared_vote_rows(const std::uint8_t* pixels, std::size_t width, std::size_t height,
                             const GlcmParams& p, std::size_t row_begin, std::size_t row_end,
                             unsigned worker_count, std::uint64_t* counts) {
  const std::size_t span = row_end - row_begin;
  std::vector<RowRange> stripes = stripe_rows(span, worker_count);
  std::vector<std::atomic<std::uint64_t>> cells(static_cast<std::size_t>(p.levels) * p.levels);
  for (auto& c : cells) c.store(0, std::memory_order_relaxed);

  run_on_workers(worker_count, stripes.size(), [&](std::size_t t) {
    vote_anchor_rows(pixels, width, height, p, row_begin + stripes[t].begin,
                     row_begin + stripes[t].end,
                     [&cells](std::size_t, int pos) {
                       cells[static_cast<std::size_t>(pos)].fetch_add(1, std::memory_order_relaxed);
                     });
  });
  for (std::size_t i = 0; i < cells.size(); ++i) counts[i] += cells[i].load(std::memory_order_relaxed);
}

}  // namespace detail

/// Scheme with one shared accumulator: every worker increments the same L x L
/// matrix with indivisible read-modify-write operations.
inline std::pair<Glcm, ContentionStats> compute_glcm_shared(const QuantizedImage& img,
                                                            const GlcmParams& p,
                                                            const ExecutionPlan& plan) {
  detail::check_glcm_inputs(img, p);
  Glcm out(p.levels);
  detail::shared_vote_rows(img.pixels.data(), img.width, img.height, p, 0, img.height,
                           plan.worker_count, out.counts.data());
  ContentionStats stats = detail::stats_from_counts(out);
  return {std::move(out), std::move(stats)};
}

namespace detail {

// Privatized voting over anchor rows [row_begin, row_end): groups own disjoint
// row stripes; within a group, stripe pixel k maps to lane (k mod group_size)
// and lane i votes into copy (i mod R). Returns R sub-GLCMs per group, ordered
// group-major, as 32-bit counter arrays.
inline std::vector<std::vector<std::uint32_t>> privatized_subglcms_rows(
    const std::uint8_t* pixels, std::size_t width, std::size_t height, const GlcmParams& p,
    std::size_t row_begin, std::size_t row_end, const ExecutionPlan& plan,
    std::size_t group_count = 0) {
  if (plan.copies < 1) throw std::invalid_argument("privatized: plan.copies must be >= 1");
  const unsigned copies = plan.copies;
  const unsigned group_size = plan.group_size ? plan.group_size : 512;

  const std::size_t span = row_end - row_begin;
  if (group_count == 0) {
    group_count = static_cast<std::size_t>(plan.groups_per_unit ? plan.groups_per_unit : 2) *
                  plan.worker_count;
    // keep per-group votes below the 32-bit counter ceiling
    const std::uint64_t votes_ceiling = std::uint64_t{1} << 32;
    const std::uint64_t worst_votes = static_cast<std::uint64_t>(span) * width;
    const std::size_t floor_groups =
        static_cast<std::size_t>((worst_votes + votes_ceiling - 1) / votes_ceiling);
    if (group_count < floor_groups) group_count = floor_groups;
  }
  if (group_count > span) group_count = span;
  if (group_count == 0) group_count = 1;

  const std::vector<RowRange> stripes = stripe_rows(span, group_count);
  const std::size_t cells = static_cast<std::size_t>(p.levels) * p.levels;
  std::vector<std::vector<std::uint32_t>> subs(stripes.size() * copies,
                                               std::vector<std::uint32_t>(cells, 0));

  // lane -> copy routing table, the "(i MOD R)" rule
  std::vector<std::uint8_t> route(group_size);
  for (unsigned i = 0; i < group_size; ++i) route[i] = static_cast<std::uint8_t>(i % copies);

  run_on_workers(plan.worker_count, stripes.size(), [&](std::size_t g) {
    const std::size_t stripe_begin = row_begin + stripes[g].begin;
    const std::size_t stripe_end = row_begin + stripes[g].end;
    const std::size_t pixel_base = stripe_begin * width;
    std::vector<std::uint32_t>* group_subs = subs.data() + g * copies;

    std::size_t next_k = pixel_base;
    unsigned lane = 0;
    vote_anchor_rows(pixels, width, height, p, stripe_begin, stripe_end,
                     [&](std::size_t k, int pos) {
                       if (k != next_k) {  // row seam or clipped columns: recompute the lane
                         lane = static_cast<unsigned>((k - pixel_base) % group_size);
                       } else if (lane == group_size) {
                         lane = 0;
                       }
                       next_k = k + 1;
                       ++group_subs[route[lane]][static_cast<std::size_t>(pos)];
                       ++lane;
                     });
  });
  return subs;
}

}  // namespace detail

/// Raw per-(group, copy) sub-GLCMs of the privatized scheme, before reduction.
/// `group_count` of 0 derives the group count from the plan.
inline std::vector<std::vector<std::uint32_t>> compute_subglcms(const QuantizedImage& img,
                                                                const GlcmParams& p,
                                                                const ExecutionPlan& plan,
                                                                std::size_t group_count = 0) {
  detail::check_glcm_inputs(img, p);
  return detail::privatized_subglcms_rows(img.pixels.data(), img.width, img.height, p, 0,
                                          img.height, plan, group_count);
}

/// Elementwise 64-bit sum of sub-GLCM counter arrays. Order-independent.
inline Glcm reduce_subglcms(const std::vector<std::vector<std::uint32_t>>& subs, int levels) {
  Glcm out(levels);
  const std::size_t cells = out.counts.size();
  for (const auto& sub : subs) {
    if (sub.size() != cells)
      throw std::invalid_argument("reduce_subglcms: sub-GLCM length mismatch");
    for (std::size_t i = 0; i < cells; ++i) out.counts[i] += sub[i];
  }
  return out;
}

/// Privatized scheme: per-group private sub-GLCM copies, then one reduction.
inline std::pair<Glcm, ContentionStats> compute_glcm_privatized(const QuantizedImage& img,
                                                                const GlcmParams& p,
                                                                const ExecutionPlan& plan,
                                                                std::size_t group_count = 0) {
  const auto subs = compute_subglcms(img, p, plan, group_count);
  Glcm out = reduce_subglcms(subs, p.levels);
  ContentionStats stats = detail::stats_from_counts(out);
  stats.per_copy_hottest.reserve(subs.size());
  for (const auto& sub : subs) {
    std::uint32_t best = 0;
    for (std::uint32_t v : sub) best = v > best ? v : best;
    stats.per_copy_hottest.push_back(best);
  }
  return {std::move(out), std::move(stats)};
}

/// Vote-concentration profile of the exact GLCM — the hardware-independent
/// stand-in for atomic collision pressure.
inline ContentionStats contention_profile(const QuantizedImage& img, const GlcmParams& p) {
  return detail::stats_from_counts(compute_glcm_serial(img, p));
}

}  // namespace texforge
