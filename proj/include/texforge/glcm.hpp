#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "texforge/image.hpp"

namespace texforge {

// The four displacement directions on a row-major raster. Values are degrees.
enum class Angle : int { deg0 = 0, deg45 = 45, deg90 = 90, deg135 = 135 };

inline Angle angle_from_degrees(int deg) {
  switch (deg) {
    case 0: return Angle::deg0;
    case 45: return Angle::deg45;
    case 90: return Angle::deg90;
    case 135: return Angle::deg135;
    default: throw std::invalid_argument("angle must be one of 0, 45, 90, 135");
  }
}

inline int to_degrees(Angle a) { return static_cast<int>(a); }

struct GlcmParams {
  int distance = 1;  // pixel distance, >= 1
  Angle angle = Angle::deg0;
  int levels = 8;  // gray level count L in [2, 256]
};

// L x L co-occurrence counts, row-major. Row = reference gray (the displaced
// neighbor), column = associate gray (the anchor pixel).
struct Glcm {
  int levels = 0;
  std::vector<std::uint64_t> counts;

  Glcm() = default;
  explicit Glcm(int lv) : levels(lv), counts(static_cast<std::size_t>(lv) * lv, 0) {
    if (lv < 2 || lv > 256) throw std::invalid_argument("Glcm: levels must be in [2, 256]");
  }
  Glcm(int lv, std::vector<std::uint64_t> c) : levels(lv), counts(std::move(c)) {
    if (lv < 2 || lv > 256) throw std::invalid_argument("Glcm: levels must be in [2, 256]");
    if (counts.size() != static_cast<std::size_t>(lv) * lv)
      throw std::invalid_argument("Glcm: counts length must be levels^2");
  }

  std::uint64_t at(int row, int col) const {
    return counts[static_cast<std::size_t>(row) * levels + col];
  }
  std::uint64_t& at(int row, int col) {
    return counts[static_cast<std::size_t>(row) * levels + col];
  }
  std::uint64_t total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

  bool operator==(const Glcm& other) const = default;
};

// Row/column displacement from the anchor (associate) pixel to its reference
// neighbor. Row offsets are never negative for the four supported directions.
struct PixelOffset {
  std::ptrdiff_t row = 0;
  std::ptrdiff_t col = 0;
  bool operator==(const PixelOffset&) const = default;
};

/// Displacement implied by (distance, angle) on a row-major raster.
inline PixelOffset neighbor_offset(const GlcmParams& p) {
  const auto d = static_cast<std::ptrdiff_t>(p.distance);
  switch (p.angle) {
    case Angle::deg0: return {0, d};
    case Angle::deg45: return {d, -d};
    case Angle::deg90: return {d, 0};
    case Angle::deg135: return {d, d};
  }
  throw std::invalid_argument("neighbor_offset: bad angle");
}

/// Number of anchor pixels whose displaced neighbor is in bounds.
inline std::uint64_t valid_pair_count(std::size_t width, std::size_t height, const GlcmParams& p) {
  const auto d = static_cast<std::size_t>(p.distance);
  if (p.distance < 1 || d >= width || d >= height)
    throw std::invalid_argument("valid_pair_count: degenerate geometry (d must be in [1, min(width, height)))");
  switch (p.angle) {
    case Angle::deg0: return static_cast<std::uint64_t>(height) * (width - d);
    case Angle::deg90: return static_cast<std::uint64_t>(height - d) * width;
    case Angle::deg45:
    case Angle::deg135: return static_cast<std::uint64_t>(height - d) * (width - d);
  }
  throw std::invalid_argument("valid_pair_count: bad angle");
}

namespace detail {

inline void check_glcm_inputs(const QuantizedImage& img, const GlcmParams& p) {
  if (img.levels != p.levels)
    throw std::invalid_argument("glcm: image levels do not match params levels");
  const auto d = static_cast<std::size_t>(p.distance);
  if (p.distance < 1 || d >= img.width || d >= img.height)
    throw std::invalid_argument("glcm: degenerate geometry (d must be in [1, min(width, height)))");
}

// Visits every valid anchor in rows [row_begin, row_end). For each one calls
// vote(k, pos) where k is the anchor's flat pixel index in the raster and
// pos = reference_gray * L + associate_gray. The row range is clipped to the
// geometrically valid anchor rows, so callers may pass the full [0, height).
template <typename VoteFn>
inline void vote_anchor_rows(const std::uint8_t* pixels, std::size_t width, std::size_t height,
                             const GlcmParams& p, std::size_t row_begin, std::size_t row_end,
                             VoteFn&& vote) {
  const PixelOffset off = neighbor_offset(p);
  const auto d = static_cast<std::size_t>(p.distance);
  const std::size_t col_begin = off.col < 0 ? d : 0;
  const std::size_t col_end = off.col > 0 ? width - d : width;
  const std::size_t row_limit = off.row > 0 ? height - d : height;
  row_end = row_end < row_limit ? row_end : row_limit;
  const int levels = p.levels;
  const std::ptrdiff_t neighbor_shift = off.row * static_cast<std::ptrdiff_t>(width) + off.col;
  for (std::size_t r = row_begin; r < row_end; ++r) {
    const std::uint8_t* anchor = pixels + r * width;
    const std::uint8_t* reference = anchor + neighbor_shift;
    for (std::size_t c = col_begin; c < col_end; ++c) {
      const int pos = static_cast<int>(reference[c]) * levels + static_cast<int>(anchor[c]);
      vote(r * width + c, pos);
    }
  }
}

inline Glcm serial_glcm_rows(const std::uint8_t* pixels, std::size_t width, std::size_t height,
                             const GlcmParams& p, std::size_t row_begin, std::size_t row_end) {
  Glcm out(p.levels);
  std::uint64_t* counts = out.counts.data();
  vote_anchor_rows(pixels, width, height, p, row_begin, row_end,
                   [counts](std::size_t, int pos) { ++counts[pos]; });
  return out;
}

}  // namespace detail

/// Serial reference GLCM: one vote per in-bounds (anchor, neighbor) pair.
inline Glcm compute_glcm_serial(const QuantizedImage& img, const GlcmParams& p) {
  detail::check_glcm_inputs(img, p);
  return detail::serial_glcm_rows(img.pixels.data(), img.width, img.height, p, 0, img.height);
}

/// M + M^T. Makes the matrix direction-independent; total doubles.
inline Glcm symmetrize(const Glcm& g) {
  Glcm out(g.levels);
  const int n = g.levels;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.at(i, j) = g.at(i, j) + g.at(j, i);
  return out;
}

// Normalized co-occurrence probabilities, same layout as Glcm.
struct GlcmProbabilities {
  int levels = 0;
  std::vector<double> values;

  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * levels + col]; }
};

/// Divides every cell by the grand total. Rejects the all-zero matrix.
inline GlcmProbabilities normalize(const Glcm& g) {
  const std::uint64_t total = g.total();
  if (total == 0) throw std::invalid_argument("normalize: all-zero matrix");
  GlcmProbabilities out;
  out.levels = g.levels;
  out.values.resize(g.counts.size());
  const double inv = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < g.counts.size(); ++i)
    out.values[i] = static_cast<double>(g.counts[i]) * inv;
  return out;
}

}  // namespace texforge
