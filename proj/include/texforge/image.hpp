#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace texforge {

// 8-bit grayscale raster, row-major.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(std::size_t w, std::size_t h, std::vector<std::uint8_t> px)
      : width(w), height(h), pixels(std::move(px)) {
    if (width == 0 || height == 0)
      throw std::invalid_argument("GrayImage: dimensions must be positive");
    if (pixels.size() != width * height)
      throw std::invalid_argument("GrayImage: pixel count does not match dimensions");
  }

  std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
};

// Raster of gray levels in [0, levels), the voting input.
struct QuantizedImage {
  std::size_t width = 0;
  std::size_t height = 0;
  int levels = 0;
  std::vector<std::uint8_t> pixels;

  QuantizedImage() = default;
  QuantizedImage(std::size_t w, std::size_t h, int lv, std::vector<std::uint8_t> px)
      : width(w), height(h), levels(lv), pixels(std::move(px)) {
    if (width == 0 || height == 0)
      throw std::invalid_argument("QuantizedImage: dimensions must be positive");
    if (levels < 2 || levels > 256)
      throw std::invalid_argument("QuantizedImage: levels must be in [2, 256]");
    if (pixels.size() != width * height)
      throw std::invalid_argument("QuantizedImage: pixel count does not match dimensions");
    for (std::uint8_t v : pixels)
      if (static_cast<int>(v) >= levels)
        throw std::invalid_argument("QuantizedImage: pixel value exceeds gray level");
  }

  std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
};

/// Reduces 8-bit intensities to `levels` equal-width bins: q = floor(v * levels / 256).
inline QuantizedImage quantize(const GrayImage& img, int levels) {
  if (levels < 2 || levels > 256)
    throw std::invalid_argument("quantize: levels must be in [2, 256]");
  std::vector<std::uint8_t> out(img.pixels.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    out[i] = static_cast<std::uint8_t>((static_cast<unsigned>(img.pixels[i]) * levels) >> 8);
  return QuantizedImage(img.width, img.height, levels, std::move(out));
}

namespace detail {

// std::uniform_real_distribution output is implementation-defined; draw
// uniforms straight from the engine so images are identical everywhere.
inline double unit_uniform(std::mt19937& rng) {
  return rng() * (1.0 / 4294967296.0);
}

}  // namespace detail

/// Low-frequency field: sum of four seeded sinusoids around mid-gray.
/// Horizontal neighbor steps stay small (|diff| <= 8 at width >= 64).
inline GrayImage synth_smooth(std::size_t width, std::size_t height, std::uint32_t seed) {
  if (width < 2 || height < 2)
    throw std::invalid_argument("synth_smooth: dimensions must be >= 2");
  std::mt19937 rng(seed);
  struct Wave {
    double fx, fy, phase, amp;
  };
  Wave waves[4];
  double amp_sum = 0.0;
  for (Wave& w : waves) {
    w.fx = detail::unit_uniform(rng) - 0.5;  // cycles across the image, at most half a period
    w.fy = detail::unit_uniform(rng) - 0.5;
    w.phase = detail::unit_uniform(rng) * 2.0 * M_PI;
    w.amp = 0.5 + detail::unit_uniform(rng);
    amp_sum += w.amp;
  }
  for (Wave& w : waves) w.amp *= 120.0 / amp_sum;  // total swing 128 +/- 120

  std::vector<std::uint8_t> px(width * height);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      double v = 128.0;
      for (const Wave& w : waves)
        v += w.amp * std::sin(2.0 * M_PI * (w.fx * static_cast<double>(x) / static_cast<double>(width) +
                                            w.fy * static_cast<double>(y) / static_cast<double>(height)) +
                              w.phase);
      px[y * width + x] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return GrayImage(width, height, std::move(px));
}

/// Seeded uniform noise over [0, 255].
inline GrayImage synth_noise(std::size_t width, std::size_t height, std::uint32_t seed) {
  if (width < 2 || height < 2)
    throw std::invalid_argument("synth_noise: dimensions must be >= 2");
  std::mt19937 rng(seed);
  std::vector<std::uint8_t> px(width * height);
  for (auto& v : px) v = static_cast<std::uint8_t>(rng() >> 24);
  return GrayImage(width, height, std::move(px));
}

}  // namespace texforge
