#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "oracle.hpp"
#include "texforge/csv.hpp"
#include "texforge/image.hpp"
#include "texforge/pgm.hpp"

using namespace texforge;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) {
  return std::vector<std::uint8_t>(s.begin(), s.end());
}

}  // namespace

TEST_CASE("load_pgm decodes a minimal P5 stream") {
  auto data = bytes_of("P5\n2 2\n255\n");
  const std::uint8_t px[] = {0, 64, 128, 255};
  data.insert(data.end(), px, px + 4);
  const GrayImage img = load_pgm(data);
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  CHECK(img.pixels == std::vector<std::uint8_t>{0, 64, 128, 255});
}

TEST_CASE("load_pgm handles comments and odd whitespace") {
  auto data = bytes_of("P5 # binary graymap\n # another comment\n 3\t1 # w h\n255 ");
  const std::uint8_t px[] = {9, 8, 7};
  data.insert(data.end(), px, px + 3);
  const GrayImage img = load_pgm(data);
  CHECK(img.width == 3);
  CHECK(img.height == 1);
  CHECK(img.pixels == std::vector<std::uint8_t>{9, 8, 7});
}

TEST_CASE("load_pgm error cases are distinct") {
  auto ok = bytes_of("P5\n2 2\n255\n....");
  CHECK_NOTHROW(load_pgm(ok));

  auto p2 = bytes_of("P2\n2 2\n255\n....");
  CHECK_THROWS_WITH(load_pgm(p2), Catch::Matchers::ContainsSubstring("magic"));

  auto wide = bytes_of("P5\n2 2\n65535\n........");
  CHECK_THROWS_WITH(load_pgm(wide), Catch::Matchers::ContainsSubstring("maxval"));

  auto cut = bytes_of("P5\n3 1\n255\n..");
  CHECK_THROWS_WITH(load_pgm(cut), Catch::Matchers::ContainsSubstring("truncated"));

  auto garbage = bytes_of("P5\nx 2\n255\n....");
  CHECK_THROWS_AS(load_pgm(garbage), PgmError);
}

TEST_CASE("write_pgm then load_pgm is the identity") {
  const GrayImage img = synth_noise(13, 7, 42);
  std::ostringstream out(std::ios::binary);
  write_pgm(img, out);
  const std::string s = out.str();
  const GrayImage back = load_pgm(bytes_of(s));
  CHECK(back.width == img.width);
  CHECK(back.height == img.height);
  CHECK(back.pixels == img.pixels);
}

TEST_CASE("quantize bins") {
  const GrayImage img(3, 1, {255, 0, 32});
  const QuantizedImage q = quantize(img, 8);
  CHECK(q.pixels == std::vector<std::uint8_t>{7, 0, 1});
  CHECK_THROWS_AS(quantize(img, 1), std::invalid_argument);
  CHECK_THROWS_AS(quantize(img, 257), std::invalid_argument);
}

TEST_CASE("quantize is monotone and identity at 256 levels") {
  std::vector<std::uint8_t> ramp(256);
  for (int v = 0; v < 256; ++v) ramp[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(v);
  const GrayImage img(256, 1, ramp);
  for (int levels : {2, 8, 32, 101, 256}) {
    const QuantizedImage q = quantize(img, levels);
    for (std::size_t i = 1; i < q.pixels.size(); ++i) CHECK(q.pixels[i - 1] <= q.pixels[i]);
    CHECK(q.pixels.back() == levels - 1);
  }
  CHECK(quantize(img, 256).pixels == ramp);
}

TEST_CASE("synth_smooth: gentle horizontal steps, deterministic, seed-sensitive") {
  const GrayImage a = synth_smooth(64, 64, 1);
  const GrayImage b = synth_smooth(64, 64, 1);
  CHECK(a.pixels == b.pixels);

  const GrayImage c = synth_smooth(64, 64, 2);
  CHECK(a.pixels != c.pixels);

  std::size_t small_steps = 0, pairs = 0;
  for (std::size_t r = 0; r < a.height; ++r)
    for (std::size_t cidx = 0; cidx + 1 < a.width; ++cidx, ++pairs)
      if (std::abs(int(a.at(r, cidx)) - int(a.at(r, cidx + 1))) <= 8) ++small_steps;
  CHECK(static_cast<double>(small_steps) >= 0.95 * static_cast<double>(pairs));
}

TEST_CASE("synth_noise: deterministic, near-uniform intensity histogram") {
  const GrayImage a = synth_noise(64, 64, 1);
  CHECK(a.pixels == synth_noise(64, 64, 1).pixels);
  CHECK(a.pixels != synth_noise(64, 64, 2).pixels);

  // every intensity within 3 sigma of the uniform expectation
  const double n = 64.0 * 64.0;
  const double expected = n / 256.0;
  const double sigma = std::sqrt(n * (1.0 / 256.0) * (255.0 / 256.0));
  std::array<int, 256> histo{};
  for (std::uint8_t v : a.pixels) ++histo[v];
  for (int v = 0; v < 256; ++v)
    CHECK(std::abs(histo[static_cast<std::size_t>(v)] - expected) <= 3.0 * sigma);
}

TEST_CASE("synth_noise spreads GLCM votes thin") {
  const QuantizedImage q = quantize(synth_noise(64, 64, 1), 32);
  const Glcm g = compute_glcm_serial(q, {1, Angle::deg0, 32});
  const std::uint64_t hottest = *std::max_element(g.counts.begin(), g.counts.end());
  CHECK(static_cast<double>(hottest) < 0.05 * static_cast<double>(g.total()));
}

TEST_CASE("synth rejects degenerate dimensions") {
  CHECK_THROWS_AS(synth_smooth(1, 64, 1), std::invalid_argument);
  CHECK_THROWS_AS(synth_noise(64, 1, 1), std::invalid_argument);
}

TEST_CASE("glcm csv round trip") {
  const Glcm g(2, {3, 0, 1, 2});
  std::ostringstream out;
  write_glcm_csv(g, out);
  CHECK(out.str() == "3,0\n1,2\n");

  std::ostringstream zero;
  write_glcm_csv(Glcm(2), zero);
  CHECK(zero.str() == "0,0\n0,0\n");

  const auto img = testutil::random_quantized(9, 9, 8, 5);
  const Glcm big = compute_glcm_serial(img, {1, Angle::deg45, 8});
  std::stringstream ss;
  write_glcm_csv(big, ss);
  CHECK(parse_glcm_csv(ss) == big);
}
