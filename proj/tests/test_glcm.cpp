#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracle.hpp"
#include "texforge/glcm.hpp"

using namespace texforge;
using testutil::brute_force_glcm;
using testutil::constant_image;
using testutil::make_quantized;
using testutil::random_quantized;

namespace {
const Angle kAngles[] = {Angle::deg0, Angle::deg45, Angle::deg90, Angle::deg135};
}

TEST_CASE("neighbor_offset matches the row-major displacement table") {
  CHECK(neighbor_offset({1, Angle::deg0, 8}) == PixelOffset{0, 1});
  CHECK(neighbor_offset({4, Angle::deg90, 8}) == PixelOffset{4, 0});
  // addr + d*(W-1) lands d rows down, d columns left
  CHECK(neighbor_offset({2, Angle::deg45, 8}) == PixelOffset{2, -2});
  CHECK(neighbor_offset({3, Angle::deg135, 8}) == PixelOffset{3, 3});
}

TEST_CASE("valid_pair_count closed forms") {
  CHECK(valid_pair_count(4, 4, {1, Angle::deg0, 8}) == 12);
  CHECK(valid_pair_count(4, 4, {1, Angle::deg45, 8}) == 9);
  CHECK(valid_pair_count(1024, 1024, {4, Angle::deg135, 8}) == 1040400);
  CHECK(valid_pair_count(7, 5, {1, Angle::deg90, 8}) == 28);
  CHECK_THROWS_AS(valid_pair_count(4, 4, {4, Angle::deg0, 8}), std::invalid_argument);
  CHECK_THROWS_AS(valid_pair_count(8, 3, {3, Angle::deg90, 8}), std::invalid_argument);
}

TEST_CASE("serial GLCM on a constant image puts every vote in one cell") {
  const auto img = constant_image(4, 4, 8, 3);
  const Glcm g = compute_glcm_serial(img, {1, Angle::deg0, 8});
  CHECK(g.at(3, 3) == 12);
  CHECK(g.total() == 12);
}

TEST_CASE("serial GLCM, hand-enumerated 2x2 case") {
  const auto img = make_quantized(2, {{0, 1}, {1, 0}});
  const Glcm g = compute_glcm_serial(img, {1, Angle::deg0, 2});
  // anchor (0,0)=0 sees 1; anchor (1,0)=1 sees 0
  CHECK(g.at(1, 0) == 1);
  CHECK(g.at(0, 1) == 1);
  CHECK(g.total() == 2);
}

TEST_CASE("serial GLCM rejects bad inputs") {
  const auto img = constant_image(4, 4, 8, 0);
  CHECK_THROWS_AS(compute_glcm_serial(img, {1, Angle::deg0, 16}), std::invalid_argument);
  CHECK_THROWS_AS(compute_glcm_serial(img, {4, Angle::deg0, 8}), std::invalid_argument);
}

TEST_CASE("conservation: total votes equal the closed-form pair count") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t w = 2 + rng() % 12;
    const std::size_t h = 2 + rng() % 12;
    const int levels = 2 + static_cast<int>(rng() % 7);
    const int d = 1 + static_cast<int>(rng() % (std::min(w, h) - 1));
    const auto img = random_quantized(w, h, levels, rng());
    for (Angle a : kAngles) {
      const GlcmParams p{d, a, levels};
      CHECK(compute_glcm_serial(img, p).total() == valid_pair_count(w, h, p));
    }
  }
}

TEST_CASE("constant-image law") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const int levels = 2 + static_cast<int>(rng() % 31);
    const int value = static_cast<int>(rng() % static_cast<unsigned>(levels));
    const auto img = constant_image(5, 6, levels, value);
    const Glcm g = compute_glcm_serial(img, {1, kAngles[trial % 4], levels});
    for (int i = 0; i < levels; ++i)
      for (int j = 0; j < levels; ++j)
        CHECK(g.at(i, j) == (i == value && j == value ? g.total() : 0));
  }
}

TEST_CASE("gray-value permutation permutes rows and columns") {
  std::mt19937 rng(13);
  const int levels = 5;
  const auto img = random_quantized(9, 7, levels, 99);
  std::vector<std::uint8_t> perm(levels);
  std::iota(perm.begin(), perm.end(), std::uint8_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);

  auto remapped = img;
  for (auto& v : remapped.pixels) v = perm[v];

  for (Angle a : kAngles) {
    const GlcmParams p{2, a, levels};
    const Glcm before = compute_glcm_serial(img, p);
    const Glcm after = compute_glcm_serial(remapped, p);
    for (int i = 0; i < levels; ++i)
      for (int j = 0; j < levels; ++j) CHECK(after.at(perm[i], perm[j]) == before.at(i, j));
  }
}

TEST_CASE("serial GLCM equals the predicate-scan oracle") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t w = 2 + rng() % 7;
    const std::size_t h = 2 + rng() % 7;
    const int levels = 2 + static_cast<int>(rng() % 3);
    const int max_d = static_cast<int>(std::min(w, h)) - 1;
    const int d = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_d));
    const auto img = random_quantized(w, h, levels, rng());
    for (Angle a : kAngles) {
      const GlcmParams p{d, a, levels};
      CHECK(compute_glcm_serial(img, p) == brute_force_glcm(img, p));
    }
  }
}

TEST_CASE("symmetrize adds the transpose") {
  const Glcm g(2, {3, 0, 1, 2});
  const Glcm s = symmetrize(g);
  CHECK(s == Glcm(2, {6, 1, 1, 4}));
  CHECK(s.total() == 2 * g.total());

  const Glcm sym(2, {2, 5, 5, 1});
  CHECK(symmetrize(sym) == Glcm(2, {4, 10, 10, 2}));
}

TEST_CASE("normalize divides by the grand total") {
  const Glcm g(2, {3, 0, 1, 2});
  const GlcmProbabilities p = normalize(g);
  CHECK(p.at(0, 0) == Catch::Approx(0.5));
  CHECK(p.at(0, 1) == 0.0);
  CHECK(p.at(1, 0) == Catch::Approx(1.0 / 6.0));
  CHECK(p.at(1, 1) == Catch::Approx(1.0 / 3.0));

  Glcm single(4);
  single.at(2, 1) = 77;
  CHECK(normalize(single).at(2, 1) == 1.0);

  const auto img = random_quantized(16, 16, 8, 3);
  const auto probs = normalize(compute_glcm_serial(img, {1, Angle::deg135, 8}));
  const double sum = std::accumulate(probs.values.begin(), probs.values.end(), 0.0);
  CHECK(std::abs(sum - 1.0) <= 1e-12);

  CHECK_THROWS_AS(normalize(Glcm(2)), std::invalid_argument);
}
