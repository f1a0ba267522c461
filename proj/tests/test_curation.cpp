#include <gtest/gtest.h>

#include <cmath>

#include "panotrack/curation.hpp"
#include "panotrack/error.hpp"

namespace panotrack {
namespace {

RgbImage wrap_continuous(int w, int h, double phase = 0.0) {
  RgbImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double lon = 2.0 * kPi * (x + 0.5) / w;
      const double lat = kPi * (y + 0.5) / h;
      const auto v = static_cast<std::uint8_t>(128 + 100 * std::sin(lon + 3 * lat + phase));
      std::uint8_t* p = img.pixel(x, y);
      p[0] = p[1] = p[2] = v;
    }
  }
  return img;
}

TEST(Curation, NccBasics) {
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{2, 4, 6, 8};
  const std::vector<double> c{4, 3, 2, 1};
  const std::vector<double> k{5, 5, 5, 5};
  EXPECT_NEAR(normalized_cross_correlation(a, b), 1.0, 1e-12);
  EXPECT_NEAR(normalized_cross_correlation(a, c), -1.0, 1e-12);
  EXPECT_EQ(normalized_cross_correlation(a, k), 1.0);
}

TEST(Curation, SeamContinuousVsBroken) {
  const RgbImage good = wrap_continuous(256, 64);
  EXPECT_GT(seam_check(good, 8), 0.9);
  RgbImage bad = good;
  for (int y = 0; y < 64; ++y) {
    for (int x = 128; x < 256; ++x) {
      const std::uint8_t* src = good.pixel((x + 64) % 256, y);
      std::copy(src, src + 3, bad.pixel(x, y));
    }
  }
  EXPECT_LT(seam_check(bad, 8), 0.5);
  EXPECT_THROW(seam_check(good, 0), InvalidArgument);
}

TEST(Curation, SeamEdgeCases) {
  RgbImage img = wrap_continuous(128, 64);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 8; ++x) std::copy(img.pixel(x, y), img.pixel(x, y) + 3, img.pixel(120 + x, y));
  }
  EXPECT_NEAR(seam_check(img, 8), 1.0, 1e-9);
  RgbImage inverted = img;
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 8; ++x) {
      for (int ch = 0; ch < 3; ++ch) inverted.pixel(120 + x, y)[ch] = static_cast<std::uint8_t>(255 - img.pixel(x, y)[ch]);
    }
  }
  EXPECT_LE(seam_check(inverted, 8), 0.0);
  GrayImage g = to_gray(wrap_continuous(128, 64));
  const double base = seam_score(g, 8);
  for (double& v : g.values) v = 0.5 * v + 20.0;
  EXPECT_NEAR(seam_score(g, 8), base, 1e-9);
}

TEST(Curation, Dynamics) {
  const std::vector<RgbImage> still(4, wrap_continuous(64, 32));
  EXPECT_EQ(dynamics_check(still), 0.0);
  std::vector<RgbImage> moving;
  for (int i = 0; i < 4; ++i) moving.push_back(wrap_continuous(64, 32, i * 1.0));
  EXPECT_GT(dynamics_check(moving), 25.0);
  EXPECT_THROW(dynamics_check(std::vector<RgbImage>(1, RgbImage(4, 4))), InvalidArgument);
  const std::vector<RgbImage> flicker{RgbImage(8, 8, 0), RgbImage(8, 8, 255), RgbImage(8, 8, 0), RgbImage(8, 8, 255)};
  EXPECT_DOUBLE_EQ(dynamics_check(flicker), 16256.25);
  std::vector<RgbImage> reordered{moving[2], moving[0], moving[3], moving[1]};
  EXPECT_NEAR(dynamics_check(reordered), dynamics_check(moving), 1e-9);
}

TEST(Curation, PosterBoxOnBlack) {
  RgbImage img(200, 100, 0);
  for (int y = 25; y < 75; ++y) {
    for (int x = 50; x < 150; ++x) {
      std::uint8_t* p = img.pixel(x, y);
      p[0] = p[1] = p[2] = 220;
    }
  }
  const PosterResult r = poster_check(img);
  EXPECT_TRUE(r.flagged);
  EXPECT_EQ(r.box.x0, 50);
  EXPECT_EQ(r.box.y0, 25);
  EXPECT_EQ(r.box.x1, 150);
  EXPECT_EQ(r.box.y1, 75);
  EXPECT_DOUBLE_EQ(r.box_fraction, 0.25);
  EXPECT_FALSE(poster_check(wrap_continuous(200, 100)).flagged);
  EXPECT_TRUE(poster_check(RgbImage(64, 32, 0)).flagged);
}

TEST(Curation, LargestComponentTieGoesToFirst) {
  BinaryMask m(10, 10);
  m.set(1, 1, true);
  m.set(8, 8, true);
  m.set(2, 2, true);  // diagonal neighbour joins the first blob
  const ContentBox b = largest_component_box(m);
  EXPECT_EQ(b.x0, 1);
  EXPECT_EQ(b.x1, 3);
  EXPECT_EQ(largest_component_box(BinaryMask(4, 4)).area(), 0);
}

TEST(Curation, EvenlySpacedIndices) {
  EXPECT_EQ(evenly_spaced_indices(5, 10), (std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_EQ(evenly_spaced_indices(32, 10), (std::vector<int>{0, 3, 7, 10, 14, 17, 21, 24, 28, 31}));
}

TEST(Curation, ReportCombinesChecks) {
  const std::vector<RgbImage> still(3, wrap_continuous(128, 64));
  CurationConfig cfg;
  const CurationReport r = curate(still, cfg);
  EXPECT_FALSE(r.pass);
  EXPECT_TRUE(r.find("seam")->pass);
  EXPECT_FALSE(r.find("dynamics")->pass);
  EXPECT_TRUE(r.find("poster")->pass);
  cfg.check_dynamics = false;
  EXPECT_TRUE(curate(still, cfg).pass);
  EXPECT_EQ(curate(still, cfg).find("dynamics"), nullptr);
}

}  // namespace
}  // namespace panotrack
