#include <gtest/gtest.h>

#include "panotrack/error.hpp"
#include "panotrack/resample.hpp"

namespace panotrack {
namespace {

RgbImage ramp(int w, int h) {
  RgbImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::uint8_t* p = img.pixel(x, y);
      p[0] = static_cast<std::uint8_t>(x * 255 / (w - 1));
      p[1] = static_cast<std::uint8_t>(y * 255 / (h - 1));
      p[2] = static_cast<std::uint8_t>((x * 7 + y * 13) % 256);
    }
  }
  return img;
}

TEST(Resample, BilinearAtTexelCentreIsExact) {
  const RgbImage img = ramp(16, 8);
  std::uint8_t out[3];
  sample_bilinear(img, {5.0, 3.0}, out);
  EXPECT_EQ(out[0], img.pixel(5, 3)[0]);
  EXPECT_EQ(out[2], img.pixel(5, 3)[2]);
}

TEST(Resample, LongitudeWraps) {
  RgbImage img(8, 4, 0);
  for (int y = 0; y < 4; ++y) img.pixel(0, y)[0] = 200;
  std::uint8_t out[3];
  sample_bilinear(img, {7.5, 1.0}, out);
  EXPECT_EQ(out[0], 100);
  sample_bilinear(img, {-0.5, 1.0}, out);
  EXPECT_EQ(out[0], 100);
}

TEST(Resample, RowsClampAtPoles) {
  const RgbImage img = ramp(8, 4);
  std::uint8_t top[3];
  std::uint8_t below[3];
  sample_bilinear(img, {2.0, -0.4}, top);
  sample_bilinear(img, {2.0, 0.0}, below);
  EXPECT_EQ(top[1], below[1]);
  sample_bilinear(img, {2.0, 3.4}, top);
  EXPECT_EQ(top[1], img.pixel(2, 3)[1]);
}

TEST(Resample, NearestMask) {
  BinaryMask m(8, 4);
  m.set(7, 2, true);
  EXPECT_TRUE(sample_nearest(m, {-0.6, 2.2}));
  EXPECT_TRUE(sample_nearest(m, {7.4, 1.6}));
  EXPECT_FALSE(sample_nearest(m, {6.4, 2.0}));
}

TEST(Resample, IdentityViewOfUniformFrame) {
  const RgbImage src(64, 32, 77);
  const RgbImage out = render_perspective(src, Rotation::identity(), Intrinsics::from_fov(20, 10, 60.0));
  EXPECT_EQ(out.width(), 20);
  EXPECT_EQ(out.height(), 10);
  for (auto v : out.data()) ASSERT_EQ(v, 77);
}

TEST(Resample, ThreadCountDoesNotChangeOutput) {
  const RgbImage src = ramp(64, 32);
  const Intrinsics k = Intrinsics::from_fov(48, 40, 90.0);
  const Rotation r = euler_to_rotation({20.0, 10.0, 135.0});
  const RgbImage one = render_perspective(src, r, k, 1);
  EXPECT_EQ(one, render_perspective(src, r, k, 3));
  EXPECT_EQ(one, render_perspective(src, r, k, 8));
}

TEST(Resample, CentrePixelLooksForward) {
  RgbImage src(360, 180, 0);
  src.pixel(180, 90)[0] = 255;
  // Odd-sized view: the centre pixel's ray is the optical axis, which lands between texels 179 and 180.
  const UnitDirection fwd = pixel_to_direction(pixel_center(2, 2), Intrinsics::from_fov(5, 5, 10.0));
  EXPECT_NEAR(fwd.z(), 1.0, 1e-15);
  const EquirectCoord c = source_coordinate(2, 2, Rotation::identity(), Intrinsics::from_fov(5, 5, 10.0), src.grid());
  EXPECT_NEAR(c.u, 179.5, 1e-9);
  EXPECT_NEAR(c.v, 89.5, 1e-9);
}

TEST(Resample, ProjectMaskKeepsSize) {
  BinaryMask m(64, 32, true);
  const BinaryMask p = project_mask(m, Rotation::identity(), Intrinsics::from_fov(16, 16, 70.0));
  EXPECT_EQ(p.count(), 256u);
}

TEST(Resample, FrustumCoversForwardNotBackward) {
  const EquirectGrid grid{128, 64};
  const BinaryMask f = frustum_on_equirect(Rotation::identity(), Intrinsics::from_fov(64, 64, 90.0), grid);
  EXPECT_TRUE(f.get(64, 32));
  EXPECT_FALSE(f.get(0, 32));
  EXPECT_GT(f.count(), 0u);
  const RgbImage grey = grey_outside(RgbImage(128, 64, 0), f);
  EXPECT_EQ(grey.pixel(64, 32)[0], 0);
  EXPECT_NE(grey.pixel(0, 32)[0], 0);
}

TEST(Resample, SequenceMatchesPerFrame) {
  const RgbImage src = ramp(64, 32);
  const Intrinsics k = Intrinsics::from_fov(16, 12, 70.0);
  const Rotation a = euler_to_rotation({5, 0, 10});
  const Rotation b = euler_to_rotation({-5, 3, 40});
  const auto seq = render_sequence({src, src, src}, {a, a, b}, {k, k, k}, 2);
  ASSERT_EQ(seq.size(), 3u);
  EXPECT_EQ(seq[1], render_perspective(src, a, k));
  EXPECT_EQ(seq[2], render_perspective(src, b, k));
  EXPECT_THROW(render_sequence({src}, {a, b}, {k, k}), InvalidArgument);
}

}  // namespace
}  // namespace panotrack
