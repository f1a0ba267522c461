#include <gtest/gtest.h>

#include <cmath>

#include "panotrack/error.hpp"
#include "panotrack/geometry.hpp"

namespace panotrack {
namespace {

const Intrinsics kSquare{464.0, 464.0, 128.0, 128.0, 256, 256};

TEST(Geometry, PrincipalPointIsForwardExactly) {
  const UnitDirection d = pixel_to_direction({kSquare.cx, kSquare.cy}, kSquare);
  EXPECT_EQ(d.x(), 0.0);
  EXPECT_EQ(d.y(), 0.0);
  EXPECT_EQ(d.z(), 1.0);
}

// Frozen from an arbitrary-precision evaluation of normalize(K^-1 [100, 37.5, 1]).
TEST(Geometry, PixelToDirectionOracle) {
  const UnitDirection d = pixel_to_direction({100.0, 37.5}, kSquare);
  EXPECT_NEAR(d.x(), -0.05912514213202927, 1e-15);
  EXPECT_NEAR(d.y(), -0.19110090581959457, 1e-15);
  EXPECT_NEAR(d.z(), 0.9797880696164849, 1e-15);
}

TEST(Geometry, PixelRoundTrip) {
  const PixelCoord p{17.25, 201.75};
  const Projection back = direction_to_pixel(pixel_to_direction(p, kSquare), kSquare);
  ASSERT_TRUE(back.in_front);
  EXPECT_NEAR(back.pixel.x, p.x, 1e-9);
  EXPECT_NEAR(back.pixel.y, p.y, 1e-9);
}

TEST(Geometry, BehindCameraHasNoPixel) {
  const Projection p = direction_to_pixel(UnitDirection(0.1, 0.0, -1.0), kSquare);
  EXPECT_FALSE(p.in_front);
  EXPECT_TRUE(std::isnan(p.pixel.x));
  EXPECT_FALSE(direction_to_pixel(UnitDirection(1.0, 0.0, 0.0), kSquare).in_front);
}

TEST(Geometry, InsideImageIsHalfOpen) {
  EXPECT_TRUE(inside_image({0.0, 0.0}, kSquare));
  EXPECT_FALSE(inside_image({256.0, 10.0}, kSquare));
  EXPECT_FALSE(inside_image({10.0, -1e-12}, kSquare));
}

TEST(Geometry, IntrinsicsValidation) {
  EXPECT_THROW((Intrinsics{0.0, 1.0, 1.0, 1.0, 4, 4}.validate()), InvalidIntrinsics);
  EXPECT_THROW((Intrinsics{1.0, 1.0, 9.0, 1.0, 4, 4}.validate()), InvalidIntrinsics);
  EXPECT_THROW(pixel_to_direction({0, 0}, Intrinsics{1.0, -1.0, 1.0, 1.0, 4, 4}), InvalidIntrinsics);
  const Intrinsics k = Intrinsics::from_fov(256, 256, 70.528);
  EXPECT_NEAR(k.horizontal_fov_deg(), 70.528, 1e-12);
  EXPECT_DOUBLE_EQ(k.cx, 128.0);
}

TEST(Geometry, EquirectConventions) {
  const EquirectGrid grid{360, 180};
  // Texel centre (179.5, 89.5) is the forward direction.
  const UnitDirection fwd = equirect_to_direction({179.5, 89.5}, grid);
  EXPECT_NEAR(fwd.z(), 1.0, 1e-15);
  // Upward latitude is -y.
  EXPECT_LT(equirect_to_direction({179.5, 10.0}, grid).y(), 0.0);
  const EquirectCoord c = direction_to_equirect(UnitDirection(0.3, -0.2, 0.9), grid);
  const UnitDirection back = equirect_to_direction(c, grid);
  EXPECT_NEAR(back.x() / back.z(), 0.3 / 0.9, 1e-12);
  EXPECT_NEAR(back.y() / back.z(), -0.2 / 0.9, 1e-12);
  // u stays in [-0.5, W - 0.5).
  const EquirectCoord behind = direction_to_equirect(UnitDirection(-1e-9, 0.0, -1.0), grid);
  EXPECT_GE(behind.u, -0.5);
  EXPECT_LT(behind.u, 359.5);
  EXPECT_EQ(direction_to_equirect(UnitDirection(0.0, 1.0, 0.0), grid).u, 0.0);
}

TEST(Geometry, UnitDirectionRejectsDegenerate) {
  EXPECT_THROW(UnitDirection(0.0, 0.0, 0.0), DegenerateInput);
  EXPECT_THROW(UnitDirection(NAN, 0.0, 1.0), DegenerateInput);
  EXPECT_NEAR(norm(UnitDirection(3.0, 4.0, 0.0).vec()), 1.0, 1e-15);
}

TEST(Geometry, AngularDistance) {
  EXPECT_NEAR(angular_distance(UnitDirection(1, 0, 0), UnitDirection(0, 1, 0)), 90.0, 1e-12);
  EXPECT_NEAR(angular_distance(UnitDirection(1, 0, 0), UnitDirection(-1, 0, 0)), 180.0, 1e-12);
  const UnitDirection a(1.0, 1e-9, 0.0);
  EXPECT_NEAR(angular_distance(a, UnitDirection(1, 0, 0)), rad2deg(1e-9), 1e-18);
}

// Frozen from a symbolic evaluation of Rx(30) Ry(60) Rz(45).
TEST(Geometry, EulerOracle) {
  const Rotation r = euler_to_rotation({30.0, 45.0, 60.0});
  const Mat3 expected{0.35355339059327376220, -0.35355339059327376220, 0.86602540378443864676,
                      0.91855865354369178682, 0.30618621784789726227,  -0.25,
                      -0.17677669529663688110, 0.88388347648318440550, 0.43301270189221932338};
  for (std::size_t i = 0; i < 9; ++i) EXPECT_NEAR(r.matrix()[i], expected[i], 1e-15) << i;
  EXPECT_LT(r.orthogonality_error(), 1e-15);
}

TEST(Geometry, AxisRotationsAreRightHanded) {
  const Vec3 y = axis_rotation(Axis::Z, 90.0).apply(Vec3{1, 0, 0});
  EXPECT_NEAR(y.y, 1.0, 1e-15);
  const Vec3 z = axis_rotation(Axis::X, 90.0).apply(Vec3{0, 1, 0});
  EXPECT_NEAR(z.z, 1.0, 1e-15);
  const Vec3 x = axis_rotation(Axis::Y, 90.0).apply(Vec3{0, 0, 1});
  EXPECT_NEAR(x.x, 1.0, 1e-15);
}

TEST(Geometry, FromMatrixValidates) {
  EXPECT_THROW(Rotation::from_matrix({1, 0, 0, 0, 1, 0, 0, 0, -1}), InvalidArgument);
  EXPECT_THROW(Rotation::from_matrix({2, 0, 0, 0, 1, 0, 0, 0, 1}), InvalidArgument);
  EXPECT_NO_THROW(Rotation::from_matrix(euler_to_rotation({10, 20, 30}).matrix()));
}

TEST(Geometry, ProcrustesRecoversRotation) {
  const Rotation r = euler_to_rotation({12.0, -40.0, 77.0});
  Mat3 m = r.matrix();
  for (double& v : m) v *= 3.0;
  const Rotation p = procrustes_so3(m);
  EXPECT_LT(frobenius_distance(p.matrix(), r.matrix()), 1e-12);
}

TEST(Geometry, ProcrustesReflectionGetsProperRotation) {
  const Rotation p = procrustes_so3({1, 0, 0, 0, 1, 0, 0, 0, -1});
  EXPECT_NEAR(p.determinant(), 1.0, 1e-12);
  EXPECT_LT(p.orthogonality_error(), 1e-12);
}

TEST(Geometry, ProcrustesRejectsRankOne) {
  EXPECT_THROW(procrustes_so3({1, 0, 0, 0, 0, 0, 0, 0, 0}), DegenerateInput);
  EXPECT_THROW(procrustes_so3({0, 0, 0, 0, 0, 0, 0, 0, 0}), DegenerateInput);
  EXPECT_NO_THROW(procrustes_so3({1, 0, 0, 0, 1, 0, 0, 0, 0}));
}

TEST(Geometry, LookAtHasMinimalRoll) {
  const UnitDirection f(0.5, -0.3, 0.8);
  const Rotation r = look_at(f);
  const Vec3 z = r.column(2);
  EXPECT_NEAR(z.x, f.x(), 1e-15);
  EXPECT_NEAR(z.y, f.y(), 1e-15);
  EXPECT_NEAR(z.z, f.z(), 1e-15);
  EXPECT_NEAR(r.column(0).y, 0.0, 1e-15);  // camera x stays horizontal
  EXPECT_GT(r.column(1).y, 0.0);
  EXPECT_LT(r.orthogonality_error(), 1e-12);
  EXPECT_NO_THROW(look_at(UnitDirection(0.0, 1.0, 0.0)));
}

TEST(Geometry, MinimalRotation) {
  const UnitDirection a(1, 0, 0);
  const UnitDirection b(0.0, 0.6, 0.8);
  const Rotation r = detail::minimal_rotation(a, b);
  EXPECT_NEAR(angular_distance(r.apply(a), b), 0.0, 1e-6);
  EXPECT_THROW(detail::minimal_rotation(a, UnitDirection(-1, 0, 0)), DegenerateInput);
}

}  // namespace
}  // namespace panotrack
