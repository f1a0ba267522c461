#include <gtest/gtest.h>

#include <cmath>

#include "panotrack/error.hpp"
#include "panotrack/motion.hpp"

namespace panotrack {
namespace {

const Intrinsics kK = Intrinsics::from_fov(64, 64, 70.528);

Rotation compose_all(const std::vector<EulerAngles>& deltas) {
  Rotation r;
  for (const auto& d : deltas) r = r * euler_to_rotation(d);
  return r;
}

TEST(Motion, KindNames) {
  for (MotionKind k : all_motion_kinds()) EXPECT_EQ(parse_motion_kind(to_string(k)), k);
  EXPECT_THROW(parse_motion_kind("wobble"), InvalidArgument);
}

TEST(Motion, StaticIsIdentity) {
  MotionSpec s;
  const auto rs = generate_rotations(s, 5, euler_to_rotation({1, 2, 3}));
  for (const auto& r : rs) EXPECT_EQ(r, rs.front());
}

TEST(Motion, SpinClosesFullTurn) {
  for (MotionKind kind : {MotionKind::SpinX, MotionKind::SpinY, MotionKind::SpinZ}) {
    MotionSpec s = MotionSpec::defaults(kind);
    s.spin_noise = 0.0;
    const auto deltas = motion_deltas(s, 32);
    EXPECT_LT(frobenius_distance(compose_all(deltas).matrix(), Rotation::identity().matrix()), 1e-7);
  }
}

TEST(Motion, SpinYIsYawOnly) {
  MotionSpec s = MotionSpec::defaults(MotionKind::SpinY);
  s.seed = 4;
  for (const auto& d : motion_deltas(s, 16)) {
    EXPECT_EQ(d.pitch, 0.0);
    EXPECT_EQ(d.roll, 0.0);
    EXPECT_GT(d.yaw, 0.0);
  }
}

TEST(Motion, NoisySpinStepsSumTo360) {
  MotionSpec s = MotionSpec::defaults(MotionKind::SpinX);
  s.spin_noise = 1.0;
  s.seed = 77;
  double sum = 0.0;
  for (const auto& d : motion_deltas(s, 50)) sum += d.pitch;
  EXPECT_NEAR(sum, 360.0, 1e-9);
}

TEST(Motion, SpiralFormula) {
  MotionSpec s = MotionSpec::defaults(MotionKind::Spiral);
  s.theta_min = 10.0;
  s.theta_max = 1000.0;
  const int n = 20;
  const auto deltas = motion_deltas(s, n);
  for (int i = 0; i < n; ++i) {
    double a = std::fmod(i * (s.theta_max - s.theta_min) / n, 360.0);
    if (a < 0) a += 360.0;
    EXPECT_EQ(deltas[static_cast<std::size_t>(i)].pitch, a);
    EXPECT_EQ(deltas[static_cast<std::size_t>(i)].yaw, a);
    EXPECT_EQ(deltas[static_cast<std::size_t>(i)].roll, 0.0);
  }
}

TEST(Motion, RandomDrawsIntegersInRange) {
  MotionSpec s = MotionSpec::defaults(MotionKind::Random);
  s.seed = 3;
  for (const auto& d : motion_deltas(s, 40)) {
    for (double v : {d.pitch, d.roll, d.yaw}) {
      EXPECT_EQ(v, std::round(v));
      EXPECT_GE(v, -2.0);
      EXPECT_LE(v, 2.0);
    }
  }
}

TEST(Motion, HumanParamsWithinLimits) {
  MotionSpec s = MotionSpec::defaults(MotionKind::Human);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    s.seed = seed;
    const HumanMotionParams p = sample_human_params(s);
    EXPECT_LE(p.amplitude_roll, 1.5);
    EXPECT_LE(std::abs(p.drift_pitch), 0.2);
    EXPECT_GE(p.omega, 0.1);
    EXPECT_LE(p.omega, 0.5);
  }
  s.human.noise_roll = s.human.noise_pitch = s.human.noise_yaw = 0.0;
  s.seed = 1;
  const HumanMotionParams p = sample_human_params(s);
  const auto deltas = motion_deltas(s, 10);
  for (int i = 0; i < 10; ++i) {
    const EulerAngles e = human_oscillation(p, i);
    EXPECT_DOUBLE_EQ(deltas[static_cast<std::size_t>(i)].pitch, e.pitch);
    EXPECT_DOUBLE_EQ(deltas[static_cast<std::size_t>(i)].yaw, e.yaw);
  }
}

TEST(Motion, SameSeedSameTrajectory) {
  MotionSpec s = MotionSpec::defaults(MotionKind::Human);
  s.seed = 99;
  EXPECT_EQ(generate_rotations(s, 30, Rotation{}), generate_rotations(s, 30, Rotation{}));
  MotionSpec t = s;
  t.seed = 100;
  EXPECT_NE(generate_rotations(s, 30, Rotation{}), generate_rotations(t, 30, Rotation{}));
}

TEST(Motion, LongTrajectoriesStayOrthonormal) {
  MotionSpec s = MotionSpec::defaults(MotionKind::Random);
  s.seed = 5;
  const Trajectory t = generate(s, 500, Rotation{}, kK);
  for (const auto& r : t.rotations) ASSERT_LT(r.orthogonality_error(), 1e-9);
  EXPECT_NO_THROW(t.validate());
}

TEST(Motion, Validation) {
  MotionSpec s;
  s.theta_min = 3;
  s.theta_max = 1;
  EXPECT_THROW(s.validate(), InvalidArgument);
  s = MotionSpec{};
  s.spin_noise = 1.5;
  EXPECT_THROW(s.validate(), InvalidArgument);
  EXPECT_THROW(generate_rotations(MotionSpec{}, 1, Rotation{}), InvalidArgument);
}

TEST(Btf, WindowLengthsAreEvenAndFit) {
  for (int n : {8, 32, 33}) {
    for (int k : btf_window_lengths(n)) {
      EXPECT_EQ(k % 2, 0);
      EXPECT_LE(k, n);
    }
    const BtfWindow w = sample_btf_window(n, 7);
    EXPECT_EQ(w.end - w.start, w.length);
    EXPECT_GE(w.start, 0);
    EXPECT_LE(w.end, n);
  }
}

TEST(Btf, OutsideUntouchedInsidePalindrome) {
  MotionSpec inner = MotionSpec::defaults(MotionKind::Random);
  inner.seed = 8;
  MotionSpec base_spec = MotionSpec::defaults(MotionKind::Human);
  base_spec.seed = 2;
  const Trajectory base = generate(base_spec, 32, Rotation{}, kK);
  const std::uint64_t seed = 12;
  const BtfWindow w = sample_btf_window(32, seed);
  const Trajectory t = apply_btf(base, inner, seed);
  ASSERT_EQ(t.size(), base.size());
  for (int i = 0; i < 32; ++i) {
    if (i < w.start || i >= w.end) {
      EXPECT_EQ(t.rotations[static_cast<std::size_t>(i)], base.rotations[static_cast<std::size_t>(i)]) << i;
    }
  }
  for (int j = 0; j < w.length / 2; ++j) {
    EXPECT_EQ(t.rotations[static_cast<std::size_t>(w.start + j)], t.rotations[static_cast<std::size_t>(w.end - 1 - j)]);
  }
  EXPECT_EQ(t.rotations[static_cast<std::size_t>(w.start)], base.rotations[static_cast<std::size_t>(w.start)]);
}

TEST(ObjectCentered, LooksAtMaskCentroid) {
  const EquirectGrid grid{64, 32};
  BinaryMask m(64, 32);
  for (int y = 14; y < 18; ++y) {
    for (int x = 40; x < 44; ++x) m.set(x, y, true);
  }
  const UnitDirection c = spherical_centroid(m, grid);
  const Trajectory t = object_centered(std::vector<BinaryMask>{m, m}, grid, kK);
  const Vec3 z = t.rotations[0].column(2);
  EXPECT_NEAR(angular_distance(UnitDirection(z), c), 0.0, 1e-9);
  EXPECT_THROW(spherical_centroid(BinaryMask(64, 32), grid), DegenerateInput);
}

}  // namespace
}  // namespace panotrack
