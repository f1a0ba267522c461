#include <gtest/gtest.h>

#include <cmath>

#include "panotrack/error.hpp"
#include "panotrack/metrics.hpp"

namespace panotrack {
namespace {

DirectionTrackSet make_set(const std::string& clip, const std::vector<UnitDirection>& dirs,
                           const std::vector<std::uint8_t>& in_frame, const std::string& motion = "static") {
  DirectionTrackSet s;
  s.clip_id = clip;
  s.frames = static_cast<int>(dirs.size());
  s.motion_kind = motion;
  s.category = "cat";
  s.tracks.push_back({"t0", 0, 0, dirs, in_frame, {}});
  return s;
}

UnitDirection tilted(double deg) { return UnitDirection(std::sin(deg2rad(deg)), 0.0, std::cos(deg2rad(deg))); }

TEST(Metrics, ThresholdLadder) {
  const ThresholdConfig cfg;
  const auto t = cfg.thresholds();
  const std::vector<double> expected{0.2755, 0.5510, 1.1020, 2.2040, 4.4080};
  ASSERT_EQ(t.size(), expected.size());
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(t[i], expected[i], 1e-12);
}

TEST(Metrics, UniformOffsetGivesSixTenths) {
  const ThresholdConfig cfg;
  const double offset = 3.0 * cfg.degrees_per_pixel;
  const auto gt = make_set("c", {UnitDirection(), UnitDirection()}, {1, 0});
  const auto pred = make_set("c", {tilted(offset), tilted(offset)}, {1, 1});
  const auto d = delta_accuracy(pred, gt, cfg, Split::All);
  ASSERT_TRUE(d);
  EXPECT_EQ(d->average, 0.6);
  EXPECT_NEAR(*mean_angular_distance(pred, gt, Split::All), offset, 1e-12);
}

TEST(Metrics, EmptySplitIsAbsent) {
  const auto gt = make_set("c", {UnitDirection()}, {1});
  EXPECT_FALSE(delta_accuracy(gt, gt, ThresholdConfig{}, Split::OutOfFrame));
  EXPECT_FALSE(mean_angular_distance(gt, gt, Split::OutOfFrame));
  EXPECT_EQ(delta_accuracy(gt, gt, ThresholdConfig{}, Split::InFrame)->average, 1.0);
}

TEST(Metrics, SplitsUseGroundTruthFlags) {
  const auto gt = make_set("c", {UnitDirection(), UnitDirection()}, {1, 0});
  const auto pred = make_set("c", {UnitDirection(), tilted(90)}, {0, 1});
  EXPECT_EQ(delta_accuracy(pred, gt, ThresholdConfig{}, Split::InFrame)->average, 1.0);
  EXPECT_EQ(delta_accuracy(pred, gt, ThresholdConfig{}, Split::OutOfFrame)->average, 0.0);
}

TEST(Metrics, MissingTracksThrow) {
  auto gt = make_set("c", {UnitDirection()}, {1});
  auto pred = gt;
  pred.tracks[0].id = "other";
  EXPECT_THROW(accumulate_clip(pred, gt, ThresholdConfig{}), InvalidArgument);
  EXPECT_THROW(evaluate(std::vector<DirectionTrackSet>{}, std::vector<DirectionTrackSet>{gt}, ThresholdConfig{}),
               InvalidArgument);
}

TEST(Metrics, ConfigValidation) {
  ThresholdConfig c;
  c.multipliers = {2, 1};
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = ThresholdConfig{};
  c.degrees_per_pixel = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(Metrics, PerClipHeadlineAndGroups) {
  const auto g1 = make_set("a", {UnitDirection(), UnitDirection()}, {1, 1}, "spin_y");
  const auto g2 = make_set("b", {UnitDirection(), UnitDirection()}, {1, 0}, "static");
  auto p2 = g2;
  p2.tracks[0].directions[1] = tilted(90);
  const std::vector<DirectionTrackSet> gt{g1, g2};
  const std::vector<DirectionTrackSet> pred{p2, g1};
  const EvalReport r = evaluate(pred, gt, ThresholdConfig{});
  ASSERT_EQ(r.clips.size(), 2u);
  const auto& all = r.overall.splits[0];
  EXPECT_DOUBLE_EQ(*all.delta_avg.mean, 0.75);
  EXPECT_DOUBLE_EQ(*all.delta_avg.std, 0.25);
  EXPECT_DOUBLE_EQ(*all.pooled.delta_avg, 0.75);
  EXPECT_EQ(r.by_motion.size(), 2u);
  EXPECT_EQ(r.by_motion.at("spin_y").clips, 1u);
  EXPECT_NE(render_table(r).find("spin_y"), std::string::npos);
}

}  // namespace
}  // namespace panotrack
