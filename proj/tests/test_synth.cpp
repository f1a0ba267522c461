#include <gtest/gtest.h>

#include "panotrack/error.hpp"
#include "panotrack/synth.hpp"
#include "test_util.hpp"

namespace panotrack {
namespace {

SceneSpec small_scene(const std::string& preset) {
  SceneSpec s = SceneSpec::preset(preset);
  s.grid = {256, 128};
  s.frames = 6;
  return s;
}

TEST(Synth, GreatCircleStaysOnItsCircle) {
  MarkerSpec m;
  m.path = PathKind::GreatCircle;
  m.speed_deg = 10.0;
  const UnitDirection d0 = marker_direction(m, 0.0);
  for (int t = 1; t < 5; ++t) {
    EXPECT_NEAR(angular_distance(d0, marker_direction(m, t)), 10.0 * t, 1e-9);
  }
}

TEST(Synth, SmallCircleKeepsLatitude) {
  MarkerSpec m;
  m.path = PathKind::SmallCircle;
  m.lat_deg = 20.0;
  for (int t = 0; t < 5; ++t) EXPECT_NEAR(rad2deg(latitude(marker_direction(m, t))), 20.0, 1e-9);
}

TEST(Synth, StaticNeverMoves) {
  MarkerSpec m;
  m.path = PathKind::Static;
  EXPECT_EQ(marker_direction(m, 0.0), marker_direction(m, 17.0));
}

TEST(Synth, RenderedMarkerMatchesMask) {
  const SceneSpec spec = small_scene("single-marker");
  const SynthOutput out = render_scene(spec, 2);
  ASSERT_EQ(out.frames.size(), 6u);
  ASSERT_EQ(out.masks.size(), 1u);
  for (std::size_t t = 0; t < out.frames.size(); ++t) {
    const EquirectCoord c = direction_to_equirect(out.marker_directions[0][t], spec.grid);
    const int u = static_cast<int>(std::lround(c.u)) % spec.grid.width;
    const int v = static_cast<int>(std::lround(c.v));
    EXPECT_TRUE(out.masks[0][t].get(u, v));
    const std::uint8_t* p = out.frames[t].pixel(u, v);
    EXPECT_EQ(p[0], 230);
    EXPECT_EQ(p[1], 40);
  }
  EXPECT_EQ(out.tracks.size(), 1u + static_cast<std::size_t>(spec.track_points));
  EXPECT_EQ(out.tracks[0].directions, out.marker_directions[0]);
}

TEST(Synth, ThreadCountDoesNotChangeFrames) {
  const SceneSpec spec = small_scene("lissajous");
  EXPECT_EQ(render_scene(spec, 1).frames, render_scene(spec, 4).frames);
}

TEST(Synth, ImportedTracksLiftBack) {
  const SceneSpec spec = small_scene("great-circle");
  const SynthOutput out = render_scene(spec);
  const ImportedTracks imp = synth_imported_tracks(out, spec.grid);
  ASSERT_EQ(imp.tracks.size(), out.tracks.size());
  const auto dirs = lift_equirect_track(imp.tracks[3], spec.grid);
  for (std::size_t t = 0; t < dirs.size(); ++t) {
    EXPECT_LT(angular_distance(dirs[t], out.tracks[3].directions[t]), 1e-9);
  }
}

TEST(Synth, WritesLayout) {
  const test::TempDir dir("synth");
  const SceneSpec spec = small_scene("static");
  write_synth(render_scene(spec), spec, dir.path());
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "frames" / "frame_00005.png"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "masks" / "marker_00" / "frame_00000.png"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "tracks.json"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "analytic.json"));
}

TEST(Synth, PresetsAndValidation) {
  EXPECT_THROW(SceneSpec::preset("nebula"), InvalidArgument);
  SceneSpec s = SceneSpec::preset("static");
  s.frames = 0;
  EXPECT_THROW(s.validate(), InvalidArgument);
  EXPECT_THROW(parse_path_kind("zigzag"), InvalidArgument);
}

}  // namespace
}  // namespace panotrack
