#include <gtest/gtest.h>

#include "panotrack/error.hpp"
#include "panotrack/pipeline.hpp"
#include "panotrack/synth.hpp"
#include "test_util.hpp"

namespace panotrack {
namespace {

SourceClip synth_clip(const std::string& preset, int frames, bool with_tracks, bool with_masks) {
  SceneSpec spec = SceneSpec::preset(preset);
  spec.grid = {1024, 512};
  spec.frames = frames;
  SynthOutput out = render_scene(spec);
  SourceClip clip;
  clip.clip_id = "clip";
  clip.category = "synthetic";
  clip.source_ref = "synth";
  if (with_tracks) clip.tracks = synth_imported_tracks(out, spec.grid);
  if (with_masks) clip.masks = out.masks[0];
  clip.frames = std::move(out.frames);
  return clip;
}

PipelineConfig small_config(int frames) {
  PipelineConfig c;
  c.width = 64;
  c.height = 64;
  c.frames = frames;
  c.num_queries = 16;
  return c;
}

TEST(Pipeline, SubsampleIndices) {
  EXPECT_EQ(subsample_indices(10, 4), (std::vector<int>{0, 3, 6, 9}));
  EXPECT_EQ(subsample_indices(4, 4), (std::vector<int>{0, 1, 2, 3}));
  EXPECT_THROW(subsample_indices(3, 4), InvalidArgument);
}

TEST(Pipeline, ImportedTracksProduceGroundTruth) {
  const SourceClip clip = synth_clip("single-marker", 8, true, false);
  const DatasetSample s = assemble_sample(clip, MotionSpec::defaults(MotionKind::SpinY), small_config(8), 3);
  EXPECT_EQ(s.frames.size(), 8u);
  EXPECT_EQ(s.tracks.tracks.size(), 9u);
  EXPECT_EQ(s.tracks.motion_kind, "spin_y");
  EXPECT_NO_THROW(s.tracks.validate());
  EXPECT_EQ(s.tracks.tracks[0].passthrough, "{\"marker\":0}");
}

TEST(Pipeline, MasksOnlyUsesPropagatedQueries) {
  SourceClip clip = synth_clip("single-marker", 8, false, true);
  PipelineConfig cfg = small_config(8);
  // A rigid marker stays centred in its object-centred crop, so nothing would pass the length filter.
  EXPECT_THROW(assemble_sample(clip, MotionSpec{}, cfg, 5), PipelineError);
  cfg.length_threshold = -1.0;
  const DatasetSample s = assemble_sample(clip, MotionSpec{}, cfg, 5);
  EXPECT_FALSE(s.tracks.tracks.empty());
  EXPECT_LE(s.tracks.tracks.size(), 16u);
  EXPECT_EQ(s.tracks.tracks[0].id.front(), 'q');
}

TEST(Pipeline, QuerySubsetKeepsInputOrder) {
  const SourceClip clip = synth_clip("single-marker", 4, true, false);
  PipelineConfig cfg = small_config(4);
  cfg.num_queries = 3;
  const DatasetSample s = assemble_sample(clip, MotionSpec{}, cfg, 11);
  ASSERT_EQ(s.tracks.tracks.size(), 3u);
  EXPECT_LT(s.tracks.tracks[0].id, s.tracks.tracks[1].id);
  EXPECT_LT(s.tracks.tracks[1].id, s.tracks.tracks[2].id);
}

TEST(Pipeline, StaticTracksFailTheFilterStage) {
  const SourceClip clip = synth_clip("static", 4, true, false);
  try {
    assemble_sample(clip, MotionSpec{}, small_config(4), 1);
    FAIL();
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage(), "filter");
  }
  PipelineConfig keep = small_config(4);
  keep.length_threshold = -1.0;
  EXPECT_NO_THROW(assemble_sample(clip, MotionSpec{}, keep, 1));
}

TEST(Pipeline, InputErrorsAreLabelled) {
  SourceClip clip = synth_clip("single-marker", 4, true, false);
  try {
    assemble_sample(clip, MotionSpec{}, small_config(8), 1);
    FAIL();
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage(), "input");
  }
  clip.tracks.reset();
  EXPECT_THROW(assemble_sample(clip, MotionSpec{}, small_config(4), 1), PipelineError);
}

TEST(Pipeline, WriteSampleLayout) {
  const SourceClip clip = synth_clip("single-marker", 4, true, false);
  const DatasetSample s = assemble_sample(clip, MotionSpec{}, small_config(4), 2);
  const test::TempDir dir("pipe");
  write_sample(s, dir.path());
  for (const char* f : {"tracks.json", "trajectory.json", "sample.json", "frames/frame_00003.png"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.path() / f)) << f;
  }
  const DirectionTrackSet back = read_track_set(dir.path() / "tracks.json");
  EXPECT_EQ(back.tracks.size(), s.tracks.tracks.size());
}

}  // namespace
}  // namespace panotrack
