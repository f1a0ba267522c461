#pragma once

// Dataset sample assembly: source clip + masks or 2D tracks -> world direction
// tracks -> new camera trajectory -> retargeted ground truth and rendered
// perspective frames.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "panotrack/config.hpp"
#include "panotrack/image.hpp"
#include "panotrack/io.hpp"
#include "panotrack/motion.hpp"
#include "panotrack/tracks.hpp"

namespace panotrack {

/// One equirectangular clip with its annotations. Masks and track points,
/// when given, cover the same frames as `frames`.
struct SourceClip {
  std::string clip_id;
  std::string category;
  std::string source_ref;
  std::vector<EquirectFrame> frames;
  std::vector<BinaryMask> masks;
  std::optional<ImportedTracks> tracks;
};

struct DatasetSample {
  std::string source_ref;
  std::vector<int> source_frames;  // indices into the source clip
  MotionSpec motion;
  std::uint64_t seed = 0;
  Trajectory trajectory;
  DirectionTrackSet tracks;
  std::vector<PerspectiveFrame> frames;
};

/// `count` frame indices spread evenly over [0, total), both ends included.
/// Throws InvalidArgument when total < count.
std::vector<int> subsample_indices(int total, int count);

/// Rigid propagation of first-frame query directions along the mask centroid
/// path: the minimal rotation taking c_0 to c_t moves every point. Returns
/// 2D tracks in the object-centred crops; points that fall behind a crop
/// camera end their track and are dropped.
std::vector<PointTrack2D> propagate_queries(const QuerySet& queries, const Trajectory& centred);

/// Runs the full chain. Errors are rethrown as PipelineError labelled with
/// the stage: input, centre, query, track, filter, trajectory, retarget, render.
DatasetSample assemble_sample(const SourceClip& clip, const MotionSpec& motion, const PipelineConfig& config,
                              std::uint64_t seed);

/// frames/frame_%05d.png, tracks.json, trajectory.json, sample.json.
void write_sample(const DatasetSample& sample, const std::filesystem::path& dir);

}  // namespace panotrack
