#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "panotrack/geometry.hpp"
#include "panotrack/image.hpp"
#include "panotrack/motion.hpp"

namespace panotrack {

/// 2D track in continuous pixel coordinates of some grid (perspective or equirect).
struct PointTrack2D {
  std::string id;
  std::vector<PixelCoord> points;
  /// Extra per-track fields of an imported file (confidence, visibility, ...),
  /// kept verbatim as serialized JSON and otherwise ignored.
  std::string passthrough;
};

/// Query pixels on the first frame. (u, v) are integer pixel indices
/// (column, row) of the mask the query was drawn from.
struct Query {
  int frame = 1;
  double u = 0.0;
  double v = 0.0;
  bool operator==(const Query&) const = default;
};

struct QuerySet {
  std::vector<Query> queries;
  /// True when the mask held fewer true pixels than requested.
  bool shortfall = false;
};

/// Uniform draw without replacement from the mask's true pixels.
/// Throws DegenerateInput for an empty mask.
QuerySet sample_queries(const BinaryMask& mask, int count, std::uint64_t seed);

/// Eq.-(1) style back-projection of each track point with its frame's intrinsics.
/// A single intrinsics entry applies to every frame.
std::vector<UnitDirection> track_to_directions(const PointTrack2D& track, std::span<const Intrinsics> k_seq);

/// Sum of Euclidean steps between consecutive points. With wrap_width > 0 the
/// x difference is taken modulo wrap_width into [-w/2, w/2) (equirect longitude).
double cumulative_length(const PointTrack2D& track, double wrap_width = 0.0);

/// Tracks with cumulative_length strictly above `threshold`, in input order.
std::vector<PointTrack2D> filter_tracks(std::span<const PointTrack2D> tracks, double threshold,
                                        double wrap_width = 0.0);

struct RetargetResult {
  std::vector<UnitDirection> directions;  // camera frame
  std::vector<std::uint8_t> in_frame;
};

RetargetResult retarget(std::span<const UnitDirection> world_dirs, const Trajectory& trajectory);

/// Equirect track -> world directions.
std::vector<UnitDirection> lift_equirect_track(const PointTrack2D& track, const EquirectGrid& grid);

struct DirectionTrack {
  std::string id;
  double query_u = 0.0;
  double query_v = 0.0;
  std::vector<UnitDirection> directions;
  std::vector<std::uint8_t> in_frame;
  std::string passthrough;
};

/// Ground-truth (or predicted) camera-frame direction tracks of one clip.
struct DirectionTrackSet {
  std::string clip_id;
  int frames = 0;
  int width = 0;
  int height = 0;
  std::vector<Intrinsics> intrinsics;
  std::string trajectory_ref;
  std::string motion_kind;
  std::string category;
  std::vector<DirectionTrack> tracks;

  /// Unit norms within 1e-9 and per-track lengths equal to `frames`.
  void validate() const;
  std::size_t in_frame_count() const;
  std::size_t out_of_frame_count() const;
};

}  // namespace panotrack
