#include "panotrack/tracks.hpp"

#include <cmath>

#include "panotrack/error.hpp"
#include "panotrack/random.hpp"

namespace panotrack {

namespace {
constexpr std::uint64_t kStreamQuerySample = 100;
}

QuerySet sample_queries(const BinaryMask& mask, int count, std::uint64_t seed) {
  if (count < 0) throw InvalidArgument("query count must be non-negative");
  std::vector<std::size_t> pool;
  const auto bits = mask.bits();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) pool.push_back(i);
  }
  if (pool.empty()) throw DegenerateInput("cannot sample queries from an empty mask");
  const std::size_t take = std::min(pool.size(), static_cast<std::size_t>(count));
  const KeyedRng rng(seed);
  // Partial Fisher-Yates; draw i is keyed by i so the result is reproducible.
  for (std::size_t i = 0; i < take; ++i) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(pool.size()) - 1, i, kStreamQuerySample));
    std::swap(pool[i], pool[j]);
  }
  QuerySet set;
  set.shortfall = take < static_cast<std::size_t>(count);
  set.queries.reserve(take);
  const auto w = static_cast<std::size_t>(mask.width());
  for (std::size_t i = 0; i < take; ++i) {
    set.queries.push_back({1, static_cast<double>(pool[i] % w), static_cast<double>(pool[i] / w)});
  }
  return set;
}

std::vector<UnitDirection> track_to_directions(const PointTrack2D& track, std::span<const Intrinsics> k_seq) {
  if (k_seq.size() != 1 && k_seq.size() != track.points.size()) {
    throw InvalidArgument("track '" + track.id + "': intrinsics count does not match track length");
  }
  std::vector<UnitDirection> out;
  out.reserve(track.points.size());
  for (std::size_t t = 0; t < track.points.size(); ++t) {
    out.push_back(pixel_to_direction(track.points[t], k_seq.size() == 1 ? k_seq[0] : k_seq[t]));
  }
  return out;
}

double cumulative_length(const PointTrack2D& track, double wrap_width) {
  if (track.points.size() < 2) throw InvalidArgument("track '" + track.id + "': cumulative length needs >= 2 points");
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < track.points.size(); ++t) {
    double dx = track.points[t + 1].x - track.points[t].x;
    const double dy = track.points[t + 1].y - track.points[t].y;
    if (wrap_width > 0.0) {
      dx = std::fmod(dx + 0.5 * wrap_width, wrap_width);
      if (dx < 0.0) dx += wrap_width;
      dx -= 0.5 * wrap_width;
    }
    total += std::hypot(dx, dy);
  }
  return total;
}

std::vector<PointTrack2D> filter_tracks(std::span<const PointTrack2D> tracks, double threshold, double wrap_width) {
  std::vector<PointTrack2D> kept;
  for (const auto& t : tracks) {
    if (cumulative_length(t, wrap_width) > threshold) kept.push_back(t);
  }
  return kept;
}

RetargetResult retarget(std::span<const UnitDirection> world_dirs, const Trajectory& trajectory) {
  if (world_dirs.size() != trajectory.size() || trajectory.intrinsics.size() != trajectory.size()) {
    throw InvalidArgument("retarget: track length " + std::to_string(world_dirs.size()) +
                          " does not match trajectory length " + std::to_string(trajectory.size()));
  }
  RetargetResult out;
  out.directions.reserve(world_dirs.size());
  out.in_frame.reserve(world_dirs.size());
  for (std::size_t t = 0; t < world_dirs.size(); ++t) {
    const UnitDirection cam = rotate_world_to_camera(world_dirs[t], trajectory.rotations[t]);
    const Projection p = direction_to_pixel(cam, trajectory.intrinsics[t]);
    out.directions.push_back(cam);
    out.in_frame.push_back(p.in_front && inside_image(p.pixel, trajectory.intrinsics[t]) ? 1 : 0);
  }
  return out;
}

std::vector<UnitDirection> lift_equirect_track(const PointTrack2D& track, const EquirectGrid& grid) {
  std::vector<UnitDirection> out;
  out.reserve(track.points.size());
  for (const auto& p : track.points) out.push_back(equirect_to_direction({p.x, p.y}, grid));
  return out;
}

void DirectionTrackSet::validate() const {
  if (frames < 1) throw InvalidArgument("track set '" + clip_id + "': frame count must be positive");
  for (const auto& t : tracks) {
    if (t.directions.size() != static_cast<std::size_t>(frames) || t.in_frame.size() != static_cast<std::size_t>(frames)) {
      throw InvalidArgument("track '" + t.id + "' of clip '" + clip_id + "' does not span " + std::to_string(frames) +
                            " frames");
    }
    for (const auto& d : t.directions) {
      if (std::abs(norm(d.vec()) - 1.0) > 1e-9) {
        throw InvalidArgument("track '" + t.id + "' of clip '" + clip_id + "' has a non-unit direction");
      }
    }
  }
}

std::size_t DirectionTrackSet::in_frame_count() const {
  std::size_t n = 0;
  for (const auto& t : tracks) {
    for (auto f : t.in_frame) n += f ? 1 : 0;
  }
  return n;
}

std::size_t DirectionTrackSet::out_of_frame_count() const {
  std::size_t n = 0;
  for (const auto& t : tracks) {
    for (auto f : t.in_frame) n += f ? 0 : 1;
  }
  return n;
}

}  // namespace panotrack
