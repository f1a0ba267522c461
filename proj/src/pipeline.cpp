#include "panotrack/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "panotrack/error.hpp"
#include "panotrack/parallel.hpp"
#include "panotrack/random.hpp"
#include "panotrack/resample.hpp"

namespace panotrack {

namespace {

constexpr std::uint64_t kStreamQuerySeed = 100;
constexpr std::uint64_t kStreamTrackSubset = 101;

template <typename Fn>
auto run_stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what());
  }
}

struct WorldTrack {
  std::string id;
  double query_u = 0.0;
  double query_v = 0.0;
  std::vector<UnitDirection> directions;
  std::string passthrough;
};

template <typename T>
std::vector<T> pick(const std::vector<T>& all, const std::vector<int>& idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(all[static_cast<std::size_t>(i)]);
  return out;
}

// Keeps at most `limit` entries, drawn without replacement, in input order.
std::vector<std::size_t> choose_subset(std::size_t total, std::size_t limit, std::uint64_t seed) {
  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  if (total <= limit) return order;
  const KeyedRng rng(seed);
  for (std::size_t i = 0; i < limit; ++i) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(total) - 1, i, kStreamTrackSubset));
    std::swap(order[i], order[j]);
  }
  order.resize(limit);
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<PointTrack2D> length_filter(const std::vector<PointTrack2D>& tracks, double threshold, double wrap) {
  if (threshold < 0.0) return tracks;
  std::vector<PointTrack2D> kept = run_stage("filter", [&] { return filter_tracks(tracks, threshold, wrap); });
  if (kept.empty()) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "no track exceeds the cumulative length threshold of %g px", threshold);
    throw PipelineError("filter", buf);
  }
  return kept;
}

std::vector<WorldTrack> imported_world_tracks(const ImportedTracks& in, const std::vector<int>& idx,
                                              const PipelineConfig& cfg, std::uint64_t seed) {
  std::vector<PointTrack2D> sub;
  for (const auto& t : in.tracks) sub.push_back({t.id, pick(t.points, idx), t.passthrough});
  const bool equirect = in.kind == GridKind::Equirect;
  const std::vector<PointTrack2D> kept =
      length_filter(sub, cfg.length_threshold, equirect ? static_cast<double>(in.equirect.width) : 0.0);

  return run_stage("track", [&] {
    std::vector<Intrinsics> ks;
    std::vector<Rotation> rs;
    if (!equirect) {
      ks = in.intrinsics.size() == 1 ? in.intrinsics : pick(in.intrinsics, idx);
      if (!in.rotations.empty()) rs = pick(in.rotations, idx);
    }
    std::vector<WorldTrack> out;
    for (std::size_t i : choose_subset(kept.size(), static_cast<std::size_t>(cfg.num_queries), seed)) {
      const PointTrack2D& t = kept[i];
      WorldTrack w{t.id, t.points.front().x, t.points.front().y, {}, t.passthrough};
      if (equirect) {
        w.directions = lift_equirect_track(t, in.equirect);
      } else {
        w.directions = track_to_directions(t, ks);
        if (!rs.empty()) {
          for (std::size_t f = 0; f < w.directions.size(); ++f) w.directions[f] = rs[f].apply(w.directions[f]);
        }
      }
      out.push_back(std::move(w));
    }
    return out;
  });
}

}  // namespace

std::vector<int> subsample_indices(int total, int count) {
  if (count < 1) throw InvalidArgument("subsample count must be positive");
  if (total < count) {
    throw InvalidArgument("clip has " + std::to_string(total) + " frames, " + std::to_string(count) + " are required");
  }
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(count));
  if (count == 1) return {0};
  for (int i = 0; i < count; ++i) {
    idx.push_back(static_cast<int>(std::llround(static_cast<double>(i) * (total - 1) / (count - 1))));
  }
  return idx;
}

std::vector<PointTrack2D> propagate_queries(const QuerySet& queries, const Trajectory& centred) {
  const std::size_t n = centred.size();
  if (n == 0) throw InvalidArgument("propagate_queries: empty trajectory");
  const UnitDirection c0(centred.rotations[0].column(2));
  std::vector<Rotation> motion;
  motion.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    motion.push_back(detail::minimal_rotation(c0, UnitDirection(centred.rotations[t].column(2))));
  }
  std::vector<PointTrack2D> out;
  for (std::size_t q = 0; q < queries.queries.size(); ++q) {
    const Query& query = queries.queries[q];
    const UnitDirection cam0 =
        pixel_to_direction(pixel_center(static_cast<int>(query.u), static_cast<int>(query.v)), centred.intrinsics[0]);
    const UnitDirection world0 = rotate_camera_to_world(cam0, centred.rotations[0]);
    char id[16];
    std::snprintf(id, sizeof(id), "q%04d", static_cast<int>(q));
    PointTrack2D track{id, {}, {}};
    bool visible = true;
    for (std::size_t t = 0; t < n && visible; ++t) {
      const UnitDirection cam = rotate_world_to_camera(motion[t].apply(world0), centred.rotations[t]);
      const Projection p = direction_to_pixel(cam, centred.intrinsics[t]);
      visible = p.in_front;
      track.points.push_back(p.pixel);
    }
    if (visible) out.push_back(std::move(track));
  }
  return out;
}

DatasetSample assemble_sample(const SourceClip& clip, const MotionSpec& motion, const PipelineConfig& config,
                              std::uint64_t seed) {
  const int T = config.frames;
  const auto idx = run_stage("input", [&] {
    config.validate();
    motion.validate();
    const int length = static_cast<int>(clip.frames.size());
    if (length == 0) throw InvalidArgument("clip '" + clip.clip_id + "' has no frames");
    for (const auto& f : clip.frames) {
      if (f.grid() != clip.frames.front().grid()) throw InvalidArgument("clip frames differ in size");
    }
    clip.frames.front().grid().validate();
    if (!clip.masks.empty() && static_cast<int>(clip.masks.size()) != length) {
      throw InvalidArgument("clip has " + std::to_string(length) + " frames but " + std::to_string(clip.masks.size()) +
                            " masks");
    }
    if (clip.tracks && clip.tracks->frames() != length) {
      throw InvalidArgument("clip has " + std::to_string(length) + " frames but tracks span " +
                            std::to_string(clip.tracks->frames()));
    }
    if (clip.masks.empty() && !clip.tracks) throw InvalidArgument("either masks or tracks are required");
    return subsample_indices(length, T);
  });

  const EquirectGrid grid = clip.frames.front().grid();
  const Intrinsics k = config.intrinsics();
  const int threads = resolve_thread_count(config.threads);

  std::optional<Trajectory> centred;
  if (!clip.masks.empty()) {
    centred = run_stage("centre", [&] {
      const std::vector<BinaryMask> masks = pick(clip.masks, idx);
      return object_centered(masks, grid, k);
    });
  }

  const KeyedRng keys(seed);
  std::vector<WorldTrack> world;
  if (clip.tracks) {
    world = imported_world_tracks(*clip.tracks, idx, config, keys.derive(0, kStreamTrackSubset));
  } else {
    const QuerySet queries = run_stage("query", [&] {
      const BinaryMask first = project_mask(clip.masks[static_cast<std::size_t>(idx.front())], centred->rotations[0], k, threads);
      return sample_queries(first, config.num_queries, keys.derive(0, kStreamQuerySeed));
    });
    const std::vector<PointTrack2D> tracks2d = run_stage("track", [&] {
      std::vector<PointTrack2D> t = propagate_queries(queries, *centred);
      if (t.empty()) throw DegenerateInput("every query left the object-centred view");
      return t;
    });
    const std::vector<PointTrack2D> kept = length_filter(tracks2d, config.length_threshold, 0.0);
    world = run_stage("track", [&] {
      std::vector<WorldTrack> out;
      for (const auto& t : kept) {
        const std::size_t q = static_cast<std::size_t>(std::stoul(t.id.substr(1)));
        WorldTrack w{t.id, queries.queries[q].u, queries.queries[q].v, track_to_directions(t, centred->intrinsics), {}};
        for (std::size_t f = 0; f < w.directions.size(); ++f) {
          w.directions[f] = rotate_camera_to_world(w.directions[f], centred->rotations[f]);
        }
        out.push_back(std::move(w));
      }
      return out;
    });
  }

  DatasetSample sample;
  sample.source_ref = clip.source_ref;
  sample.source_frames = idx;
  sample.motion = motion;
  sample.seed = seed;
  sample.trajectory = run_stage("trajectory", [&] {
    Rotation r0;
    if (centred) {
      r0 = centred->rotations[0];
    } else {
      Vec3 mean;
      for (const auto& w : world) mean += w.directions.front().vec();
      if (norm(mean) > 1e-6 * static_cast<double>(world.size())) r0 = look_at(UnitDirection(mean));
    }
    return generate(motion, T, r0, k);
  });

  sample.tracks = run_stage("retarget", [&] {
    DirectionTrackSet set;
    set.clip_id = clip.clip_id;
    set.frames = T;
    set.width = k.width;
    set.height = k.height;
    set.intrinsics = {k};
    set.trajectory_ref = "trajectory.json";
    set.motion_kind = std::string(to_string(motion.kind));
    set.category = clip.category;
    for (const auto& w : world) {
      RetargetResult r = retarget(w.directions, sample.trajectory);
      set.tracks.push_back({w.id, w.query_u, w.query_v, std::move(r.directions), std::move(r.in_frame), w.passthrough});
    }
    set.validate();
    return set;
  });

  sample.frames = run_stage("render", [&] {
    return render_sequence(pick(clip.frames, idx), sample.trajectory.rotations, sample.trajectory.intrinsics, threads);
  });
  return sample;
}

void write_sample(const DatasetSample& sample, const std::filesystem::path& dir) {
  write_clip(sample.frames, dir / "frames");
  write_track_set(sample.tracks, dir / "tracks.json");
  write_trajectory({sample.trajectory, sample.motion, sample.seed}, dir / "trajectory.json");
  nlohmann::ordered_json j;
  j["clip_id"] = sample.tracks.clip_id;
  j["source"] = sample.source_ref;
  j["source_frames"] = sample.source_frames;
  j["frames"] = "frames";
  j["frame_count"] = sample.frames.size();
  j["tracks"] = "tracks.json";
  j["trajectory"] = "trajectory.json";
  write_text_file(dir / "sample.json", j.dump(2) + "\n");
}

}  // namespace panotrack
