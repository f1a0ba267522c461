#include "panotrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "panotrack/error.hpp"
#include "panotrack/parallel.hpp"
#include "panotrack/random.hpp"

namespace panotrack {

namespace {
constexpr std::uint64_t kStreamTrackPoints = 50;

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0)); }

UnitDirection initial_direction(const MarkerSpec& m) {
  return direction_from_lon_lat(deg2rad(m.lon_deg), deg2rad(m.lat_deg));
}

Vec3 great_circle_axis(const MarkerSpec& m) {
  if (m.axis) return UnitDirection(*m.axis).vec();
  const Vec3 a = cross(initial_direction(m).vec(), Vec3{0.0, -1.0, 0.0});
  if (norm(a) < 1e-9) return {1.0, 0.0, 0.0};
  return a * (1.0 / norm(a));
}

UnitDirection lissajous_direction(const MarkerSpec& m, double t) {
  const double lon = m.lon_deg + m.amplitude_deg[0] * std::sin(m.frequency[0] * t);
  const double lat = m.lat_deg + m.amplitude_deg[1] * std::sin(m.frequency[1] * t);
  return direction_from_lon_lat(deg2rad(lon), deg2rad(lat));
}

}  // namespace

std::string_view to_string(PathKind kind) {
  switch (kind) {
    case PathKind::GreatCircle: return "great-circle";
    case PathKind::SmallCircle: return "small-circle";
    case PathKind::Static: return "static";
    case PathKind::Lissajous: return "lissajous";
  }
  return "static";
}

PathKind parse_path_kind(std::string_view name) {
  for (PathKind k : {PathKind::GreatCircle, PathKind::SmallCircle, PathKind::Static, PathKind::Lissajous}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown marker path '" + std::string(name) + "'");
}

SceneSpec SceneSpec::preset(std::string_view name) {
  SceneSpec s;
  MarkerSpec m;
  if (name == "single-marker") {
    m.path = PathKind::SmallCircle;
  } else if (name == "great-circle") {
    m.path = PathKind::GreatCircle;
  } else if (name == "lissajous") {
    m.path = PathKind::Lissajous;
  } else if (name == "static") {
    m.path = PathKind::Static;
  } else {
    throw InvalidArgument("unknown scene preset '" + std::string(name) + "'");
  }
  s.markers.push_back(m);
  s.clip_id = std::string(name);
  return s;
}

void SceneSpec::validate() const {
  if (frames < 2) throw InvalidArgument("scene: at least two frames are required");
  grid.validate();
  if (checker_lon_cells < 1 || checker_lat_cells < 1) throw InvalidArgument("scene: checker cell counts must be positive");
  if (track_points < 0) throw InvalidArgument("scene: track_points must be non-negative");
  if (!std::isfinite(background_speed)) throw InvalidArgument("scene: background speed must be finite");
  for (const auto& m : markers) {
    if (!(m.radius_deg > 0.0)) throw InvalidArgument("scene: marker radius must be positive");
    if (!std::isfinite(m.speed_deg)) throw InvalidArgument("scene: marker speed must be finite");
    if (m.path == PathKind::Lissajous &&
        std::abs(m.lat_deg) + std::abs(m.amplitude_deg[1]) >= 90.0) {
      throw InvalidArgument("scene: lissajous latitude excursion must stay below the poles");
    }
  }
}

Rotation marker_motion(const MarkerSpec& m, double t) {
  switch (m.path) {
    case PathKind::Static:
      return Rotation::identity();
    case PathKind::GreatCircle:
      return detail::rotation_about(great_circle_axis(m), m.speed_deg * t);
    case PathKind::SmallCircle:
      return detail::rotation_about({0.0, 1.0, 0.0}, m.speed_deg * t);
    case PathKind::Lissajous:
      return detail::minimal_rotation(initial_direction(m), lissajous_direction(m, t));
  }
  return Rotation::identity();
}

UnitDirection marker_direction(const MarkerSpec& m, double t) {
  if (m.path == PathKind::Lissajous) return lissajous_direction(m, t);
  return marker_motion(m, t).apply(initial_direction(m));
}

SynthOutput render_scene(const SceneSpec& spec, int threads) {
  spec.validate();
  const EquirectGrid& g = spec.grid;
  const int n_markers = static_cast<int>(spec.markers.size());
  SynthOutput out;
  out.marker_directions.resize(static_cast<std::size_t>(n_markers));
  out.masks.resize(static_cast<std::size_t>(n_markers));

  // Texel directions and lon/lat do not change between frames.
  const std::size_t n_texels = static_cast<std::size_t>(g.width) * static_cast<std::size_t>(g.height);
  std::vector<Vec3> dirs(n_texels);
  std::vector<double> lon(n_texels);
  std::vector<double> lat(n_texels);
  parallel_for(0, g.height, threads, [&](int v) {
    for (int u = 0; u < g.width; ++u) {
      const std::size_t i = static_cast<std::size_t>(v) * static_cast<std::size_t>(g.width) + static_cast<std::size_t>(u);
      lon[i] = ((u + 0.5) / g.width) * 2.0 * kPi - kPi;
      lat[i] = kPi / 2.0 - ((v + 0.5) / g.height) * kPi;
      dirs[i] = equirect_to_direction({static_cast<double>(u), static_cast<double>(v)}, g).vec();
    }
  });

  for (int mi = 0; mi < n_markers; ++mi) {
    const MarkerSpec& m = spec.markers[static_cast<std::size_t>(mi)];
    const UnitDirection d0 = initial_direction(m);
    std::vector<UnitDirection> starts{d0};
    if (spec.track_points > 0) {
      const Rotation basis = look_at(d0);
      const KeyedRng rng(spec.seed);
      for (int j = 0; j < spec.track_points; ++j) {
        const auto key = static_cast<std::uint64_t>(mi) * 1024u + static_cast<std::uint64_t>(j);
        const double rho = 0.7 * m.radius_deg * std::sqrt(rng.uniform(key, kStreamTrackPoints));
        const double az = 2.0 * kPi * rng.uniform(key, kStreamTrackPoints + 1);
        const Vec3 axis = basis.column(0) * std::cos(az) + basis.column(1) * std::sin(az);
        starts.push_back(detail::rotation_about(axis, rho).apply(d0));
      }
    }
    for (std::size_t j = 0; j < starts.size(); ++j) {
      char id[32];
      std::snprintf(id, sizeof(id), "m%02d_p%02d", mi, static_cast<int>(j));
      out.tracks.push_back({id, mi, {}});
    }
    auto& md = out.marker_directions[static_cast<std::size_t>(mi)];
    for (int t = 0; t < spec.frames; ++t) {
      const Rotation motion = marker_motion(m, t);
      md.push_back(marker_direction(m, t));
      for (std::size_t j = 0; j < starts.size(); ++j) {
        out.tracks[out.tracks.size() - starts.size() + j].directions.push_back(motion.apply(starts[j]));
      }
    }
  }

  for (int t = 0; t < spec.frames; ++t) {
    EquirectFrame frame(g.width, g.height);
    std::vector<BinaryMask> masks(static_cast<std::size_t>(n_markers), BinaryMask(g.width, g.height));
    const double shift = deg2rad(spec.background_speed * t);
    std::vector<Vec3> centres;
    std::vector<double> cos_r;
    for (int mi = 0; mi < n_markers; ++mi) {
      centres.push_back(out.marker_directions[static_cast<std::size_t>(mi)][static_cast<std::size_t>(t)].vec());
      cos_r.push_back(std::cos(deg2rad(spec.markers[static_cast<std::size_t>(mi)].radius_deg)));
    }
    parallel_for(0, g.height, threads, [&](int v) {
      for (int u = 0; u < g.width; ++u) {
        const std::size_t i = static_cast<std::size_t>(v) * static_cast<std::size_t>(g.width) + static_cast<std::size_t>(u);
        std::uint8_t* px = frame.pixel(u, v);
        const double l = lon[i] - shift;
        if (spec.background == BackgroundKind::Gradient) {
          for (int c = 0; c < 3; ++c) px[c] = to_byte(128.0 + 100.0 * std::sin(l + 3.0 * lat[i] + c * 2.0 * kPi / 3.0));
        } else {
          const double cell_lon = 2.0 * kPi / spec.checker_lon_cells;
          const double cell_lat = kPi / spec.checker_lat_cells;
          // Half-cell offset puts the seam inside a cell.
          auto a = static_cast<long long>(std::floor((l + kPi + 0.5 * cell_lon) / cell_lon));
          a = ((a % spec.checker_lon_cells) + spec.checker_lon_cells) % spec.checker_lon_cells;
          const auto b = std::min<long long>(static_cast<long long>(std::floor((lat[i] + kPi / 2.0) / cell_lat)),
                                             spec.checker_lat_cells - 1);
          const bool light = ((a + b) % 2) == 0;
          px[0] = light ? 205 : 70;
          px[1] = light ? 200 : 85;
          px[2] = light ? 190 : 100;
        }
        for (int mi = 0; mi < n_markers; ++mi) {
          if (dot(dirs[i], centres[static_cast<std::size_t>(mi)]) < cos_r[static_cast<std::size_t>(mi)]) continue;
          const auto& col = spec.markers[static_cast<std::size_t>(mi)].color;
          px[0] = col[0];
          px[1] = col[1];
          px[2] = col[2];
          masks[static_cast<std::size_t>(mi)].set(u, v, true);
        }
      }
    });
    out.frames.push_back(std::move(frame));
    for (int mi = 0; mi < n_markers; ++mi) {
      out.masks[static_cast<std::size_t>(mi)].push_back(std::move(masks[static_cast<std::size_t>(mi)]));
    }
  }
  return out;
}

ImportedTracks synth_imported_tracks(const SynthOutput& out, const EquirectGrid& grid) {
  ImportedTracks it;
  it.kind = GridKind::Equirect;
  it.equirect = grid;
  for (const auto& t : out.tracks) {
    PointTrack2D p;
    p.id = t.id;
    for (const auto& d : t.directions) {
      const EquirectCoord c = direction_to_equirect(d, grid);
      p.points.push_back({c.u, c.v});
    }
    p.passthrough = nlohmann::json{{"marker", t.marker}}.dump();
    it.tracks.push_back(std::move(p));
  }
  return it;
}

void write_synth(const SynthOutput& out, const SceneSpec& spec, const std::filesystem::path& dir) {
  write_clip(out.frames, dir / "frames");
  for (std::size_t mi = 0; mi < out.masks.size(); ++mi) {
    char name[32];
    std::snprintf(name, sizeof(name), "marker_%02d", static_cast<int>(mi));
    write_mask_clip(out.masks[mi], dir / "masks" / name);
  }
  write_text_file(dir / "tracks.json", imported_tracks_to_json(synth_imported_tracks(out, spec.grid)));

  nlohmann::ordered_json j;
  j["clip_id"] = spec.clip_id;
  j["category"] = spec.category;
  j["frames"] = spec.frames;
  j["grid"] = {{"width", spec.grid.width}, {"height", spec.grid.height}};
  j["seed"] = spec.seed;
  auto dir_list = [](const std::vector<UnitDirection>& ds) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& d : ds) a.push_back({d.x(), d.y(), d.z()});
    return a;
  };
  nlohmann::ordered_json markers = nlohmann::ordered_json::array();
  for (std::size_t mi = 0; mi < spec.markers.size(); ++mi) {
    const MarkerSpec& m = spec.markers[mi];
    markers.push_back({{"path", std::string(to_string(m.path))},
                       {"speed_deg", m.speed_deg},
                       {"lon_deg", m.lon_deg},
                       {"lat_deg", m.lat_deg},
                       {"radius_deg", m.radius_deg},
                       {"directions", dir_list(out.marker_directions[mi])}});
  }
  j["markers"] = std::move(markers);
  nlohmann::ordered_json tracks = nlohmann::ordered_json::array();
  for (const auto& t : out.tracks) {
    tracks.push_back({{"id", t.id}, {"marker", t.marker}, {"directions", dir_list(t.directions)}});
  }
  j["tracks"] = std::move(tracks);
  write_text_file(dir / "analytic.json", j.dump(2) + "\n");
}

}  // namespace panotrack
