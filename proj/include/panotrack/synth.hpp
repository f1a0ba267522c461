#pragma once

// Procedural equirectangular scenes with analytically moving markers. Every
// marker is a spherical cap; its centre and a few points on the cap follow a
// closed-form rigid motion, so their world directions are known exactly.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "panotrack/image.hpp"
#include "panotrack/io.hpp"

namespace panotrack {

enum class PathKind { GreatCircle, SmallCircle, Static, Lissajous };

std::string_view to_string(PathKind kind);
PathKind parse_path_kind(std::string_view name);

struct MarkerSpec {
  PathKind path = PathKind::SmallCircle;
  double speed_deg = 4.0;  // deg / frame (great- and small-circle paths)
  double lon_deg = 0.0;    // initial longitude
  double lat_deg = 0.0;    // initial latitude, positive up
  double radius_deg = 5.0;
  std::array<std::uint8_t, 3> color{230, 40, 40};
  /// Great-circle rotation axis; default d0 × (0, -1, 0), i.e. a meridian.
  std::optional<Vec3> axis;
  /// Lissajous: lon/lat amplitudes (deg) and angular frequencies (rad / frame).
  std::array<double, 2> amplitude_deg{30.0, 15.0};
  std::array<double, 2> frequency{0.2, 0.3};
};

enum class BackgroundKind { Gradient, Checker };

struct SceneSpec {
  int frames = 32;
  std::vector<MarkerSpec> markers;
  BackgroundKind background = BackgroundKind::Gradient;
  int checker_lon_cells = 16;
  int checker_lat_cells = 8;
  /// Background drift in longitude, deg / frame.
  double background_speed = 0.0;
  EquirectGrid grid{1024, 512};
  std::uint64_t seed = 0;
  /// Extra tracked points per marker besides its centre.
  int track_points = 8;
  std::string clip_id = "synth";
  std::string category = "synthetic";

  /// "single-marker", "great-circle", "lissajous", "static".
  static SceneSpec preset(std::string_view name);
  void validate() const;
};

/// Rigid motion of a marker at time t (frames), as a world rotation.
Rotation marker_motion(const MarkerSpec& marker, double t);
UnitDirection marker_direction(const MarkerSpec& marker, double t);

struct SynthPointTrack {
  std::string id;
  int marker = 0;
  std::vector<UnitDirection> directions;  // world frame, one per frame
};

struct SynthOutput {
  std::vector<EquirectFrame> frames;
  std::vector<std::vector<UnitDirection>> marker_directions;  // [marker][t]
  std::vector<std::vector<BinaryMask>> masks;                 // [marker][t]
  std::vector<SynthPointTrack> tracks;
};

SynthOutput render_scene(const SceneSpec& spec, int threads = 1);

/// Point tracks as an equirect-grid import file.
ImportedTracks synth_imported_tracks(const SynthOutput& out, const EquirectGrid& grid);

/// frames/, masks/marker_XX/, tracks.json (import format), analytic.json.
void write_synth(const SynthOutput& out, const SceneSpec& spec, const std::filesystem::path& dir);

}  // namespace panotrack
