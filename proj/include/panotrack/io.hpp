#pragma once

// JSON file formats. Rotations are 9 reals row-major, directions 3 reals,
// angles in degrees. Parse failures raise ParseError whose location reads
// "<file>:<json pointer>".

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "panotrack/curation.hpp"
#include "panotrack/metrics.hpp"
#include "panotrack/motion.hpp"
#include "panotrack/tracks.hpp"

namespace panotrack {

std::string read_text_file(const std::filesystem::path& path);
/// Creates parent directories as needed.
void write_text_file(const std::filesystem::path& path, const std::string& text);

struct TrajectoryFile {
  Trajectory trajectory;
  std::optional<MotionSpec> motion;
  std::uint64_t seed = 0;
};

std::string motion_spec_to_json(const MotionSpec& spec);
MotionSpec parse_motion_spec(const std::string& text, const std::string& where = "<motion>");

std::string trajectory_to_json(const TrajectoryFile& file);
TrajectoryFile parse_trajectory(const std::string& text, const std::string& where = "<trajectory>");
TrajectoryFile read_trajectory(const std::filesystem::path& path);
void write_trajectory(const TrajectoryFile& file, const std::filesystem::path& path);

std::string track_set_to_json(const DirectionTrackSet& set);
DirectionTrackSet parse_track_set(const std::string& text, const std::string& where = "<tracks>");
DirectionTrackSet read_track_set(const std::filesystem::path& path);
void write_track_set(const DirectionTrackSet& set, const std::filesystem::path& path);

/// A file holding one track set, an array of them, or {"clips": [...]}; a
/// directory contributes every tracks.json below it in path order.
std::vector<DirectionTrackSet> read_track_sets(const std::filesystem::path& path);

enum class GridKind { Equirect, Perspective };

/// 2D tracks produced outside the toolkit.
struct ImportedTracks {
  GridKind kind = GridKind::Equirect;
  EquirectGrid equirect;
  /// Perspective grid: one entry for all frames or one per frame.
  std::vector<Intrinsics> intrinsics;
  /// Perspective grid: optional per-frame camera-to-world rotations (identity when empty).
  std::vector<Rotation> rotations;
  std::vector<PointTrack2D> tracks;

  /// Common track length; throws InvalidArgument for ragged or empty input.
  int frames() const;
};

std::string imported_tracks_to_json(const ImportedTracks& tracks);
ImportedTracks parse_imported_tracks(const std::string& text, const std::string& where = "<imported tracks>");
ImportedTracks read_imported_tracks(const std::filesystem::path& path);

std::string eval_report_to_json(const EvalReport& report);
std::string curation_report_to_json(const CurationReport& report, const std::string& clip);

}  // namespace panotrack
