#pragma once

// Run configuration read from a small TOML-style file:
//
//   # comment
//   [camera]
//   width = 256
//   fov = 70.528
//
// Values are numbers, true/false, quoted or bare strings, or [a, b, ...] number lists.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "panotrack/curation.hpp"
#include "panotrack/geometry.hpp"
#include "panotrack/metrics.hpp"
#include "panotrack/motion.hpp"

namespace panotrack {

struct PipelineConfig {
  int width = 256;
  int height = 256;
  double fov_deg = 70.528;  // horizontal
  int frames = 32;          // T
  int num_queries = 256;    // N_q
  /// L_thresh in pixels; a negative value keeps every track.
  double length_threshold = 20.0;
  int threads = 0;  // 0: PANO_TRACK_THREADS or the hardware count

  Intrinsics intrinsics() const { return Intrinsics::from_fov(width, height, fov_deg); }
  void validate() const;
};

struct Config {
  PipelineConfig pipeline;
  MotionSpec motion;
  CurationConfig curation;
  ThresholdConfig thresholds;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Flat "section.key" -> raw value text, in file order per key.
using ConfigEntries = std::map<std::string, std::string>;

ConfigEntries parse_config_entries(const std::string& text, const std::string& where);

/// Applies entries on top of `config`; unknown keys raise ParseError.
void apply_config(Config& config, const ConfigEntries& entries, const std::string& where);
Config load_config(const std::filesystem::path& path);

}  // namespace panotrack
