#pragma once

// Coarse quality checks for equirectangular clips: wrap-around seam
// continuity, scene dynamics and poster (letterboxed content) detection.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "panotrack/image.hpp"

namespace panotrack {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major, 0..255

  double at(int x, int y) const {
    return values[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }
};

/// Rec.601 luma.
GrayImage to_gray(const RgbImage& image);

/// Zero-mean normalized cross-correlation in [-1, 1]. If either input is
/// constant the result is 1 by convention.
double normalized_cross_correlation(std::span<const double> a, std::span<const double> b);

/// NCC between columns [0, strip) and [W - strip, W), paired column by column.
double seam_score(const GrayImage& frame, int strip);
double seam_check(const EquirectFrame& frame, int strip);

/// Mean over pixels of the population variance of intensity across frames.
double dynamics_score(std::span<const GrayImage> frames);
double dynamics_check(std::span<const RgbImage> frames);

struct PosterParams {
  double area_ratio = 0.6;          // rho
  double black_level = 16.0 / 255;  // tau_black, fraction of full scale
  int window = 32;                  // adaptive threshold neighbourhood (px)
  double offset = 8.0;              // subtracted from the local mean
};

/// Inclusive-exclusive box [x0, x1) x [y0, y1); empty when x1 <= x0.
struct ContentBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
  long long area() const { return x1 > x0 && y1 > y0 ? static_cast<long long>(x1 - x0) * (y1 - y0) : 0; }
};

/// Foreground where intensity >= local mean - offset and above the black level.
BinaryMask adaptive_threshold(const GrayImage& gray, const PosterParams& params);

/// Bounding box of the largest 8-connected component (first in raster order on ties).
ContentBox largest_component_box(const BinaryMask& mask);

struct PosterResult {
  bool flagged = false;
  ContentBox box;
  double box_fraction = 0.0;
  double border_mean = 0.0;  // mean intensity outside the box, 0..1
};

PosterResult poster_check(const RgbImage& frame, const PosterParams& params = {});

struct CurationConfig {
  bool check_seam = true;
  bool check_dynamics = true;
  bool check_poster = true;
  int seam_strip = 8;
  double seam_min = 0.5;
  double dynamics_min = 25.0;
  /// The poster check fails once this fraction of sampled frames is flagged.
  double poster_max_fraction = 0.5;
  PosterParams poster;
  int sample_frames = 10;
};

struct CheckResult {
  std::string name;
  double score = 0.0;
  bool pass = false;
  std::vector<double> per_frame;
};

struct CurationReport {
  std::vector<int> frame_indices;
  std::vector<CheckResult> checks;
  bool pass = true;

  const CheckResult* find(const std::string& name) const;
};

/// `count` indices spread evenly over [0, total), endpoints included; all
/// indices when total <= count.
std::vector<int> evenly_spaced_indices(int total, int count);

CurationReport curate(std::span<const RgbImage> frames, const CurationConfig& config);
/// Reads only the sampled frames of a clip directory.
CurationReport curate_clip(const std::filesystem::path& dir, const CurationConfig& config);

}  // namespace panotrack
