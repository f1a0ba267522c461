#pragma once

// Angular tracking metrics: thresholded accuracy (<delta_avg) with thresholds
// expressed in px° and mean angular distance (AD), each over all points and
// over the in-frame / out-of-frame subsets defined by the ground truth.
//
// Empty subsets are reported as absent (std::nullopt), never 0 or 1.

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "panotrack/tracks.hpp"

namespace panotrack {

enum class Split { All = 0, InFrame = 1, OutOfFrame = 2 };
inline constexpr std::array<Split, 3> kSplits{Split::All, Split::InFrame, Split::OutOfFrame};
std::string_view to_string(Split s);

struct ThresholdConfig {
  double degrees_per_pixel = 0.2755;
  std::vector<double> multipliers{1, 2, 4, 8, 16};

  void validate() const;
  /// multiplier * degrees_per_pixel, in degrees.
  std::vector<double> thresholds() const;
};

/// Sufficient statistics for one split; adding two accumulators is exact in
/// the counts and associative up to floating-point summation of distances.
struct SplitAccumulator {
  std::size_t count = 0;
  std::vector<std::size_t> hits;  // per threshold, distance < threshold
  double distance_sum = 0.0;

  void add(const SplitAccumulator& other);
};

struct SplitMetrics {
  std::size_t count = 0;
  std::vector<double> fractions;      // empty when absent
  std::optional<double> delta_avg;    // mean of fractions
  std::optional<double> mean_angular; // degrees

  static SplitMetrics from(const SplitAccumulator& acc);
};

struct DeltaAccuracy {
  std::vector<double> fractions;
  double average = 0.0;
};

/// Tracks are matched by id; throws InvalidArgument listing ids missing from
/// either side or tracks of different length.
std::optional<DeltaAccuracy> delta_accuracy(const DirectionTrackSet& pred, const DirectionTrackSet& gt,
                                            const ThresholdConfig& cfg, Split split);
std::optional<double> mean_angular_distance(const DirectionTrackSet& pred, const DirectionTrackSet& gt, Split split);

/// Accumulators for all three splits of one clip.
std::array<SplitAccumulator, 3> accumulate_clip(const DirectionTrackSet& pred, const DirectionTrackSet& gt,
                                                const ThresholdConfig& cfg);

struct ClipMetrics {
  std::string clip_id;
  std::string motion_kind;
  std::string category;
  std::array<SplitAccumulator, 3> accumulators;
  std::array<SplitMetrics, 3> splits;
};

/// Mean and population standard deviation over clips with a present value.
struct Aggregate {
  std::size_t clips = 0;
  std::optional<double> mean;
  std::optional<double> std;
};

struct SplitSummary {
  Aggregate delta_avg;        // per-clip headline
  Aggregate mean_angular;
  std::vector<Aggregate> fractions;
  SplitMetrics pooled;        // per-point over all clips
};

struct Summary {
  std::size_t clips = 0;
  std::array<SplitSummary, 3> splits;
};

struct EvalReport {
  ThresholdConfig config;
  std::vector<ClipMetrics> clips;  // sorted by clip id
  Summary overall;
  std::map<std::string, Summary> by_motion;
  std::map<std::string, Summary> by_category;
};

/// Clips are matched by clip_id; missing or extra clips throw InvalidArgument.
EvalReport evaluate(std::span<const DirectionTrackSet> pred, std::span<const DirectionTrackSet> gt,
                    const ThresholdConfig& cfg);

/// Plain-text table: one row per group with delta and AD columns for all/if/oof.
std::string render_table(const EvalReport& report);

}  // namespace panotrack
