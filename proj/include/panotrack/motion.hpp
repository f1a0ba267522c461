#pragma once

// Camera trajectory synthesis: per-frame rotation deltas composed as
// R[i+1] = R[i] * euler_to_rotation(delta[i]).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "panotrack/geometry.hpp"
#include "panotrack/image.hpp"

namespace panotrack {

enum class MotionKind { Static, Spiral, Random, Human, SpinX, SpinY, SpinZ };

std::string_view to_string(MotionKind kind);
/// Accepts "static", "spiral", "random", "human", "spin_x", "spin_y", "spin_z".
MotionKind parse_motion_kind(std::string_view name);
const std::vector<MotionKind>& all_motion_kinds();

/// Upper bounds for the simulated-human motion parameters.
struct HumanMotionLimits {
  double amplitude_roll = 1.5;   // deg
  double amplitude_pitch = 1.5;  // deg
  double amplitude_yaw = 1.5;    // deg
  double drift_pitch = 0.2;      // deg / frame
  double drift_yaw = 0.2;        // deg / frame
  double omega_min = 0.1;        // rad / frame
  double omega_max = 0.5;        // rad / frame
  double noise_roll = 0.1;       // deg, std
  double noise_pitch = 0.1;
  double noise_yaw = 0.1;
};

struct MotionSpec {
  MotionKind kind = MotionKind::Static;
  double theta_min = -2.0;  // deg
  double theta_max = 2.0;   // deg
  double spin_noise = 0.25; // eta in [0, 1]
  HumanMotionLimits human;
  bool btf = false;
  std::uint64_t seed = 0;

  /// Spec with the per-kind angular bounds (random: [-2, 2], spiral: [0, 360]).
  static MotionSpec defaults(MotionKind kind);
  void validate() const;
};

/// Per-sequence parameters of the simulated-human strategy.
struct HumanMotionParams {
  double amplitude_roll = 0.0;
  double amplitude_pitch = 0.0;
  double amplitude_yaw = 0.0;
  double drift_pitch = 0.0;
  double drift_yaw = 0.0;
  double omega = 0.0;
  double noise_roll = 0.0;
  double noise_pitch = 0.0;
  double noise_yaw = 0.0;
};

HumanMotionParams sample_human_params(const MotionSpec& spec);

/// Noise-free part of the human delta at (possibly fractional) frame index i.
EulerAngles human_oscillation(const HumanMotionParams& p, double i);

/// Frame deltas delta[0..n-1]. A trajectory of n frames consumes the first
/// n - 1; spin strategies close the full turn with all n.
std::vector<EulerAngles> motion_deltas(const MotionSpec& spec, int n);

struct Trajectory {
  std::vector<Rotation> rotations;
  std::vector<Intrinsics> intrinsics;

  std::size_t size() const { return rotations.size(); }
  /// Throws InvalidArgument on empty or mismatched lengths or invalid elements.
  void validate(double tol = 1e-9) const;
};

/// Rotations R[0] = r0, R[i+1] = R[i] * E(delta[i]). With spec.btf the base is
/// held at r0 and the strategy is applied through apply_btf.
std::vector<Rotation> generate_rotations(const MotionSpec& spec, int n, const Rotation& r0);

Trajectory generate(const MotionSpec& spec, int n, const Rotation& r0, const Intrinsics& k);

struct BtfWindow {
  int start = 0;   // i_s
  int end = 0;     // i_e (exclusive)
  int length = 0;  // k
};

/// Candidate even window lengths k for a clip of n frames.
std::vector<int> btf_window_lengths(int n);
BtfWindow sample_btf_window(int n, std::uint64_t seed);

/// Replaces frames [i_s, i_e) by a forward run of k/2 frames generated by
/// `inner` from base[i_s], followed by the same run reversed.
Trajectory apply_btf(const Trajectory& base, const MotionSpec& inner, std::uint64_t seed);

/// Normalized mean of the directions of all true texels.
/// Throws DegenerateInput for empty masks or a vanishing mean.
UnitDirection spherical_centroid(const BinaryMask& mask, const EquirectGrid& grid);

/// Per-frame minimal-roll cameras looking at each mask's spherical centroid.
Trajectory object_centered(std::span<const BinaryMask> masks, const EquirectGrid& grid,
                           const Intrinsics& k_template);

}  // namespace panotrack
