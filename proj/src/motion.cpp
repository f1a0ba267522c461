#include "panotrack/motion.hpp"

#include <array>
#include <cmath>
#include <numeric>

#include "panotrack/error.hpp"
#include "panotrack/random.hpp"

namespace panotrack {

namespace {

// Stream identifiers of the keyed generator; index is the frame number.
constexpr std::uint64_t kStreamRandomAxis = 0;     // + axis 0..2
constexpr std::uint64_t kStreamHumanNoise = 10;    // + axis 0..2
constexpr std::uint64_t kStreamHumanParams = 20;   // index = parameter slot
constexpr std::uint64_t kStreamSpinNoise = 30;
constexpr std::uint64_t kStreamBtfWindow = 40;

constexpr int kReorthonormalizeEvery = 64;
constexpr int kBtfBuffer = 2;

double positive_mod(double x, double m) {
  const double r = std::fmod(x, m);
  return r < 0.0 ? r + m : r;
}

EulerAngles spin_delta(MotionKind kind, double theta) {
  switch (kind) {
    case MotionKind::SpinX:
      return {theta, 0.0, 0.0};
    case MotionKind::SpinY:
      return {0.0, 0.0, theta};
    default:
      return {0.0, theta, 0.0};
  }
}

}  // namespace

std::string_view to_string(MotionKind kind) {
  switch (kind) {
    case MotionKind::Static: return "static";
    case MotionKind::Spiral: return "spiral";
    case MotionKind::Random: return "random";
    case MotionKind::Human: return "human";
    case MotionKind::SpinX: return "spin_x";
    case MotionKind::SpinY: return "spin_y";
    case MotionKind::SpinZ: return "spin_z";
  }
  return "static";
}

MotionKind parse_motion_kind(std::string_view name) {
  for (MotionKind k : all_motion_kinds()) {
    if (to_string(k) == name) return k;
  }
  if (name == "simulated_human") return MotionKind::Human;
  throw InvalidArgument("unknown motion kind '" + std::string(name) + "'");
}

const std::vector<MotionKind>& all_motion_kinds() {
  static const std::vector<MotionKind> kinds{MotionKind::Static, MotionKind::Spiral, MotionKind::Random,
                                             MotionKind::Human,  MotionKind::SpinX,  MotionKind::SpinY,
                                             MotionKind::SpinZ};
  return kinds;
}

MotionSpec MotionSpec::defaults(MotionKind kind) {
  MotionSpec spec;
  spec.kind = kind;
  if (kind == MotionKind::Spiral) {
    spec.theta_min = 0.0;
    spec.theta_max = 360.0;
  }
  return spec;
}

void MotionSpec::validate() const {
  if (!(theta_min <= theta_max)) throw InvalidArgument("motion: theta_min must not exceed theta_max");
  if (!(spin_noise >= 0.0 && spin_noise <= 1.0)) throw InvalidArgument("motion: spin noise ratio must lie in [0, 1]");
  const HumanMotionLimits& h = human;
  for (double v : {h.amplitude_roll, h.amplitude_pitch, h.amplitude_yaw, h.drift_pitch, h.drift_yaw,
                   h.noise_roll, h.noise_pitch, h.noise_yaw}) {
    if (!(v >= 0.0)) throw InvalidArgument("motion: human-motion maxima must be >= 0");
  }
  if (!(h.omega_min <= h.omega_max)) throw InvalidArgument("motion: omega_min must not exceed omega_max");
}

HumanMotionParams sample_human_params(const MotionSpec& spec) {
  const KeyedRng rng(spec.seed);
  const HumanMotionLimits& h = spec.human;
  HumanMotionParams p;
  p.amplitude_roll = rng.uniform(0.0, h.amplitude_roll, 0, kStreamHumanParams);
  p.amplitude_pitch = rng.uniform(0.0, h.amplitude_pitch, 1, kStreamHumanParams);
  p.amplitude_yaw = rng.uniform(0.0, h.amplitude_yaw, 2, kStreamHumanParams);
  p.drift_pitch = rng.uniform(-h.drift_pitch, h.drift_pitch, 3, kStreamHumanParams);
  p.drift_yaw = rng.uniform(-h.drift_yaw, h.drift_yaw, 4, kStreamHumanParams);
  p.omega = rng.uniform(h.omega_min, h.omega_max, 5, kStreamHumanParams);
  p.noise_roll = h.noise_roll;
  p.noise_pitch = h.noise_pitch;
  p.noise_yaw = h.noise_yaw;
  return p;
}

EulerAngles human_oscillation(const HumanMotionParams& p, double i) {
  const double s = std::sin(p.omega * i);
  return {p.amplitude_pitch * s + p.drift_pitch * i, p.amplitude_roll * s, p.amplitude_yaw * s + p.drift_yaw * i};
}

std::vector<EulerAngles> motion_deltas(const MotionSpec& spec, int n) {
  spec.validate();
  if (n < 1) throw InvalidArgument("motion: frame count must be positive");
  const KeyedRng rng(spec.seed);
  std::vector<EulerAngles> deltas(static_cast<std::size_t>(n));
  switch (spec.kind) {
    case MotionKind::Static:
      break;
    case MotionKind::Spiral:
      for (int i = 0; i < n; ++i) {
        const double a = positive_mod(i * (spec.theta_max - spec.theta_min) / n, 360.0);
        deltas[static_cast<std::size_t>(i)] = {a, 0.0, a};
      }
      break;
    case MotionKind::Random: {
      const auto lo = static_cast<std::int64_t>(std::ceil(spec.theta_min));
      const auto hi = static_cast<std::int64_t>(std::floor(spec.theta_max));
      if (lo > hi) throw InvalidArgument("motion: no integer angle in [theta_min, theta_max]");
      for (int i = 0; i < n; ++i) {
        const auto u = static_cast<std::uint64_t>(i);
        deltas[static_cast<std::size_t>(i)] = {
            static_cast<double>(rng.uniform_int(lo, hi, u, kStreamRandomAxis + 0)),
            static_cast<double>(rng.uniform_int(lo, hi, u, kStreamRandomAxis + 1)),
            static_cast<double>(rng.uniform_int(lo, hi, u, kStreamRandomAxis + 2))};
      }
      break;
    }
    case MotionKind::Human: {
      const HumanMotionParams p = sample_human_params(spec);
      for (int i = 0; i < n; ++i) {
        const auto u = static_cast<std::uint64_t>(i);
        EulerAngles d = human_oscillation(p, i);
        d.roll += p.noise_roll * rng.normal(u, kStreamHumanNoise + 0);
        d.pitch += p.noise_pitch * rng.normal(u, kStreamHumanNoise + 1);
        d.yaw += p.noise_yaw * rng.normal(u, kStreamHumanNoise + 2);
        deltas[static_cast<std::size_t>(i)] = d;
      }
      break;
    }
    case MotionKind::SpinX:
    case MotionKind::SpinY:
    case MotionKind::SpinZ: {
      const double step = 360.0 / n;
      std::vector<double> eps(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        eps[static_cast<std::size_t>(i)] =
            rng.uniform(-spec.spin_noise * step, spec.spin_noise * step, static_cast<std::uint64_t>(i), kStreamSpinNoise);
      }
      const double mean = std::accumulate(eps.begin(), eps.end(), 0.0) / n;
      for (int i = 0; i < n; ++i) {
        deltas[static_cast<std::size_t>(i)] = spin_delta(spec.kind, step + (eps[static_cast<std::size_t>(i)] - mean));
      }
      break;
    }
  }
  return deltas;
}

void Trajectory::validate(double tol) const {
  if (rotations.empty()) throw InvalidArgument("trajectory is empty");
  if (rotations.size() != intrinsics.size()) throw InvalidArgument("trajectory rotation/intrinsics lengths differ");
  for (const auto& r : rotations) {
    if (r.orthogonality_error() > tol) throw InvalidArgument("trajectory contains a non-rotation");
  }
  for (const auto& k : intrinsics) k.validate();
}

namespace {

std::vector<Rotation> compose(const std::vector<EulerAngles>& deltas, int n, const Rotation& r0) {
  std::vector<Rotation> out;
  out.reserve(static_cast<std::size_t>(n));
  out.push_back(r0);
  for (int i = 0; i + 1 < n; ++i) {
    Rotation next = out.back() * euler_to_rotation(deltas[static_cast<std::size_t>(i)]);
    if ((i + 1) % kReorthonormalizeEvery == 0) next = procrustes_so3(next.matrix());
    out.push_back(next);
  }
  return out;
}

}  // namespace

std::vector<Rotation> generate_rotations(const MotionSpec& spec, int n, const Rotation& r0) {
  if (n < 2) throw InvalidArgument("motion: at least two frames are required");
  if (spec.btf) {
    Trajectory base{std::vector<Rotation>(static_cast<std::size_t>(n), r0),
                    std::vector<Intrinsics>(static_cast<std::size_t>(n), Intrinsics{})};
    MotionSpec inner = spec;
    inner.btf = false;
    return apply_btf(base, inner, spec.seed).rotations;
  }
  return compose(motion_deltas(spec, n), n, r0);
}

Trajectory generate(const MotionSpec& spec, int n, const Rotation& r0, const Intrinsics& k) {
  k.validate();
  Trajectory t{generate_rotations(spec, n, r0), std::vector<Intrinsics>(static_cast<std::size_t>(n), k)};
  return t;
}

std::vector<int> btf_window_lengths(int n) {
  const int n_min = n / 2;
  const int n_max = n - 2 * kBtfBuffer;
  std::vector<int> lengths;
  for (int k = n_min + (n_min % 2); k <= n_max; k += 2) {
    if (k >= 4) lengths.push_back(k);
  }
  return lengths;
}

BtfWindow sample_btf_window(int n, std::uint64_t seed) {
  const std::vector<int> lengths = btf_window_lengths(n);
  if (lengths.empty()) {
    throw InvalidArgument("btf: clip of " + std::to_string(n) + " frames is too short for a symmetric window");
  }
  const KeyedRng rng(seed);
  const auto pick = rng.uniform_int(0, static_cast<std::int64_t>(lengths.size()) - 1, 0, kStreamBtfWindow);
  const int k = lengths[static_cast<std::size_t>(pick)];
  const int mid = n / 2;
  const int start = mid - k / 2;
  return {start, start + k, k};
}

Trajectory apply_btf(const Trajectory& base, const MotionSpec& inner, std::uint64_t seed) {
  const int n = static_cast<int>(base.size());
  if (base.intrinsics.size() != base.rotations.size()) throw InvalidArgument("btf: malformed base trajectory");
  const BtfWindow w = sample_btf_window(n, seed);
  const int forward_len = w.length / 2;  // k_f = m - i_s
  MotionSpec fwd_spec = inner;
  fwd_spec.btf = false;
  const std::vector<Rotation> forward =
      generate_rotations(fwd_spec, forward_len, base.rotations[static_cast<std::size_t>(w.start)]);
  Trajectory out = base;
  for (int j = 0; j < forward_len; ++j) {
    out.rotations[static_cast<std::size_t>(w.start + j)] = forward[static_cast<std::size_t>(j)];
    out.rotations[static_cast<std::size_t>(w.end - 1 - j)] = forward[static_cast<std::size_t>(j)];
  }
  return out;
}

UnitDirection spherical_centroid(const BinaryMask& mask, const EquirectGrid& grid) {
  if (mask.width() != grid.width || mask.height() != grid.height) {
    throw InvalidArgument("mask size does not match the equirect grid");
  }
  Vec3 sum;
  std::size_t count = 0;
  for (int v = 0; v < grid.height; ++v) {
    for (int u = 0; u < grid.width; ++u) {
      if (!mask.get(u, v)) continue;
      sum += equirect_to_direction({static_cast<double>(u), static_cast<double>(v)}, grid).vec();
      ++count;
    }
  }
  if (count == 0) throw DegenerateInput("mask is empty");
  const Vec3 mean = sum * (1.0 / static_cast<double>(count));
  if (norm(mean) < 1e-6) throw DegenerateInput("mask centroid vanishes (mask is antipodally balanced)");
  return UnitDirection(mean);
}

Trajectory object_centered(std::span<const BinaryMask> masks, const EquirectGrid& grid, const Intrinsics& k_template) {
  k_template.validate();
  grid.validate();
  if (masks.empty()) throw InvalidArgument("object_centered: no masks");
  Trajectory t;
  std::optional<Vec3> previous_down;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    UnitDirection c;
    try {
      c = spherical_centroid(masks[i], grid);
    } catch (const DegenerateInput& e) {
      throw DegenerateInput("frame " + std::to_string(i) + ": " + e.what());
    }
    const Rotation r = look_at(c, previous_down);
    previous_down = r.column(1);
    t.rotations.push_back(r);
    t.intrinsics.push_back(k_template);
  }
  return t;
}

}  // namespace panotrack
