#pragma once

// Spherical and pinhole camera geometry shared by every other module.
//
// Conventions:
//   * camera frame: +x right, +y down, +z forward;
//   * world frame coincides with the camera frame at the identity rotation;
//   * a Rotation stores camera-to-world (its columns are the camera axes
//     expressed in world coordinates);
//   * perspective pixel coordinates are continuous (column, row) with the image
//     covering [0, width) x [0, height), so pixel (c, r) has its centre at
//     (c + 0.5, r + 0.5);
//   * equirectangular coordinates (u, v) put the centre of texel (c, r) at
//     (c, r); longitude wraps with period width;
//   * all angles crossing the public API are degrees.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>

namespace panotrack {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad2deg(double rad) { return rad * (180.0 / kPi); }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// Unit-norm 3-vector. Construction normalizes; zero or non-finite input throws
/// DegenerateInput.
class UnitDirection {
public:
  UnitDirection() = default;  // +z, the principal ray
  explicit UnitDirection(const Vec3& v);
  UnitDirection(double x, double y, double z) : UnitDirection(Vec3{x, y, z}) {}

  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }
  const Vec3& vec() const { return v_; }

  bool operator==(const UnitDirection&) const = default;

private:
  Vec3 v_{0.0, 0.0, 1.0};
};

/// Row-major 3x3 matrix.
using Mat3 = std::array<double, 9>;

/// Element of SO(3), stored row-major, camera-to-world.
class Rotation {
public:
  Rotation() = default;  // identity

  static Rotation identity() { return {}; }
  /// Validates orthonormality and det = +1 within `tol` per entry.
  static Rotation from_matrix(const Mat3& m, double tol = 1e-9);
  /// Columns are the camera x, y, z axes in world coordinates.
  static Rotation from_columns(const Vec3& x, const Vec3& y, const Vec3& z, double tol = 1e-9);

  double operator()(int row, int col) const { return m_[static_cast<std::size_t>(row * 3 + col)]; }
  const Mat3& matrix() const { return m_; }
  Vec3 column(int c) const { return {m_[c], m_[3 + c], m_[6 + c]}; }

  Vec3 apply(const Vec3& v) const {
    return {m_[0] * v.x + m_[1] * v.y + m_[2] * v.z, m_[3] * v.x + m_[4] * v.y + m_[5] * v.z,
            m_[6] * v.x + m_[7] * v.y + m_[8] * v.z};
  }
  Vec3 apply_transpose(const Vec3& v) const {
    return {m_[0] * v.x + m_[3] * v.y + m_[6] * v.z, m_[1] * v.x + m_[4] * v.y + m_[7] * v.z,
            m_[2] * v.x + m_[5] * v.y + m_[8] * v.z};
  }
  UnitDirection apply(const UnitDirection& d) const { return UnitDirection(apply(d.vec())); }

  Rotation transpose() const;
  Rotation operator*(const Rotation& o) const;

  /// Largest |RᵀR − I| entry and |det − 1|.
  double orthogonality_error() const;
  double determinant() const;

  bool operator==(const Rotation&) const = default;

private:
  explicit Rotation(const Mat3& m) : m_(m) {}
  Mat3 m_{1, 0, 0, 0, 1, 0, 0, 0, 1};
};

Mat3 multiply(const Mat3& a, const Mat3& b);
double determinant(const Mat3& m);
/// Frobenius distance ‖a − b‖_F.
double frobenius_distance(const Mat3& a, const Mat3& b);

/// Pinhole intrinsics. K = [[fx, 0, cx], [0, fy, cy], [0, 0, 1]].
struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 1;
  int height = 1;

  /// Throws InvalidIntrinsics unless fx, fy > 0 and the principal point lies in the image.
  void validate() const;
  /// Square pixels, principal point at the image centre, horizontal FOV in degrees.
  static Intrinsics from_fov(int width, int height, double horizontal_fov_deg);
  double horizontal_fov_deg() const;

  bool operator==(const Intrinsics&) const = default;
};

struct EquirectGrid {
  int width = 2;
  int height = 1;

  /// Throws InvalidArgument unless width >= 2 and even, height >= 1.
  void validate() const;
  bool operator==(const EquirectGrid&) const = default;
};

/// Pitch about x, roll about z, yaw about y, all in degrees.
struct EulerAngles {
  double pitch = 0.0;
  double roll = 0.0;
  double yaw = 0.0;

  EulerAngles operator-() const { return {-pitch, -roll, -yaw}; }
  bool operator==(const EulerAngles&) const = default;
};

/// Continuous perspective pixel coordinate: x = column (i), y = row (j).
struct PixelCoord {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const PixelCoord&) const = default;
};

struct Projection {
  PixelCoord pixel;
  bool in_front = false;
};

/// Continuous equirect coordinate; integer values are texel centres.
struct EquirectCoord {
  double u = 0.0;
  double v = 0.0;
};

UnitDirection pixel_to_direction(const PixelCoord& p, const Intrinsics& k);

/// Pixel coords are NaN when the ray is not strictly in front of the camera.
Projection direction_to_pixel(const UnitDirection& d, const Intrinsics& k);

/// Half-open image bounds [0, width) x [0, height).
inline bool inside_image(const PixelCoord& p, const Intrinsics& k) {
  return p.x >= 0.0 && p.x < static_cast<double>(k.width) && p.y >= 0.0 &&
         p.y < static_cast<double>(k.height);
}

UnitDirection equirect_to_direction(const EquirectCoord& c, const EquirectGrid& grid);

/// u is returned in [-0.5, width - 0.5). At the poles u = 0.
EquirectCoord direction_to_equirect(const UnitDirection& d, const EquirectGrid& grid);

/// Longitude/latitude (radians) of a direction. Latitude is positive towards −y.
double longitude(const UnitDirection& d);
double latitude(const UnitDirection& d);
UnitDirection direction_from_lon_lat(double lon_rad, double lat_rad);

UnitDirection rotate_world_to_camera(const UnitDirection& world, const Rotation& r);
UnitDirection rotate_camera_to_world(const UnitDirection& cam, const Rotation& r);

/// Degrees in [0, 180], computed as atan2(|a×b|, a·b).
double angular_distance(const UnitDirection& a, const UnitDirection& b);

enum class Axis { X = 0, Y = 1, Z = 2 };

/// Right-handed rotation about a coordinate axis.
Rotation axis_rotation(Axis axis, double deg);

/// R = Rx(pitch) · Ry(yaw) · Rz(roll).
Rotation euler_to_rotation(const EulerAngles& e);

/// Nearest rotation in Frobenius norm: U·diag(1, 1, det(UVᵀ))·Vᵀ.
/// Throws DegenerateInput when two or more singular values vanish.
Rotation procrustes_so3(const Mat3& m);

/// Camera-to-world rotation whose +z axis is `forward` with minimal roll:
/// the camera +y axis is world +y projected orthogonal to `forward`. When
/// `forward` is within 1e-6 of ±y, `fallback_down` (projected) is used instead;
/// without a fallback world +z is used.
Rotation look_at(const UnitDirection& forward, const std::optional<Vec3>& fallback_down = std::nullopt);

namespace detail {
// Axis-angle helpers for internal use (trajectory synthesis, synthetic scenes).
Rotation rotation_about(const Vec3& axis, double deg);
/// Smallest rotation mapping `from` onto `to`; throws for antipodal inputs.
Rotation minimal_rotation(const UnitDirection& from, const UnitDirection& to);
}  // namespace detail

}  // namespace panotrack
