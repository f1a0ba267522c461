#include "panotrack/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <limits>
#include <string>

#include "panotrack/error.hpp"

namespace panotrack {

UnitDirection::UnitDirection(const Vec3& v) {
  const double n = norm(v);
  if (!std::isfinite(n) || n == 0.0) {
    throw DegenerateInput("cannot normalize a zero or non-finite vector");
  }
  v_ = {v.x / n, v.y / n, v.z / n};
}

Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      out[r * 3 + c] = a[r * 3 + 0] * b[0 * 3 + c] + a[r * 3 + 1] * b[1 * 3 + c] +
                       a[r * 3 + 2] * b[2 * 3 + c];
    }
  }
  return out;
}

double determinant(const Mat3& m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

double frobenius_distance(const Mat3& a, const Mat3& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < 9; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

namespace {

double orthogonality_error_of(const Mat3& m) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += m[k * 3 + i] * m[k * 3 + j];
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  }
  return std::max(worst, std::abs(determinant(m) - 1.0));
}

}  // namespace

Rotation Rotation::from_matrix(const Mat3& m, double tol) {
  for (double v : m) {
    if (!std::isfinite(v)) throw InvalidArgument("rotation matrix has non-finite entries");
  }
  const double err = orthogonality_error_of(m);
  if (err > tol) {
    throw InvalidArgument("matrix is not in SO(3) (error " + std::to_string(err) + ")");
  }
  return Rotation(m);
}

Rotation Rotation::from_columns(const Vec3& x, const Vec3& y, const Vec3& z, double tol) {
  return from_matrix({x.x, y.x, z.x, x.y, y.y, z.y, x.z, y.z, z.z}, tol);
}

Rotation Rotation::transpose() const {
  return Rotation(Mat3{m_[0], m_[3], m_[6], m_[1], m_[4], m_[7], m_[2], m_[5], m_[8]});
}

Rotation Rotation::operator*(const Rotation& o) const { return Rotation(multiply(m_, o.m_)); }

double Rotation::orthogonality_error() const { return orthogonality_error_of(m_); }

double Rotation::determinant() const { return panotrack::determinant(m_); }

void Intrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0) || !std::isfinite(fx) || !std::isfinite(fy)) {
    throw InvalidIntrinsics("focal lengths must be positive and finite");
  }
  if (width < 1 || height < 1) throw InvalidIntrinsics("image size must be positive");
  if (!(cx >= 0.0 && cx < width && cy >= 0.0 && cy < height)) {
    throw InvalidIntrinsics("principal point outside the image");
  }
}

Intrinsics Intrinsics::from_fov(int width, int height, double horizontal_fov_deg) {
  if (!(horizontal_fov_deg > 0.0 && horizontal_fov_deg < 180.0)) {
    throw InvalidIntrinsics("horizontal FOV must lie in (0, 180) degrees");
  }
  const double f = 0.5 * width / std::tan(deg2rad(horizontal_fov_deg) * 0.5);
  Intrinsics k{f, f, 0.5 * width, 0.5 * height, width, height};
  k.validate();
  return k;
}

double Intrinsics::horizontal_fov_deg() const { return rad2deg(2.0 * std::atan(0.5 * width / fx)); }

void EquirectGrid::validate() const {
  if (width < 2 || width % 2 != 0 || height < 1) {
    throw InvalidArgument("equirect grid needs an even width >= 2 and height >= 1");
  }
}

UnitDirection pixel_to_direction(const PixelCoord& p, const Intrinsics& k) {
  k.validate();
  const double x = (p.x - k.cx) / k.fx;
  const double y = (p.y - k.cy) / k.fy;
  const double n = std::sqrt(x * x + y * y + 1.0);
  return UnitDirection(Vec3{x / n, y / n, 1.0 / n});
}

Projection direction_to_pixel(const UnitDirection& d, const Intrinsics& k) {
  k.validate();
  if (!(d.z() > 0.0)) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    return {{nan, nan}, false};
  }
  return {{k.fx * d.x() / d.z() + k.cx, k.fy * d.y() / d.z() + k.cy}, true};
}

UnitDirection direction_from_lon_lat(double lon, double lat) {
  const double c = std::cos(lat);
  return UnitDirection(Vec3{c * std::sin(lon), -std::sin(lat), c * std::cos(lon)});
}

double longitude(const UnitDirection& d) { return std::atan2(d.x(), d.z()); }

double latitude(const UnitDirection& d) { return std::atan2(-d.y(), std::hypot(d.x(), d.z())); }

UnitDirection equirect_to_direction(const EquirectCoord& c, const EquirectGrid& grid) {
  const double lon = ((c.u + 0.5) / grid.width) * 2.0 * kPi - kPi;
  const double lat = kPi / 2.0 - ((c.v + 0.5) / grid.height) * kPi;
  return direction_from_lon_lat(lon, lat);
}

EquirectCoord direction_to_equirect(const UnitDirection& d, const EquirectGrid& grid) {
  const double w = grid.width;
  const double h = grid.height;
  const double lat = latitude(d);
  const double v = (kPi / 2.0 - lat) / kPi * h - 0.5;
  if (d.x() == 0.0 && d.z() == 0.0) return {0.0, v};
  double u = (longitude(d) + kPi) / (2.0 * kPi) * w - 0.5;
  if (u >= w - 0.5) u -= w;
  return {u, v};
}

UnitDirection rotate_world_to_camera(const UnitDirection& world, const Rotation& r) {
  return UnitDirection(r.apply_transpose(world.vec()));
}

UnitDirection rotate_camera_to_world(const UnitDirection& cam, const Rotation& r) {
  return UnitDirection(r.apply(cam.vec()));
}

double angular_distance(const UnitDirection& a, const UnitDirection& b) {
  return rad2deg(std::atan2(norm(cross(a.vec(), b.vec())), dot(a.vec(), b.vec())));
}

Rotation axis_rotation(Axis axis, double deg) {
  const double t = deg2rad(deg);
  const double c = std::cos(t);
  const double s = std::sin(t);
  switch (axis) {
    case Axis::X:
      return Rotation::from_matrix({1, 0, 0, 0, c, -s, 0, s, c});
    case Axis::Y:
      return Rotation::from_matrix({c, 0, s, 0, 1, 0, -s, 0, c});
    case Axis::Z:
      break;
  }
  return Rotation::from_matrix({c, -s, 0, s, c, 0, 0, 0, 1});
}

Rotation euler_to_rotation(const EulerAngles& e) {
  for (double a : {e.pitch, e.roll, e.yaw}) {
    if (!std::isfinite(a)) throw InvalidArgument("Euler angles must be finite");
  }
  return axis_rotation(Axis::X, e.pitch) * axis_rotation(Axis::Y, e.yaw) *
         axis_rotation(Axis::Z, e.roll);
}

Rotation procrustes_so3(const Mat3& m) {
  Eigen::Matrix3d a;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (!std::isfinite(m[r * 3 + c])) throw InvalidArgument("matrix has non-finite entries");
      a(r, c) = m[r * 3 + c];
    }
  }
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d& sigma = svd.singularValues();
  // Singular values are sorted descending; rank < 2 leaves the optimum non-unique.
  if (!(sigma(0) > 0.0) || sigma(1) <= 1e-12 * sigma(0)) {
    throw DegenerateInput("Procrustes input has rank < 2; nearest rotation is not unique");
  }
  const Eigen::Matrix3d& u = svd.matrixU();
  const Eigen::Matrix3d& v = svd.matrixV();
  Eigen::Vector3d d(1.0, 1.0, (u * v.transpose()).determinant() < 0.0 ? -1.0 : 1.0);
  const Eigen::Matrix3d r = u * d.asDiagonal() * v.transpose();
  Mat3 out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out[i * 3 + j] = r(i, j);
  }
  return Rotation::from_matrix(out);
}

Rotation look_at(const UnitDirection& forward, const std::optional<Vec3>& fallback_down) {
  const Vec3 z = forward.vec();
  const Vec3 world_down{0.0, 1.0, 0.0};
  Vec3 hint = world_down;
  if (norm(cross(z, world_down)) < 1e-6) {
    hint = fallback_down.value_or(Vec3{0.0, 0.0, 1.0});
  }
  Vec3 y = hint - z * dot(hint, z);
  if (norm(y) < 1e-12) throw DegenerateInput("look_at: down hint is parallel to the forward axis");
  y = UnitDirection(y).vec();
  const Vec3 x = cross(y, z);
  return Rotation::from_columns(x, y, z);
}

namespace detail {

Rotation rotation_about(const Vec3& axis, double deg) {
  const Vec3 a = UnitDirection(axis).vec();
  const double t = deg2rad(deg);
  const double c = std::cos(t);
  const double s = std::sin(t);
  const double k = 1.0 - c;
  return Rotation::from_matrix({c + a.x * a.x * k, a.x * a.y * k - a.z * s, a.x * a.z * k + a.y * s,
                                a.y * a.x * k + a.z * s, c + a.y * a.y * k, a.y * a.z * k - a.x * s,
                                a.z * a.x * k - a.y * s, a.z * a.y * k + a.x * s, c + a.z * a.z * k});
}

Rotation minimal_rotation(const UnitDirection& from, const UnitDirection& to) {
  const Vec3 axis = cross(from.vec(), to.vec());
  const double angle = angular_distance(from, to);
  if (norm(axis) < 1e-15) {
    if (dot(from.vec(), to.vec()) > 0.0) return Rotation::identity();
    throw DegenerateInput("minimal rotation between antipodal directions is not unique");
  }
  return rotation_about(axis, angle);
}

}  // namespace detail

}  // namespace panotrack
