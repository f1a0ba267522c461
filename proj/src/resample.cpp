#include "panotrack/resample.hpp"

#include <algorithm>
#include <cmath>

#include "panotrack/error.hpp"
#include "panotrack/parallel.hpp"

namespace panotrack {

namespace {

inline int wrap_column(long long c, int width) {
  const long long m = c % width;
  return static_cast<int>(m < 0 ? m + width : m);
}

void check_frame(const RgbImage& src) {
  if (src.empty()) throw InvalidArgument("empty source frame");
  src.grid().validate();
}

}  // namespace

EquirectCoord source_coordinate(int col, int row, const Rotation& r, const Intrinsics& k,
                                const EquirectGrid& grid) {
  const UnitDirection cam = pixel_to_direction(pixel_center(col, row), k);
  return direction_to_equirect(r.apply(cam), grid);
}

SampleMap build_sample_map(const EquirectGrid& grid, const Rotation& r, const Intrinsics& k, int threads) {
  k.validate();
  grid.validate();
  SampleMap map{k.width, k.height, grid, {}};
  map.coords.resize(static_cast<std::size_t>(k.width) * static_cast<std::size_t>(k.height));
  parallel_for(0, k.height, threads, [&](int row) {
    auto* out = &map.coords[static_cast<std::size_t>(row) * static_cast<std::size_t>(k.width)];
    for (int col = 0; col < k.width; ++col) out[col] = source_coordinate(col, row, r, k, grid);
  });
  return map;
}

void sample_bilinear(const RgbImage& src, const EquirectCoord& c, std::uint8_t out[3]) {
  const int w = src.width();
  const int h = src.height();
  const double x0f = std::floor(c.u);
  const double fx = c.u - x0f;
  // Texel centres sit at integer rows; clamping to [0, h - 1] keeps pole lookups on the edge rows.
  const double v = std::clamp(c.v, 0.0, static_cast<double>(h - 1));
  const double y0f = std::floor(v);
  const double fy = v - y0f;
  const int x0 = wrap_column(static_cast<long long>(x0f), w);
  const int x1 = wrap_column(static_cast<long long>(x0f) + 1, w);
  const int y0 = static_cast<int>(y0f);
  const int y1 = std::min(y0 + 1, h - 1);
  const std::uint8_t* p00 = src.pixel(x0, y0);
  const std::uint8_t* p01 = src.pixel(x1, y0);
  const std::uint8_t* p10 = src.pixel(x0, y1);
  const std::uint8_t* p11 = src.pixel(x1, y1);
  for (int ch = 0; ch < 3; ++ch) {
    const double top = (1.0 - fx) * p00[ch] + fx * p01[ch];
    const double bottom = (1.0 - fx) * p10[ch] + fx * p11[ch];
    const double value = (1.0 - fy) * top + fy * bottom;
    out[ch] = static_cast<std::uint8_t>(std::clamp(std::floor(value + 0.5), 0.0, 255.0));
  }
}

bool sample_nearest(const BinaryMask& src, const EquirectCoord& c) {
  const int x = wrap_column(static_cast<long long>(std::floor(c.u + 0.5)), src.width());
  const int y = std::clamp(static_cast<int>(std::floor(c.v + 0.5)), 0, src.height() - 1);
  return src.get(x, y);
}

RgbImage remap_bilinear(const RgbImage& src, const SampleMap& map, int threads) {
  check_frame(src);
  if (!(src.grid() == map.grid)) throw InvalidArgument("sample map was built for a different grid");
  RgbImage out(map.width, map.height);
  parallel_for(0, map.height, threads, [&](int row) {
    for (int col = 0; col < map.width; ++col) sample_bilinear(src, map.at(col, row), out.pixel(col, row));
  });
  return out;
}

BinaryMask remap_nearest(const BinaryMask& src, const SampleMap& map, int threads) {
  if (src.width() != map.grid.width || src.height() != map.grid.height) {
    throw InvalidArgument("mask size does not match the sample map grid");
  }
  BinaryMask out(map.width, map.height);
  parallel_for(0, map.height, threads, [&](int row) {
    for (int col = 0; col < map.width; ++col) out.set(col, row, sample_nearest(src, map.at(col, row)));
  });
  return out;
}

PerspectiveFrame render_perspective(const EquirectFrame& src, const Rotation& r, const Intrinsics& k,
                                    int threads) {
  check_frame(src);
  return remap_bilinear(src, build_sample_map(src.grid(), r, k, threads), threads);
}

BinaryMask project_mask(const BinaryMask& src_mask, const Rotation& r, const Intrinsics& k, int threads) {
  const EquirectGrid grid{src_mask.width(), src_mask.height()};
  return remap_nearest(src_mask, build_sample_map(grid, r, k, threads), threads);
}

BinaryMask frustum_on_equirect(const Rotation& r, const Intrinsics& k, const EquirectGrid& grid, int threads) {
  k.validate();
  grid.validate();
  BinaryMask mask(grid.width, grid.height);
  parallel_for(0, grid.height, threads, [&](int v) {
    for (int u = 0; u < grid.width; ++u) {
      const UnitDirection world = equirect_to_direction({static_cast<double>(u), static_cast<double>(v)}, grid);
      const Projection p = direction_to_pixel(rotate_world_to_camera(world, r), k);
      mask.set(u, v, p.in_front && inside_image(p.pixel, k));
    }
  });
  return mask;
}

RgbImage grey_outside(const EquirectFrame& frame, const BinaryMask& frustum) {
  if (frame.width() != frustum.width() || frame.height() != frustum.height()) {
    throw InvalidArgument("frustum mask does not match the frame size");
  }
  RgbImage out = frame;
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      if (frustum.get(x, y)) continue;
      std::uint8_t* p = out.pixel(x, y);
      for (int ch = 0; ch < 3; ++ch) p[ch] = static_cast<std::uint8_t>((p[ch] + 128) / 2);
    }
  }
  return out;
}

std::vector<PerspectiveFrame> render_sequence(const std::vector<EquirectFrame>& frames,
                                              const std::vector<Rotation>& rotations,
                                              const std::vector<Intrinsics>& intrinsics, int threads) {
  if (frames.size() != rotations.size() || frames.size() != intrinsics.size()) {
    throw InvalidArgument("frame, rotation and intrinsics counts differ");
  }
  std::vector<PerspectiveFrame> out;
  out.reserve(frames.size());
  SampleMap map;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    check_frame(frames[t]);
    const bool reuse = t > 0 && rotations[t] == rotations[t - 1] && intrinsics[t] == intrinsics[t - 1] &&
                       frames[t].grid() == map.grid;
    if (!reuse) map = build_sample_map(frames[t].grid(), rotations[t], intrinsics[t], threads);
    out.push_back(remap_bilinear(frames[t], map, threads));
  }
  return out;
}

}  // namespace panotrack
