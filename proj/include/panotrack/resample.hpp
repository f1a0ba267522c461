#pragma once

// Equirectangular -> perspective resampling. Output pixel (c, r) is the ray
// through its centre (c + 0.5, r + 0.5), rotated camera-to-world and looked up
// on the sphere: bilinear for colour, nearest texel for masks. Longitude wraps;
// rows clamp to the first/last texel row at the poles. Every output pixel is a
// pure function of its own coordinates, so results do not depend on the number
// of worker threads.

#include <cstdint>
#include <vector>

#include "panotrack/geometry.hpp"
#include "panotrack/image.hpp"

namespace panotrack {

/// Per-output-pixel source coordinates for one (R, K) pair. Reusable across
/// frames that share the same camera.
struct SampleMap {
  int width = 0;
  int height = 0;
  EquirectGrid grid;
  std::vector<EquirectCoord> coords;  // row-major

  const EquirectCoord& at(int x, int y) const {
    return coords[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }
};

/// Centre of perspective pixel (col, row).
inline PixelCoord pixel_center(int col, int row) { return {col + 0.5, row + 0.5}; }

/// Source lookup coordinate for one output pixel.
EquirectCoord source_coordinate(int col, int row, const Rotation& r, const Intrinsics& k,
                                const EquirectGrid& grid);

SampleMap build_sample_map(const EquirectGrid& grid, const Rotation& r, const Intrinsics& k,
                           int threads = 1);

/// Bilinear lookup of one RGB texel triple with longitude wrap and row clamp.
void sample_bilinear(const RgbImage& src, const EquirectCoord& c, std::uint8_t out[3]);
bool sample_nearest(const BinaryMask& src, const EquirectCoord& c);

RgbImage remap_bilinear(const RgbImage& src, const SampleMap& map, int threads = 1);
BinaryMask remap_nearest(const BinaryMask& src, const SampleMap& map, int threads = 1);

PerspectiveFrame render_perspective(const EquirectFrame& src, const Rotation& r, const Intrinsics& k,
                                    int threads = 1);

BinaryMask project_mask(const BinaryMask& src_mask, const Rotation& r, const Intrinsics& k,
                        int threads = 1);

/// True at equirect texels whose direction lands in front of the camera and
/// inside [0, W) x [0, H).
BinaryMask frustum_on_equirect(const Rotation& r, const Intrinsics& k, const EquirectGrid& grid,
                               int threads = 1);

/// Darkens texels outside `frustum` towards mid-grey for visual overlays.
RgbImage grey_outside(const EquirectFrame& frame, const BinaryMask& frustum);

/// Renders one output frame per rotation, reusing the sample map while the
/// camera stays unchanged between consecutive frames.
std::vector<PerspectiveFrame> render_sequence(const std::vector<EquirectFrame>& frames,
                                              const std::vector<Rotation>& rotations,
                                              const std::vector<Intrinsics>& intrinsics, int threads = 1);

}  // namespace panotrack
