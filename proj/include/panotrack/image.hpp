#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "panotrack/geometry.hpp"

namespace panotrack {

/// Interleaved 8-bit RGB, row-major.
class RgbImage {
public:
  RgbImage() = default;
  RgbImage(int width, int height, std::uint8_t fill = 0);
  RgbImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t* pixel(int x, int y) { return &pixels_[offset(x, y)]; }
  const std::uint8_t* pixel(int x, int y) const { return &pixels_[offset(x, y)]; }
  std::span<std::uint8_t> data() { return pixels_; }
  std::span<const std::uint8_t> data() const { return pixels_; }

  EquirectGrid grid() const { return {width_, height_}; }

  bool operator==(const RgbImage&) const = default;

private:
  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
  }
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Equirectangular source frame; its grid is the image size.
using EquirectFrame = RgbImage;
/// Rendered pinhole frame; its size matches the intrinsics it was rendered with.
using PerspectiveFrame = RgbImage;

/// One flag per pixel, stored as 0/1 bytes.
class BinaryMask {
public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }

  bool get(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool value) { bits_[index(x, y)] = value ? 1 : 0; }
  std::span<const std::uint8_t> bits() const { return bits_; }
  std::span<std::uint8_t> bits() { return bits_; }

  std::size_t count() const;
  bool any() const { return count() > 0; }

  bool operator==(const BinaryMask&) const = default;

private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

// PNG files: colour frames are 8-bit RGB, masks 8-bit grayscale (0 / 255).
RgbImage read_png_rgb(const std::filesystem::path& path);
void write_png_rgb(const RgbImage& image, const std::filesystem::path& path);
/// Pixels >= 128 read as true.
BinaryMask read_png_mask(const std::filesystem::path& path);
void write_png_mask(const BinaryMask& mask, const std::filesystem::path& path);

/// "frame_%05d.png"
std::string frame_file_name(int index);
/// Sorted frame_*.png paths of a clip directory. Throws IoError if the directory is missing.
std::vector<std::filesystem::path> list_clip_frames(const std::filesystem::path& dir);
std::vector<RgbImage> read_clip(const std::filesystem::path& dir);
std::vector<BinaryMask> read_mask_clip(const std::filesystem::path& dir);
void write_clip(std::span<const RgbImage> frames, const std::filesystem::path& dir);
void write_mask_clip(std::span<const BinaryMask> masks, const std::filesystem::path& dir);

}  // namespace panotrack
