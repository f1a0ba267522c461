#include "panotrack/image.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>

#include "panotrack/error.hpp"

namespace panotrack {

namespace fs = std::filesystem;

RgbImage::RgbImage(int width, int height, std::uint8_t fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw InvalidArgument("image size must be non-negative");
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3, fill);
}

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 0 || height < 0 ||
      pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3) {
    throw InvalidArgument("RGB buffer length must equal width * height * 3");
  }
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw InvalidArgument("mask size must be non-negative");
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill ? 1 : 0);
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
  auto* what = static_cast<std::string*>(png_get_error_ptr(png));
  *what = msg;
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

// Returns rows of `channels` bytes per pixel (1 = gray, 3 = RGB).
std::vector<std::uint8_t> read_png(const fs::path& path, int channels, int& width, int& height) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open " + path.string());
  std::string error;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_error_fn, png_warning_fn);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng initialisation failed");
  }
  std::vector<std::uint8_t> data;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("cannot decode " + path.string() + ": " + error);
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  const auto color = png_get_color_type(png, info);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  const bool is_gray = color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA;
  if (channels == 3 && is_gray) png_set_gray_to_rgb(png);
  if (channels == 1 && !is_gray) png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  png_read_update_info(png, info);
  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  const std::size_t stride = static_cast<std::size_t>(width) * static_cast<std::size_t>(channels);
  if (png_get_rowbytes(png, info) != stride) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("unsupported PNG layout in " + path.string());
  }
  data.resize(stride * static_cast<std::size_t>(height));
  rows.resize(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) rows[static_cast<std::size_t>(y)] = data.data() + stride * static_cast<std::size_t>(y);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return data;
}

void write_png(const fs::path& path, const std::uint8_t* data, int width, int height, int channels) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot write " + path.string());
  std::string error;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_error_fn, png_warning_fn);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng initialisation failed");
  }
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("cannot encode " + path.string() + ": " + error);
  }
  png_init_io(png, file.get());
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * static_cast<std::size_t>(channels);
  for (int y = 0; y < height; ++y) {
    rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(data + stride * static_cast<std::size_t>(y));
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

RgbImage read_png_rgb(const fs::path& path) {
  int w = 0;
  int h = 0;
  auto data = read_png(path, 3, w, h);
  return RgbImage(w, h, std::move(data));
}

void write_png_rgb(const RgbImage& image, const fs::path& path) {
  write_png(path, image.data().data(), image.width(), image.height(), 3);
}

BinaryMask read_png_mask(const fs::path& path) {
  int w = 0;
  int h = 0;
  const auto data = read_png(path, 1, w, h);
  BinaryMask mask(w, h);
  auto bits = mask.bits();
  for (std::size_t i = 0; i < data.size(); ++i) bits[i] = data[i] >= 128 ? 1 : 0;
  return mask;
}

void write_png_mask(const BinaryMask& mask, const fs::path& path) {
  std::vector<std::uint8_t> data(mask.bits().size());
  std::transform(mask.bits().begin(), mask.bits().end(), data.begin(),
                 [](std::uint8_t b) { return static_cast<std::uint8_t>(b ? 255 : 0); });
  write_png(path, data.data(), mask.width(), mask.height(), 1);
}

std::string frame_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%05d.png", index);
  return buf;
}

std::vector<fs::path> list_clip_frames(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("clip directory not found: " + dir.string());
  std::vector<fs::path> frames;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("frame_") && name.ends_with(".png")) {
      frames.push_back(entry.path());
    }
  }
  std::sort(frames.begin(), frames.end());
  return frames;
}

std::vector<RgbImage> read_clip(const fs::path& dir) {
  std::vector<RgbImage> frames;
  for (const auto& p : list_clip_frames(dir)) frames.push_back(read_png_rgb(p));
  if (frames.empty()) throw IoError("no frame_*.png files in " + dir.string());
  return frames;
}

std::vector<BinaryMask> read_mask_clip(const fs::path& dir) {
  std::vector<BinaryMask> masks;
  for (const auto& p : list_clip_frames(dir)) masks.push_back(read_png_mask(p));
  if (masks.empty()) throw IoError("no frame_*.png masks in " + dir.string());
  return masks;
}

void write_clip(std::span<const RgbImage> frames, const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    write_png_rgb(frames[i], dir / frame_file_name(static_cast<int>(i)));
  }
}

void write_mask_clip(std::span<const BinaryMask> masks, const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < masks.size(); ++i) {
    write_png_mask(masks[i], dir / frame_file_name(static_cast<int>(i)));
  }
}

}  // namespace panotrack
