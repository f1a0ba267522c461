#include "panotrack/curation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "panotrack/error.hpp"

namespace panotrack {

GrayImage to_gray(const RgbImage& image) {
  GrayImage g{image.width(), image.height(), {}};
  g.values.resize(static_cast<std::size_t>(image.width()) * static_cast<std::size_t>(image.height()));
  const auto px = image.data();
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    g.values[i] = 0.299 * px[3 * i] + 0.587 * px[3 * i + 1] + 0.114 * px[3 * i + 2];
  }
  return g;
}

double normalized_cross_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw InvalidArgument("NCC inputs must be non-empty and equally sized");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  // Relative tolerance: a strip counts as constant when its spread is at rounding level.
  const double scale = std::max({1.0, std::abs(ma), std::abs(mb)});
  const double eps = 1e-20 * scale * scale * n;
  if (saa <= eps || sbb <= eps) return 1.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double seam_score(const GrayImage& frame, int strip) {
  if (strip < 1 || strip > frame.width / 4) {
    throw InvalidArgument("seam strip width must lie in [1, width / 4]");
  }
  std::vector<double> left;
  std::vector<double> right;
  left.reserve(static_cast<std::size_t>(strip * frame.height));
  right.reserve(left.capacity());
  for (int y = 0; y < frame.height; ++y) {
    for (int x = 0; x < strip; ++x) {
      left.push_back(frame.at(x, y));
      right.push_back(frame.at(frame.width - strip + x, y));
    }
  }
  return normalized_cross_correlation(left, right);
}

double seam_check(const EquirectFrame& frame, int strip) { return seam_score(to_gray(frame), strip); }

double dynamics_score(std::span<const GrayImage> frames) {
  if (frames.size() < 2) throw InvalidArgument("dynamics check needs at least two frames");
  const std::size_t n_px = frames[0].values.size();
  for (const auto& f : frames) {
    if (f.values.size() != n_px) throw InvalidArgument("dynamics check: frame sizes differ");
  }
  const double n = static_cast<double>(frames.size());
  double total = 0.0;
  for (std::size_t i = 0; i < n_px; ++i) {
    double mean = 0.0;
    for (const auto& f : frames) mean += f.values[i];
    mean /= n;
    double var = 0.0;
    for (const auto& f : frames) var += (f.values[i] - mean) * (f.values[i] - mean);
    total += var / n;
  }
  return n_px == 0 ? 0.0 : total / static_cast<double>(n_px);
}

double dynamics_check(std::span<const RgbImage> frames) {
  std::vector<GrayImage> gray;
  gray.reserve(frames.size());
  for (const auto& f : frames) gray.push_back(to_gray(f));
  return dynamics_score(gray);
}

BinaryMask adaptive_threshold(const GrayImage& gray, const PosterParams& params) {
  const int w = gray.width;
  const int h = gray.height;
  // Summed-area table with a zero border row/column.
  std::vector<double> sat(static_cast<std::size_t>(w + 1) * static_cast<std::size_t>(h + 1), 0.0);
  auto s = [&](int x, int y) -> double& { return sat[static_cast<std::size_t>(y) * static_cast<std::size_t>(w + 1) + static_cast<std::size_t>(x)]; };
  for (int y = 0; y < h; ++y) {
    double row = 0.0;
    for (int x = 0; x < w; ++x) {
      row += gray.at(x, y);
      s(x + 1, y + 1) = s(x + 1, y) + row;
    }
  }
  const int half = std::max(params.window / 2, 0);
  const double black = params.black_level * 255.0;
  BinaryMask out(w, h);
  for (int y = 0; y < h; ++y) {
    const int y0 = std::max(0, y - half);
    const int y1 = std::min(h, y + half + 1);
    for (int x = 0; x < w; ++x) {
      const int x0 = std::max(0, x - half);
      const int x1 = std::min(w, x + half + 1);
      const double area = static_cast<double>((x1 - x0) * (y1 - y0));
      const double mean = (s(x1, y1) - s(x0, y1) - s(x1, y0) + s(x0, y0)) / area;
      const double v = gray.at(x, y);
      out.set(x, y, v >= mean - params.offset && v > black);
    }
  }
  return out;
}

ContentBox largest_component_box(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<int> label(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), -1);
  std::vector<int> stack;
  ContentBox best;
  std::size_t best_size = 0;
  int next = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x);
      if (!mask.get(x, y) || label[idx] >= 0) continue;
      ContentBox box{x, y, x + 1, y + 1};
      std::size_t size = 0;
      label[idx] = next;
      stack.push_back(static_cast<int>(idx));
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        ++size;
        const int cx = cur % w;
        const int cy = cur / w;
        box.x0 = std::min(box.x0, cx);
        box.y0 = std::min(box.y0, cy);
        box.x1 = std::max(box.x1, cx + 1);
        box.y1 = std::max(box.y1, cy + 1);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h || !mask.get(nx, ny)) continue;
            const std::size_t nidx = static_cast<std::size_t>(ny) * static_cast<std::size_t>(w) + static_cast<std::size_t>(nx);
            if (label[nidx] >= 0) continue;
            label[nidx] = next;
            stack.push_back(static_cast<int>(nidx));
          }
        }
      }
      if (size > best_size) {
        best_size = size;
        best = box;
      }
      ++next;
    }
  }
  return best;
}

PosterResult poster_check(const RgbImage& frame, const PosterParams& params) {
  const GrayImage gray = to_gray(frame);
  PosterResult r;
  r.box = largest_component_box(adaptive_threshold(gray, params));
  const double frame_area = static_cast<double>(gray.width) * gray.height;
  r.box_fraction = frame_area > 0 ? static_cast<double>(r.box.area()) / frame_area : 0.0;
  double border_sum = 0.0;
  std::size_t border_n = 0;
  for (int y = 0; y < gray.height; ++y) {
    for (int x = 0; x < gray.width; ++x) {
      if (x >= r.box.x0 && x < r.box.x1 && y >= r.box.y0 && y < r.box.y1) continue;
      border_sum += gray.at(x, y);
      ++border_n;
    }
  }
  r.border_mean = border_n ? border_sum / static_cast<double>(border_n) / 255.0 : 0.0;
  r.flagged = r.box_fraction < params.area_ratio && (border_n == 0 || r.border_mean < params.black_level);
  return r;
}

const CheckResult* CurationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<int> evenly_spaced_indices(int total, int count) {
  std::vector<int> idx;
  if (total <= 0) return idx;
  if (count <= 1 || total <= count) {
    if (count == 1 && total > 1) return {0};
    for (int i = 0; i < total; ++i) idx.push_back(i);
    return idx;
  }
  for (int i = 0; i < count; ++i) {
    idx.push_back(static_cast<int>(std::llround(static_cast<double>(i) * (total - 1) / (count - 1))));
  }
  return idx;
}

namespace {

CurationReport curate_sampled(std::span<const RgbImage> sampled, std::vector<int> indices,
                              const CurationConfig& config) {
  if (sampled.empty()) throw InvalidArgument("curation needs at least one frame");
  CurationReport report;
  report.frame_indices = std::move(indices);
  if (config.check_seam) {
    CheckResult c{"seam", 0.0, false, {}};
    for (const auto& f : sampled) c.per_frame.push_back(seam_check(f, config.seam_strip));
    c.score = std::accumulate(c.per_frame.begin(), c.per_frame.end(), 0.0) / static_cast<double>(c.per_frame.size());
    c.pass = c.score >= config.seam_min;
    report.checks.push_back(std::move(c));
  }
  if (config.check_dynamics) {
    CheckResult c{"dynamics", 0.0, false, {}};
    c.score = sampled.size() >= 2 ? dynamics_check(sampled) : 0.0;
    c.pass = c.score >= config.dynamics_min;
    report.checks.push_back(std::move(c));
  }
  if (config.check_poster) {
    CheckResult c{"poster", 0.0, false, {}};
    for (const auto& f : sampled) c.per_frame.push_back(poster_check(f, config.poster).flagged ? 1.0 : 0.0);
    c.score = std::accumulate(c.per_frame.begin(), c.per_frame.end(), 0.0) / static_cast<double>(c.per_frame.size());
    c.pass = c.score < config.poster_max_fraction;
    report.checks.push_back(std::move(c));
  }
  report.pass = std::all_of(report.checks.begin(), report.checks.end(), [](const CheckResult& c) { return c.pass; });
  return report;
}

}  // namespace

CurationReport curate(std::span<const RgbImage> frames, const CurationConfig& config) {
  const auto indices = evenly_spaced_indices(static_cast<int>(frames.size()), config.sample_frames);
  std::vector<RgbImage> sampled;
  for (int i : indices) sampled.push_back(frames[static_cast<std::size_t>(i)]);
  return curate_sampled(sampled, indices, config);
}

CurationReport curate_clip(const std::filesystem::path& dir, const CurationConfig& config) {
  const auto paths = list_clip_frames(dir);
  if (paths.empty()) throw IoError("no frame_*.png files in " + dir.string());
  const auto indices = evenly_spaced_indices(static_cast<int>(paths.size()), config.sample_frames);
  std::vector<RgbImage> sampled;
  for (int i : indices) sampled.push_back(read_png_rgb(paths[static_cast<std::size_t>(i)]));
  return curate_sampled(sampled, indices, config);
}

}  // namespace panotrack
