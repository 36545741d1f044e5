#include "wmlp/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <stdexcept>

namespace wmlp::imaging {

GrayImage8::GrayImage8(int w, int h, std::uint8_t fill)
    : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

std::uint8_t GrayImage8::clamped(int row, int col) const {
  return at(std::clamp(row, 0, height - 1), std::clamp(col, 0, width - 1));
}

std::size_t EdgeMap::count() const { return static_cast<std::size_t>(std::count(edges.begin(), edges.end(), true)); }

std::uint8_t luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  return static_cast<std::uint8_t>(std::clamp(std::lround(y), 0L, 255L));
}

GrayImage8 resize_bilinear(const GrayImage8& img, int out_w, int out_h) {
  if (out_w <= 0 || out_h <= 0) throw std::invalid_argument("resize_bilinear: target dimensions must be positive");
  if (img.width == out_w && img.height == out_h) return img;

  // Source coordinate of output pixel i: (i + 0.5) * in / out - 0.5, clamped.
  auto source = [](int i, int in, int out) {
    const double s = (i + 0.5) * static_cast<double>(in) / out - 0.5;
    return std::clamp(s, 0.0, static_cast<double>(in - 1));
  };

  GrayImage8 out(out_w, out_h);
  for (int r = 0; r < out_h; ++r) {
    const double sy = source(r, img.height, out_h);
    const int y0 = static_cast<int>(std::floor(sy));
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double fy = sy - y0;
    for (int c = 0; c < out_w; ++c) {
      const double sx = source(c, img.width, out_w);
      const int x0 = static_cast<int>(std::floor(sx));
      const int x1 = std::min(x0 + 1, img.width - 1);
      const double fx = sx - x0;
      const double top = img.at(y0, x0) * (1.0 - fx) + img.at(y0, x1) * fx;
      const double bottom = img.at(y1, x0) * (1.0 - fx) + img.at(y1, x1) * fx;
      const double v = top * (1.0 - fy) + bottom * fy;
      out.at(r, c) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return out;
}

NormalizedImage normalize(const GrayImage8& img) {
  NormalizedImage out{img.width, img.height, std::vector<double>(img.pixels.size())};
  std::transform(img.pixels.begin(), img.pixels.end(), out.values.begin(),
                 [](std::uint8_t p) { return (p / 255.0 - 0.5) / 0.5; });
  return out;
}

GrayImage8 denormalize(const NormalizedImage& img) {
  GrayImage8 out(img.width, img.height);
  std::transform(img.values.begin(), img.values.end(), out.pixels.begin(), [](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround((v * 0.5 + 0.5) * 255.0), 0L, 255L));
  });
  return out;
}

const std::array<double, 25>& gaussian_kernel() {
  static const std::array<double, 25> kernel = [] {
    constexpr double sigma = 1.4;
    std::array<double, 25> k{};
    double sum = 0.0;
    for (int dy = -2; dy <= 2; ++dy) {
      for (int dx = -2; dx <= 2; ++dx) {
        const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        k[(dy + 2) * 5 + (dx + 2)] = w;
        sum += w;
      }
    }
    for (double& w : k) w /= sum;
    return k;
  }();
  return kernel;
}

GrayImage8 gaussian_blur(const GrayImage8& img) {
  if (img.width < 5 || img.height < 5) throw std::invalid_argument("gaussian_blur: image smaller than 5x5 kernel");
  const auto& k = gaussian_kernel();
  GrayImage8 out(img.width, img.height);
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      double acc = 0.0;
      for (int dy = -2; dy <= 2; ++dy) {
        for (int dx = -2; dx <= 2; ++dx) acc += k[(dy + 2) * 5 + (dx + 2)] * img.clamped(r + dy, c + dx);
      }
      out.at(r, c) = static_cast<std::uint8_t>(std::clamp(std::lround(acc), 0L, 255L));
    }
  }
  return out;
}

namespace {

enum class Direction { kHorizontal, kDiagonal45, kVertical, kDiagonal135 };

// Angle of (gx, gy) folded into [0, 180) and snapped to the nearest 45 degrees.
// Rows grow downward, so 45 degrees points to (row + 1, col + 1).
Direction quantize(double gx, double gy) {
  double deg = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
  if (deg < 0.0) deg += 180.0;
  if (deg >= 180.0) deg -= 180.0;
  if (deg < 22.5 || deg >= 157.5) return Direction::kHorizontal;
  if (deg < 67.5) return Direction::kDiagonal45;
  if (deg < 112.5) return Direction::kVertical;
  return Direction::kDiagonal135;
}

}  // namespace

CannyStages canny_stages(const GrayImage8& img, ThresholdPair t) {
  if (!(t.low >= 0.0 && t.low < t.high)) throw std::invalid_argument("canny: threshold pair requires 0 <= low < high");

  CannyStages st;
  st.blurred = gaussian_blur(img);
  const int w = img.width;
  const int h = img.height;
  const auto n = static_cast<std::size_t>(w) * h;
  const GrayImage8& b = st.blurred;

  st.magnitude.assign(n, 0.0);
  std::vector<Direction> dir(n);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double gx = -1.0 * b.clamped(r - 1, c - 1) + 1.0 * b.clamped(r - 1, c + 1)  //
                        - 2.0 * b.clamped(r, c - 1) + 2.0 * b.clamped(r, c + 1)       //
                        - 1.0 * b.clamped(r + 1, c - 1) + 1.0 * b.clamped(r + 1, c + 1);
      const double gy = -1.0 * b.clamped(r - 1, c - 1) - 2.0 * b.clamped(r - 1, c) - 1.0 * b.clamped(r - 1, c + 1)  //
                        + 1.0 * b.clamped(r + 1, c - 1) + 2.0 * b.clamped(r + 1, c) + 1.0 * b.clamped(r + 1, c + 1);
      const auto i = static_cast<std::size_t>(r) * w + c;
      st.magnitude[i] = std::sqrt(gx * gx + gy * gy);
      dir[i] = quantize(gx, gy);
    }
  }

  auto mag = [&](int r, int c) {
    return st.magnitude[static_cast<std::size_t>(std::clamp(r, 0, h - 1)) * w + std::clamp(c, 0, w - 1)];
  };

  st.suppressed.assign(n, 0.0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const auto i = static_cast<std::size_t>(r) * w + c;
      const double m = st.magnitude[i];
      if (m == 0.0) continue;
      double a = 0.0;
      double z = 0.0;
      switch (dir[i]) {
        case Direction::kHorizontal: a = mag(r, c - 1); z = mag(r, c + 1); break;
        case Direction::kDiagonal45: a = mag(r - 1, c - 1); z = mag(r + 1, c + 1); break;
        case Direction::kVertical: a = mag(r - 1, c); z = mag(r + 1, c); break;
        case Direction::kDiagonal135: a = mag(r - 1, c + 1); z = mag(r + 1, c - 1); break;
      }
      if (m >= a && m >= z) st.suppressed[i] = m;
    }
  }

  st.strong.assign(n, false);
  st.weak.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = st.suppressed[i];
    if (m == 0.0) continue;
    if (m >= t.high) {
      st.strong[i] = true;
    } else if (m >= t.low) {
      st.weak[i] = true;
    }
  }

  // Hysteresis: grow from strong pixels through 8-connected weak chains.
  st.edges = EdgeMap{w, h, st.strong};
  std::deque<std::size_t> frontier;
  for (std::size_t i = 0; i < n; ++i) {
    if (st.strong[i]) frontier.push_back(i);
  }
  while (!frontier.empty()) {
    const std::size_t i = frontier.front();
    frontier.pop_front();
    const int r = static_cast<int>(i / w);
    const int c = static_cast<int>(i % w);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int rr = r + dy;
        const int cc = c + dx;
        if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
        const auto j = static_cast<std::size_t>(rr) * w + cc;
        if (st.weak[j] && !st.edges.edges[j]) {
          st.edges.edges[j] = true;
          frontier.push_back(j);
        }
      }
    }
  }
  return st;
}

EdgeMap canny(const GrayImage8& img, ThresholdPair t) { return canny_stages(img, t).edges; }

std::vector<EdgeMap> canny_multi(const GrayImage8& img) {
  std::vector<EdgeMap> maps;
  maps.reserve(kCannyThresholds.size());
  for (const auto& t : kCannyThresholds) maps.push_back(canny(img, t));
  return maps;
}

namespace {

GrayImage8 to_image(int w, int h, const std::vector<double>& values) {
  GrayImage8 out(w, h);
  std::transform(values.begin(), values.end(), out.pixels.begin(), [](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  });
  return out;
}

GrayImage8 to_image(const EdgeMap& e) {
  GrayImage8 out(e.width, e.height);
  for (std::size_t i = 0; i < e.edges.size(); ++i) out.pixels[i] = e.edges[i] ? 255 : 0;
  return out;
}

}  // namespace

void write_canny_debug(const GrayImage8& img, const std::filesystem::path& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  bool shared_written = false;
  for (const auto& t : kCannyThresholds) {
    const CannyStages st = canny_stages(img, t);
    if (!shared_written) {
      save_grayscale(st.blurred, dir / (stem + "_blur.png"));
      save_grayscale(to_image(img.width, img.height, st.magnitude), dir / (stem + "_mag.png"));
      save_grayscale(to_image(img.width, img.height, st.suppressed), dir / (stem + "_nms.png"));
      shared_written = true;
    }
    const std::string tag = "_t" + std::to_string(static_cast<int>(t.low)) + "-" + std::to_string(static_cast<int>(t.high));
    save_grayscale(to_image(st.edges), dir / (stem + tag + "_edges.png"));
  }
}

}  // namespace wmlp::imaging
