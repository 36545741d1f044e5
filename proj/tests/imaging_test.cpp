#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>

#include <jpeglib.h>

#include "test_util.hpp"
#include "wmlp/errors.hpp"
#include "wmlp/imaging.hpp"

namespace wmlp::imaging {
namespace {

using wmlp::testing::TempDir;

TEST(LoadGrayscale, GrayscalePassesThrough) {
  TempDir tmp("load");
  std::string pgm = "P5\n# comment\n2 1\n255\n";
  pgm += static_cast<char>(77);
  pgm += static_cast<char>(200);
  wmlp::testing::write_bytes(tmp / "a.pgm", pgm);
  const GrayImage8 img = load_grayscale(tmp / "a.pgm");
  ASSERT_EQ(img.width, 2);
  ASSERT_EQ(img.height, 1);
  EXPECT_EQ(img.pixels[0], 77);
  EXPECT_EQ(img.pixels[1], 200);
}

TEST(LoadGrayscale, RgbUsesLuminanceWeights) {
  TempDir tmp("load");
  std::string ppm = "P6\n2 1\n255\n";
  for (int v : {255, 255, 255, 100, 150, 200}) ppm += static_cast<char>(v);
  wmlp::testing::write_bytes(tmp / "c.ppm", ppm);
  const GrayImage8 img = load_grayscale(tmp / "c.ppm");
  EXPECT_EQ(img.pixels[0], 255);
  // 0.299*100 + 0.587*150 + 0.114*200 = 140.75
  EXPECT_EQ(img.pixels[1], 141);
}

TEST(LoadGrayscale, PngRoundTrip) {
  TempDir tmp("png");
  Rng rng(3);
  const GrayImage8 img = wmlp::testing::random_image(17, 9, rng);
  save_grayscale(img, tmp / "x.png");
  EXPECT_EQ(load_grayscale(tmp / "x.png"), img);
}

// Encodes a constant image at maximum quality with the reference encoder.
void write_constant_jpeg(const std::filesystem::path& path, int w, int h, std::vector<std::uint8_t> px) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  ASSERT_NE(f, nullptr);
  jpeg_compress_struct c{};
  jpeg_error_mgr err{};
  c.err = jpeg_std_error(&err);
  jpeg_create_compress(&c);
  jpeg_stdio_dest(&c, f);
  c.image_width = static_cast<JDIMENSION>(w);
  c.image_height = static_cast<JDIMENSION>(h);
  c.input_components = static_cast<int>(px.size());
  c.in_color_space = px.size() == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_set_defaults(&c);
  jpeg_set_quality(&c, 100, TRUE);
  jpeg_start_compress(&c, TRUE);
  std::vector<std::uint8_t> row;
  for (int x = 0; x < w; ++x) row.insert(row.end(), px.begin(), px.end());
  while (c.next_scanline < c.image_height) {
    JSAMPROW r = row.data();
    jpeg_write_scanlines(&c, &r, 1);
  }
  jpeg_finish_compress(&c);
  jpeg_destroy_compress(&c);
  std::fclose(f);
}

TEST(LoadGrayscale, JpegGrayAndColor) {
  TempDir tmp("jpeg");
  write_constant_jpeg(tmp / "g.jpg", 24, 16, {77});
  const GrayImage8 g = load_grayscale(tmp / "g.jpg");
  ASSERT_EQ(g.width, 24);
  ASSERT_EQ(g.height, 16);
  for (auto v : g.pixels) EXPECT_EQ(v, 77);

  // YCbCr round trip is lossy by a level or two even at quality 100.
  write_constant_jpeg(tmp / "c.JPEG", 16, 8, {100, 150, 200});
  const GrayImage8 c = load_grayscale(tmp / "c.JPEG");
  ASSERT_EQ(c.width, 16);
  for (auto v : c.pixels) EXPECT_NEAR(v, 141, 2);
}

TEST(LoadGrayscale, Errors) {
  TempDir tmp("load");
  EXPECT_THROW(load_grayscale(tmp / "missing.png"), std::runtime_error);
  wmlp::testing::write_bytes(tmp / "a.bmp", "BM");
  EXPECT_THROW(load_grayscale(tmp / "a.bmp"), ImageFormatError);
  wmlp::testing::write_bytes(tmp / "z.pgm", "P5\n0 4\n255\n");
  EXPECT_THROW(load_grayscale(tmp / "z.pgm"), ImageFormatError);
  wmlp::testing::write_bytes(tmp / "t.pgm", "P5\n4 4\n255\nab");
  EXPECT_THROW(load_grayscale(tmp / "t.pgm"), ImageFormatError);
  wmlp::testing::write_bytes(tmp / "bad.png", "not a png at all");
  EXPECT_THROW(load_grayscale(tmp / "bad.png"), ImageFormatError);
  wmlp::testing::write_bytes(tmp / "bad.jpg", "not a jpeg either");
  EXPECT_THROW(load_grayscale(tmp / "bad.jpg"), ImageFormatError);
  wmlp::testing::write_bytes(tmp / "cut.jpg", std::string("\xff\xd8\xff\xe0", 4));
  EXPECT_THROW(load_grayscale(tmp / "cut.jpg"), ImageFormatError);
}

TEST(ResizeBilinear, ConstantStaysConstant) {
  const GrayImage8 img(7, 5, 42);
  const GrayImage8 out = resize_bilinear(img, 13, 3);
  for (auto p : out.pixels) EXPECT_EQ(p, 42);
}

TEST(ResizeBilinear, SameSizeIsIdentity) {
  Rng rng(1);
  const GrayImage8 img = wmlp::testing::random_image(9, 6, rng);
  EXPECT_EQ(resize_bilinear(img, 9, 6), img);
}

TEST(ResizeBilinear, TwoByTwoUpsampleMatchesHandEvaluation) {
  GrayImage8 img(2, 2);
  img.at(0, 1) = 255;
  img.at(1, 1) = 255;
  // Output centres map to x = -0.25, 0.25, 0.75, 1.25, clamped to [0, 1]:
  // 0, 255 * 0.25 = 63.75, 255 * 0.75 = 191.25, 255.
  const GrayImage8 out = resize_bilinear(img, 4, 4);
  for (int r = 0; r < 4; ++r) {
    EXPECT_EQ(out.at(r, 0), 0);
    EXPECT_EQ(out.at(r, 1), 64);
    EXPECT_EQ(out.at(r, 2), 191);
    EXPECT_EQ(out.at(r, 3), 255);
  }
}

TEST(ResizeBilinear, OutputWithinInputRange) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const GrayImage8 img = wmlp::testing::random_image(5 + trial, 3 + trial / 2, rng);
    const auto [lo, hi] = std::minmax_element(img.pixels.begin(), img.pixels.end());
    const GrayImage8 out = resize_bilinear(img, 128, 128);
    for (auto p : out.pixels) {
      EXPECT_GE(p, *lo);
      EXPECT_LE(p, *hi);
    }
  }
}

TEST(ResizeBilinear, RejectsZeroTarget) {
  const GrayImage8 img(4, 4, 1);
  EXPECT_THROW(resize_bilinear(img, 0, 4), std::invalid_argument);
  EXPECT_THROW(resize_bilinear(img, 4, 0), std::invalid_argument);
}

TEST(Normalize, Endpoints) {
  GrayImage8 img(3, 1);
  img.pixels = {0, 255, 128};
  const NormalizedImage n = normalize(img);
  EXPECT_EQ(n.values[0], -1.0);
  EXPECT_EQ(n.values[1], 1.0);
  EXPECT_NEAR(n.values[2], (128.0 / 255.0 - 0.5) / 0.5, 1e-15);
  EXPECT_NEAR(n.values[2], 0.00392156862745098, 1e-15);
}

TEST(Normalize, InvertibleForEveryByte) {
  GrayImage8 img(256, 1);
  for (int v = 0; v < 256; ++v) img.pixels[v] = static_cast<std::uint8_t>(v);
  const NormalizedImage n = normalize(img);
  for (double v : n.values) {
    EXPECT_GE(v, -1.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_EQ(denormalize(n), img);
}

TEST(GaussianBlur, KernelIsNormalized) {
  double sum = 0.0;
  for (double k : gaussian_kernel()) sum += k;
  EXPECT_NEAR(sum, 1.0, 1e-15);
}

TEST(GaussianBlur, PreservesConstant) {
  for (int v : {0, 17, 255}) {
    const GrayImage8 out = gaussian_blur(GrayImage8(9, 7, static_cast<std::uint8_t>(v)));
    for (auto p : out.pixels) EXPECT_EQ(p, v);
  }
}

TEST(GaussianBlur, ImpulseCentreIsCentreWeight) {
  double total = 0.0;
  for (int dy = -2; dy <= 2; ++dy) {
    for (int dx = -2; dx <= 2; ++dx) total += std::exp(-(dx * dx + dy * dy) / (2.0 * 1.4 * 1.4));
  }
  const double k00 = 1.0 / total;
  GrayImage8 img(11, 11);
  img.at(5, 5) = 255;
  EXPECT_EQ(gaussian_blur(img).at(5, 5), std::lround(255.0 * k00));
}

int max_abs_laplacian(const GrayImage8& img) {
  int best = 0;
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      const int lap = img.clamped(r - 1, c) + img.clamped(r + 1, c) + img.clamped(r, c - 1) + img.clamped(r, c + 1) -
                      4 * img.at(r, c);
      best = std::max(best, std::abs(lap));
    }
  }
  return best;
}

TEST(GaussianBlur, SecondPassDoesNotSharpen) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const GrayImage8 once = gaussian_blur(wmlp::testing::random_image(32, 24, rng));
    EXPECT_LE(max_abs_laplacian(gaussian_blur(once)), max_abs_laplacian(once));
  }
}

TEST(GaussianBlur, RejectsSmallImages) { EXPECT_THROW(gaussian_blur(GrayImage8(4, 9)), std::invalid_argument); }

TEST(Canny, ConstantImageHasNoEdges) {
  const EdgeMap e = canny(GrayImage8(16, 16, 90), {50, 150});
  EXPECT_EQ(e.count(), 0u);
  for (const EdgeMap& m : canny_multi(GrayImage8(16, 16, 200))) EXPECT_EQ(m.count(), 0u);
}

TEST(Canny, StepEdgeIsLocalized) {
  const GrayImage8 img = wmlp::testing::step_image(32, 20);
  const EdgeMap e = canny(img, {50, 150});
  EXPECT_GT(e.count(), 0u);
  // Boundary lies between columns 15 and 16.
  for (int r = 0; r < e.height; ++r) {
    for (int c = 0; c < e.width; ++c) {
      if (e.at(r, c)) EXPECT_TRUE(c >= 14 && c <= 17) << "edge at column " << c;
    }
  }
  for (const EdgeMap& m : canny_multi(img)) {
    EXPECT_GT(m.count(), 0u);
    for (int r = 0; r < m.height; ++r) {
      for (int c = 0; c < m.width; ++c) {
        if (m.at(r, c)) EXPECT_TRUE(c >= 14 && c <= 17);
      }
    }
  }
}

TEST(Canny, RetainedPixelsAreStrongOrWeak) {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const GrayImage8 img = wmlp::testing::random_image(24, 24, rng);
    for (const auto& t : kCannyThresholds) {
      const CannyStages st = canny_stages(img, t);
      ASSERT_EQ(st.edges.edges.size(), img.pixels.size());
      for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        if (st.edges.edges[i]) {
          EXPECT_TRUE(st.strong[i] || st.weak[i]);
          EXPECT_GE(st.magnitude[i], t.low);
        }
        if (st.strong[i]) EXPECT_TRUE(st.edges.edges[i]);
      }
    }
  }
}

TEST(Canny, StrongSetShrinksAsThresholdsRise) {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const GrayImage8 img = wmlp::testing::random_image(20, 20, rng);
    const CannyStages lo = canny_stages(img, kCannyThresholds[0]);
    const CannyStages mid = canny_stages(img, kCannyThresholds[1]);
    const CannyStages hi = canny_stages(img, kCannyThresholds[2]);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
      if (hi.strong[i]) EXPECT_TRUE(mid.strong[i]);
      if (mid.strong[i]) EXPECT_TRUE(lo.strong[i]);
    }
  }
}

TEST(Canny, MultiReturnsThreeMapsInOrder) {
  Rng rng(2);
  const GrayImage8 img = wmlp::testing::random_image(16, 16, rng);
  const auto maps = canny_multi(img);
  ASSERT_EQ(maps.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(maps[k].edges, canny(img, kCannyThresholds[k]).edges);
}

TEST(Canny, RejectsInvalidThresholds) {
  const GrayImage8 img(8, 8, 0);
  EXPECT_THROW(canny(img, {150, 150}), std::invalid_argument);
  EXPECT_THROW(canny(img, {200, 100}), std::invalid_argument);
  EXPECT_THROW(canny(img, {-1, 100}), std::invalid_argument);
  EXPECT_THROW(canny(GrayImage8(4, 4), {50, 150}), std::invalid_argument);
}

TEST(Canny, DebugOutputUsesStageSuffixes) {
  TempDir tmp("debug");
  write_canny_debug(wmlp::testing::step_image(16, 16), tmp.path(), "img");
  for (const char* name : {"img_blur.png", "img_mag.png", "img_nms.png", "img_t50-150_edges.png",
                           "img_t100-200_edges.png", "img_t150-250_edges.png"}) {
    EXPECT_TRUE(std::filesystem::exists(tmp / name)) << name;
  }
  const GrayImage8 edges = load_grayscale(tmp / "img_t50-150_edges.png");
  for (auto p : edges.pixels) EXPECT_TRUE(p == 0 || p == 255);
}

}  // namespace
}  // namespace wmlp::imaging
