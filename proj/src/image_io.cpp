#include <png.h>

#include <csetjmp>
#include <cstdio>

#include <jpeglib.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "wmlp/errors.hpp"
#include "wmlp/imaging.hpp"

namespace wmlp::imaging {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return ext;
}

GrayImage8 from_rgb(int w, int h, const std::vector<std::uint8_t>& rgb) {
  GrayImage8 out(w, h);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) out.pixels[i] = luminance(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]);
  return out;
}

GrayImage8 load_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw ImageFormatError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  if (image.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&image);
    throw ImageFormatError("unsupported PNG bit depth (16-bit) in " + path.string());
  }
  if (image.width == 0 || image.height == 0) {
    png_image_free(&image);
    throw ImageFormatError("zero-dimension image " + path.string());
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw ImageFormatError("cannot decode PNG " + path.string() + ": " + msg);
  }
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  if (color) return from_rgb(w, h, buffer);
  GrayImage8 out(w, h);
  out.pixels = std::move(buffer);
  return out;
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

GrayImage8 load_jpeg(const std::filesystem::path& path) {
  std::FILE* file = std::fopen(path.c_str(), "rb");
  if (!file) throw ImageFormatError("cannot open " + path.string());
  jpeg_decompress_struct cinfo{};
  JpegErrorManager err{};
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  // Declared before setjmp so nothing with a destructor is live across the jump.
  std::vector<std::uint8_t> buffer;
  int w = 0;
  int h = 0;
  bool color = false;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    std::fclose(file);
    throw ImageFormatError("cannot decode JPEG " + path.string() + ": " + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file);
  jpeg_read_header(&cinfo, TRUE);
  // Colour goes through our own luminance weights so PNG and JPEG agree.
  color = cinfo.jpeg_color_space != JCS_GRAYSCALE;
  cinfo.out_color_space = color ? JCS_RGB : JCS_GRAYSCALE;
  jpeg_start_decompress(&cinfo);
  w = static_cast<int>(cinfo.output_width);
  h = static_cast<int>(cinfo.output_height);
  const std::size_t stride = static_cast<std::size_t>(w) * static_cast<std::size_t>(cinfo.output_components);
  buffer.resize(stride * static_cast<std::size_t>(h));
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = buffer.data() + stride * cinfo.output_scanline;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  std::fclose(file);
  if (w == 0 || h == 0) throw ImageFormatError("zero-dimension image " + path.string());
  if (color) return from_rgb(w, h, buffer);
  GrayImage8 out(w, h);
  out.pixels = std::move(buffer);
  return out;
}

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string pnm_token(std::istream& in) {
  std::string token;
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (std::isspace(ch)) {
      if (!token.empty()) break;
    } else {
      token.push_back(static_cast<char>(ch));
    }
    ch = in.get();
  }
  return token;
}

GrayImage8 load_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageFormatError("cannot open " + path.string());
  const std::string magic = pnm_token(in);
  if (magic != "P5" && magic != "P6") throw ImageFormatError("unsupported PNM variant '" + magic + "' in " + path.string());
  int w = 0;
  int h = 0;
  int maxval = 0;
  try {
    w = std::stoi(pnm_token(in));
    h = std::stoi(pnm_token(in));
    maxval = std::stoi(pnm_token(in));
  } catch (const std::exception&) {
    throw ImageFormatError("malformed PNM header in " + path.string());
  }
  if (w <= 0 || h <= 0) throw ImageFormatError("zero-dimension image " + path.string());
  if (maxval != 255) throw ImageFormatError("only 8-bit PNM (maxval 255) is supported: " + path.string());
  const std::size_t channels = magic == "P6" ? 3 : 1;
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h * channels);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (static_cast<std::size_t>(in.gcount()) != data.size()) throw ImageFormatError("truncated PNM data in " + path.string());
  if (channels == 3) return from_rgb(w, h, data);
  GrayImage8 out(w, h);
  out.pixels = std::move(data);
  return out;
}

}  // namespace

GrayImage8 load_grayscale(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw std::runtime_error("image file not found: " + path.string());
  const std::string ext = lower_extension(path);
  if (ext == ".png") return load_png(path);
  if (ext == ".jpg" || ext == ".jpeg") return load_jpeg(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return load_pnm(path);
  throw ImageFormatError("unsupported image format '" + ext + "': " + path.string());
}

void save_grayscale(const GrayImage8& img, const std::filesystem::path& path) {
  if (img.width <= 0 || img.height <= 0) throw std::invalid_argument("save_grayscale: empty image");
  if (lower_extension(path) == ".pgm") {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw std::runtime_error("failed to write " + path.string());
    return;
  }
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.pixels.data(), 0, nullptr)) {
    throw std::runtime_error("failed to write PNG " + path.string() + ": " + image.message);
  }
}

}  // namespace wmlp::imaging
