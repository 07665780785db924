#include "moodtone/image_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <fstream>

#include <jpeglib.h>

namespace mood {

namespace {

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX] = {};
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// Plain-C body so longjmp never skips C++ destructors.
bool decode_jpeg_raw(std::FILE* f, ImageU8* out, char* errbuf,
                     std::size_t errbuf_len) {
  jpeg_decompress_struct cinfo;
  JpegErrorMgr jerr;
  cinfo.err = jpeg_std_error(&jerr.pub);
  jerr.pub.error_exit = jpeg_error_exit;
  if (setjmp(jerr.jump)) {
    std::snprintf(errbuf, errbuf_len, "%s", jerr.message);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, f);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);

  out->width = static_cast<int>(cinfo.output_width);
  out->height = static_cast<int>(cinfo.output_height);
  out->channels = 3;
  out->data.resize(static_cast<std::size_t>(out->width) * out->height * 3);
  const std::size_t stride = static_cast<std::size_t>(out->width) * 3;
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = out->data.data() + cinfo.output_scanline * stride;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

ImageU8 load_jpeg(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (f == nullptr) throw IoError("cannot open " + path);
  ImageU8 img;
  char errbuf[JMSG_LENGTH_MAX + 1] = {};
  const bool ok = decode_jpeg_raw(f, &img, errbuf, sizeof(errbuf));
  std::fclose(f);
  if (!ok) throw IoError("JPEG decode failed for " + path + ": " + errbuf);
  return img;
}

ImageU8 load_png(const std::string& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_file(&image, path.c_str()) == 0)
    throw IoError("PNG decode failed for " + path + ": " + image.message);

  const bool alpha = (image.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  image.format = alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;

  ImageU8 img;
  img.width = static_cast<int>(image.width);
  img.height = static_cast<int>(image.height);
  img.channels = alpha ? 4 : 3;
  img.data.resize(PNG_IMAGE_SIZE(image));
  if (png_image_finish_read(&image, nullptr, img.data.data(), 0, nullptr) ==
      0) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw IoError("PNG decode failed for " + path + ": " + msg);
  }
  return img;
}

}  // namespace

ImageU8 load_image(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError("cannot open " + path);
  unsigned char magic[8] = {};
  probe.read(reinterpret_cast<char*>(magic), sizeof(magic));
  if (probe.gcount() >= 8 && png_sig_cmp(magic, 0, 8) == 0)
    return load_png(path);
  if (probe.gcount() >= 2 && magic[0] == 0xFF && magic[1] == 0xD8)
    return load_jpeg(path);
  throw IoError("unsupported image format: " + path);
}

void save_png(const std::string& path, const ImageU8& img) {
  if (img.channels != 3 && img.channels != 4)
    throw IoError("save_png expects 3- or 4-channel data");
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = img.channels == 4 ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
  if (png_image_write_to_file(&image, path.c_str(), 0, img.data.data(), 0,
                              nullptr) == 0)
    throw IoError("PNG encode failed for " + path + ": " + image.message);
}

}  // namespace mood
