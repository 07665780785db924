#include "moodtone/image.hpp"

#include <cassert>

namespace mood {

Eigen::ArrayXXd LabImage::channel(int c) const {
  Eigen::ArrayXXd plane(height, width);
  for (Eigen::Index y = 0; y < height; ++y)
    for (Eigen::Index x = 0; x < width; ++x)
      plane(y, x) = pixels(c, y * width + x);
  return plane;
}

void LabImage::set_channel(int c, const Eigen::ArrayXXd& plane) {
  assert(plane.rows() == height && plane.cols() == width);
  for (Eigen::Index y = 0; y < height; ++y)
    for (Eigen::Index x = 0; x < width; ++x)
      pixels(c, y * width + x) = plane(y, x);
}

LabImage to_lab(const ImageU8& img) {
  LabImage out(img.width, img.height);
  const int stride = img.channels;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const std::uint8_t* px = img.data.data() + i * stride;
    out.pixels.col(i) = srgb_to_lab(Rgb8{px[0], px[1], px[2]});
  }
  return out;
}

ImageU8 to_srgb8(const LabImage& img, const ImageU8* alpha_source) {
  const bool alpha = alpha_source != nullptr && alpha_source->has_alpha();
  ImageU8 out;
  out.width = static_cast<int>(img.width);
  out.height = static_cast<int>(img.height);
  out.channels = alpha ? 4 : 3;
  out.data.resize(static_cast<std::size_t>(img.size()) * out.channels);
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    const Rgb8 c = lab_to_srgb(img.pixels.col(i));
    std::uint8_t* px = out.data.data() + i * out.channels;
    px[0] = c.r;
    px[1] = c.g;
    px[2] = c.b;
    if (alpha) px[3] = alpha_source->data[i * 4 + 3];
  }
  return out;
}

}  // namespace mood
