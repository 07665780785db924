#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "moodtone/colorspace.hpp"

namespace mood {

/// Raster of CIELAB pixels. Pixels are stored as columns of a 3xN matrix in
/// row-major scan order: column index i = y * width + x.
struct LabImage {
  Eigen::Index width = 0;
  Eigen::Index height = 0;
  Eigen::Matrix3Xd pixels;

  LabImage() = default;
  LabImage(Eigen::Index w, Eigen::Index h)
      : width(w), height(h), pixels(Eigen::Matrix3Xd::Zero(3, w * h)) {}

  Eigen::Index size() const { return pixels.cols(); }

  double& operator()(int channel, Eigen::Index x, Eigen::Index y) {
    return pixels(channel, y * width + x);
  }
  double operator()(int channel, Eigen::Index x, Eigen::Index y) const {
    return pixels(channel, y * width + x);
  }

  /// One channel as a height x width plane (row = y, col = x).
  Eigen::ArrayXXd channel(int c) const;
  void set_channel(int c, const Eigen::ArrayXXd& plane);
};

/// Interleaved 8-bit image as decoded from disk; channels is 3 (RGB) or
/// 4 (RGBA).
struct ImageU8 {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;

  bool has_alpha() const { return channels == 4; }
};

/// Decode the RGB planes of an 8-bit image to Lab; alpha is ignored here and
/// carried separately by the caller.
LabImage to_lab(const ImageU8& img);

/// Encode a Lab image back to 8-bit sRGB. When `alpha_source` is a 4-channel
/// image of the same dimensions its alpha plane is copied through untouched.
ImageU8 to_srgb8(const LabImage& img, const ImageU8* alpha_source = nullptr);

}  // namespace mood
