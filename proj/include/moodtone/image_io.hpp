#pragma once

#include <stdexcept>
#include <string>

#include "moodtone/image.hpp"

namespace mood {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Decode a PNG (any color type, converted to 8-bit RGB/RGBA) or a baseline
/// JPEG (RGB). The format is detected from the file's magic bytes.
ImageU8 load_image(const std::string& path);

/// Write an 8-bit RGB or RGBA PNG. Encoding settings are fixed so identical
/// pixels produce identical files.
void save_png(const std::string& path, const ImageU8& img);

}  // namespace mood
