#include "moodtone/colorspace.hpp"

#include <algorithm>
#include <cmath>

namespace mood {

namespace {

// sRGB <-> XYZ matrices (IEC 61966-2-1, D65).
const Eigen::Matrix3d kRgbToXyz = (Eigen::Matrix3d() << 0.4124564, 0.3575761,
                                   0.1804375, 0.2126729, 0.7151522, 0.0721750,
                                   0.0193339, 0.1191920, 0.9503041)
                                      .finished();

const Eigen::Matrix3d kXyzToRgb =
    (Eigen::Matrix3d() << 3.2404542, -1.5371385, -0.4985314, -0.9692660,
     1.8760108, 0.0415560, 0.0556434, -0.2040259, 1.0572252)
        .finished();

const Eigen::Vector3d kWhiteD65{0.95047, 1.0, 1.08883};

double srgb_decode(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double srgb_encode(double c) {
  return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

// CIE L* companding function and its inverse.
double lab_f(double t) {
  constexpr double d = 6.0 / 29.0;
  return t > d * d * d ? std::cbrt(t) : t / (3.0 * d * d) + 4.0 / 29.0;
}

double lab_f_inv(double t) {
  constexpr double d = 6.0 / 29.0;
  return t > d ? t * t * t : 3.0 * d * d * (t - 4.0 / 29.0);
}

}  // namespace

Eigen::Vector3d srgb_to_linear(const Eigen::Vector3d& srgb) {
  return {srgb_decode(srgb.x()), srgb_decode(srgb.y()), srgb_decode(srgb.z())};
}

Eigen::Vector3d linear_to_srgb(const Eigen::Vector3d& linear) {
  return {srgb_encode(linear.x()), srgb_encode(linear.y()),
          srgb_encode(linear.z())};
}

Eigen::Vector3d linear_to_xyz(const Eigen::Vector3d& linear) {
  return kRgbToXyz * linear;
}

Eigen::Vector3d xyz_to_linear(const Eigen::Vector3d& xyz) {
  return kXyzToRgb * xyz;
}

LabColor xyz_to_lab(const Eigen::Vector3d& xyz) {
  const double fx = lab_f(xyz.x() / kWhiteD65.x());
  const double fy = lab_f(xyz.y() / kWhiteD65.y());
  const double fz = lab_f(xyz.z() / kWhiteD65.z());
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Eigen::Vector3d lab_to_xyz(const LabColor& lab) {
  const double fy = (lab.x() + 16.0) / 116.0;
  const double fx = fy + lab.y() / 500.0;
  const double fz = fy - lab.z() / 200.0;
  return {kWhiteD65.x() * lab_f_inv(fx), kWhiteD65.y() * lab_f_inv(fy),
          kWhiteD65.z() * lab_f_inv(fz)};
}

LabColor srgb_to_lab(const Eigen::Vector3d& srgb01) {
  return xyz_to_lab(linear_to_xyz(srgb_to_linear(srgb01)));
}

LabColor srgb_to_lab(Rgb8 c) {
  return srgb_to_lab(Eigen::Vector3d{c.r / 255.0, c.g / 255.0, c.b / 255.0});
}

Eigen::Vector3d lab_to_linear_rgb(const LabColor& lab) {
  return xyz_to_linear(lab_to_xyz(lab));
}

Rgb8 lab_to_srgb(const LabColor& lab) {
  Eigen::Vector3d linear = lab_to_linear_rgb(lab);
  linear = linear.cwiseMax(0.0).cwiseMin(1.0);
  const Eigen::Vector3d srgb = linear_to_srgb(linear);
  const auto quantize = [](double v) {
    return static_cast<std::uint8_t>(
        std::clamp(std::lround(v * 255.0), 0L, 255L));
  };
  return {quantize(srgb.x()), quantize(srgb.y()), quantize(srgb.z())};
}

LabColor cmyk_to_lab(const Eigen::Vector4d& cmyk) {
  const double k = cmyk(3);
  const Eigen::Vector3d srgb{(1.0 - cmyk(0)) * (1.0 - k),
                             (1.0 - cmyk(1)) * (1.0 - k),
                             (1.0 - cmyk(2)) * (1.0 - k)};
  return srgb_to_lab(srgb);
}

}  // namespace mood
