#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace mood {

/// A CIELAB color. Component 0 is L* in [0,100], components 1 and 2 are the
/// a*/b* opponent axes in [-128,127].
using LabColor = Eigen::Vector3d;

struct Rgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
};

/// Per-dimension bounds of the working Lab box. The box contains the whole
/// sRGB gamut; colors that leave it are clamped at encode time.
inline const Eigen::Vector3d kLabMin{0.0, -128.0, -128.0};
inline const Eigen::Vector3d kLabMax{100.0, 127.0, 127.0};

// sRGB transfer function, componentwise on [0,1] values.
Eigen::Vector3d srgb_to_linear(const Eigen::Vector3d& srgb);
Eigen::Vector3d linear_to_srgb(const Eigen::Vector3d& linear);

// Linear RGB <-> CIE XYZ with the sRGB/D65 matrices.
Eigen::Vector3d linear_to_xyz(const Eigen::Vector3d& linear);
Eigen::Vector3d xyz_to_linear(const Eigen::Vector3d& xyz);

LabColor xyz_to_lab(const Eigen::Vector3d& xyz);
Eigen::Vector3d lab_to_xyz(const LabColor& lab);

/// Full decode chain for nonlinear sRGB components in [0,1].
LabColor srgb_to_lab(const Eigen::Vector3d& srgb01);
LabColor srgb_to_lab(Rgb8 c);

/// Linear RGB for a Lab color before any gamut clamp. May leave [0,1].
Eigen::Vector3d lab_to_linear_rgb(const LabColor& lab);

/// Inverse chain; out-of-gamut linear channels are clamped to [0,1] before
/// encoding, so the result is always a valid 8-bit triple.
Rgb8 lab_to_srgb(const LabColor& lab);

/// Device-naive CMYK (fractions in [0,1]) composed with the sRGB chain.
LabColor cmyk_to_lab(const Eigen::Vector4d& cmyk);

}  // namespace mood
