#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "moodtone/image.hpp"
#include "moodtone/scheme.hpp"

namespace mood {

struct EmOptions {
  int max_iter = 200;
  double tol = 1e-7;                 // stop when per-pixel log-likelihood gain < tol
  Eigen::Index sample_cap = 100000;  // uniform subsample bound for the EM fit
};

/// Three-component Gaussian mixture over an image's Lab pixels, components
/// sorted by weight descending. Assignments are 0-based hard labels by
/// maximum responsibility, covering every pixel of the full image.
struct ClusterModel {
  Eigen::Vector3d weights = Eigen::Vector3d::Zero();
  std::array<LabColor, 3> means{};
  std::array<Eigen::Matrix3d, 3> covariances{};
  std::vector<int> assignments;
  std::array<Eigen::Vector3d, 3> bounds_min{};  // per-cluster per-dimension
  std::array<Eigen::Vector3d, 3> bounds_max{};
  std::vector<double> log_likelihood;  // per-pixel ll at each EM iteration
  bool degenerate_fallback = false;
};

struct DegenerateImageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fit the mixture by EM with k-means++ initialization. Deterministic for a
/// fixed (image, seed, options). Throws DegenerateImageError when the image
/// has fewer than three distinct colors.
ClusterModel fit_em(const LabImage& img, std::uint64_t seed,
                    const EmOptions& opts = {});

/// Fallback model for images with fewer than three distinct colors: the
/// distinct colors fill the three slots (the smallest one duplicated), with
/// weights proportional to pixel share split evenly across duplicates.
ClusterModel degenerate_model(const LabImage& img);

/// Posterior responsibilities of each component for each pixel (3xN).
Eigen::Matrix3Xd responsibilities(const ClusterModel& model,
                                  const LabImage& img);

MainColors extract_main_colors(const ClusterModel& model);

}  // namespace mood
