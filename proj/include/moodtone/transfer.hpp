#pragma once

#include <Eigen/Core>

#include <array>

#include "moodtone/clustering.hpp"
#include "moodtone/image.hpp"
#include "moodtone/scheme.hpp"

namespace mood {

/// Optimal per-cluster color shifts for one target combination.
struct ShiftSolution {
  std::array<Eigen::Vector3d, 3> deltas{};
  std::array<LabColor, 3> achieved_targets{};
  double objective = 0.0;
  /// Set when a cluster's pixel range exceeds the Lab axis, which makes the
  /// feasible interval empty; that axis keeps delta = 0.
  std::array<std::array<bool, 3>, 3> empty_axis{};

  bool any_empty_axis() const {
    for (const auto& c : empty_axis)
      for (bool f : c)
        if (f) return true;
    return false;
  }
};

/// Minimize sum_k w_k |mean_k + delta_k - target_k|^2 subject to the shifted
/// cluster ranges staying inside the Lab box. The problem separates per
/// cluster and dimension, so the solution is the unconstrained optimum
/// clamped to [labmin - bounds_min, labmax - bounds_max].
ShiftSolution solve_shifts(const ClusterModel& model,
                           const ColorCombination& target);

/// Translate every pixel by its cluster's delta.
LabImage apply_shifts(const LabImage& img, const ClusterModel& model,
                      const ShiftSolution& shifts);

struct PoissonOptions {
  double rel_tol = 1e-10;  // on |b - A x| / |b|
  int max_iter = 10000;
};

struct PoissonStats {
  bool converged = true;
  int iterations = 0;        // summed over channels
  double max_residual = 0.0; // worst relative residual across channels
};

/// Solve, per channel, min_O sum (O - intermediate)^2 +
/// lambda * sum |grad O - grad input|^2 with forward differences and
/// replicate boundaries, i.e. the screened-Poisson system
/// (Id + lambda L) O = intermediate + lambda L input with L = Dx^T Dx +
/// Dy^T Dy. Conjugate gradients from O = intermediate; the minimizer is
/// unique, so any solver reaching the residual target yields the same image.
LabImage preserve_gradient(const LabImage& input, const LabImage& intermediate,
                           double lambda, const PoissonOptions& opts = {},
                           PoissonStats* stats = nullptr);

/// Single-color baseline: translate the whole image so its mean lands on the
/// combination's dominant color. No gradient step (a global translation
/// already preserves all gradients) and no re-boxing; clamping happens only
/// at sRGB encoding.
LabImage transfer_single_color(const LabImage& img,
                               const ColorCombination& target);

/// One of the per-combination outputs: the uniformly shifted image, the
/// gradient-preserving reconstruction, and the shift solution behind them.
struct TransferCandidate {
  int combination_index = 0;  // 1-based, matching the scheme order
  LabImage intermediate;
  LabImage output;
  ShiftSolution shifts;
  PoissonStats poisson;
};

}  // namespace mood
