#include "moodtone/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mood {

namespace {

using Eigen::ArrayXXd;
using Eigen::Index;

// out = (Id + lambda * (Dx^T Dx + Dy^T Dy)) u with forward differences and
// replicate boundaries. gx/gy are caller-owned scratch buffers.
void apply_screened(const ArrayXXd& u, double lambda, ArrayXXd& out,
                    ArrayXXd& gx, ArrayXXd& gy) {
  const Index h = u.rows(), w = u.cols();
  out = u;
  if (w > 1) {
    gx = lambda * (u.rightCols(w - 1) - u.leftCols(w - 1));
    out.leftCols(w - 1) -= gx;
    out.rightCols(w - 1) += gx;
  }
  if (h > 1) {
    gy = lambda * (u.bottomRows(h - 1) - u.topRows(h - 1));
    out.topRows(h - 1) -= gy;
    out.bottomRows(h - 1) += gy;
  }
}

// Conjugate gradients on the screened-Poisson system, warm-started at the
// intermediate channel. Returns the iteration count; residual reported via
// rel_residual.
// TODO: a DCT diagonalization of the Neumann Laplacian would solve each
// channel directly and cut the per-candidate cost for large images.
int solve_channel(const ArrayXXd& input, const ArrayXXd& intermediate,
                  double lambda, const PoissonOptions& opts, ArrayXXd& x,
                  double& rel_residual) {
  const Index h = input.rows(), w = input.cols();
  ArrayXXd gx(h, std::max<Index>(w - 1, 1)), gy(std::max<Index>(h - 1, 1), w);
  ArrayXXd b(h, w), r(h, w), p(h, w), ap(h, w);

  // b = intermediate + lambda * L(input)
  apply_screened(input, lambda, b, gx, gy);
  b += intermediate - input;

  x = intermediate;
  apply_screened(x, lambda, ap, gx, gy);
  r = b - ap;

  const double b_norm = std::sqrt((b * b).sum());
  if (b_norm == 0.0) {
    rel_residual = 0.0;
    return 0;
  }
  double r2 = (r * r).sum();
  rel_residual = std::sqrt(r2) / b_norm;
  if (rel_residual <= opts.rel_tol) return 0;

  p = r;
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    apply_screened(p, lambda, ap, gx, gy);
    const double alpha = r2 / (p * ap).sum();
    x += alpha * p;
    r -= alpha * ap;
    const double r2_next = (r * r).sum();
    rel_residual = std::sqrt(r2_next) / b_norm;
    if (rel_residual <= opts.rel_tol) {
      ++iter;
      break;
    }
    p = r + (r2_next / r2) * p;
    r2 = r2_next;
  }
  return iter;
}

}  // namespace

ShiftSolution solve_shifts(const ClusterModel& model,
                           const ColorCombination& target) {
  ShiftSolution sol;
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    for (int d = 0; d < 3; ++d) {
      const double bmin = model.bounds_min[k](d);
      const double bmax = model.bounds_max[k](d);
      const double lo = kLabMin(d) - bmin;
      const double hi = kLabMax(d) - bmax;
      const double want = target.color(k)(d) - model.means[k](d);
      if (lo > hi) {
        sol.deltas[k](d) = 0.0;
        sol.empty_axis[k][d] = true;
        continue;
      }
      double delta = std::clamp(want, lo, hi);
      // lo/hi were formed by rounded subtraction, so a clamped delta can
      // land one ulp outside the box in evaluated arithmetic. Walk it back
      // until bmin + delta and bmax + delta really satisfy the bounds;
      // delta = 0 is always exactly feasible for in-box cluster ranges.
      for (int guard = 0; guard < 4 && bmin + delta < kLabMin(d); ++guard)
        delta = std::nextafter(delta, inf);
      for (int guard = 0; guard < 4 && bmax + delta > kLabMax(d); ++guard)
        delta = std::nextafter(delta, -inf);
      if (bmin + delta < kLabMin(d) || bmax + delta > kLabMax(d)) delta = 0.0;
      sol.deltas[k](d) = delta;
    }
    sol.achieved_targets[k] = model.means[k] + sol.deltas[k];
    sol.objective += model.weights(k) *
                     (sol.achieved_targets[k] - target.color(k)).squaredNorm();
  }
  return sol;
}

LabImage apply_shifts(const LabImage& img, const ClusterModel& model,
                      const ShiftSolution& shifts) {
  LabImage out = img;
  for (Eigen::Index i = 0; i < img.size(); ++i)
    out.pixels.col(i) += shifts.deltas[model.assignments[
        static_cast<std::size_t>(i)]];
  return out;
}

LabImage preserve_gradient(const LabImage& input, const LabImage& intermediate,
                           double lambda, const PoissonOptions& opts,
                           PoissonStats* stats) {
  if (input.width != intermediate.width ||
      input.height != intermediate.height)
    throw std::invalid_argument("preserve_gradient: dimension mismatch");
  LabImage out = intermediate;
  PoissonStats local;
  for (int c = 0; c < 3; ++c) {
    ArrayXXd x;
    double residual = 0.0;
    local.iterations +=
        solve_channel(input.channel(c), intermediate.channel(c), lambda, opts,
                      x, residual);
    local.max_residual = std::max(local.max_residual, residual);
    if (residual > opts.rel_tol) local.converged = false;
    out.set_channel(c, x);
  }
  if (stats != nullptr) *stats = local;
  return out;
}

LabImage transfer_single_color(const LabImage& img,
                               const ColorCombination& target) {
  const Eigen::Vector3d mean = img.pixels.rowwise().mean();
  LabImage out = img;
  out.pixels.colwise() += (target.dominant - mean);
  return out;
}

}  // namespace mood
