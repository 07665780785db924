#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <random>

#include "moodtone/transfer.hpp"
#include "test_util.hpp"

using mood::ClusterModel;
using mood::ColorCombination;
using mood::LabColor;
using mood::LabImage;
using mood::ShiftSolution;

namespace {

// ---- shift-solver oracle -------------------------------------------------

struct ShiftInstance {
  ClusterModel model;
  ColorCombination target;
};

ShiftInstance random_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  ShiftInstance inst;
  Eigen::Vector3d w{uni(rng) + 0.05, uni(rng) + 0.05, uni(rng) + 0.05};
  inst.model.weights = w / w.sum();
  for (int k = 0; k < 3; ++k) {
    for (int d = 0; d < 3; ++d) {
      const double axis_lo = mood::kLabMin(d), axis_hi = mood::kLabMax(d);
      const double a = axis_lo + (axis_hi - axis_lo) * uni(rng);
      const double b = axis_lo + (axis_hi - axis_lo) * uni(rng);
      inst.model.bounds_min[k](d) = std::min(a, b);
      inst.model.bounds_max[k](d) = std::max(a, b);
      inst.model.means[k](d) =
          inst.model.bounds_min[k](d) +
          (inst.model.bounds_max[k](d) - inst.model.bounds_min[k](d)) *
              uni(rng);
      inst.target.color(k)(d) = axis_lo + (axis_hi - axis_lo) * uni(rng);
    }
  }
  return inst;
}

// Brute-force minimization of one separable axis: scan a 0.01 grid over the
// feasible interval plus the endpoints and the quadratic's stationary point.
double oracle_axis_delta(double mean, double target, double lo, double hi,
                         double weight) {
  const auto value = [&](double delta) {
    const double d = mean + delta - target;
    return weight * d * d;
  };
  double best_delta = lo;
  double best = value(lo);
  const auto consider = [&](double delta) {
    const double v = value(delta);
    if (v < best) {
      best = v;
      best_delta = delta;
    }
  };
  for (double d = lo; d <= hi; d += 0.01) consider(d);
  consider(hi);
  const double stationary = target - mean;
  if (stationary >= lo && stationary <= hi) consider(stationary);
  return best_delta;
}

double oracle_objective(const ShiftInstance& inst) {
  double total = 0.0;
  for (int k = 0; k < 3; ++k) {
    for (int d = 0; d < 3; ++d) {
      const double lo = mood::kLabMin(d) - inst.model.bounds_min[k](d);
      const double hi = mood::kLabMax(d) - inst.model.bounds_max[k](d);
      const double delta =
          oracle_axis_delta(inst.model.means[k](d), inst.target.color(k)(d),
                            lo, hi, inst.model.weights(k));
      const double diff =
          inst.model.means[k](d) + delta - inst.target.color(k)(d);
      total += inst.model.weights(k) * diff * diff;
    }
  }
  return total;
}

ClusterModel simple_model() {
  ClusterModel model;
  model.weights = Eigen::Vector3d{0.6, 0.3, 0.1};
  model.means = {LabColor{50, 0, 0}, LabColor{30, 10, -10},
                 LabColor{70, -20, 20}};
  for (int k = 0; k < 3; ++k) {
    model.bounds_min[k] = model.means[k] - Eigen::Vector3d{5, 5, 5};
    model.bounds_max[k] = model.means[k] + Eigen::Vector3d{5, 5, 5};
  }
  return model;
}

// ---- screened-Poisson oracle ----------------------------------------------

// Forward-difference operator along one image axis, assembled row by row.
Eigen::SparseMatrix<double> forward_diff(Eigen::Index h, Eigen::Index w,
                                         bool along_x) {
  const Eigen::Index rows = along_x ? h * (w - 1) : (h - 1) * w;
  Eigen::SparseMatrix<double> D(rows, h * w);
  std::vector<Eigen::Triplet<double>> tri;
  Eigen::Index edge = 0;
  for (Eigen::Index y = 0; y < (along_x ? h : h - 1); ++y) {
    for (Eigen::Index x = 0; x < (along_x ? w - 1 : w); ++x) {
      const Eigen::Index p = y * w + x;
      const Eigen::Index q = along_x ? p + 1 : p + w;
      tri.emplace_back(edge, q, 1.0);
      tri.emplace_back(edge, p, -1.0);
      ++edge;
    }
  }
  D.setFromTriplets(tri.begin(), tri.end());
  return D;
}

Eigen::VectorXd flatten(const LabImage& img, int channel) {
  return img.pixels.row(channel).transpose();
}

double reconstruction_energy(const LabImage& input, const LabImage& intermediate,
                  const LabImage& output, double lambda) {
  const auto dx = forward_diff(input.height, input.width, true);
  const auto dy = forward_diff(input.height, input.width, false);
  double e = 0.0;
  for (int c = 0; c < 3; ++c) {
    const Eigen::VectorXd o = flatten(output, c);
    const Eigen::VectorXd i = flatten(input, c);
    const Eigen::VectorXd m = flatten(intermediate, c);
    e += (o - m).squaredNorm();
    e += lambda * ((dx * o - dx * i).squaredNorm() +
                   (dy * o - dy * i).squaredNorm());
  }
  return e;
}

}  // namespace

TEST_SUITE("transfer") {

TEST_CASE("zero shift when targets sit on the means") {
  const ClusterModel model = simple_model();
  ColorCombination target;
  target.dominant = model.means[0];
  target.subordinate = model.means[1];
  target.accent = model.means[2];

  const ShiftSolution sol = mood::solve_shifts(model, target);
  CHECK(sol.objective == 0.0);
  for (int k = 0; k < 3; ++k) {
    CHECK(sol.deltas[k].isZero(0.0));
    CHECK(sol.achieved_targets[k].isApprox(model.means[k], 0.0));
  }
  CHECK_FALSE(sol.any_empty_axis());
}

TEST_CASE("clamps at the cluster-range limit") {
  ClusterModel model = simple_model();
  model.weights = Eigen::Vector3d{1.0, 0.0, 0.0};

  // Range 40..60 around mean 50; a target at L=90 is reachable because the
  // shifted range 80..100 still fits the axis.
  model.bounds_min[0] = LabColor{40, -5, -5};
  model.bounds_max[0] = LabColor{60, 5, 5};
  model.means[0] = LabColor{50, 0, 0};
  ColorCombination target;
  target.dominant = LabColor{90, 0, 0};
  target.subordinate = model.means[1];
  target.accent = model.means[2];

  ShiftSolution sol = mood::solve_shifts(model, target);
  CHECK(sol.deltas[0](0) == 40.0);
  CHECK(sol.achieved_targets[0](0) == 90.0);

  // Range 5..95: only 5 units of headroom, so L=100 stops at 55.
  model.bounds_min[0](0) = 5.0;
  model.bounds_max[0](0) = 95.0;
  target.dominant = LabColor{100, 0, 0};
  sol = mood::solve_shifts(model, target);
  CHECK(sol.deltas[0](0) == 5.0);
  CHECK(sol.achieved_targets[0](0) == 55.0);
}

TEST_CASE("matches the grid-search oracle on random instances") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const ShiftInstance inst = random_instance(rng);
    const ShiftSolution sol = mood::solve_shifts(inst.model, inst.target);
    CHECK(std::abs(sol.objective - oracle_objective(inst)) <= 1e-6);
    for (int k = 0; k < 3; ++k) {
      const auto& d = sol.deltas[k];
      CHECK(((inst.model.bounds_min[k] + d).array() >=
             mood::kLabMin.array()).all());
      CHECK(((inst.model.bounds_max[k] + d).array() <=
             mood::kLabMax.array()).all());
    }
  }
}

TEST_CASE("empty feasible interval pins the shift to zero") {
  ClusterModel model = simple_model();
  // A hand-authored Lab image could span more than the L axis itself.
  model.bounds_min[1](0) = -30.0;
  model.bounds_max[1](0) = 120.0;
  ColorCombination target;
  target.dominant = model.means[0];
  target.subordinate = LabColor{80, 0, 0};
  target.accent = model.means[2];

  const ShiftSolution sol = mood::solve_shifts(model, target);
  CHECK(sol.empty_axis[1][0]);
  CHECK(sol.deltas[1](0) == 0.0);
  CHECK(sol.any_empty_axis());
}

TEST_CASE("apply_shifts translates each cluster uniformly") {
  const std::array<LabColor, 3> colors{LabColor{30, 20, -10},
                                       LabColor{70, -25, 15},
                                       LabColor{55, 40, 40}};
  const LabImage img = testutil::block_image(20, 20, colors, {0.6, 0.3, 0.1});
  const ClusterModel model = mood::fit_em(img, 0);

  ShiftSolution zero;
  for (auto& d : zero.deltas) d.setZero();
  const LabImage same = mood::apply_shifts(img, model, zero);
  CHECK(same.pixels.isApprox(img.pixels, 0.0));

  ShiftSolution shifts;
  shifts.deltas = {Eigen::Vector3d{4, 0, 0}, Eigen::Vector3d{0, -3, 0},
                   Eigen::Vector3d{0, 0, 2}};
  const LabImage moved = mood::apply_shifts(img, model, shifts);
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    const int k = model.assignments[static_cast<std::size_t>(i)];
    CHECK((moved.pixels.col(i) - img.pixels.col(i) - shifts.deltas[k])
              .isZero(0.0));
  }
}

TEST_CASE("shifted pixels always stay in the Lab box") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const LabImage img =
        testutil::random_lab_image(12, 12, 1000 + trial);
    const ClusterModel model = mood::fit_em(img, trial);
    for (int t = 0; t < 5; ++t) {
      ColorCombination target;
      for (int k = 0; k < 3; ++k)
        for (int d = 0; d < 3; ++d)
          target.color(k)(d) =
              mood::kLabMin(d) +
              (mood::kLabMax(d) - mood::kLabMin(d)) * uni(rng);
      const ShiftSolution sol = mood::solve_shifts(model, target);
      const LabImage out = mood::apply_shifts(img, model, sol);
      for (Eigen::Index i = 0; i < out.size(); ++i) {
        CHECK((out.pixels.col(i).array() >= mood::kLabMin.array()).all());
        CHECK((out.pixels.col(i).array() <= mood::kLabMax.array()).all());
      }
    }
  }
}

TEST_CASE("lambda zero returns the intermediate exactly") {
  const LabImage input = testutil::random_lab_image(16, 16, 4);
  const LabImage inter = testutil::random_lab_image(16, 16, 5);
  const LabImage out = mood::preserve_gradient(input, inter, 0.0);
  CHECK((out.pixels - inter.pixels).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("a constant shift is already the optimum") {
  const LabImage input = testutil::random_lab_image(16, 16, 6);
  LabImage inter = input;
  inter.pixels.colwise() += Eigen::Vector3d{7.0, -3.0, 2.5};
  const LabImage out = mood::preserve_gradient(input, inter, 20.0);
  CHECK((out.pixels - inter.pixels).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("matches a dense direct solve at 16x16") {
  const double lambda = 20.0;
  const LabImage input = testutil::random_lab_image(16, 16, 7);
  const LabImage inter = testutil::random_lab_image(16, 16, 8);

  mood::PoissonStats stats;
  const LabImage out =
      mood::preserve_gradient(input, inter, lambda, {}, &stats);
  CHECK(stats.converged);
  CHECK(stats.max_residual <= 1e-4);

  const auto dx = forward_diff(16, 16, true);
  const auto dy = forward_diff(16, 16, false);
  const Eigen::SparseMatrix<double> lap =
      Eigen::SparseMatrix<double>(dx.transpose()) * dx +
      Eigen::SparseMatrix<double>(dy.transpose()) * dy;
  Eigen::MatrixXd a = Eigen::MatrixXd(lap) * lambda;
  a.diagonal().array() += 1.0;

  const Eigen::LDLT<Eigen::MatrixXd> solver(a);
  for (int c = 0; c < 3; ++c) {
    const Eigen::VectorXd b =
        flatten(inter, c) + lambda * (lap * flatten(input, c));
    const Eigen::VectorXd direct = solver.solve(b);
    CHECK((flatten(out, c) - direct).cwiseAbs().maxCoeff() <= 1e-5);
    // Residual of the returned image under the independently built operator.
    const double rel = (a * flatten(out, c) - b).norm() / b.norm();
    CHECK(rel <= 1e-4);
  }
}

TEST_CASE("never worsens the functional and respects translation") {
  const double lambda = 20.0;
  const LabImage input = testutil::random_lab_image(20, 14, 9);
  const LabImage inter = testutil::random_lab_image(20, 14, 10);
  const LabImage out = mood::preserve_gradient(input, inter, lambda);

  CHECK(reconstruction_energy(input, inter, out, lambda) <=
        reconstruction_energy(input, inter, inter, lambda) + 1e-9);

  const Eigen::Vector3d c{5.0, -2.0, 1.0};
  LabImage input2 = input, inter2 = inter;
  input2.pixels.colwise() += c;
  inter2.pixels.colwise() += c;
  const LabImage out2 = mood::preserve_gradient(input2, inter2, lambda);
  LabImage expected = out;
  expected.pixels.colwise() += c;
  CHECK((out2.pixels - expected.pixels).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("gradient mismatch shrinks as lambda grows") {
  const LabImage input = testutil::random_lab_image(32, 32, 11);
  const LabImage inter = testutil::random_lab_image(32, 32, 12);
  const auto dx = forward_diff(32, 32, true);
  const auto dy = forward_diff(32, 32, false);

  double prev = std::numeric_limits<double>::infinity();
  for (const double lambda : {0.0, 1.0, 20.0, 100.0}) {
    const LabImage out = mood::preserve_gradient(input, inter, lambda);
    double mismatch = 0.0;
    for (int ch = 0; ch < 3; ++ch) {
      mismatch += (dx * flatten(out, ch) - dx * flatten(input, ch))
                      .squaredNorm() +
                  (dy * flatten(out, ch) - dy * flatten(input, ch))
                      .squaredNorm();
    }
    CHECK(mismatch <= prev * (1.0 + 1e-9) + 1e-9);
    prev = mismatch;
  }
}

TEST_CASE("single-color baseline moves the image mean onto the target") {
  ColorCombination target;
  target.dominant = LabColor{60, 12, -8};

  LabImage constant(6, 4);
  for (Eigen::Index i = 0; i < constant.size(); ++i)
    constant.pixels.col(i) = LabColor{20, 0, 0};
  const LabImage moved = mood::transfer_single_color(constant, target);
  for (Eigen::Index i = 0; i < moved.size(); ++i)
    CHECK((moved.pixels.col(i) - target.dominant).cwiseAbs().maxCoeff() <
          1e-12);

  const LabImage img = testutil::random_lab_image(17, 9, 13);
  const LabImage out = mood::transfer_single_color(img, target);
  const Eigen::Vector3d mean = out.pixels.rowwise().mean();
  CHECK((mean - target.dominant).cwiseAbs().maxCoeff() < 1e-6);

  LabImage already = img;
  already.pixels.colwise() += (target.dominant - img.pixels.rowwise().mean());
  const LabImage fixed_point = mood::transfer_single_color(already, target);
  CHECK((fixed_point.pixels - already.pixels).cwiseAbs().maxCoeff() < 1e-9);
}

}  // TEST_SUITE
