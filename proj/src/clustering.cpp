#include "moodtone/clustering.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

namespace mood {

namespace {

constexpr int kComponents = 3;
constexpr double kCovFloor = 1e-4;     // added to covariance diagonals
constexpr double kWeightFloor = 1e-6;  // empty-component rescue threshold
constexpr double kLog2Pi = 1.8378770664093453;

struct Gaussian {
  Eigen::Matrix3d chol_lower;  // LL^T = covariance
  double log_norm = 0.0;       // -0.5 * (3 log 2pi + log det)

  void set(const Eigen::Matrix3d& cov) {
    Eigen::LLT<Eigen::Matrix3d> llt(cov);
    chol_lower = llt.matrixL();
    const double log_det = 2.0 * chol_lower.diagonal().array().log().sum();
    log_norm = -0.5 * (3.0 * kLog2Pi + log_det);
  }

  double log_density(const Eigen::Vector3d& centered) const {
    const Eigen::Vector3d z =
        chol_lower.triangularView<Eigen::Lower>().solve(centered);
    return log_norm - 0.5 * z.squaredNorm();
  }
};

struct Mixture {
  Eigen::Vector3d weights;
  std::array<Eigen::Vector3d, kComponents> means;
  std::array<Eigen::Matrix3d, kComponents> covs;
  std::array<Gaussian, kComponents> gaussians;

  void refresh() {
    for (int k = 0; k < kComponents; ++k) gaussians[k].set(covs[k]);
  }

  // Log joint densities log(w_k p_k(x)) for one sample.
  Eigen::Vector3d log_joint(const Eigen::Vector3d& x) const {
    Eigen::Vector3d lj;
    for (int k = 0; k < kComponents; ++k)
      lj(k) = std::log(weights(k)) + gaussians[k].log_density(x - means[k]);
    return lj;
  }
};

double log_sum_exp(const Eigen::Vector3d& v) {
  const double m = v.maxCoeff();
  return m + std::log((v.array() - m).exp().sum());
}

// First-occurrence scan for up to `limit` distinct colors.
std::vector<Eigen::Index> distinct_color_indices(const LabImage& img,
                                                 std::size_t limit) {
  std::vector<Eigen::Index> found;
  std::map<std::array<double, 3>, bool> seen;
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    const std::array<double, 3> key{img.pixels(0, i), img.pixels(1, i),
                                    img.pixels(2, i)};
    if (seen.emplace(key, true).second) {
      found.push_back(i);
      if (found.size() >= limit) break;
    }
  }
  return found;
}

// Deterministic uniform subsample of pixel indices (partial Fisher-Yates).
std::vector<Eigen::Index> sample_indices(Eigen::Index n, Eigen::Index cap,
                                         std::mt19937_64& rng) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  if (n <= cap) return idx;
  for (Eigen::Index i = 0; i < cap; ++i) {
    const Eigen::Index j =
        i + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(static_cast<std::size_t>(cap));
  return idx;
}

// k-means++ seeding followed by Lloyd iterations.
std::array<Eigen::Vector3d, kComponents> kmeans(const Eigen::Matrix3Xd& data,
                                                std::mt19937_64& rng,
                                                std::vector<int>& labels) {
  const Eigen::Index n = data.cols();
  std::array<Eigen::Vector3d, kComponents> centers;

  centers[0] = data.col(static_cast<Eigen::Index>(
      rng() % static_cast<std::uint64_t>(n)));
  Eigen::VectorXd d2 =
      (data.colwise() - centers[0]).colwise().squaredNorm().transpose();
  for (int k = 1; k < kComponents; ++k) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> uni(0.0, total);
      double r = uni(rng);
      for (Eigen::Index i = 0; i < n; ++i) {
        r -= d2(i);
        if (r <= 0.0) {
          pick = i;
          break;
        }
        pick = i;
      }
    }
    centers[k] = data.col(pick);
    d2 = d2.cwiseMin(
        (data.colwise() - centers[k]).colwise().squaredNorm().transpose());
  }

  labels.assign(static_cast<std::size_t>(n), 0);
  for (int iter = 0; iter < 25; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (data.col(i) - centers[0]).squaredNorm();
      for (int k = 1; k < kComponents; ++k) {
        const double d = (data.col(i) - centers[k]).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      if (labels[static_cast<std::size_t>(i)] != best) {
        labels[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    std::array<Eigen::Vector3d, kComponents> sums;
    std::array<Eigen::Index, kComponents> counts{};
    sums.fill(Eigen::Vector3d::Zero());
    for (Eigen::Index i = 0; i < n; ++i) {
      sums[labels[static_cast<std::size_t>(i)]] += data.col(i);
      ++counts[labels[static_cast<std::size_t>(i)]];
    }
    for (int k = 0; k < kComponents; ++k) {
      if (counts[k] == 0) {
        // Reseed an empty cluster at the point farthest from its center.
        Eigen::Index far = 0;
        double far_d = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double d =
              (data.col(i) - centers[labels[static_cast<std::size_t>(i)]])
                  .squaredNorm();
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        centers[k] = data.col(far);
        changed = true;
      } else {
        centers[k] = sums[k] / static_cast<double>(counts[k]);
      }
    }
    if (!changed) break;
  }
  return centers;
}

Eigen::Matrix3d scatter(const Eigen::Matrix3Xd& data,
                        const Eigen::VectorXd& resp,
                        const Eigen::Vector3d& mean, double total) {
  Eigen::Matrix3Xd centered = data.colwise() - mean;
  Eigen::Matrix3d cov =
      (centered.array().rowwise() * resp.transpose().array()).matrix() *
      centered.transpose() / total;
  cov.diagonal().array() += kCovFloor;
  return cov;
}

}  // namespace

ClusterModel fit_em(const LabImage& img, std::uint64_t seed,
                    const EmOptions& opts) {
  if (img.size() <= 0) throw DegenerateImageError("image is empty");
  const auto distinct = distinct_color_indices(img, kComponents);
  if (distinct.size() < kComponents)
    throw DegenerateImageError(
        "image has fewer than 3 distinct colors (" +
        std::to_string(distinct.size()) + ")");

  std::mt19937_64 rng(seed);
  std::vector<Eigen::Index> sample =
      sample_indices(img.size(), std::max<Eigen::Index>(opts.sample_cap, 3),
                     rng);
  // The subsample of a large image can still collapse to <3 distinct
  // colors; splice in the first occurrence of each distinct color.
  {
    Eigen::Matrix3Xd probe(3, static_cast<Eigen::Index>(sample.size()));
    for (std::size_t i = 0; i < sample.size(); ++i)
      probe.col(static_cast<Eigen::Index>(i)) = img.pixels.col(sample[i]);
    LabImage probe_img;
    probe_img.width = probe.cols();
    probe_img.height = 1;
    probe_img.pixels = probe;
    if (distinct_color_indices(probe_img, kComponents).size() < kComponents)
      for (std::size_t d = 0; d < distinct.size(); ++d)
        sample[sample.size() - 1 - d] = distinct[d];
  }

  Eigen::Matrix3Xd data(3, static_cast<Eigen::Index>(sample.size()));
  for (std::size_t i = 0; i < sample.size(); ++i)
    data.col(static_cast<Eigen::Index>(i)) = img.pixels.col(sample[i]);
  const Eigen::Index n = data.cols();
  const double nd = static_cast<double>(n);

  // k-means initialization.
  std::vector<int> labels;
  Mixture mix;
  {
    auto centers = kmeans(data, rng, labels);
    std::array<Eigen::Index, kComponents> counts{};
    for (int l : labels) ++counts[l];
    for (int k = 0; k < kComponents; ++k) {
      mix.weights(k) =
          std::max(static_cast<double>(counts[k]) / nd, kWeightFloor);
      mix.means[k] = centers[k];
      Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
      for (Eigen::Index i = 0; i < n; ++i) {
        if (labels[static_cast<std::size_t>(i)] != k) continue;
        const Eigen::Vector3d c = data.col(i) - centers[k];
        cov += c * c.transpose();
      }
      if (counts[k] > 0) cov /= static_cast<double>(counts[k]);
      cov.diagonal().array() += kCovFloor;
      mix.covs[k] = cov;
    }
    mix.weights /= mix.weights.sum();
    mix.refresh();
  }

  ClusterModel model;
  Eigen::Matrix3Xd resp(3, n);
  Eigen::VectorXd max_resp(n);

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    // E-step with the log-sum-exp trick; also the likelihood of the
    // current parameters, so the recorded sequence is non-decreasing.
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Vector3d lj = mix.log_joint(data.col(i));
      const double lse = log_sum_exp(lj);
      ll += lse;
      resp.col(i) = (lj.array() - lse).exp();
      max_resp(i) = resp.col(i).maxCoeff();
    }
    ll /= nd;
    model.log_likelihood.push_back(ll);
    if (model.log_likelihood.size() > 1) {
      const double prev =
          model.log_likelihood[model.log_likelihood.size() - 2];
      if (ll - prev < opts.tol) break;
    }

    // M-step.
    for (int k = 0; k < kComponents; ++k) {
      const Eigen::VectorXd rk = resp.row(k).transpose();
      const double nk = rk.sum();
      if (nk / nd < kWeightFloor) {
        // Rescue a dying component: restart it at the worst-explained pixel.
        Eigen::Index worst = 0;
        max_resp.minCoeff(&worst);
        mix.means[k] = data.col(worst);
        const Eigen::Vector3d dmean = data.rowwise().mean();
        Eigen::Matrix3Xd centered = data.colwise() - dmean;
        Eigen::Matrix3d cov = centered * centered.transpose() / nd;
        cov.diagonal().array() += kCovFloor;
        mix.covs[k] = cov;
        mix.weights(k) = 1.0 / nd;
        continue;
      }
      mix.weights(k) = nk / nd;
      mix.means[k] = (data * rk) / nk;
      mix.covs[k] = scatter(data, rk, mix.means[k], nk);
    }
    mix.weights /= mix.weights.sum();
    mix.refresh();
  }

  // Order components by weight (descending, stable).
  std::array<int, kComponents> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return mix.weights(a) > mix.weights(b);
  });

  for (int k = 0; k < kComponents; ++k) {
    model.weights(k) = mix.weights(order[k]);
    model.means[k] = mix.means[order[k]];
    model.covariances[k] = mix.covs[order[k]];
  }
  model.weights /= model.weights.sum();

  // Hard assignments and per-cluster bounds over the full image.
  Mixture sorted;
  sorted.weights = model.weights;
  sorted.means = model.means;
  sorted.covs = model.covariances;
  sorted.refresh();

  model.assignments.resize(static_cast<std::size_t>(img.size()));
  for (int k = 0; k < kComponents; ++k) {
    model.bounds_min[k] = kLabMax;
    model.bounds_max[k] = kLabMin;
  }
  std::array<Eigen::Index, kComponents> counts{};
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    const Eigen::Vector3d lj = sorted.log_joint(img.pixels.col(i));
    int best = 0;
    lj.maxCoeff(&best);
    model.assignments[static_cast<std::size_t>(i)] = best;
    ++counts[best];
    model.bounds_min[best] = model.bounds_min[best].cwiseMin(img.pixels.col(i));
    model.bounds_max[best] = model.bounds_max[best].cwiseMax(img.pixels.col(i));
  }
  for (int k = 0; k < kComponents; ++k) {
    if (counts[k] == 0) {
      model.bounds_min[k] = model.means[k];
      model.bounds_max[k] = model.means[k];
    } else {
      // The soft mean can sit just outside the hard-assignment hull.
      model.bounds_min[k] = model.bounds_min[k].cwiseMin(model.means[k]);
      model.bounds_max[k] = model.bounds_max[k].cwiseMax(model.means[k]);
    }
  }
  return model;
}

ClusterModel degenerate_model(const LabImage& img) {
  if (img.size() <= 0) throw DegenerateImageError("image is empty");
  const auto firsts = distinct_color_indices(img, kComponents);
  if (firsts.size() >= kComponents)
    throw DegenerateImageError(
        "degenerate_model called on an image with 3+ distinct colors");

  struct Entry {
    Eigen::Vector3d color;
    Eigen::Index count = 0;
  };
  std::vector<Entry> palette;
  for (Eigen::Index idx : firsts)
    palette.push_back({img.pixels.col(idx), 0});
  std::vector<int> color_of(static_cast<std::size_t>(img.size()));
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    for (std::size_t c = 0; c < palette.size(); ++c) {
      if ((img.pixels.col(i) - palette[c].color).isZero(0.0)) {
        ++palette[c].count;
        color_of[static_cast<std::size_t>(i)] = static_cast<int>(c);
        break;
      }
    }
  }
  std::stable_sort(palette.begin(), palette.end(),
                   [](const Entry& a, const Entry& b) {
                     return a.count > b.count;
                   });
  // Remap pixel labels after the sort.
  std::vector<int> rank(palette.size());
  for (std::size_t c = 0; c < palette.size(); ++c) {
    for (std::size_t o = 0; o < firsts.size(); ++o)
      if ((palette[c].color - img.pixels.col(firsts[o])).isZero(0.0)) rank[o] = static_cast<int>(c);
  }

  ClusterModel model;
  model.degenerate_fallback = true;
  const double total = static_cast<double>(img.size());
  const int d = static_cast<int>(palette.size());
  // Slots 0..d-1 take the distinct colors; remaining slots duplicate the
  // smallest color, which keeps the weights non-increasing.
  const int dup_slots = kComponents - d + 1;
  for (int k = 0; k < kComponents; ++k) {
    const int src = std::min(k, d - 1);
    const double share =
        static_cast<double>(palette[static_cast<std::size_t>(src)].count) /
        total;
    model.means[k] = palette[static_cast<std::size_t>(src)].color;
    model.weights(k) = src == d - 1 ? share / dup_slots : share;
    model.covariances[k] = Eigen::Matrix3d::Identity() * kCovFloor;
    model.bounds_min[k] = model.means[k];
    model.bounds_max[k] = model.means[k];
  }
  model.assignments.resize(static_cast<std::size_t>(img.size()));
  for (Eigen::Index i = 0; i < img.size(); ++i)
    model.assignments[static_cast<std::size_t>(i)] =
        rank[static_cast<std::size_t>(color_of[static_cast<std::size_t>(i)])];
  return model;
}

Eigen::Matrix3Xd responsibilities(const ClusterModel& model,
                                  const LabImage& img) {
  Mixture mix;
  mix.weights = model.weights;
  mix.means = model.means;
  mix.covs = model.covariances;
  mix.refresh();
  Eigen::Matrix3Xd resp(3, img.size());
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    const Eigen::Vector3d lj = mix.log_joint(img.pixels.col(i));
    resp.col(i) = (lj.array() - log_sum_exp(lj)).exp();
  }
  return resp;
}

MainColors extract_main_colors(const ClusterModel& model) {
  // fit_em sorts by weight already; hand-assembled models may not be.
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return model.weights(a) > model.weights(b);
  });
  MainColors main;
  for (int k = 0; k < 3; ++k) {
    main.colors[k] = model.means[order[k]];
    main.weights(k) = model.weights(order[k]);
  }
  main.weights /= main.weights.sum();
  return main;
}

}  // namespace mood
