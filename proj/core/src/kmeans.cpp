#include "funcvb/kmeans.hpp"

#include <limits>
#include <numeric>

#include "funcvb/errors.hpp"
#include "funcvb/rng.hpp"

namespace funcvb {

namespace {

Eigen::MatrixXd seed_centers(const Eigen::MatrixXd& points, int k, KMeansSeeding seeding,
                             Rng& rng) {
  const int n = static_cast<int>(points.rows());
  Eigen::MatrixXd centers(k, points.cols());
  if (seeding == KMeansSeeding::kRandomPoints) {
    // K distinct rows, uniform without replacement
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int c = 0; c < k; ++c) {
      const int pick = c + static_cast<int>(rng.below(n - c));
      std::swap(idx[c], idx[pick]);
      centers.row(c) = points.row(idx[c]);
    }
    return centers;
  }
  // k-means++: D^2-weighted picks
  std::vector<double> d2(n, std::numeric_limits<double>::max());
  centers.row(0) = points.row(static_cast<int>(rng.below(n)));
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = (points.row(i) - centers.row(c - 1)).squaredNorm();
      if (d < d2[i]) d2[i] = d;
      total += d2[i];
    }
    int pick = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target) { pick = i; break; }
      }
    } else {
      pick = static_cast<int>(rng.below(n));
    }
    centers.row(c) = points.row(pick);
  }
  return centers;
}

KMeansResult lloyd(const Eigen::MatrixXd& points, int k, int max_iter,
                   Eigen::MatrixXd centers) {
  const int n = static_cast<int>(points.rows());
  KMeansResult result;
  result.labels.assign(n, 0);
  std::vector<int> counts(k, 0);

  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = iter == 0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (points.row(i) - centers.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double d = (points.row(i) - centers.row(c)).squaredNorm();
        if (d < best_d) { best_d = d; best = c; }
      }
      if (best != result.labels[i]) { result.labels[i] = best; changed = true; }
    }
    if (!changed) break;

    centers.setZero();
    std::fill(counts.begin(), counts.end(), 0);
    for (int i = 0; i < n; ++i) {
      centers.row(result.labels[i]) += points.row(i);
      ++counts[result.labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) centers.row(c) /= counts[c];
    }
    std::vector<char> taken(n, 0);
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      // reseed an emptied cluster from the point farthest from its own
      // center (every point belongs to a non-empty cluster here)
      int far = -1;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        if (taken[i] || counts[result.labels[i]] <= 0) continue;
        const double d = (points.row(i) - centers.row(result.labels[i])).squaredNorm();
        if (d > far_d) { far_d = d; far = i; }
      }
      if (far >= 0) {
        centers.row(c) = points.row(far);
        taken[far] = 1;
      }
    }
  }

  result.wcss = 0.0;
  for (int i = 0; i < n; ++i) {
    result.wcss += (points.row(i) - centers.row(result.labels[i])).squaredNorm();
  }
  result.centers = std::move(centers);
  return result;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, const KMeansOptions& options) {
  const int n = static_cast<int>(points.rows());
  if (options.k < 1) throw ShapeError("kmeans: k must be >= 1");
  if (n < options.k) throw ShapeError("kmeans: fewer points than clusters");
  if (options.restarts < 1) throw ShapeError("kmeans: restarts must be >= 1");

  KMeansResult best;
  bool have_best = false;
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng(stream_seed(options.seed, 0x6b6d65616e73ULL, static_cast<std::uint64_t>(r)));
    auto centers = seed_centers(points, options.k, options.seeding, rng);
    auto run = lloyd(points, options.k, options.max_iter, std::move(centers));
    if (!have_best || run.wcss < best.wcss) {
      best = std::move(run);
      have_best = true;
    }
  }
  return best;
}

Eigen::MatrixXd one_hot_responsibilities(const std::vector<int>& labels, int k) {
  Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(labels.size(), k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= k) throw ShapeError("label outside 0..k-1");
    resp(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  }
  return resp;
}

}  // namespace funcvb
