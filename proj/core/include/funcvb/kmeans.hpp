#ifndef FUNCVB_KMEANS_HPP_
#define FUNCVB_KMEANS_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace funcvb {

enum class KMeansSeeding {
  kPlusPlus,      // k-means++ (D^2 weighting)
  kRandomPoints,  // K distinct rows chosen uniformly (R-style)
};

struct KMeansOptions {
  int k = 1;
  int restarts = 10;
  int max_iter = 100;
  std::uint64_t seed = 0;
  KMeansSeeding seeding = KMeansSeeding::kPlusPlus;
};

struct KMeansResult {
  std::vector<int> labels;   // 0-based, length N
  Eigen::MatrixXd centers;   // K x dim
  double wcss = 0.0;         // within-cluster sum of squares
};

// Lloyd's algorithm on the rows of `points`, best of `restarts` runs by
// WCSS (ties to the lowest restart index). A cluster emptied during an
// update is reseeded from the point farthest from its center.
// Deterministic given the seed. Throws ShapeError when N < k.
KMeansResult kmeans(const Eigen::MatrixXd& points, const KMeansOptions& options);

// One-hot N x K responsibility matrix from hard labels.
Eigen::MatrixXd one_hot_responsibilities(const std::vector<int>& labels, int k);

}  // namespace funcvb

#endif  // FUNCVB_KMEANS_HPP_
