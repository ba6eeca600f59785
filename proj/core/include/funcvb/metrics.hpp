#ifndef FUNCVB_METRICS_HPP_
#define FUNCVB_METRICS_HPP_

#include <Eigen/Dense>
#include <vector>

namespace funcvb {

// Minimum misclassification fraction over all bijections between the two
// label sets (exhaustive for K <= 8, optimal assignment above). Labels
// are 0-based.
double mismatch_rate(const std::vector<int>& pred, const std::vector<int>& truth);

// The label bijection achieving mismatch_rate: perm[p] is the truth
// label matched to predicted label p.
std::vector<int> best_label_bijection(const std::vector<int>& pred,
                                      const std::vector<int>& truth);

// Relabel `labels` through the mismatch-optimal bijection against truth.
std::vector<int> align_labels(const std::vector<int>& labels, const std::vector<int>& truth);

// V-measure with beta = 1 and natural-log entropies:
//   h = 1 - H(C|K)/H(C), c = 1 - H(K|C)/H(K), V = 2hc/(h+c),
// with h = 1 when H(C) = 0, c = 1 when H(K) = 0, V = 0 when h = c = 0.
double v_measure(const std::vector<int>& pred, const std::vector<int>& truth);

// Empirical mean integrated squared error over S replicate estimates of
// one cluster mean curve: (T/n) * sum_j mean_s (f(t_j) - fhat_s(t_j))^2.
// Rows of `estimates` are per-replicate estimated curves already aligned
// to the true cluster.
double emise(const Eigen::VectorXd& true_curve, const Eigen::MatrixXd& estimates,
             double interval_length);

// Pointwise empirical mean squared error across replicates (length n).
Eigen::VectorXd emse_curve(const Eigen::VectorXd& true_curve, const Eigen::MatrixXd& estimates);

struct ReplicateMetrics {
  double mismatch = 0.0;
  double v_measure = 0.0;
  double kmeans_mismatch = 0.0;
  double kmeans_v_measure = 0.0;
  double wall_seconds = 0.0;
  int iterations = 0;
  bool converged = false;
  bool failed = false;
};

struct ReplicationSummary {
  std::vector<ReplicateMetrics> replicates;
  double mean_mismatch = 0.0, sd_mismatch = 0.0;
  double mean_v_measure = 0.0, sd_v_measure = 0.0;
  double mean_kmeans_mismatch = 0.0, sd_kmeans_mismatch = 0.0;
  double mean_kmeans_v_measure = 0.0, sd_kmeans_v_measure = 0.0;
  Eigen::VectorXd emise_per_cluster;   // length K
  double total_wall_seconds = 0.0;
  int failed_replicates = 0;
};

// Means and sample standard deviations (divisor S-1; reported as 0 for a
// single replicate) of the per-replicate metrics. EMISE fields are
// filled by the harness.
ReplicationSummary summarize(const std::vector<ReplicateMetrics>& replicates);

}  // namespace funcvb

#endif  // FUNCVB_METRICS_HPP_
