#include "funcvb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "funcvb/errors.hpp"

namespace funcvb {

namespace {

int label_count(const std::vector<int>& a, const std::vector<int>& b) {
  int k = 0;
  for (int v : a) k = std::max(k, v + 1);
  for (int v : b) k = std::max(k, v + 1);
  return k;
}

// confusion(p, t) = #\{i : pred_i = p, truth_i = t\}
Eigen::MatrixXi confusion(const std::vector<int>& pred, const std::vector<int>& truth, int k) {
  Eigen::MatrixXi c = Eigen::MatrixXi::Zero(k, k);
  for (std::size_t i = 0; i < pred.size(); ++i) c(pred[i], truth[i]) += 1;
  return c;
}

// max-agreement bijection: exhaustive for k <= 8, subset DP above
std::vector<int> best_bijection(const Eigen::MatrixXi& conf) {
  const int k = static_cast<int>(conf.rows());
  std::vector<int> best(k);
  if (k <= 8) {
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    long best_agree = -1;
    do {
      long agree = 0;
      for (int p = 0; p < k; ++p) agree += conf(p, perm[p]);
      if (agree > best_agree) {
        best_agree = agree;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  // assignment over subsets: state = set of truth labels already matched
  // to predicted labels 0..popcount-1
  const std::size_t states = std::size_t{1} << k;
  std::vector<long> value(states, -1);
  std::vector<int> choice(states, -1);
  value[0] = 0;
  for (std::size_t s = 0; s < states; ++s) {
    if (value[s] < 0) continue;
    const int p = __builtin_popcountll(s);
    if (p == k) continue;
    for (int t = 0; t < k; ++t) {
      if (s & (std::size_t{1} << t)) continue;
      const std::size_t ns = s | (std::size_t{1} << t);
      const long nv = value[s] + conf(p, t);
      if (nv > value[ns]) {
        value[ns] = nv;
        choice[ns] = t;
      }
    }
  }
  std::size_t s = states - 1;
  while (s) {
    const int t = choice[s];
    const int p = __builtin_popcountll(s) - 1;
    best[p] = t;
    s &= ~(std::size_t{1} << t);
  }
  return best;
}

double entropy(const std::vector<double>& counts, double total) {
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= (c / total) * std::log(c / total);
  }
  return h;
}

}  // namespace

std::vector<int> best_label_bijection(const std::vector<int>& pred,
                                      const std::vector<int>& truth) {
  if (pred.size() != truth.size()) throw ShapeError("label vectors differ in length");
  if (pred.empty()) throw ShapeError("empty label vectors");
  const int k = label_count(pred, truth);
  return best_bijection(confusion(pred, truth, k));
}

double mismatch_rate(const std::vector<int>& pred, const std::vector<int>& truth) {
  const auto perm = best_label_bijection(pred, truth);
  long wrong = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (perm[pred[i]] != truth[i]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(pred.size());
}

std::vector<int> align_labels(const std::vector<int>& labels, const std::vector<int>& truth) {
  const auto perm = best_label_bijection(labels, truth);
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = perm[labels[i]];
  return out;
}

double v_measure(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size()) throw ShapeError("label vectors differ in length");
  if (pred.empty()) throw ShapeError("empty label vectors");
  const int k = label_count(pred, truth);
  const auto conf = confusion(pred, truth, k);
  const double total = static_cast<double>(pred.size());

  std::vector<double> class_counts(k, 0.0), cluster_counts(k, 0.0);
  for (int p = 0; p < k; ++p) {
    for (int t = 0; t < k; ++t) {
      cluster_counts[p] += conf(p, t);
      class_counts[t] += conf(p, t);
    }
  }
  const double h_class = entropy(class_counts, total);
  const double h_cluster = entropy(cluster_counts, total);

  // H(C|K) and H(K|C)
  double h_class_given_cluster = 0.0;
  double h_cluster_given_class = 0.0;
  for (int p = 0; p < k; ++p) {
    for (int t = 0; t < k; ++t) {
      const double c = conf(p, t);
      if (c <= 0.0) continue;
      h_class_given_cluster -= (c / total) * std::log(c / cluster_counts[p]);
      h_cluster_given_class -= (c / total) * std::log(c / class_counts[t]);
    }
  }

  const double homogeneity = h_class > 0.0 ? 1.0 - h_class_given_cluster / h_class : 1.0;
  const double completeness = h_cluster > 0.0 ? 1.0 - h_cluster_given_class / h_cluster : 1.0;
  if (homogeneity + completeness <= 0.0) return 0.0;
  return 2.0 * homogeneity * completeness / (homogeneity + completeness);
}

Eigen::VectorXd emse_curve(const Eigen::VectorXd& true_curve, const Eigen::MatrixXd& estimates) {
  if (estimates.cols() != true_curve.size()) throw ShapeError("emse: grid lengths differ");
  if (estimates.rows() < 1) throw ShapeError("emse: need at least one replicate");
  const Eigen::MatrixXd diff = estimates.rowwise() - true_curve.transpose();
  return diff.array().square().colwise().mean();
}

double emise(const Eigen::VectorXd& true_curve, const Eigen::MatrixXd& estimates,
             double interval_length) {
  const Eigen::VectorXd emse = emse_curve(true_curve, estimates);
  return interval_length / static_cast<double>(true_curve.size()) * emse.sum();
}

ReplicationSummary summarize(const std::vector<ReplicateMetrics>& replicates) {
  if (replicates.empty()) throw ShapeError("summarize: need at least one replicate");
  ReplicationSummary s;
  s.replicates = replicates;

  auto mean_sd = [](const std::vector<ReplicateMetrics>& reps, auto field) {
    double mean = 0.0;
    int count = 0;
    for (const auto& r : reps) {
      if (r.failed) continue;
      mean += field(r);
      ++count;
    }
    if (count == 0) return std::pair<double, double>{0.0, 0.0};
    mean /= count;
    double ss = 0.0;
    for (const auto& r : reps) {
      if (r.failed) continue;
      const double d = field(r) - mean;
      ss += d * d;
    }
    const double sd = count > 1 ? std::sqrt(ss / (count - 1)) : 0.0;
    return std::pair<double, double>{mean, sd};
  };

  std::tie(s.mean_mismatch, s.sd_mismatch) =
      mean_sd(replicates, [](const ReplicateMetrics& r) { return r.mismatch; });
  std::tie(s.mean_v_measure, s.sd_v_measure) =
      mean_sd(replicates, [](const ReplicateMetrics& r) { return r.v_measure; });
  std::tie(s.mean_kmeans_mismatch, s.sd_kmeans_mismatch) =
      mean_sd(replicates, [](const ReplicateMetrics& r) { return r.kmeans_mismatch; });
  std::tie(s.mean_kmeans_v_measure, s.sd_kmeans_v_measure) =
      mean_sd(replicates, [](const ReplicateMetrics& r) { return r.kmeans_v_measure; });
  for (const auto& r : replicates) {
    s.total_wall_seconds += r.wall_seconds;
    if (r.failed) ++s.failed_replicates;
  }
  return s;
}

}  // namespace funcvb
