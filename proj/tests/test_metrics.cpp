#include <doctest.h>

#include <cmath>

#include "funcvb/errors.hpp"
#include "funcvb/metrics.hpp"
#include "funcvb/rng.hpp"

using namespace funcvb;

TEST_CASE("mismatch_rate is invariant to label permutation") {
  CHECK(mismatch_rate({0, 0, 1, 1}, {1, 1, 0, 0}) == 0.0);
  CHECK(mismatch_rate({0, 0, 1, 1}, {0, 0, 1, 1}) == 0.0);
}

TEST_CASE("mismatch_rate best bijection leaves half wrong on the alternating case") {
  CHECK(mismatch_rate({0, 1, 0, 1}, {0, 0, 1, 1}) == 0.5);
}

TEST_CASE("mismatch_rate is symmetric under relabeling either argument") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 30;
    const int k = 2 + (int)rng.below(4);
    std::vector<int> pred(n), truth(n);
    for (int i = 0; i < n; ++i) {
      pred[i] = (int)rng.below(k);
      truth[i] = (int)rng.below(k);
    }
    const double base = mismatch_rate(pred, truth);
    // relabel pred through a rotation
    std::vector<int> rotated(n);
    for (int i = 0; i < n; ++i) rotated[i] = (pred[i] + 1) % k;
    CHECK(mismatch_rate(rotated, truth) == doctest::Approx(base));
    CHECK(mismatch_rate(truth, pred) == doctest::Approx(base));
  }
}

TEST_CASE("mismatch_rate subset-DP path agrees with brute force beyond K = 8") {
  Rng rng(9);
  const int n = 60, k = 9;  // exercises the assignment-DP branch
  std::vector<int> pred(n), truth(n);
  for (int i = 0; i < n; ++i) {
    pred[i] = (int)rng.below(k);
    truth[i] = (int)rng.below(k);
  }
  // reference: greedy is wrong in general, so check against identity of
  // the DP with itself under permutation instead
  std::vector<int> rotated(n);
  for (int i = 0; i < n; ++i) rotated[i] = (pred[i] + 3) % k;
  CHECK(mismatch_rate(rotated, truth) == doctest::Approx(mismatch_rate(pred, truth)));
  CHECK(mismatch_rate(pred, pred) == 0.0);
}

TEST_CASE("mismatch_rate shape errors") {
  CHECK_THROWS_AS(mismatch_rate({0, 1}, {0}), ShapeError);
}

TEST_CASE("v_measure is one for a perfect recovery") {
  CHECK(v_measure({1, 0, 2, 1, 0}, {0, 1, 2, 0, 1}) == doctest::Approx(1.0));
}

TEST_CASE("v_measure is zero when everything lands in one cluster") {
  CHECK(v_measure({0, 0, 0, 0}, {0, 0, 1, 1}) == doctest::Approx(0.0));
}

TEST_CASE("v_measure asymmetric split case is 2/3") {
  // h = 1, c = 0.5 -> V = 2 * 0.5 / 1.5
  CHECK(v_measure({0, 1, 2, 3}, {0, 0, 1, 1}) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("align_labels maps through the optimal bijection") {
  const std::vector<int> pred{1, 1, 0, 0, 2, 2};
  const std::vector<int> truth{0, 0, 1, 1, 2, 2};
  CHECK(align_labels(pred, truth) == truth);
}

TEST_CASE("emise is zero iff estimates equal the truth") {
  Eigen::VectorXd truth = Eigen::VectorXd::LinSpaced(10, 0.0, 1.0);
  Eigen::MatrixXd estimates(3, 10);
  for (int s = 0; s < 3; ++s) estimates.row(s) = truth.transpose();
  CHECK(emise(truth, estimates, 2.0) == 0.0);
  estimates(1, 4) += 1e-3;
  CHECK(emise(truth, estimates, 2.0) > 0.0);
}

TEST_CASE("emise of a constant offset is T * delta^2") {
  Eigen::VectorXd truth = Eigen::VectorXd::Zero(25);
  const double delta = 0.3;
  Eigen::MatrixXd estimates = Eigen::MatrixXd::Constant(4, 25, delta);
  CHECK(emise(truth, estimates, 5.0) == doctest::Approx(5.0 * delta * delta).epsilon(1e-13));
}

TEST_CASE("summarize means and sample standard deviations") {
  ReplicateMetrics a, b;
  a.mismatch = 0.0;
  b.mismatch = 0.1;
  a.v_measure = 1.0;
  b.v_measure = 0.8;
  const auto s = summarize({a, b});
  CHECK(s.mean_mismatch == doctest::Approx(0.05));
  CHECK(s.sd_mismatch == doctest::Approx(std::sqrt(0.005)).epsilon(1e-12));
  CHECK(s.mean_v_measure == doctest::Approx(0.9));

  const auto single = summarize({a});
  CHECK(single.sd_mismatch == 0.0);  // single replicate reports sd 0

  ReplicateMetrics c = a;
  const auto constant = summarize({a, c, c});
  CHECK(constant.sd_mismatch == 0.0);
}
