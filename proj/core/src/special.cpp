#include "funcvb/special.hpp"

#include <cmath>

#include "funcvb/errors.hpp"

namespace funcvb {

double digamma(double x) {
  if (!(x > 0.0)) throw DomainError("digamma requires x > 0");
  double result = 0.0;
  // shift into the asymptotic regime; the truncated series is accurate
  // to ~1e-14 relative from 10 upward
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  // psi(x) ~ ln x - 1/(2x) - sum B_2n / (2n x^{2n})
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = inv2 * (1.0 / 12.0 -
                  inv2 * (1.0 / 120.0 -
                  inv2 * (1.0 / 252.0 -
                  inv2 * (1.0 / 240.0 -
                  inv2 * (1.0 / 132.0)))));
  return result + std::log(x) - 0.5 * inv - series;
}

double digamma_paper_approx(double x) {
  if (!(x > 0.0)) throw DomainError("digamma approximation requires x > 0");
  return std::log(x) - 0.5 / x;
}

double log_gamma_stirling(double x) {
  if (!(x > 0.0)) throw DomainError("log-gamma approximation requires x > 0");
  return x * std::log(x) - x - 0.5 * std::log(x);
}

}  // namespace funcvb
