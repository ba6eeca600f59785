#ifndef FUNCVB_SPECIAL_HPP_
#define FUNCVB_SPECIAL_HPP_

namespace funcvb {

// Digamma via the recurrence psi(x+1) = psi(x) + 1/x to shift the
// argument above 6 followed by the asymptotic series. Relative accuracy
// better than 1e-12 on (0, inf). Throws DomainError for x <= 0.
double digamma(double x);

// The truncated asymptotic form log(x) - 1/(2x).
double digamma_paper_approx(double x);

// Truncated Stirling series x*log(x) - x - 0.5*log(x). Note this omits
// the 0.5*log(2*pi) term, so it is offset from lgamma by about 0.919
// for large x.
double log_gamma_stirling(double x);

}  // namespace funcvb

#endif  // FUNCVB_SPECIAL_HPP_
