#ifndef REFPRIOR_SPECIAL_FUNCTIONS_HPP
#define REFPRIOR_SPECIAL_FUNCTIONS_HPP

namespace refprior {

// Digamma psi(x) for x > 0. The argument is recurrence-shifted above 6 and
// the asymptotic series is evaluated with six Bernoulli terms; absolute
// error stays below 1e-10. Throws DomainError for x <= 0.
double digamma(double x);

// Standard normal CDF, evaluated through erfc.
double normal_cdf(double x);

// Standard normal quantile for p in (0,1): rational initial approximation
// refined by one Newton step against normal_cdf. Absolute error stays below
// 1e-8 (in practice near machine precision). Throws DomainError outside (0,1).
double normal_quantile(double p);

}  // namespace refprior

#endif
