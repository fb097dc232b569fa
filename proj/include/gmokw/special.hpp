#pragma once

#include <cmath>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "error.hpp"

namespace gmokw {

inline double log_gamma(double x) { return boost::math::lgamma(x); }

// log of Gamma(j + c) / (Gamma(c) j!)
inline double log_rising_over_fact(double c, int j) {
    return log_gamma(j + c) - log_gamma(c) - log_gamma(j + 1.0);
}

inline double log_binom(double n, double k) {
    return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}

inline double beta_fn(double m, double n) { return boost::math::beta(m, n); }

// Upper incomplete beta B_x(m, n) = int_x^1 u^{m-1} (1-u)^{n-1} du.
inline double incomplete_beta(double x, double m, double n) {
    if (!(x >= 0.0 && x <= 1.0)) throw ArgumentError("incomplete_beta: x must lie in [0,1]");
    if (!(m > 0.0) || !(n > 0.0)) throw ArgumentError("incomplete_beta: m and n must be > 0");
    if (x == 0.0) return boost::math::beta(m, n);
    if (x == 1.0) return 0.0;
    return boost::math::ibetac(m, n, x) * boost::math::beta(m, n);
}

// Lower part int_0^x, used for the complement identity.
inline double incomplete_beta_lower(double x, double m, double n) {
    if (!(x >= 0.0 && x <= 1.0)) throw ArgumentError("incomplete_beta_lower: x must lie in [0,1]");
    if (!(m > 0.0) || !(n > 0.0)) throw ArgumentError("incomplete_beta_lower: m and n must be > 0");
    return boost::math::beta(m, n, x);
}

inline double chisq_sf(double x, int df) {
    if (df < 1) throw ArgumentError("chisq_sf: df must be a positive integer");
    if (!(x >= 0.0)) throw ArgumentError("chisq_sf: x must be >= 0");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

// Standard normal quantile.
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ArgumentError("normal_quantile: p must lie in (0,1)");
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

}  // namespace gmokw
