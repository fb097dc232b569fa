#pragma once

#include <cmath>
#include <vector>

#include "error.hpp"
#include "family.hpp"
#include "special.hpp"

namespace gmokw {

enum class Regime { alpha_lt_1, alpha_gt_1 };

inline constexpr int kSeriesCap = 500;

// Coefficients (closed forms; factorial ratios through log-gamma).
//   alpha < 1:  f = f_Kw(a,b) sum_j A_j S^{j+theta-1}
//               f = sum_j w_j f_Kw(a, b(j+theta)),  w_j = -A'_j
//               sf = sum_j w_j S^{j+theta}
//   alpha > 1:  f = f_Kw(a, b theta) sum_j C_j F^j
//               sf = S^theta sum_j C'_j F^j
inline double coef_A(double theta, double alpha, int j) {
    return std::exp(std::log(theta) + theta * std::log(alpha) + j * std::log1p(-alpha) +
                    log_gamma(j + theta + 1.0) - log_gamma(theta + 1.0) - log_gamma(j + 1.0));
}

inline double coef_Aprime(double theta, double alpha, int j) {
    return -std::exp(theta * std::log(alpha) + j * std::log1p(-alpha) +
                     log_rising_over_fact(theta, j));
}

inline double coef_C(double theta, double alpha, int j) {
    const double y = 1.0 - 1.0 / alpha;
    return std::exp(-std::log(alpha) + j * std::log(y) + log_gamma(j + theta + 1.0) -
                    log_gamma(theta + 1.0) - log_gamma(j + 1.0));
}

inline double coef_Cprime(double theta, double alpha, int j) {
    const double y = 1.0 - 1.0 / alpha;
    return std::exp(j * std::log(y) + log_rising_over_fact(theta, j));
}

struct CoefficientTable {
    Regime regime = Regime::alpha_lt_1;
    int J = 0;
    std::vector<double> aprime;
    std::vector<double> a_coef;
    std::vector<std::vector<double>> b_coef;  // b_coef[j][k], k <= j
    std::vector<double> c_coef;
    std::vector<double> cprime;
};

inline CoefficientTable coeffs(double theta, double alpha, int J) {
    if (alpha == 1.0) throw ArgumentError("coeffs: alpha = 1 has no series expansion");
    if (!(theta > 0.0) || !(alpha > 0.0)) throw ArgumentError("coeffs: theta, alpha must be > 0");
    if (J < 0) throw ArgumentError("coeffs: J must be >= 0");
    CoefficientTable t;
    t.J = J;
    if (alpha < 1.0) {
        t.regime = Regime::alpha_lt_1;
        for (int j = 0; j <= J; ++j) {
            t.a_coef.push_back(coef_A(theta, alpha, j));
            t.aprime.push_back(coef_Aprime(theta, alpha, j));
            std::vector<double> row;
            for (int k = 0; k <= j; ++k) {
                double sgn = ((j - k) % 2) ? -1.0 : 1.0;
                row.push_back(sgn * std::exp(log_binom(j, k)) * t.a_coef[j]);
            }
            t.b_coef.push_back(std::move(row));
        }
    } else {
        t.regime = Regime::alpha_gt_1;
        for (int j = 0; j <= J; ++j) {
            t.c_coef.push_back(coef_C(theta, alpha, j));
            t.cprime.push_back(coef_Cprime(theta, alpha, j));
        }
    }
    return t;
}

namespace detail {

// Sum term(j) for j = 0,1,... ; ratio(j) must bound |term(k+1)/term(k)| for all k >= j.
template <class Term, class Ratio>
double sum_series(Term&& term, Ratio&& ratio, double tol, int* used = nullptr,
                  const char* what = "series") {
    double sum = 0.0;
    for (int j = 0; j <= kSeriesCap; ++j) {
        double v = term(j);
        sum += v;
        double r = ratio(j);
        if (v == 0.0 && j > 0) {
            if (used) *used = j;
            return sum;
        }
        if (r < 1.0 && std::abs(v) * r / (1.0 - r) <= tol * std::abs(sum)) {
            if (used) *used = j;
            return sum;
        }
    }
    throw ConvergenceError(std::string(what) + ": truncation cap reached before tolerance");
}

inline double kw_log_pdf(const BaselineValues& bv, double L1, double a, double b) {
    double r = std::log(a) + std::log(b) + bv.logg;
    if (a != 1.0) r += (a - 1.0) * bv.logG;
    if (b != 1.0) r += (b - 1.0) * L1;
    return r;
}

}  // namespace detail

inline double series_pdf(const ModelSpec& s, double t, double tol = 1e-14, int* used = nullptr) {
    s.require_valid();
    const auto& f = s.family;
    auto P = family_parts(s, t);
    if (P.side != 0) return 0.0;
    const double logfkw = detail::kw_log_pdf(P.bv, P.L1, f.a, f.b);
    if (f.alpha == 1.0) {
        if (used) *used = 0;
        return std::exp(logfkw + std::log(f.theta) + (f.theta - 1.0) * P.logS);
    }
    if (f.alpha < 1.0) {
        const double x = f.alpha_bar() * P.S;
        auto term = [&](int j) {
            return std::exp(logfkw + std::log(coef_A(f.theta, f.alpha, j)) +
                            (j + f.theta - 1.0) * P.logS);
        };
        auto ratio = [&](int j) { return std::max(x * (j + f.theta + 1.0) / (j + 1.0), x); };
        return detail::sum_series(term, ratio, tol, used, "series_pdf");
    }
    const double F = -std::expm1(P.logS);
    const double y = (1.0 - 1.0 / f.alpha) * F;
    const double logfkw2 = detail::kw_log_pdf(P.bv, P.L1, f.a, f.b * f.theta);
    auto term = [&](int j) {
        return std::exp(logfkw2 + std::log(coef_C(f.theta, f.alpha, j)) + j * std::log(F));
    };
    auto ratio = [&](int j) { return std::max(y * (j + f.theta + 1.0) / (j + 1.0), y); };
    return detail::sum_series(term, ratio, tol, used, "series_pdf");
}

inline double series_sf(const ModelSpec& s, double t, double tol = 1e-14, int* used = nullptr) {
    s.require_valid();
    const auto& f = s.family;
    auto P = family_parts(s, t);
    if (P.side < 0) return 1.0;
    if (P.side > 0) return 0.0;
    if (f.alpha == 1.0) {
        if (used) *used = 0;
        return std::exp(f.theta * P.logS);
    }
    if (f.alpha < 1.0) {
        const double x = f.alpha_bar() * P.S;
        auto term = [&](int j) {
            return -coef_Aprime(f.theta, f.alpha, j) * std::exp((j + f.theta) * P.logS);
        };
        auto ratio = [&](int j) { return std::max(x * (j + f.theta) / (j + 1.0), x); };
        return detail::sum_series(term, ratio, tol, used, "series_sf");
    }
    const double F = -std::expm1(P.logS);
    const double y = (1.0 - 1.0 / f.alpha) * F;
    auto term = [&](int j) {
        return std::exp(f.theta * P.logS + std::log(coef_Cprime(f.theta, f.alpha, j)) +
                        j * std::log(F));
    };
    auto ratio = [&](int j) { return std::max(y * (j + f.theta) / (j + 1.0), y); };
    return detail::sum_series(term, ratio, tol, used, "series_sf");
}

inline std::vector<double> mixture_weights(double theta, double alpha, int J) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ArgumentError("mixture weights need alpha in (0,1]");
    std::vector<double> w;
    for (int j = 0; j <= J; ++j) w.push_back(alpha == 1.0 ? (j == 0) : -coef_Aprime(theta, alpha, j));
    return w;
}

// Negative-binomial mixture of Kw-G(a, b(j+theta)) densities.
inline double mixture_pdf(const ModelSpec& s, double t, double tol = 1e-14, int* used = nullptr) {
    s.require_valid();
    const auto& f = s.family;
    if (!(f.alpha <= 1.0)) throw ArgumentError("mixture_pdf: requires alpha in (0,1]");
    auto P = family_parts(s, t);
    if (P.side != 0) return 0.0;
    if (f.alpha == 1.0) {
        if (used) *used = 0;
        return std::exp(detail::kw_log_pdf(P.bv, P.L1, f.a, f.b * f.theta));
    }
    const double x = f.alpha_bar() * P.S;
    auto term = [&](int j) {
        return -coef_Aprime(f.theta, f.alpha, j) *
               std::exp(detail::kw_log_pdf(P.bv, P.L1, f.a, f.b * (j + f.theta)));
    };
    auto ratio = [&](int j) { return std::max(x * (j + f.theta + 1.0) / (j + 1.0), x); };
    return detail::sum_series(term, ratio, tol, used, "mixture_pdf");
}

namespace detail {

// Append the next coefficient of (sum_k c_k z^k)^m.
inline void power_series_power_step(const std::vector<double>& c, int m, std::vector<double>& d) {
    const int k = static_cast<int>(d.size());
    if (k == 0) {
        d.push_back(std::pow(c[0], m));
        return;
    }
    double s = 0.0;
    for (int h = 1; h <= k; ++h) {
        double ch = h < static_cast<int>(c.size()) ? c[h] : 0.0;
        s += (h * (m + 1.0) - k) * ch * d[k - h];
    }
    d.push_back(s / (k * c[0]));
}

}  // namespace detail

inline std::vector<double> power_series_power(const std::vector<double>& cprime, int m, int K) {
    if (cprime.empty() || cprime[0] == 0.0)
        throw ArgumentError("power_series_power: leading coefficient must be nonzero");
    if (m < 0 || K < 0) throw ArgumentError("power_series_power: m and K must be >= 0");
    std::vector<double> d;
    if (m == 0) {
        d.assign(K + 1, 0.0);
        d[0] = 1.0;
        return d;
    }
    while (static_cast<int>(d.size()) <= K) detail::power_series_power_step(cprime, m, d);
    return d;
}

inline double log_order_stat_const(int n, int i) {
    return log_gamma(n + 1.0) - log_gamma(i) - log_gamma(n - i + 1.0);
}

inline double order_stat_pdf_direct(const ModelSpec& s, int n, int i, double t) {
    s.require_valid();
    if (n < 1 || i < 1 || i > n) throw RankError("order statistic rank must satisfy 1 <= i <= n");
    auto P = family_parts(s, t);
    if (P.side != 0) return 0.0;
    double r = log_order_stat_const(n, i) + detail::log_pdf_from_parts(s, P);
    if (i > 1) r += (i - 1) * std::log(-std::expm1(P.log_sf));
    if (n > i) r += (n - i) * P.log_sf;
    return std::exp(r);
}

namespace detail {

// f(t) sf(t)^m as a single power series, per regime.
inline double f_times_sf_pow(const ModelSpec& s, const FamilyParts& P, int m, double tol) {
    const auto& f = s.family;
    const double th = f.theta;
    if (f.alpha < 1.0) {
        // Cauchy product of A_j(theta) with the sf^m coefficients (parameter theta m)
        const double x = f.alpha_bar() * P.S;
        const double logfkw = kw_log_pdf(P.bv, P.L1, f.a, f.b);
        std::vector<double> A, eta;
        auto eta_coef = [&](int p) {
            if (m == 0) return p == 0 ? 1.0 : 0.0;
            return std::exp(th * m * std::log(f.alpha) + p * std::log1p(-f.alpha) +
                            log_rising_over_fact(th * m, p));
        };
        const double base = logfkw + (th * (m + 1) - 1.0) * P.logS;
        auto term = [&](int c) {
            A.push_back(coef_A(th, f.alpha, c));
            eta.push_back(eta_coef(c));
            double M = 0.0;
            for (int j = 0; j <= c; ++j) M += A[j] * eta[c - j];
            return M * std::exp(base + c * P.logS);
        };
        auto ratio = [&](int c) {
            return std::max(x * (c + th * (m + 1) + 1.0) / (c + 1.0), x);
        };
        return sum_series(term, ratio, tol, nullptr, "order statistic series");
    }
    const double F = -std::expm1(P.logS);
    const double y = (1.0 - 1.0 / f.alpha) * F;
    const double base = kw_log_pdf(P.bv, P.L1, f.a, f.b * th) + th * m * P.logS;
    std::vector<double> C, Cp, d;
    auto term = [&](int k) {
        C.push_back(coef_C(th, f.alpha, k));
        Cp.push_back(coef_Cprime(th, f.alpha, k));
        if (m == 0)
            d.push_back(k == 0 ? 1.0 : 0.0);
        else
            power_series_power_step(Cp, m, d);
        double e = 0.0;
        for (int j = 0; j <= k; ++j) e += C[j] * d[k - j];
        return e * std::exp(base + k * std::log(F));
    };
    auto ratio = [&](int k) { return std::max(y * (k + th * (m + 1) + 1.0) / (k + 1.0), y); };
    return sum_series(term, ratio, tol, nullptr, "order statistic series");
}

}  // namespace detail

// Series form: the binomial l-sum from F^{i-1} = (1 - sf)^{i-1} is kept explicit
// and each f sf^{n-i+l} term is expanded on its own.
inline double order_stat_pdf_series(const ModelSpec& s, int n, int i, double t,
                                    double tol = 1e-14) {
    s.require_valid();
    if (n < 1 || i < 1 || i > n) throw RankError("order statistic rank must satisfy 1 <= i <= n");
    if (s.family.alpha == 1.0) throw ArgumentError("order_stat_pdf_series: alpha must differ from 1");
    auto P = family_parts(s, t);
    if (P.side != 0) return 0.0;
    double total = 0.0;
    for (int l = 0; l <= i - 1; ++l) {
        const double sgn = (l % 2) ? -1.0 : 1.0;
        const double w = std::exp(log_binom(i - 1, l));
        total += sgn * w * detail::f_times_sf_pow(s, P, n - i + l, tol);
    }
    return std::exp(log_order_stat_const(n, i)) * total;
}

// theta = 1, alpha < 1: double sum over kappa_j eta_c products (H_{j,c}), with
// eta_c^{(m)} = alpha^m C(c+m-1, c) abar^c the coefficients of sf^m.
inline double order_stat_pdf_series_theta1(const ModelSpec& s, int n, int i, double t,
                                           double tol = 1e-14) {
    s.require_valid();
    const auto& f = s.family;
    if (f.theta != 1.0 || !(f.alpha < 1.0))
        throw ArgumentError("theta=1 form requires theta = 1 and alpha < 1");
    if (n < 1 || i < 1 || i > n) throw RankError("order statistic rank must satisfy 1 <= i <= n");
    auto P = family_parts(s, t);
    if (P.side != 0) return 0.0;
    const double x = f.alpha_bar() * P.S;
    const double logfkw = detail::kw_log_pdf(P.bv, P.L1, f.a, f.b);
    int J = static_cast<int>(std::ceil(std::log(tol * 1e-3) / std::log(x))) + 60 + 4 * n;
    if (x <= 0.0) J = 1;
    if (J > 4000) throw ConvergenceError("theta=1 order statistic double sum too long");
    std::vector<double> kappa(J + 1);
    for (int j = 0; j <= J; ++j) kappa[j] = f.alpha * (j + 1.0) * std::pow(f.alpha_bar(), j);
    double total = 0.0;
    for (int l = 0; l <= i - 1; ++l) {
        const int m = n - i + l;
        std::vector<double> eta(J + 1);
        for (int c = 0; c <= J; ++c)
            eta[c] = m == 0 ? (c == 0 ? 1.0 : 0.0)
                            : std::pow(f.alpha, m) * std::exp(log_binom(c + m - 1.0, c)) *
                                  std::pow(f.alpha_bar(), c);
        double acc = 0.0;
        for (int j = 0; j <= J; ++j)
            for (int c = 0; c <= J; ++c)
                acc += kappa[j] * eta[c] * std::exp((j + c + m) * P.logS);
        const double sgn = (l % 2) ? -1.0 : 1.0;
        total += sgn * std::exp(log_binom(i - 1, l)) * acc;
    }
    return std::exp(log_order_stat_const(n, i) + logfkw) * total;
}

struct OrderStatTerm {
    int l = 0;
    int m = 0;            // n - i + l
    double weight = 0.0;  // (-1)^l C(i-1, l)
    std::vector<double> coef;  // alpha<1: M_c ; alpha>1: e_k
    std::vector<double> d;     // alpha>1: d_{m,k}
};

struct OrderStatCoefficients {
    int n = 1;
    int i = 1;
    Regime regime = Regime::alpha_lt_1;
    std::vector<OrderStatTerm> terms;
};

inline OrderStatCoefficients order_stat_coefficients(double theta, double alpha, int n, int i, int J) {
    if (n < 1 || i < 1 || i > n) throw RankError("order statistic rank must satisfy 1 <= i <= n");
    auto tab = coeffs(theta, alpha, J);
    OrderStatCoefficients out;
    out.n = n;
    out.i = i;
    out.regime = tab.regime;
    for (int l = 0; l <= i - 1; ++l) {
        OrderStatTerm T;
        T.l = l;
        T.m = n - i + l;
        T.weight = ((l % 2) ? -1.0 : 1.0) * std::exp(log_binom(i - 1, l));
        if (tab.regime == Regime::alpha_lt_1) {
            for (int c = 0; c <= J; ++c) {
                double M = 0.0;
                for (int j = 0; j <= c; ++j) {
                    int p = c - j;
                    double eta = T.m == 0 ? (p == 0 ? 1.0 : 0.0)
                                          : std::exp(theta * T.m * std::log(alpha) +
                                                     p * std::log1p(-alpha) +
                                                     log_rising_over_fact(theta * T.m, p));
                    M += tab.a_coef[j] * eta;
                }
                T.coef.push_back(M);
            }
        } else {
            T.d = power_series_power(tab.cprime, T.m, J);
            for (int k = 0; k <= J; ++k) {
                double e = 0.0;
                for (int j = 0; j <= k; ++j) e += tab.c_coef[j] * T.d[k - j];
                T.coef.push_back(e);
            }
        }
        out.terms.push_back(std::move(T));
    }
    return out;
}

}  // namespace gmokw
