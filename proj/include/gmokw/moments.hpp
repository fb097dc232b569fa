#pragma once

#include <array>
#include <limits>
#include <cmath>
#include <vector>

#include "data.hpp"
#include "error.hpp"
#include "expansions.hpp"
#include "family.hpp"
#include "optimize.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace gmokw {

struct PWMQuery {
    int p = 0;
    int q = 0;
    double r = 0.0;
    double kw_a = 1.0;
    double kw_b = 1.0;
    Baseline baseline;
};

namespace detail {

// int over the Kw-G(a,b) law of h(t) F^q (1-F)^r, written in u = G(t) so the
// integrand is h(G^{-1}(u)) times a polynomial-like factor in u.
template <class H>
QuadResult kw_expect(H&& h, int q, double r, double a, double b, const Baseline& base,
                     double tol) {
    auto integrand = [&](double u, double v) {
        const double logu = u < 0.5 ? std::log(u) : std::log1p(-v);
        const double L1 = log1m_pow(logu, u < 0.5 ? std::log1p(-u) : std::log(v), a);
        double lw = std::log(a) + std::log(b) + (a - 1.0) * logu + (b - 1.0) * L1;
        if (r != 0.0) lw += r * b * L1;
        if (q != 0) lw += q * std::log(-std::expm1(b * L1));
        const double t = base.quantile_pair(u, v);
        return h(t) * std::exp(lw);
    };
    return integrate_unit(integrand, tol);
}

}  // namespace detail

inline double pwm_kw(const PWMQuery& qy, double tol = 1e-12) {
    qy.baseline.require_valid();
    if (qy.p < 0 || qy.q < 0) throw ArgumentError("pwm_kw: p and q must be >= 0");
    if (!(qy.r > -1.0)) throw ArgumentError("pwm_kw: r must be > -1");
    if (!(qy.kw_a > 0.0) || !(qy.kw_b > 0.0)) throw ArgumentError("pwm_kw: a, b must be > 0");
    const int p = qy.p;
    auto res = detail::kw_expect([p](double t) { return p == 0 ? 1.0 : std::pow(t, p); }, qy.q,
                                 qy.r, qy.kw_a, qy.kw_b, qy.baseline, tol);
    if (!res.converged) throw QuadratureError("pwm_kw did not converge", res.value, res.error);
    return res.value;
}

// E(T^s) = int_0^1 Q(p)^s dp.
inline QuadResult moment_quadrature(const ModelSpec& s, double power, double tol = 1e-12) {
    s.require_valid();
    if (power == 0.0) return {1.0, 0.0, true};
    return integrate_unit([&](double p, double q) { return std::pow(quantile_pair(s, p, q), power); },
                          tol);
}

enum class MomentRoute { A, B, C };

inline double moment_series(const ModelSpec& s, int power, MomentRoute route, double tol = 1e-10) {
    s.require_valid();
    if (power < 0) throw ArgumentError("moment_series: s must be >= 0");
    if (power == 0) return 1.0;
    const auto& f = s.family;
    const double th = f.theta;
    const double inner_tol = std::min(1e-13, tol * 1e-3);
    auto pwm = [&](int q, double r) {
        return pwm_kw(PWMQuery{power, q, r, f.a, f.b, s.baseline}, inner_tol);
    };
    if (route == MomentRoute::C) {
        if (!(f.alpha > 1.0)) throw RegimeError("moment route C requires alpha > 1");
        const double y = 1.0 - 1.0 / f.alpha;
        auto term = [&](int j) { return th * coef_C(th, f.alpha, j) * pwm(j, th - 1.0); };
        auto ratio = [&](int j) { return std::max(y * (j + th + 1.0) / (j + 1.0), y); };
        return detail::sum_series(term, ratio, tol, nullptr, "moment route C");
    }
    if (!(f.alpha > 0.0 && f.alpha < 1.0))
        throw RegimeError("moment routes A and B require alpha in (0,1)");
    const double x = f.alpha_bar();
    auto ratio = [&](int j) { return std::max(x * (j + th + 1.0) / (j + 1.0), x); };
    if (route == MomentRoute::A) {
        auto term = [&](int j) { return coef_A(th, f.alpha, j) * pwm(0, j + th - 1.0); };
        return detail::sum_series(term, ratio, tol, nullptr, "moment route A");
    }
    // route B: sum_j sum_{k<=j} B_{j,k} Gamma_{s, j-k, theta-1}
    std::vector<double> G;  // Gamma_{s,q,theta-1}, q = 0,1,...
    const double g0 = pwm(0, th - 1.0);
    double sum = 0.0;
    for (int j = 0; j <= kSeriesCap; ++j) {
        while (static_cast<int>(G.size()) <= j) G.push_back(pwm(static_cast<int>(G.size()), th - 1.0));
        const double Aj = coef_A(th, f.alpha, j);
        double inner = 0.0;
        for (int k = 0; k <= j; ++k) {
            double sgn = ((j - k) % 2) ? -1.0 : 1.0;
            inner += sgn * std::exp(log_binom(j, k)) * G[j - k];
        }
        sum += Aj * inner;
        // |inner| = Gamma_{s,0,j+theta-1} <= Gamma_{s,0,theta-1}
        const double r = ratio(j);
        if (r < 1.0 && Aj * g0 * r / (1.0 - r) <= tol * std::abs(sum)) return sum;
    }
    throw ConvergenceError("moment route B: truncation cap reached");
}

inline double mgf(const ModelSpec& s, double arg, double tol = 1e-12) {
    s.require_valid();
    if (arg == 0.0) return 1.0;
    auto r = integrate_unit([&](double p, double q) { return std::exp(arg * quantile_pair(s, p, q)); },
                            tol);
    if (!r.converged || !std::isfinite(r.value))
        throw QuadratureError("mgf diverges at s=" + std::to_string(arg), r.value, r.error);
    return r.value;
}

// Mixture route: sum_j w_j M_j(s), M_j the mgf of Kw-G(a, b(j+theta)); alpha in (0,1].
inline double mgf_series(const ModelSpec& s, double arg, double tol = 1e-10) {
    s.require_valid();
    const auto& f = s.family;
    if (!(f.alpha <= 1.0)) throw RegimeError("mgf series requires alpha in (0,1]");
    if (arg == 0.0) return 1.0;
    const double inner_tol = std::min(1e-13, tol * 1e-3);
    auto Mj = [&](int j) {
        auto r = detail::kw_expect([&](double t) { return std::exp(arg * t); }, 0, 0.0, f.a,
                                   f.b * (j + f.theta), s.baseline, inner_tol);
        if (!r.converged || !std::isfinite(r.value))
            throw QuadratureError("component mgf diverges", r.value, r.error);
        return r.value;
    };
    if (f.alpha == 1.0) return Mj(0);
    const double x = f.alpha_bar();
    double sum = 0.0;
    for (int j = 0; j <= kSeriesCap; ++j) {
        const double w = -coef_Aprime(f.theta, f.alpha, j);
        const double m = Mj(j);
        sum += w * m;
        const double r = std::max(x * (j + f.theta) / (j + 1.0), x);
        const double mag = w * (arg > 0.0 ? m : 1.0);  // M_j monotone in j
        if (mag * r / (1.0 - r) <= tol * std::abs(sum)) return sum;
    }
    throw ConvergenceError("mgf series: truncation cap reached");
}

struct EntropyQuery {
    double delta = 2.0;
    ModelSpec spec;
};

enum class EntropyMethod { series, quadrature };

inline double renyi(const EntropyQuery& q, EntropyMethod method, double tol = 1e-10) {
    const auto& s = q.spec;
    s.require_valid();
    const double dl = q.delta;
    if (!(dl > 0.0) || dl == 1.0) throw ArgumentError("renyi: delta must be > 0 and != 1");
    const auto& f = s.family;
    double integral;
    if (method == EntropyMethod::quadrature) {
        // int f^delta dt with quantile-spaced panels; in probability space if t cannot
        // resolve a support end
        auto r = integrate_over_quantiles([&](double t) { return std::exp(dl * log_pdf(s, t)); },
                                          [&](double p, double qq) { return quantile_pair(s, p, qq); },
                                          tol);
        if (!std::isnan(r.lo_cut) || !std::isnan(r.hi_cut))
            r = integrate_unit(
                [&](double p, double qq) {
                    return std::exp((dl - 1.0) * log_pdf(s, quantile_pair(s, p, qq)));
                },
                tol);
        if (!r.converged) throw QuadratureError("renyi quadrature did not converge", r.value, r.error);
        integral = r.value;
    } else {
        if (f.alpha == 1.0) throw RegimeError("renyi series requires alpha != 1");
        const double th = f.theta, a = f.a, b = f.b;
        const double c = dl * (th + 1.0);
        const bool lt = f.alpha < 1.0;
        const double x = lt ? f.alpha_bar() : 1.0 - 1.0 / f.alpha;
        const double lead = dl * std::log(th) + (lt ? dl * th : -dl) * std::log(f.alpha);
        const double inner_tol = std::min(1e-13, tol * 1e-3);
        auto inner = [&](int j) {
            auto r = integrate_unit(
                [&](double u, double v) {
                    const double logu = u < 0.5 ? std::log(u) : std::log1p(-v);
                    const double L1 =
                        log1m_pow(logu, u < 0.5 ? std::log1p(-u) : std::log(v), a);
                    const double t = s.baseline.quantile_pair(u, v);
                    const double logg = s.baseline.values(t).logg;
                    double lw = dl * (std::log(a) + std::log(b)) + (dl - 1.0) * logg +
                                dl * (a - 1.0) * logu + dl * (b * th - 1.0) * L1;
                    if (j > 0) lw += lt ? j * b * L1 : j * std::log(-std::expm1(b * L1));
                    return std::exp(lw);
                },
                inner_tol);
            if (!r.converged) throw QuadratureError("renyi inner integral", r.value, r.error);
            return r.value;
        };
        auto term = [&](int j) {
            return std::exp(lead + j * std::log(x) + log_rising_over_fact(c, j)) * inner(j);
        };
        auto ratio = [&](int j) { return std::max(x * (j + c) / (j + 1.0), x); };
        integral = detail::sum_series(term, ratio, tol, nullptr, "renyi series");
    }
    return std::log(integral) / (1.0 - dl);
}

// Defining integral E[(1 - abar S)^nu] = theta int_0^1 w^{theta-1} (1 + x w)^{-nu} dw, x = abar/alpha.
inline double mom_expectation_quadrature(double theta, double alpha, int nu, double tol = 1e-13) {
    const double x = (1.0 - alpha) / alpha;
    return integrate_unit_or_throw(
        [&](double w, double) {
            return theta * std::exp((theta - 1.0) * std::log(w) - nu * std::log1p(x * w));
        },
        tol, "method-of-moments expectation");
}

// Closed forms; BranchError outside their validated regions.
inline double mom_expectation(double theta, double alpha, int nu, double tol = 1e-15) {
    if (nu < 1) throw ArgumentError("mom_expectation: nu must be a positive integer");
    if (!(theta > 0.0) || !(alpha > 0.0)) throw ParameterError("theta and alpha must be > 0");
    if (alpha == 1.0) return 1.0;
    if (nu == 1) {
        if (alpha < 1.0) {
            const double ab = 1.0 - alpha;
            auto term = [&](int i) {
                return alpha * std::exp(log_gamma(i + 1.0) + log_gamma(theta + 1.0) -
                                        log_gamma(theta + 1.0 + i) + i * std::log(ab));
            };
            return detail::sum_series(term, [&](int) { return ab; }, tol, nullptr,
                                      "moment expectation");
        }
        const double mx = (alpha - 1.0) / alpha;  // -x
        if (mx > 0.9) throw BranchError("nu=1 series needs alpha <= 10");
        auto term = [&](int i) { return theta * std::pow(mx, i) / (theta + i); };
        return detail::sum_series(term, [&](int) { return mx; }, tol, nullptr, "moment expectation");
    }
    if (!(alpha < 1.0)) throw BranchError("nu>=2 closed form needs alpha < 1");
    if (!(nu > theta)) throw BranchError("nu>=2 closed form needs nu > theta");
    return theta * std::pow(alpha / (1.0 - alpha), theta) * incomplete_beta(alpha, nu - theta, theta);
}

inline double mom_expectation(const ModelSpec& s, int nu) {
    s.require_valid();
    return mom_expectation(s.family.theta, s.family.alpha, nu);
}

inline double mom_expectation_auto(double theta, double alpha, int nu) {
    try {
        return mom_expectation(theta, alpha, nu);
    } catch (const BranchError&) {
        return mom_expectation_quadrature(theta, alpha, nu);
    }
}

// Sample average of (1 - abar (1 - G(t)^a)^b)^nu.
inline double mom_sample_average(const Dataset& d, const Baseline& base, const FamilyParams& fp,
                                 int nu) {
    double acc = 0.0;
    for (double t : d.values) {
        auto bv = base.values(t);
        const double L1 = log1m_pow(bv, fp.a);
        const double S = std::exp(fp.b * L1);
        acc += std::pow(-std::expm1(fp.b * L1) + fp.alpha * S, nu);
    }
    return acc / static_cast<double>(d.size());
}

inline double mom_residual_norm(const Dataset& d, const Baseline& base, const FamilyParams& fp,
                                const std::vector<int>& nu_set) {
    double ss = 0.0;
    for (int nu : nu_set) {
        double r = mom_sample_average(d, base, fp, nu) - mom_expectation_auto(fp.theta, fp.alpha, nu);
        ss += r * r;
    }
    return std::sqrt(ss);
}

struct MomResult {
    FamilyParams estimate;
    double residual_norm = 0.0;
    int evaluations = 0;
    bool converged = false;
};

// Free entries of the mask are estimated; fixed ones are taken from `start`.
inline MomResult mom_estimate(const Dataset& d, const Baseline& base, std::array<bool, 4> free,
                              const std::vector<int>& nu_set, FamilyParams start = {}) {
    base.require_valid();
    int nfree = 0;
    for (bool b : free) nfree += b;
    if (static_cast<int>(nu_set.size()) < nfree)
        throw InsufficientEquationsError("need at least as many moment equations as free parameters");
    for (int nu : nu_set)
        if (nu < 1) throw ArgumentError("moment orders must be positive integers");
    for (double t : d.values)
        if (!base.in_support(t)) throw DataError("observation outside baseline support");
    auto unpack = [&](const std::vector<double>& x) {
        FamilyParams fp = start;
        double* slots[4] = {&fp.theta, &fp.alpha, &fp.a, &fp.b};
        int k = 0;
        for (int i = 0; i < 4; ++i)
            if (free[i]) *slots[i] = std::exp(x[k++]);
        return fp;
    };
    std::vector<double> x0;
    const double init[4] = {start.theta, start.alpha, start.a, start.b};
    for (int i = 0; i < 4; ++i)
        if (free[i]) x0.push_back(std::log(init[i]));
    auto obj = [&](const std::vector<double>& x) {
        auto fp = unpack(x);
        try {
            double r = mom_residual_norm(d, base, fp, nu_set);
            return r * r;
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    NelderMeadOptions opt;
    opt.f_tol = 1e-16;
    opt.x_tol = 1e-9;
    opt.lower.assign(x0.size(), std::log(1e-4));
    opt.upper.assign(x0.size(), std::log(1e4));
    auto r = nelder_mead(obj, x0, opt);
    MomResult out;
    out.estimate = unpack(r.x);
    out.residual_norm = std::sqrt(r.fx);
    out.evaluations = r.evaluations;
    out.converged = r.converged;
    if (!std::isfinite(r.fx)) throw NumericalError("method of moments: objective not finite");
    return out;
}

}  // namespace gmokw
