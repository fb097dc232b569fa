#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "baselines.hpp"
#include "expansions.hpp"
#include "family.hpp"
#include "inference.hpp"
#include "moments.hpp"
#include "numdiff.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "shape.hpp"

namespace gmokw {

struct SuiteResult {
    std::string name;
    int count = 0;
    int failures = 0;
    double worst = 0.0;
    double tol = 0.0;
    double seconds = 0.0;
    std::string note;
    bool passed() const { return count > 0 && failures == 0; }

    void record(double err) {
        ++count;
        if (!(err <= tol)) ++failures;
        if (std::isnan(err) || err > worst) worst = std::isnan(err) ? INFINITY : err;
    }
};

// |x - ref| / max(1, |ref|)
inline double rel_err(double x, double ref) { return std::abs(x - ref) / std::max(1.0, std::abs(ref)); }

// |x - ref| / |ref|
inline double rel_err_strict(double x, double ref) {
    if (ref == 0.0) return std::abs(x);
    return std::abs(x - ref) / std::abs(ref);
}

struct SpecRanges {
    double theta_lo = 0.3, theta_hi = 3.0;
    double alpha_lo = 0.2, alpha_hi = 5.0;
    double ab_lo = 0.3, ab_hi = 3.0;
    double base_lo = 0.5, base_hi = 2.0;
};

inline Baseline random_baseline(Rng& rng, BaselineKind k, const SpecRanges& r = {}) {
    std::vector<double> p;
    for (std::size_t i = 0; i < Baseline::kind_param_names(k).size(); ++i)
        p.push_back(rng.log_uniform(r.base_lo, r.base_hi));
    return Baseline{k, p};
}

inline ModelSpec random_spec(Rng& rng, BaselineKind k, const SpecRanges& r = {}) {
    FamilyParams f;
    f.theta = rng.log_uniform(r.theta_lo, r.theta_hi);
    f.alpha = rng.log_uniform(r.alpha_lo, r.alpha_hi);
    f.a = rng.log_uniform(r.ab_lo, r.ab_hi);
    f.b = rng.log_uniform(r.ab_lo, r.ab_hi);
    return make_spec(Variant::GMOKwG, f, random_baseline(rng, k, r));
}

namespace detail {

inline std::string fmt_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

template <class Body>
SuiteResult run_suite(const std::string& name, double tol, Body&& body) {
    SuiteResult r;
    r.name = name;
    r.tol = tol;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        ++r.failures;
        r.note = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline std::vector<double> probe_points(const ModelSpec& s) {
    std::vector<double> ts;
    for (double p : {0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) ts.push_back(quantile(s, p));
    return ts;
}

}  // namespace detail

// Integral of the pdf over the support, 100 random specs across the shipped baselines.
inline SuiteResult check_normalization(std::uint64_t seed = 1, int draws = 100, double tol = 1e-8) {
    return detail::run_suite("normalization", tol, [&](SuiteResult& r) {
        Rng rng(seed, 10);
        int cut = 0;
        double max_closed = 0.0;
        for (int i = 0; i < draws; ++i) {
            auto s = random_spec(rng, kShippedBaselines[i % 8]);
            auto q = integrate_over_quantiles([&](double t) { return pdf(s, t); },
                                              [&](double p, double qq) { return quantile_pair(s, p, qq); },
                                              1e-11);
            // mass inside the last 1e-6 relative width next to a support end is taken from
            // cdf/sf, so the check is  int_lo^hi pdf = cdf(hi) - cdf(lo)  on the resolved range
            double closed = 0.0;
            if (!std::isnan(q.lo_cut)) closed += cdf(s, q.lo_cut), ++cut;
            if (!std::isnan(q.hi_cut)) closed += sf(s, q.hi_cut), ++cut;
            max_closed = std::max(max_closed, closed);
            r.record(q.converged ? std::abs(q.value + closed - 1.0) : INFINITY);
        }
        if (cut > 0)
            r.note = std::to_string(cut) + " tails within 1e-6 relative width of an end closed by cdf/sf, largest mass " +
                     detail::fmt_sci(max_closed);
    });
}

inline const std::vector<double>& roundtrip_probabilities() {
    static const std::vector<double> ps = {1e-6, 0.01, 0.1, 0.2, 0.3, 0.4,    0.5,
                                           0.6,  0.7,  0.8, 0.9, 0.99, 1 - 1e-6};
    return ps;
}

// |cdf(quantile(p)) - p| for 13 probabilities over 50 random specs. Failures where
// neither neighbouring double of the returned quantile does better are counted as
// limited by the resolution of t itself.
inline SuiteResult check_roundtrip(std::uint64_t seed = 2, int specs = 50, double tol = 1e-10) {
    return detail::run_suite("roundtrip", tol, [&](SuiteResult& r) {
        Rng rng(seed, 11);
        int floor_limited = 0;
        for (int i = 0; i < specs; ++i) {
            auto s = random_spec(rng, kShippedBaselines[i % 8]);
            for (double p : roundtrip_probabilities()) {
                const double t = quantile(s, p);
                const double e = std::abs(cdf(s, t) - p);
                r.record(e);
                if (e > tol) {
                    const double lo = std::nextafter(t, -INFINITY), hi = std::nextafter(t, INFINITY);
                    const double el = std::abs(cdf(s, lo) - p), eh = std::abs(cdf(s, hi) - p);
                    if (std::min(el, eh) > tol) ++floor_limited;
                }
            }
        }
        if (r.failures > 0)
            r.note = std::to_string(floor_limited) + " of " + std::to_string(r.failures) +
                     " failures have no double t within tolerance (ill-conditioned near a bounded endpoint)";
    });
}

// Reduction identities against the reduced variants evaluated directly.
inline SuiteResult check_reduction(std::uint64_t seed = 3, int specs = 20, double tol = 1e-12) {
    return detail::run_suite("reduction", tol, [&](SuiteResult& r) {
        Rng rng(seed, 12);
        for (int i = 0; i < specs; ++i) {
            const auto kind = kShippedBaselines[i % 8];
            auto base = random_baseline(rng, kind);
            const double th = rng.log_uniform(0.3, 3), al = rng.log_uniform(0.2, 5);
            const double a = rng.log_uniform(0.3, 3), b = rng.log_uniform(0.3, 3);
            auto mokw = make_spec(Variant::GMOKwG, {1.0, al, a, b}, base);
            auto kw = make_spec(Variant::GMOKwG, {1.0, 1.0, a, b}, base);
            auto gmo = make_spec(Variant::GMOKwG, {th, al, 1.0, 1.0}, base);
            auto full = make_spec(Variant::GMOKwG, {1.0, 1.0, 1.0, 1.0}, base);
            for (int k = 0; k < 200; ++k) {
                const double t = base.quantile(0.005 + 0.99 * k / 199.0);
                const auto bv = base.values(t);
                const double G = bv.G, g = bv.g;
                // MOKw-G: sf = alpha S / (1 - abar S)
                const double Sk = std::exp(b * log1m_pow(bv, a));
                const double fkw = a * b * g * std::pow(G, a - 1.0) * Sk / std::exp(log1m_pow(bv, a));
                r.record(rel_err_strict(sf(mokw, t), al * Sk / (1.0 - (1.0 - al) * Sk)));
                r.record(rel_err_strict(pdf(mokw, t), al * fkw / std::pow(1.0 - (1.0 - al) * Sk, 2)));
                // Kw-G
                r.record(rel_err_strict(sf(kw, t), Sk));
                r.record(rel_err_strict(pdf(kw, t), fkw));
                // GMO: sf = [alpha Gbar / (1 - abar Gbar)]^theta
                const double Gb = bv.Gbar;
                r.record(rel_err_strict(sf(gmo, t), std::pow(al * Gb / (1.0 - (1.0 - al) * Gb), th)));
                r.record(rel_err_strict(pdf(gmo, t), th * std::pow(al, th) * g * std::pow(Gb, th - 1.0) /
                                                         std::pow(1.0 - (1.0 - al) * Gb, th + 1.0)));
                // baseline
                r.record(rel_err_strict(pdf(full, t), g));
                r.record(rel_err_strict(sf(full, t), Gb));
            }
        }
    });
}

// Series and mixture expansions against direct evaluation in both alpha regimes.
inline SuiteResult check_series(std::uint64_t seed = 4, int specs = 24, double tol = 1e-8) {
    return detail::run_suite("series", tol, [&](SuiteResult& r) {
        Rng rng(seed, 13);
        for (int i = 0; i < specs; ++i) {
            SpecRanges rg;
            if (i % 2 == 0) {
                rg.alpha_lo = 0.2;
                rg.alpha_hi = 0.9;
            } else {
                rg.alpha_lo = 1.2;
                rg.alpha_hi = 5.0;
            }
            auto s = random_spec(rng, kShippedBaselines[i % 8], rg);
            for (double t : detail::probe_points(s)) {
                const double f = pdf(s, t), S = sf(s, t);
                r.record(rel_err_strict(series_pdf(s, t), f));
                if (s.family.alpha < 1.0) r.record(rel_err_strict(mixture_pdf(s, t), f));
                r.record(rel_err_strict(series_sf(s, t), S));
            }
        }
    });
}

// Truncated polynomial power by repeated multiplication.
inline std::vector<double> power_series_power_bruteforce(const std::vector<double>& c, int m, int K) {
    std::vector<double> d(K + 1, 0.0);
    d[0] = 1.0;
    for (int it = 0; it < m; ++it) {
        std::vector<double> nd(K + 1, 0.0);
        for (int i = 0; i <= K; ++i)
            for (int j = 0; j <= K - i && j < static_cast<int>(c.size()); ++j) nd[i + j] += d[i] * c[j];
        d = nd;
    }
    return d;
}

// Order-statistic series against direct evaluation (n <= 6) and the power recursion
// against brute-force polynomial exponentiation (m <= 6, K <= 12).
inline SuiteResult check_orderstats(std::uint64_t seed = 5, int specs = 8, double tol = 1e-6) {
    return detail::run_suite("orderstats", tol, [&](SuiteResult& r) {
        Rng rng(seed, 14);
        for (int sidx = 0; sidx < specs; ++sidx) {
            SpecRanges rg;
            if (sidx % 2 == 0) {
                rg.alpha_lo = 0.3;
                rg.alpha_hi = 0.9;
            } else {
                rg.alpha_lo = 1.2;
                rg.alpha_hi = 4.0;
            }
            auto s = random_spec(rng, kShippedBaselines[sidx % 8], rg);
            for (double p : {0.1, 0.5, 0.9}) {
                const double t = quantile(s, p);
                for (int n = 1; n <= 6; ++n)
                    for (int i = 1; i <= n; ++i)
                        r.record(rel_err_strict(order_stat_pdf_series(s, n, i, t),
                                                order_stat_pdf_direct(s, n, i, t)));
            }
        }
        for (int trial = 0; trial < 4; ++trial) {
            std::vector<double> c(13);
            for (auto& x : c) x = rng.uniform(-1.0, 1.0);
            c[0] = rng.uniform(0.5, 1.5);
            for (int m = 0; m <= 6; ++m)
                for (int K = 0; K <= 12; ++K) {
                    auto rec = power_series_power(c, m, K);
                    auto bf = power_series_power_bruteforce(c, m, K);
                    for (int k = 0; k <= K; ++k) r.record(rel_err(rec[k], bf[k]));
                }
        }
    });
}

// Moment series routes against quadrature of the quantile function, plus the
// closed-form expectation identity against quadrature.
inline SuiteResult check_moments(std::uint64_t seed = 6, int specs = 4, double tol = 1e-6) {
    return detail::run_suite("moments", tol, [&](SuiteResult& r) {
        Rng rng(seed, 15);
        const BaselineKind kinds[] = {BaselineKind::Exponential, BaselineKind::Weibull,
                                      BaselineKind::Gompertz, BaselineKind::Weibull};
        for (int i = 0; i < specs; ++i) {
            SpecRanges lo, hi;
            lo.alpha_lo = 0.5, lo.alpha_hi = 0.9;
            hi.alpha_lo = 1.2, hi.alpha_hi = 3.0;
            auto s1 = random_spec(rng, kinds[i % 4], lo);
            auto s2 = random_spec(rng, kinds[i % 4], hi);
            for (int p : {1, 2}) {
                const double q1 = moment_quadrature(s1, p).value, q2 = moment_quadrature(s2, p).value;
                r.record(rel_err_strict(moment_series(s1, p, MomentRoute::A), q1));
                r.record(rel_err_strict(moment_series(s1, p, MomentRoute::B), q1));
                r.record(rel_err_strict(moment_series(s2, p, MomentRoute::C), q2));
            }
        }
        // closed-form identity; tighter tolerance
        const double id_tol = 1e-8;
        auto rec_id = [&](double v, double ref) {
            double e = std::abs(v - ref);
            r.record(e <= id_tol ? 0.0 : e);
        };
        rec_id(mom_expectation(1.0, 0.5, 1), std::log(2.0));
        rec_id(mom_expectation(1.0, 0.5, 2), 0.5);
        for (double th : {0.5, 1.0, 1.7})
            for (double al : {0.3, 0.6, 1.5, 3.0})
                for (int nu : {1, 2, 3}) {
                    double v;
                    try {
                        v = mom_expectation(th, al, nu);
                    } catch (const BranchError&) {
                        continue;
                    }
                    rec_id(v, mom_expectation_quadrature(th, al, nu));
                }
    });
}

// Renyi entropy, series against quadrature, delta in {0.5, 2}.
inline SuiteResult check_entropy(std::uint64_t seed = 7, int specs = 4, double tol = 1e-6) {
    return detail::run_suite("entropy", tol, [&](SuiteResult& r) {
        Rng rng(seed, 16);
        // Light-tailed baselines with shape >= 1 and a >= 0.7 keep both orders finite:
        // near 0 the density behaves like t^(a k - 1), so delta = 2 needs a k > 1/2.
        const BaselineKind kinds[] = {BaselineKind::Exponential, BaselineKind::Weibull,
                                      BaselineKind::Gompertz, BaselineKind::ModifiedWeibull};
        for (int i = 0; i < specs; ++i) {
            SpecRanges rg;
            if (i % 2 == 0) {
                rg.alpha_lo = 0.3;
                rg.alpha_hi = 0.9;
            } else {
                rg.alpha_lo = 1.2;
                rg.alpha_hi = 3.0;
            }
            rg.ab_lo = 0.7;
            rg.ab_hi = 2.0;
            rg.base_lo = 1.0;
            auto s = random_spec(rng, kinds[i % 4], rg);
            for (double d : {0.5, 2.0}) {
                const double q = renyi({d, s}, EntropyMethod::quadrature);
                r.record(rel_err_strict(renyi({d, s}, EntropyMethod::series), q));
            }
        }
    });
}

// Genesis construction against the analytic cdf, KS distance on 50,000 draws.
inline SuiteResult check_genesis(std::uint64_t seed = 8, std::size_t n = 50000, double tol = 0.0122) {
    return detail::run_suite("genesis", tol, [&](SuiteResult& r) {
        const std::pair<int, double> cases[] = {{1, 0.5}, {2, 0.5}, {3, 2.0}};
        const Baseline base = Baseline::exponential(1.0);
        for (auto [th, al] : cases) {
            auto batch = simulate_genesis(th, al, 1.5, 0.8, base, n, seed);
            const auto& s = batch.spec;
            r.record(ks_statistic(batch.values, [&](double t) { return cdf(s, t); }));
        }
    });
}

namespace detail {

// Extrapolated derivative of f at x. Initial steps h0, h0/10, h0/100 are tried
// (each shrunk until both probes evaluate, which keeps the stencil inside
// parameter or support constraints); the estimate with the smallest error wins.
template <class F>
DiffResult safe_derivative(F&& f, double x, double h0) {
    DiffResult best;
    int found = 0;
    for (int k = 0; k < 14 && found < 3; ++k, h0 *= 0.1) {
        try {
            const double a = f(x + h0), b = f(x - h0);
            if (!std::isfinite(a) || !std::isfinite(b)) continue;
            auto r = ridders_derivative(f, x, h0);
            if (std::isfinite(r.value)) {
                ++found;
                if (r.error < best.error || !std::isfinite(best.value)) best = r;
            }
        } catch (const Error&) {
        }
    }
    return best;
}

}  // namespace detail

// Analytic score against extrapolated finite differences of loglik, per variant.
inline SuiteResult check_gradients(std::uint64_t seed = 9, int points = 30, double tol = 1e-6) {
    return detail::run_suite("gradients", tol, [&](SuiteResult& r) {
        Rng rng(seed, 17);
        for (Variant v : kAllVariants) {
            for (int i = 0; i < points; ++i) {
                auto s = random_spec(rng, kShippedBaselines[i % 8]);
                auto m = free_mask(v);
                if (!m[0]) s.family.theta = 1.0;
                if (!m[1]) s.family.alpha = 1.0;
                if (!m[2]) s.family.a = 1.0;
                if (!m[3]) s.family.b = 1.0;
                s.variant = v;
                // central draws only: next to a parameter-dependent support endpoint
                // the log-likelihood is too stiff for any difference oracle
                std::vector<double> data;
                const double lo = s.baseline.lower(), hi = s.baseline.upper();
                for (double t : sample(s, 40, seed + i).values) {
                    const double c = cdf(s, t);
                    const double room = std::min(t - lo, hi - t);
                    if (c > 1e-4 && c < 1.0 - 1e-4 && room > 1e-6 * std::max(1.0, std::abs(t)))
                        data.push_back(t);
                }
                auto g = score(s, data);
                auto x = pack_params(s);
                for (std::size_t j = 0; j < g.size(); ++j) {
                    auto d = detail::safe_derivative(
                        [&](double xj) {
                            auto y = x;
                            y[j] = xj;
                            return loglik(unpack_params(s, y), data);
                        },
                        x[j], 0.05 * x[j]);
                    r.record(rel_err(g[j], d.value));
                }
            }
        }
    });
}

// GMOKw-E analytic information against finite differences of the score.
inline SuiteResult check_hessian(std::uint64_t seed = 10, int points = 20, double tol = 1e-4) {
    return detail::run_suite("hessian", tol, [&](SuiteResult& r) {
        Rng rng(seed, 18);
        for (int i = 0; i < points; ++i) {
            auto s = random_spec(rng, BaselineKind::Exponential);
            auto data = sample(s, 60, seed + i).values;
            auto A = observed_info(s, data, InfoMethod::analytic_gmokwe);
            auto F = observed_info(s, data, InfoMethod::finite_diff);
            for (Eigen::Index p = 0; p < A.rows(); ++p)
                for (Eigen::Index q = 0; q < A.cols(); ++q) r.record(rel_err(A(p, q), F(p, q)));
        }
    });
}

// Likelihood-ratio ordering chain for random alpha1 < alpha2, per shipped baseline.
inline SuiteResult check_ordering(std::uint64_t seed = 11, int pairs = 20, int grid = 2000) {
    auto res = detail::run_suite("ordering", 0.0, [&](SuiteResult& r) {
        Rng rng(seed, 19);
        for (auto kind : kShippedBaselines) {
            for (int i = 0; i < pairs; ++i) {
                auto s1 = random_spec(rng, kind);
                auto s2 = s1;
                double x = rng.log_uniform(0.2, 5.0), y = rng.log_uniform(0.2, 5.0);
                if (x > y) std::swap(x, y);
                if (x == y) y *= 1.5;
                s1.family.alpha = x;
                s2.family.alpha = y;
                auto v = check_lr_order(s1, s2, grid);
                r.record(v.all() ? 0.0 : 1.0);
            }
        }
    });
    res.note = res.note.empty() ? "error = number of violated properties per pair" : res.note;
    return res;
}

namespace detail {

// d/dt of f at t by extrapolated differences; close to a finite support endpoint
// the difference is taken in u = log(distance to that endpoint), where f is smooth.
template <class F>
DiffResult support_derivative(F&& f, double t, double lower, double upper) {
    const double scale = std::max(1.0, std::abs(t));
    const double dl = t - lower, du = upper - t;
    if (std::isfinite(upper) && du < dl && du < 0.1 * scale) {
        auto r = safe_derivative([&](double u) { return f(upper - std::exp(u)); }, std::log(du), 0.5);
        return {-r.value / du, r.error / du};
    }
    if (std::isfinite(lower) && dl < 0.1 * scale) {
        auto r = safe_derivative([&](double u) { return f(lower + std::exp(u)); }, std::log(dl), 0.5);
        return {r.value / dl, r.error / dl};
    }
    return safe_derivative(f, t, 0.1 * std::min({dl, du, scale}));
}

}  // namespace detail

// Shape derivatives against extrapolated finite differences of log pdf and log hrf.
inline SuiteResult check_shape(std::uint64_t seed = 12, int specs = 30, double tol = 1e-6) {
    return detail::run_suite("shape", tol, [&](SuiteResult& r) {
        Rng rng(seed, 20);
        for (int i = 0; i < specs; ++i) {
            auto s = random_spec(rng, kShippedBaselines[i % 8]);
            const double lo = s.baseline.lower(), hi = s.baseline.upper();
            for (int k = 0; k < 20; ++k) {
                const double p = 0.02 + 0.96 * k / 19.0;
                const double t = quantile(s, p);
                auto fd_f = detail::support_derivative([&](double u) { return log_pdf(s, u); }, t, lo, hi);
                auto fd_h = detail::support_derivative([&](double u) { return log_hrf(s, u); }, t, lo, hi);
                r.record(rel_err(dlog_pdf(s, t), fd_f.value));
                r.record(rel_err(dlog_hrf(s, t), fd_h.value));
            }
        }
    });
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "normalization", "roundtrip", "reduction", "series",  "orderstats", "moments",
        "entropy",       "genesis",   "gradients", "hessian", "ordering",   "shape"};
    return names;
}

inline SuiteResult run_named_suite(const std::string& name) {
    if (name == "normalization") return check_normalization();
    if (name == "roundtrip") return check_roundtrip();
    if (name == "series") return check_series();
    if (name == "orderstats") return check_orderstats();
    if (name == "moments") return check_moments();
    if (name == "entropy") return check_entropy();
    if (name == "genesis") return check_genesis();
    if (name == "gradients") return check_gradients();
    if (name == "hessian") return check_hessian();
    if (name == "ordering") return check_ordering();
    if (name == "reduction") return check_reduction();
    if (name == "shape") return check_shape();
    std::string list;
    for (const auto& n : suite_names()) list += (list.empty() ? "" : ", ") + n;
    throw ArgumentError("unknown suite '" + name + "'; valid: " + list);
}

}  // namespace gmokw
