#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "baselines.hpp"
#include "data.hpp"
#include "error.hpp"
#include "family.hpp"
#include "optimize.hpp"
#include "rng.hpp"
#include "special.hpp"

namespace gmokw {

inline constexpr double kLoglikSentinel = -1e100;

// ---- parameter vectors -------------------------------------------------------

// Free family parameters (theta, alpha, a, b order, masked by variant) then baseline parameters.
inline std::vector<std::string> param_names(Variant v, const Baseline& base) {
    std::vector<std::string> out;
    auto m = free_mask(v);
    for (int i = 0; i < 4; ++i)
        if (m[i]) out.emplace_back(kFamilyParamNames[i]);
    for (auto& n : base.param_names()) out.push_back(n);
    return out;
}

inline std::vector<double> pack_params(const ModelSpec& s) {
    std::vector<double> x;
    auto m = free_mask(s.variant);
    const double f[4] = {s.family.theta, s.family.alpha, s.family.a, s.family.b};
    for (int i = 0; i < 4; ++i)
        if (m[i]) x.push_back(f[i]);
    for (double p : s.baseline.params) x.push_back(p);
    return x;
}

inline ModelSpec unpack_params(const ModelSpec& tmpl, const std::vector<double>& x) {
    ModelSpec s = tmpl;
    auto m = free_mask(s.variant);
    double f[4] = {1.0, 1.0, 1.0, 1.0};
    std::size_t k = 0;
    for (int i = 0; i < 4; ++i)
        if (m[i]) f[i] = x.at(k++);
    s.family = {f[0], f[1], f[2], f[3]};
    std::vector<double> bp(s.baseline.params.size());
    for (auto& p : bp) p = x.at(k++);
    s.baseline = s.baseline.with_params(std::move(bp));
    return s;
}

inline int param_count(const ModelSpec& s) {
    return family_free_count(s.variant) + static_cast<int>(s.baseline.params.size());
}

// ---- log-likelihood and score ------------------------------------------------

inline void require_in_support(const ModelSpec& s, const std::vector<double>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (!s.baseline.in_support(xs[i]))
            throw DataError("observation " + std::to_string(i + 1) + " (" + std::to_string(xs[i]) +
                            ") lies outside the baseline support");
}

inline double loglik(const ModelSpec& s, const std::vector<double>& xs) {
    s.require_valid();
    require_in_support(s, xs);
    double sum = 0.0;
    for (double t : xs) {
        double v = log_pdf(s, t);
        if (!std::isfinite(v)) return kLoglikSentinel;
        sum += v;
    }
    return sum;
}

inline double loglik(const ModelSpec& s, const Dataset& d) { return loglik(s, d.values); }

// Analytic gradient of loglik over the free parameters in pack_params order.
inline std::vector<double> score(const ModelSpec& s, const std::vector<double>& xs) {
    s.require_valid();
    require_in_support(s, xs);
    const auto& f = s.family;
    const double th = f.theta, al = f.alpha, a = f.a, b = f.b, abar = f.alpha_bar();
    const std::size_t nb = s.baseline.params.size();
    double gth = 0, gal = 0, ga = 0, gb = 0;
    std::vector<double> gbase(nb, 0.0), dlogG, dlogGbar, dlogg;
    for (double t : xs) {
        auto P = family_parts(s, t);
        const double x = P.bv.logG;
        const double W = std::exp(P.logS - P.logD);  // S / D
        // d L1 / d a = -log G * G^a / (1 - G^a)
        const double dL1_a = std::exp(log_neg_logG(x, P.bv.logGbar) + a * x - P.L1);
        gth += 1.0 / th + b * P.L1 - P.logDa;
        gal += th / al - (th + 1.0) * W;
        ga += 1.0 / a + x + (b * th - 1.0) * dL1_a + (th + 1.0) * abar * W * b * dL1_a;
        gb += 1.0 / b + th * P.L1 + (th + 1.0) * abar * W * P.L1;
        if (nb) {
            s.baseline.param_grad(t, dlogG, dlogGbar, dlogg);
            // d L1 = -a G^a dlogG / (1 - G^a) = a G^(a-1) Gbar dlogGbar / (1 - G^a)
            const bool upper = P.bv.G >= 0.5;
            const double c = upper ? std::exp((a - 1.0) * x + P.bv.logGbar - P.L1)
                                   : std::exp(a * x - P.L1);
            for (std::size_t j = 0; j < nb; ++j) {
                const double dL1 = upper ? a * dlogGbar[j] * c : -a * dlogG[j] * c;
                gbase[j] += dlogg[j] + (a - 1.0) * dlogG[j] + (b * th - 1.0) * dL1 +
                            (th + 1.0) * abar * W * b * dL1;
            }
        }
    }
    std::vector<double> out;
    auto m = free_mask(s.variant);
    const double all[4] = {gth, gal, ga, gb};
    for (int i = 0; i < 4; ++i)
        if (m[i]) out.push_back(all[i]);
    for (double g : gbase) out.push_back(g);
    return out;
}

// Direct transcription of the GMOKw-E derivative with respect to theta, for cross-checks.
inline double score_theta_gmokwe(double theta, double alpha, double a, double b, double lambda,
                                 const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double s1 = 0.0, s2 = 0.0;
    for (double t : xs) {
        const double G = -std::expm1(-lambda * t);
        const double one_minus = 1.0 - std::pow(G, a);
        s1 += std::log(one_minus);
        s2 += std::log(1.0 - (1.0 - alpha) * std::pow(one_minus, b));
    }
    return n / theta + n * std::log(alpha) + b * s1 - s2;
}

namespace detail {

inline double fd_step(double x) {
    double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(x));
    if (x > 0.0) h = std::min(h, 0.25 * x);
    return h;
}

}  // namespace detail

// Central finite-difference gradient of loglik over the free parameters.
inline std::vector<double> score_fd(const ModelSpec& s, const std::vector<double>& xs,
                                    double step_scale = 1.0) {
    auto x = pack_params(s);
    std::vector<double> g(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        double h = detail::fd_step(x[j]) * step_scale;
        auto up = x, dn = x;
        up[j] += h;
        dn[j] -= h;
        g[j] = (loglik(unpack_params(s, up), xs) - loglik(unpack_params(s, dn), xs)) / (2.0 * h);
    }
    return g;
}

// ---- observed information ----------------------------------------------------

enum class InfoMethod { finite_diff, analytic_gmokwe };

namespace detail {

inline Eigen::MatrixXd symmetrize_checked(Eigen::MatrixXd H) {
    Eigen::MatrixXd S = 0.5 * (H + H.transpose());
    if (!S.allFinite()) throw NumericalError("observed information has non-finite entries");
    return S;
}

// Negative Hessian of the GMOKw-E log-likelihood in (theta, alpha, a, b, lambda).
inline Eigen::MatrixXd info_gmokwe(const ModelSpec& s, const std::vector<double>& xs) {
    const auto& f = s.family;
    const double th = f.theta, al = f.alpha, a = f.a, b = f.b, ab = f.alpha_bar();
    const double lam = s.baseline.params.at(0);
    const double n = static_cast<double>(xs.size());
    // indices into the per-point derivative arrays for u in {a, b, lambda}
    enum { A = 0, B = 1, L = 2 };
    Eigen::Matrix<double, 5, 5> H = Eigen::Matrix<double, 5, 5>::Zero();
    H(0, 0) = -n / (th * th);
    H(1, 1) = -n * th / (al * al);
    H(0, 1) = n / al;
    H(2, 2) = -n / (a * a);
    H(3, 3) = -n / (b * b);
    H(4, 4) = -n / (lam * lam);
    for (double t : xs) {
        const double G = -std::expm1(-lam * t), Gbar = std::exp(-lam * t);
        const double x = G < 0.5 ? std::log(G) : std::log1p(-Gbar);
        const double P = std::exp(a * x);
        const double L1 = log1m_pow(x, -lam * t, a);
        const double omP = std::exp(L1);
        const double S = std::exp(b * L1);
        const double D = 1.0 - ab * S;
        const double xl = t * Gbar / G;
        const double xll = -t * t * Gbar / (G * G);
        // first and second derivatives of P
        double Pu[3] = {P * x, 0.0, a * P * xl};
        double Puv[3][3] = {};
        Puv[A][A] = P * x * x;
        Puv[A][L] = Puv[L][A] = P * xl * (1.0 + a * x);
        Puv[L][L] = a * P * (a * xl * xl + xll);
        double L1u[3], L1uv[3][3];
        for (int u = 0; u < 3; ++u) L1u[u] = -Pu[u] / omP;
        for (int u = 0; u < 3; ++u)
            for (int v = 0; v < 3; ++v) L1uv[u][v] = -Puv[u][v] / omP - Pu[u] * Pu[v] / (omP * omP);
        // log S = b L1
        double lSu[3] = {b * L1u[A], L1, b * L1u[L]};
        double lSuv[3][3];
        for (int u = 0; u < 3; ++u)
            for (int v = 0; v < 3; ++v) lSuv[u][v] = b * L1uv[u][v];
        lSuv[A][B] = lSuv[B][A] = L1u[A];
        lSuv[L][B] = lSuv[B][L] = L1u[L];
        lSuv[B][B] = 0.0;
        double Su[3], Suv[3][3];
        for (int u = 0; u < 3; ++u) Su[u] = S * lSu[u];
        for (int u = 0; u < 3; ++u)
            for (int v = 0; v < 3; ++v) Suv[u][v] = S * (lSu[u] * lSu[v] + lSuv[u][v]);
        // D = 1 - abar S ; D_alpha = S ; D_u = -abar S_u ; D_alpha,u = S_u
        double Du[3], lDuv[3][3], lDau[3];
        for (int u = 0; u < 3; ++u) Du[u] = -ab * Su[u];
        for (int u = 0; u < 3; ++u)
            for (int v = 0; v < 3; ++v) lDuv[u][v] = (-ab * Suv[u][v] * D - Du[u] * Du[v]) / (D * D);
        for (int u = 0; u < 3; ++u) lDau[u] = (Su[u] * D - S * Du[u]) / (D * D);
        const double lDa = S / D;
        // theta row
        H(0, 1) += -lDa;
        H(0, 2) += b * L1u[A] - Du[A] / D;
        H(0, 3) += L1 - Du[B] / D;
        H(0, 4) += b * L1u[L] - Du[L] / D;
        // alpha row
        H(1, 1) += (th + 1.0) * lDa * lDa;
        for (int u = 0; u < 3; ++u) H(1, 2 + u) += -(th + 1.0) * lDau[u];
        // (a, b, lambda) block
        H(2, 2) += (b * th - 1.0) * L1uv[A][A] - (th + 1.0) * lDuv[A][A];
        H(2, 3) += th * L1u[A] - (th + 1.0) * lDuv[A][B];
        H(2, 4) += xl + (b * th - 1.0) * L1uv[A][L] - (th + 1.0) * lDuv[A][L];
        H(3, 3) += -(th + 1.0) * lDuv[B][B];
        H(3, 4) += th * L1u[L] - (th + 1.0) * lDuv[B][L];
        H(4, 4) += (a - 1.0) * xll + (b * th - 1.0) * L1uv[L][L] - (th + 1.0) * lDuv[L][L];
    }
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < i; ++j) H(i, j) = H(j, i);
    return -Eigen::MatrixXd(H);
}

}  // namespace detail

inline Eigen::MatrixXd observed_info(const ModelSpec& s, const std::vector<double>& xs,
                                     InfoMethod method = InfoMethod::finite_diff) {
    s.require_valid();
    if (method == InfoMethod::analytic_gmokwe) {
        if (s.variant != Variant::GMOKwG || s.baseline.kind != BaselineKind::Exponential)
            throw ArgumentError("analytic information is available for the GMOKw-E model only");
        require_in_support(s, xs);
        return detail::symmetrize_checked(detail::info_gmokwe(s, xs));
    }
    auto x = pack_params(s);
    const std::size_t k = x.size();
    Eigen::MatrixXd H(k, k);
    for (std::size_t j = 0; j < k; ++j) {
        const double h = detail::fd_step(x[j]);
        auto up = x, dn = x;
        up[j] += h;
        dn[j] -= h;
        auto gu = score(unpack_params(s, up), xs), gd = score(unpack_params(s, dn), xs);
        for (std::size_t i = 0; i < k; ++i) H(i, j) = -(gu[i] - gd[i]) / (2.0 * h);
    }
    return detail::symmetrize_checked(H);
}

// ---- standard errors, AIC, LR tests ------------------------------------------

struct Interval {
    double low = NAN, high = NAN;
};

struct StdErrors {
    Eigen::MatrixXd cov;
    std::vector<double> se;
    std::vector<Interval> ci;
    double condition = NAN;
};

inline StdErrors std_errors_ci(const Eigen::MatrixXd& info, const std::vector<double>& estimate,
                               double gamma = 0.05) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ArgumentError("gamma must lie in (0, 1)");
    const auto k = info.rows();
    if (info.cols() != k || static_cast<std::size_t>(k) != estimate.size())
        throw ArgumentError("information matrix and estimate sizes differ");
    StdErrors out;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
    if (k > 0 && !lu.isInvertible()) throw SingularInformationError("observed information is singular");
    out.cov = k > 0 ? Eigen::MatrixXd(lu.inverse()) : Eigen::MatrixXd(0, 0);
    out.cov = 0.5 * (out.cov + out.cov.transpose());
    if (k > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(info);
        const auto& sv = svd.singularValues();
        out.condition = sv(0) / sv(k - 1);
    }
    const double z = normal_quantile(1.0 - gamma / 2.0);
    for (Eigen::Index j = 0; j < k; ++j) {
        const double v = out.cov(j, j);
        const double se = v >= 0.0 ? std::sqrt(v) : NAN;
        out.se.push_back(se);
        out.ci.push_back({estimate[j] - z * se, estimate[j] + z * se});
    }
    return out;
}

inline double aic(int k, double ll) { return 2.0 * k - 2.0 * ll; }

// ---- fitting -----------------------------------------------------------------

struct FitConfig {
    int n_starts = 40;
    double start_lo = 1e-3, start_hi = 1e3;  // log-uniform start box per parameter
    double bound_lo = 1e-3, bound_hi = 1e3;  // search box per parameter
    int max_iter = 20000;
    double f_tol = 1e-10;
    double x_tol = 1e-8;
    std::uint64_t seed = 20240101;
    int threads = 0;  // 0 = GMOKW_THREADS or hardware concurrency
    double gamma = 0.05;
    std::vector<std::vector<double>> extra_starts;  // natural-scale parameter vectors

    void validate() const {
        if (n_starts < 0) throw ArgumentError("n_starts must be >= 0");
        if (n_starts == 0 && extra_starts.empty()) throw ArgumentError("at least one start is required");
        if (!(f_tol > 0.0) || !(x_tol > 0.0)) throw ArgumentError("tolerances must be positive");
        if (max_iter <= 0) throw ArgumentError("max_iter must be positive");
        if (!(start_lo > 0.0 && start_hi > start_lo && std::isfinite(start_hi)))
            throw ArgumentError("start box must be a finite positive range");
        if (!(bound_lo > 0.0 && bound_hi > bound_lo)) throw ArgumentError("bounds must be a positive range");
    }
};

struct StartSummary {
    double best = NAN, worst = NAN;
    int count = 0;
    int converged = 0;
};

struct FitResult {
    Variant variant = Variant::GMOKwG;
    Baseline baseline;
    std::vector<std::string> names;
    std::vector<double> estimate;
    double loglik = NAN;
    double aic = NAN;
    int k = 0;
    Eigen::MatrixXd info, cov;
    std::vector<double> se;
    std::vector<Interval> ci;
    bool converged = false;
    bool at_bound = false;
    bool stiff = false;  // information condition number > 1e10
    double condition = NAN;
    std::string info_error;
    StartSummary starts;

    ModelSpec spec() const { return unpack_params(ModelSpec{variant, {}, baseline}, estimate); }
};

inline int fit_threads(int requested) {
    int n = requested;
    if (n <= 0) {
        n = static_cast<int>(std::thread::hardware_concurrency());
        if (const char* e = std::getenv("GMOKW_THREADS")) {
            int cap = std::atoi(e);
            if (cap > 0) n = std::min(std::max(n, 1), cap);
        }
    }
    return std::max(1, n);
}

namespace detail {

struct StartOutcome {
    std::vector<double> z;  // log parameters
    double value = -INFINITY;
    bool converged = false;
};

inline bool better(const StartOutcome& a, const StartOutcome& b) {
    if (a.value != b.value) return a.value > b.value;
    return std::lexicographical_compare(a.z.begin(), a.z.end(), b.z.begin(), b.z.end());
}

// Projected Newton polish on log parameters, accepted only on improvement.
template <class LL>
StartOutcome polish(const ModelSpec& tmpl, const std::vector<double>& xs, StartOutcome cur,
                    const LL& ll, double zlo, double zhi) {
    const std::size_t k = cur.z.size();
    auto nat = [&](const std::vector<double>& z) {
        std::vector<double> x(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) x[i] = std::exp(z[i]);
        return x;
    };
    for (int it = 0; it < 50; ++it) {
        ModelSpec s = unpack_params(tmpl, nat(cur.z));
        std::vector<double> g;
        Eigen::MatrixXd I;
        try {
            g = score(s, xs);
            I = observed_info(s, xs);
        } catch (const Error&) {
            break;
        }
        // chain rule to log scale: grad_z = x .* grad_x ; H_z = X H_x X + diag(x .* grad_x)
        Eigen::VectorXd gz(k);
        Eigen::MatrixXd Hz(k, k);
        auto x = nat(cur.z);
        for (std::size_t i = 0; i < k; ++i) gz(i) = x[i] * g[i];
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) Hz(i, j) = -x[i] * I(i, j) * x[j];
        for (std::size_t i = 0; i < k; ++i) Hz(i, i) += gz(i);
        // freeze coordinates pinned at the box with the gradient pushing outward
        std::vector<bool> active(k, true);
        for (std::size_t i = 0; i < k; ++i)
            if ((cur.z[i] <= zlo + 1e-12 && gz(i) < 0) || (cur.z[i] >= zhi - 1e-12 && gz(i) > 0))
                active[i] = false;
        for (std::size_t i = 0; i < k; ++i)
            if (!active[i]) {
                Hz.row(i).setZero();
                Hz.col(i).setZero();
                Hz(i, i) = -1.0;
                gz(i) = 0.0;
            }
        Eigen::VectorXd step;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(-Hz);
        if (ldlt.info() == Eigen::Success && ldlt.isPositive())
            step = ldlt.solve(gz);
        else
            step = gz * 1e-3;
        if (!step.allFinite()) break;
        bool improved = false;
        for (double scale = 1.0; scale > 1e-6; scale *= 0.5) {
            std::vector<double> z = cur.z;
            for (std::size_t i = 0; i < k; ++i) z[i] = std::clamp(z[i] + scale * step(i), zlo, zhi);
            double v = ll(z);
            if (v > cur.value) {
                const double gain = v - cur.value;
                cur.z = z;
                cur.value = v;
                improved = gain > 1e-13 * std::max(1.0, std::abs(v));
                break;
            }
        }
        if (!improved) break;
    }
    return cur;
}

}  // namespace detail

inline FitResult fit_mle(const std::vector<double>& xs, Variant variant, const Baseline& base_tmpl,
                         const FitConfig& cfg = {}) {
    cfg.validate();
    if (xs.empty()) throw DataError("no observations");
    ModelSpec tmpl{variant, {1, 1, 1, 1}, base_tmpl};
    const auto names = param_names(variant, base_tmpl);
    const std::size_t k = names.size();
    if (xs.size() < k + 1) throw DataError("need at least k+1 observations for k free parameters");
    const double zlo = std::log(cfg.bound_lo), zhi = std::log(cfg.bound_hi);

    auto ll = [&](const std::vector<double>& z) -> double {
        std::vector<double> x(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) x[i] = std::exp(z[i]);
        try {
            ModelSpec s = unpack_params(tmpl, x);
            if (!s.validate()) return -INFINITY;
            double v = 0.0;
            for (double t : xs) {
                if (!s.baseline.in_support(t)) return -INFINITY;
                v += log_pdf(s, t);
            }
            return std::isfinite(v) ? v : -INFINITY;
        } catch (const Error&) {
            return -INFINITY;
        }
    };

    std::vector<std::vector<double>> inits;
    for (int i = 0; i < cfg.n_starts; ++i) {
        Rng rng(cfg.seed, 100 + static_cast<std::uint64_t>(i));
        std::vector<double> z(k);
        for (int tries = 0; tries < 100; ++tries) {
            for (auto& zi : z) zi = std::log(rng.log_uniform(cfg.start_lo, cfg.start_hi));
            if (std::isfinite(ll(z))) break;
        }
        inits.push_back(z);
    }
    for (const auto& e : cfg.extra_starts) {
        if (e.size() != k) throw ArgumentError("extra start has the wrong length");
        std::vector<double> z(k);
        for (std::size_t i = 0; i < k; ++i) {
            if (!(e[i] > 0.0)) throw ArgumentError("extra start must be positive");
            z[i] = std::clamp(std::log(e[i]), zlo, zhi);
        }
        inits.push_back(z);
    }

    NelderMeadOptions nmo;
    nmo.max_iter = cfg.max_iter;
    nmo.f_tol = cfg.f_tol;
    nmo.x_tol = cfg.x_tol;
    nmo.lower.assign(k, zlo);
    nmo.upper.assign(k, zhi);

    std::vector<detail::StartOutcome> outs(inits.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i; (i = next.fetch_add(1)) < inits.size();) {
            auto r = nelder_mead([&](const std::vector<double>& z) { return -ll(z); }, inits[i], nmo);
            outs[i] = {r.x, -r.fx, r.converged};
        }
    };
    const int nt = std::min<int>(fit_threads(cfg.threads), static_cast<int>(inits.size()));
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    FitResult res;
    res.variant = variant;
    res.baseline = base_tmpl;
    res.names = names;
    res.k = static_cast<int>(k);
    std::size_t best = 0;
    for (std::size_t i = 0; i < outs.size(); ++i) {
        const auto& o = outs[i];
        if (std::isfinite(o.value)) {
            res.starts.best = std::isnan(res.starts.best) ? o.value : std::max(res.starts.best, o.value);
            res.starts.worst = std::isnan(res.starts.worst) ? o.value : std::min(res.starts.worst, o.value);
        }
        res.starts.converged += o.converged ? 1 : 0;
        if (detail::better(o, outs[best])) best = i;
    }
    res.starts.count = static_cast<int>(outs.size());
    if (!std::isfinite(outs[best].value)) {
        res.converged = false;
        res.estimate.assign(k, NAN);
        return res;
    }
    auto top = detail::polish(tmpl, xs, outs[best], ll, zlo, zhi);

    res.estimate.resize(k);
    for (std::size_t i = 0; i < k; ++i) res.estimate[i] = std::exp(top.z[i]);
    ModelSpec s = unpack_params(tmpl, res.estimate);
    res.baseline = s.baseline;
    res.loglik = loglik(s, xs);
    res.aic = aic(res.k, res.loglik);
    for (std::size_t i = 0; i < k; ++i)
        if (top.z[i] <= zlo + 1e-6 || top.z[i] >= zhi - 1e-6) res.at_bound = true;

    // stationarity over interior coordinates
    bool stationary = true;
    try {
        auto g = score(s, xs);
        for (std::size_t i = 0; i < k; ++i) {
            const bool pinned = top.z[i] <= zlo + 1e-6 || top.z[i] >= zhi - 1e-6;
            if (!pinned && std::abs(g[i]) * res.estimate[i] > 1e-4 * std::max(1.0, std::abs(res.loglik)))
                stationary = false;
        }
    } catch (const Error&) {
        stationary = false;
    }
    res.converged = outs[best].converged && stationary;

    try {
        res.info = observed_info(s, xs);
        auto se = std_errors_ci(res.info, res.estimate, cfg.gamma);
        res.cov = se.cov;
        res.se = se.se;
        res.ci = se.ci;
        res.condition = se.condition;
        res.stiff = !(se.condition <= 1e10);
    } catch (const Error& e) {
        res.info_error = e.what();
        res.se.assign(k, NAN);
        res.ci.assign(k, Interval{});
    }
    return res;
}

inline FitResult fit_mle(const Dataset& d, Variant variant, BaselineKind kind, const FitConfig& cfg = {}) {
    if (kind == BaselineKind::ExtendedWeibull)
        throw ArgumentError("extended-weibull needs a hook; pass a Baseline instead");
    return fit_mle(d.values, variant, Baseline{kind, Baseline::default_params(kind)}, cfg);
}

// Embed a fitted parameter vector of `from` into the parameterization of `to`
// (fixed family parameters of `from` take the value 1).
inline std::vector<double> embed_params(const FitResult& from, Variant to) {
    ModelSpec s = from.spec();
    s.variant = to;
    return pack_params(s);
}

inline bool is_nested(Variant null_v, Variant alt_v) {
    auto n = free_mask(null_v), a = free_mask(alt_v);
    for (int i = 0; i < 4; ++i)
        if (n[i] && !a[i]) return false;
    return family_free_count(null_v) < family_free_count(alt_v);
}

struct LRTestResult {
    double stat = NAN;
    int df = 0;
    double p_value = NAN;
    Variant null_variant = Variant::MO, alt_variant = Variant::GMOKwG;
};

inline LRTestResult lr_test_values(double ll_null, double ll_alt, int df) {
    if (df <= 0) throw ArgumentError("df must be positive");
    LRTestResult r;
    r.stat = -2.0 * (ll_null - ll_alt);
    r.df = df;
    r.p_value = r.stat <= 0.0 ? 1.0 : chisq_sf(r.stat, df);
    return r;
}

inline LRTestResult lr_test(const FitResult& null_fit, const FitResult& alt_fit) {
    if (!is_nested(null_fit.variant, alt_fit.variant))
        throw NonNestedError(variant_name(null_fit.variant) + " is not nested in " +
                             variant_name(alt_fit.variant));
    if (null_fit.baseline.kind != alt_fit.baseline.kind)
        throw NonNestedError("models use different baselines");
    auto r = lr_test_values(null_fit.loglik, alt_fit.loglik, alt_fit.k - null_fit.k);
    r.null_variant = null_fit.variant;
    r.alt_variant = alt_fit.variant;
    return r;
}

}  // namespace gmokw
