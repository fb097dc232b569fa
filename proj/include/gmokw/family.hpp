#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "baselines.hpp"
#include "error.hpp"
#include "rng.hpp"

namespace gmokw {

struct FamilyParams {
    double theta = 1.0;
    double alpha = 1.0;
    double a = 1.0;
    double b = 1.0;
    double alpha_bar() const { return 1.0 - alpha; }
};

enum class Variant { GMOKwG, MOKwG, KwG, GMO, MO, Baseline };

inline constexpr Variant kAllVariants[] = {Variant::GMOKwG, Variant::MOKwG, Variant::KwG,
                                           Variant::GMO,    Variant::MO,    Variant::Baseline};

inline std::string variant_name(Variant v) {
    switch (v) {
        case Variant::GMOKwG: return "gmokw";
        case Variant::MOKwG: return "mokw";
        case Variant::KwG: return "kw";
        case Variant::GMO: return "gmo";
        case Variant::MO: return "mo";
        case Variant::Baseline: return "baseline";
    }
    return "?";
}

inline Variant variant_from_name(const std::string& s) {
    for (auto v : kAllVariants)
        if (variant_name(v) == s) return v;
    throw ArgumentError("unknown model '" + s + "' (expected gmokw, mokw, kw, gmo, mo, baseline)");
}

// Which of (theta, alpha, a, b) are free in a variant.
inline std::array<bool, 4> free_mask(Variant v) {
    switch (v) {
        case Variant::GMOKwG: return {true, true, true, true};
        case Variant::MOKwG: return {false, true, true, true};
        case Variant::KwG: return {false, false, true, true};
        case Variant::GMO: return {true, true, false, false};
        case Variant::MO: return {false, true, false, false};
        case Variant::Baseline: return {false, false, false, false};
    }
    return {};
}

inline int family_free_count(Variant v) {
    int k = 0;
    for (bool f : free_mask(v)) k += f;
    return k;
}

inline constexpr const char* kFamilyParamNames[4] = {"theta", "alpha", "a", "b"};

struct ModelSpec {
    Variant variant = Variant::GMOKwG;
    FamilyParams family;
    Baseline baseline;

    Verdict validate() const {
        const double v[4] = {family.theta, family.alpha, family.a, family.b};
        static const char* names[4] = {"θ", "α", "a", "b"};
        auto mask = free_mask(variant);
        for (int i = 0; i < 4; ++i) {
            if (!std::isfinite(v[i]) || !(v[i] > 0.0))
                return {false, std::string(names[i]) + " must be > 0"};
            if (!mask[i] && v[i] != 1.0)
                return {false, std::string(names[i]) + " must equal 1 for variant " +
                                   variant_name(variant)};
        }
        return baseline.validate();
    }

    void require_valid() const {
        auto v = validate();
        if (!v) throw ParameterError(v.message);
    }
};

inline ModelSpec make_spec(Variant v, FamilyParams fp, Baseline base) {
    ModelSpec s{v, fp, std::move(base)};
    s.require_valid();
    return s;
}

inline ModelSpec gmokw_spec(double theta, double alpha, double a, double b, Baseline base) {
    return make_spec(Variant::GMOKwG, {theta, alpha, a, b}, std::move(base));
}

// Intermediate quantities shared by every evaluator.
struct FamilyParts {
    int side = 0;  // -1 below support, +1 above, 0 inside (endpoints included)
    BaselineValues bv{};
    double Ga = 0.0;    // G^a
    double L1 = 0.0;    // log(1 - G^a)
    double logS = 0.0;  // b log(1 - G^a)
    double S = 1.0;
    double D = 1.0;  // 1 - (1-alpha) S
    double logD = 0.0;
    double logDa = 0.0;  // log(D / alpha), exact when D is close to alpha
    double log_sf = 0.0;
};

inline FamilyParts family_parts(const ModelSpec& s, double t) {
    FamilyParts P;
    const auto& f = s.family;
    if (t < s.baseline.lower()) {
        P.side = -1;
        return P;
    }
    if (t > s.baseline.upper()) {
        P.side = 1;
        P.log_sf = -INFINITY;
        return P;
    }
    P.bv = s.baseline.values(t);
    const double alogG = f.a * P.bv.logG;
    P.Ga = std::exp(alogG);
    P.L1 = log1m_pow(P.bv, f.a);
    P.logS = f.b * P.L1;
    P.S = std::exp(P.logS);
    const double omS = -std::expm1(P.logS);
    P.D = omS + f.alpha * P.S;
    // D = alpha (1 + y), y = (1-alpha) (1-S) / alpha; log1p keeps the lower end exact
    const double y = (1.0 - f.alpha) * omS / f.alpha;
    P.logDa = std::abs(y) < 0.5 ? std::log1p(y) : std::log(P.D) - std::log(f.alpha);
    P.logD = std::log(f.alpha) + P.logDa;
    P.log_sf = f.theta * (P.logS - P.logDa);
    if (P.S == 0.0) P.log_sf = -INFINITY;
    return P;
}

namespace detail {

inline double log_pdf_from_parts(const ModelSpec& s, const FamilyParts& P) {
    const auto& f = s.family;
    if (P.side != 0) return -INFINITY;
    double r = std::log(f.theta) + f.theta * std::log(f.alpha) + std::log(f.a) + std::log(f.b) +
               P.bv.logg - (f.theta + 1.0) * P.logD;
    if (f.a != 1.0) r += (f.a - 1.0) * P.bv.logG;
    const double e = f.b * f.theta - 1.0;
    if (e != 0.0) r += e * P.L1;
    return r;
}

}  // namespace detail

inline double log_pdf(const ModelSpec& s, double t) {
    return detail::log_pdf_from_parts(s, family_parts(s, t));
}

inline double pdf(const ModelSpec& s, double t) {
    s.require_valid();
    return std::exp(log_pdf(s, t));
}

inline double log_sf(const ModelSpec& s, double t) {
    auto P = family_parts(s, t);
    if (P.side < 0) return 0.0;
    return P.log_sf;
}

inline double sf(const ModelSpec& s, double t) {
    s.require_valid();
    return std::exp(log_sf(s, t));
}

inline double cdf(const ModelSpec& s, double t) {
    s.require_valid();
    return 0.0 - std::expm1(log_sf(s, t));  // +0, not -0, at the lower end
}

inline double log_hrf(const ModelSpec& s, double t) {
    const auto& f = s.family;
    auto P = family_parts(s, t);
    if (P.side != 0 || P.log_sf == -INFINITY)
        throw DomainError("hrf: survival function vanishes at t=" + std::to_string(t));
    double r = std::log(f.theta) + std::log(f.a) + std::log(f.b) + P.bv.logg - P.L1 - P.logD;
    if (f.a != 1.0) r += (f.a - 1.0) * P.bv.logG;
    return r;
}

inline double hrf(const ModelSpec& s, double t) {
    s.require_valid();
    return std::exp(log_hrf(s, t));
}

inline double log_rhrf(const ModelSpec& s, double t) {
    const auto& f = s.family;
    auto P = family_parts(s, t);
    if (P.side != 0 || P.log_sf == 0.0)
        throw DomainError("rhrf: cdf vanishes at t=" + std::to_string(t));
    // f / F with F = (D^theta - (alpha S)^theta) / D^theta
    double num = std::log(f.theta) + f.theta * std::log(f.alpha) + std::log(f.a) + std::log(f.b) +
                 P.bv.logg;
    if (f.a != 1.0) num += (f.a - 1.0) * P.bv.logG;
    const double e = f.b * f.theta - 1.0;
    if (e != 0.0) num += e * P.L1;
    const double den = P.logD + f.theta * P.logD + std::log(-std::expm1(P.log_sf));
    return num - den;
}

inline double rhrf(const ModelSpec& s, double t) {
    s.require_valid();
    return std::exp(log_rhrf(s, t));
}

inline double chrf(const ModelSpec& s, double t) {
    s.require_valid();
    return -log_sf(s, t);
}

// Quantile from (p, 1-p); q is used directly so the upper tail keeps precision.
inline double quantile_pair(const ModelSpec& s, double p, double q) {
    const auto& f = s.family;
    if (p <= 0.0) return s.baseline.lower();
    if (q <= 0.0) return s.baseline.upper();
    const double logq = p < 0.5 ? std::log1p(-p) : std::log(q);
    const double u = logq / f.theta;
    const double w = std::exp(u), omw = -std::expm1(u);
    // alpha omw + w = 1 - (1-alpha) omw; log1p keeps the small-omw end exact
    const double x = (1.0 - f.alpha) * omw;
    const double logS = u - (std::abs(x) < 0.5 ? std::log1p(-x) : std::log(f.alpha * omw + w));
    const double logy = logS / f.b;  // y = 1 - G^a
    const double y = std::exp(logy);
    const double logGa = y < 0.5 ? std::log1p(-y) : std::log(-std::expm1(logy));
    const double logG = logGa / f.a;
    return s.baseline.quantile_pair(std::exp(logG), -std::expm1(logG));
}

inline double quantile(const ModelSpec& s, double p) {
    s.require_valid();
    if (!(p >= 0.0 && p < 1.0)) throw ArgumentError("quantile: p must lie in [0,1)");
    return quantile_pair(s, p, 1.0 - p);
}

struct SampleBatch {
    std::vector<double> values;
    std::uint64_t seed = 0;
    ModelSpec spec;
};

inline constexpr std::uint64_t kSampleStream = 0;
inline constexpr std::uint64_t kGenesisStream = 1;

inline SampleBatch sample(const ModelSpec& s, std::size_t n, std::uint64_t seed) {
    s.require_valid();
    SampleBatch out{{}, seed, s};
    out.values.reserve(n);
    Rng rng(seed, kSampleStream);
    for (std::size_t i = 0; i < n; ++i) {
        double u = rng.uniform_open();
        out.values.push_back(quantile_pair(s, u, 1.0 - u));
    }
    return out;
}

// Geometric on {1,2,...} with success probability p.
inline std::uint64_t geometric_draw(Rng& rng, double p) {
    if (p >= 1.0) return 1;
    double u = rng.uniform_open();
    return 1 + static_cast<std::uint64_t>(std::floor(std::log(u) / std::log1p(-p)));
}

// Minimum over theta_int blocks of the min (alpha <= 1) or max (alpha > 1) of a
// geometric number of Kw-G(a, b) variates.
inline SampleBatch simulate_genesis(int theta_int, double alpha, double a, double b,
                                    const Baseline& baseline, std::size_t n, std::uint64_t seed) {
    if (theta_int < 1) throw ArgumentError("simulate_genesis: theta must be a positive integer");
    if (!(alpha > 0.0)) throw ArgumentError("simulate_genesis: alpha must be > 0");
    ModelSpec kw = make_spec(Variant::KwG, {1.0, 1.0, a, b}, baseline);
    ModelSpec target{Variant::GMOKwG, {double(theta_int), alpha, a, b}, baseline};
    SampleBatch out{{}, seed, target};
    out.values.reserve(n);
    Rng rng(seed, kGenesisStream);
    const bool use_max = alpha > 1.0;
    const double pg = use_max ? 1.0 / alpha : alpha;
    for (std::size_t i = 0; i < n; ++i) {
        double best = INFINITY;
        for (int k = 0; k < theta_int; ++k) {
            std::uint64_t N = geometric_draw(rng, pg);
            double ext = use_max ? -INFINITY : INFINITY;
            for (std::uint64_t j = 0; j < N; ++j) {
                double u = rng.uniform_open();
                double x = quantile_pair(kw, u, 1.0 - u);
                ext = use_max ? std::max(ext, x) : std::min(ext, x);
            }
            best = std::min(best, ext);
        }
        out.values.push_back(best);
    }
    return out;
}

// Most specific variant consistent with parameters exactly equal to 1.
inline ModelSpec reduce(const ModelSpec& s) {
    const auto& f = s.family;
    const bool t1 = f.theta == 1.0, a1 = f.alpha == 1.0, ab1 = f.a == 1.0 && f.b == 1.0;
    ModelSpec r = s;
    if (t1 && a1 && ab1)
        r.variant = Variant::Baseline;
    else if (t1 && ab1)
        r.variant = Variant::MO;
    else if (ab1)
        r.variant = Variant::GMO;
    else if (t1 && a1)
        r.variant = Variant::KwG;
    else if (t1)
        r.variant = Variant::MOKwG;
    else
        r.variant = Variant::GMOKwG;
    return r;
}

// Kolmogorov-Smirnov distance of a sample against a cdf.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf&& F) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double c = F(xs[i]);
        d = std::max({d, (i + 1) / n - c, c - i / n});
    }
    return d;
}

}  // namespace gmokw
