#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace gmokw {

enum class BaselineKind {
    Exponential,
    Lomax,
    Weibull,
    Frechet,
    Gompertz,
    ModifiedWeibull,
    ExponentiatedPareto,
    Power,
    ExtendedWeibull,
};

inline constexpr BaselineKind kShippedBaselines[] = {
    BaselineKind::Exponential,     BaselineKind::Lomax,
    BaselineKind::Weibull,         BaselineKind::Frechet,
    BaselineKind::Gompertz,        BaselineKind::ModifiedWeibull,
    BaselineKind::ExponentiatedPareto, BaselineKind::Power,
};

// G(t) = 1 - exp(-delta E(t)) for a user supplied nondecreasing E with E(lower) = 0.
struct GurvichHook {
    std::function<double(double)> E;
    std::function<double(double)> e;
    std::function<double(double)> de;  // optional derivative of e
    double delta_g = 1.0;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    std::string label = "extended-weibull";
};

inline GurvichHook modified_weibull_hook(double sigma, double beta, double gamma) {
    GurvichHook h;
    h.E = [=](double t) { return sigma * t + beta * std::pow(t, gamma); };
    h.e = [=](double t) { return sigma + (beta > 0.0 ? beta * gamma * std::pow(t, gamma - 1.0) : 0.0); };
    h.de = [=](double t) {
        return beta > 0.0 ? beta * gamma * (gamma - 1.0) * std::pow(t, gamma - 2.0) : 0.0;
    };
    h.delta_g = 1.0;
    h.label = "modified-weibull-hook";
    return h;
}

struct Verdict {
    bool ok = true;
    std::string message;
    explicit operator bool() const { return ok; }
};

struct BaselineValues {
    double g, G, Gbar;
    double logg, logG, logGbar;
};

// log(-log G), kept finite when 1 - G underflows.
inline double log_neg_logG(double logG, double logGbar) {
    if (logGbar < -11.5) {
        const double Gbar = std::exp(logGbar);
        return logGbar + std::log1p(Gbar / 2.0 + Gbar * Gbar / 3.0);
    }
    return std::log(-logG);
}

// log(1 - G^a) over the whole support, including G^a within rounding of 1.
inline double log1m_pow(double logG, double logGbar, double a) {
    const double u = a * logG;
    if (u < -0.6931471805599453) return std::log1p(-std::exp(u));
    if (u < -1e-5) return std::log(-std::expm1(u));
    return std::log(a) + log_neg_logG(logG, logGbar) + std::log1p(u / 2.0 + u * u / 6.0);
}

inline double log1m_pow(const BaselineValues& v, double a) { return log1m_pow(v.logG, v.logGbar, a); }

class Baseline {
public:
    BaselineKind kind = BaselineKind::Exponential;
    std::vector<double> params{1.0};
    std::shared_ptr<const GurvichHook> hook;

    Baseline() = default;
    Baseline(BaselineKind k, std::vector<double> p) : kind(k), params(std::move(p)) {}

    static Baseline exponential(double lambda) { return {BaselineKind::Exponential, {lambda}}; }
    static Baseline lomax(double beta, double delta) { return {BaselineKind::Lomax, {beta, delta}}; }
    static Baseline weibull(double lambda, double beta) { return {BaselineKind::Weibull, {lambda, beta}}; }
    static Baseline frechet(double lambda, double delta) { return {BaselineKind::Frechet, {lambda, delta}}; }
    static Baseline gompertz(double beta, double lambda) { return {BaselineKind::Gompertz, {beta, lambda}}; }
    static Baseline modified_weibull(double sigma, double beta, double gamma) {
        return {BaselineKind::ModifiedWeibull, {sigma, beta, gamma}};
    }
    static Baseline exp_pareto(double k, double gamma, double scale) {
        return {BaselineKind::ExponentiatedPareto, {k, gamma, scale}};
    }
    static Baseline power(double k, double scale) { return {BaselineKind::Power, {k, scale}}; }
    static Baseline extended_weibull(GurvichHook h) {
        Baseline b(BaselineKind::ExtendedWeibull, {h.delta_g});
        b.hook = std::make_shared<const GurvichHook>(std::move(h));
        return b;
    }

    std::string name() const { return kind_name(kind); }

    static std::string kind_name(BaselineKind k) {
        switch (k) {
            case BaselineKind::Exponential: return "exponential";
            case BaselineKind::Lomax: return "lomax";
            case BaselineKind::Weibull: return "weibull";
            case BaselineKind::Frechet: return "frechet";
            case BaselineKind::Gompertz: return "gompertz";
            case BaselineKind::ModifiedWeibull: return "modified-weibull";
            case BaselineKind::ExponentiatedPareto: return "exp-pareto";
            case BaselineKind::Power: return "power";
            case BaselineKind::ExtendedWeibull: return "extended-weibull";
        }
        return "?";
    }

    static BaselineKind kind_from_name(const std::string& s) {
        for (auto k : kShippedBaselines)
            if (kind_name(k) == s) return k;
        if (s == "mw") return BaselineKind::ModifiedWeibull;
        if (s == "ep" || s == "exponentiated-pareto") return BaselineKind::ExponentiatedPareto;
        if (s == "exp") return BaselineKind::Exponential;
        throw ArgumentError("unknown baseline '" + s + "'");
    }

    static std::vector<std::string> kind_param_names(BaselineKind k) {
        switch (k) {
            case BaselineKind::Exponential: return {"lambda"};
            case BaselineKind::Lomax: return {"beta", "delta"};
            case BaselineKind::Weibull: return {"lambda", "beta"};
            case BaselineKind::Frechet: return {"lambda", "delta"};
            case BaselineKind::Gompertz: return {"beta", "lambda"};
            case BaselineKind::ModifiedWeibull: return {"sigma", "beta", "gamma"};
            case BaselineKind::ExponentiatedPareto: return {"k", "gamma", "scale"};
            case BaselineKind::Power: return {"k", "scale"};
            case BaselineKind::ExtendedWeibull: return {"delta"};
        }
        return {};
    }

    static std::vector<double> default_params(BaselineKind k) {
        return std::vector<double>(kind_param_names(k).size(), 1.0);
    }

    std::vector<std::string> param_names() const { return kind_param_names(kind); }

    Baseline with_params(std::vector<double> p) const {
        Baseline b = *this;
        b.params = std::move(p);
        return b;
    }

    double lower() const {
        switch (kind) {
            case BaselineKind::ExponentiatedPareto: return params[2];
            case BaselineKind::ExtendedWeibull: return hook->lower;
            default: return 0.0;
        }
    }

    double upper() const {
        switch (kind) {
            case BaselineKind::Power: return 1.0 / params[1];
            case BaselineKind::ExtendedWeibull: return hook->upper;
            default: return std::numeric_limits<double>::infinity();
        }
    }

    bool in_support(double t) const { return t > lower() && t < upper(); }

    Verdict validate() const {
        static const char* greek[][3] = {
            {"λ", "", ""},       {"β", "δ", ""},      {"λ", "β", ""},
            {"λ", "δ", ""},      {"β", "λ", ""},      {"σ", "β", "γ"},
            {"k", "γ", "scale"}, {"k", "scale", ""},  {"δ", "", ""},
        };
        auto names = param_names();
        if (params.size() != names.size())
            return {false, name() + " expects " + std::to_string(names.size()) + " parameters"};
        const auto* g = greek[static_cast<int>(kind)];
        for (std::size_t i = 0; i < params.size(); ++i)
            if (!std::isfinite(params[i])) return {false, std::string(g[i]) + " must be finite"};
        if (kind == BaselineKind::ModifiedWeibull) {
            if (params[0] < 0.0) return {false, "σ must be >= 0"};
            if (params[1] < 0.0) return {false, "β must be >= 0"};
            if (!(params[0] + params[1] > 0.0)) return {false, "σ+β must be > 0"};
            if (!(params[2] > 0.0)) return {false, "γ must be > 0"};
            return {};
        }
        for (std::size_t i = 0; i < params.size(); ++i)
            if (!(params[i] > 0.0)) return {false, std::string(g[i]) + " must be > 0"};
        if (kind == BaselineKind::ExtendedWeibull) {
            if (!hook || !hook->E || !hook->e) return {false, "hook must supply E and e"};
            if (!(hook->upper > hook->lower)) return {false, "hook support is empty"};
            if (std::abs(hook->E(hook->lower)) > 1e-12) return {false, "E(lower) must be 0"};
            double hi = std::isfinite(hook->upper) ? hook->upper : hook->lower + 10.0;
            double prev = hook->E(hook->lower);
            for (int i = 1; i < 200; ++i) {
                double t = hook->lower + (hi - hook->lower) * i / 200.0;
                double E = hook->E(t);
                if (E < prev) return {false, "E must be nondecreasing"};
                if (hook->e(t) < 0.0) return {false, "e must be >= 0"};
                prev = E;
            }
        }
        return {};
    }

    void require_valid() const {
        auto v = validate();
        if (!v) throw ParameterError(name() + ": " + v.message);
    }

    // Values at t, t assumed within [lower, upper]; no validation.
    BaselineValues values(double t) const {
        BaselineValues v{};
        auto from_hazard = [&](double H, double logg) {
            // H = -log Gbar
            v.logGbar = -H;
            v.Gbar = std::exp(-H);
            v.G = -std::expm1(-H);
            v.logG = v.G < 0.5 ? std::log(v.G) : std::log1p(-v.Gbar);
            v.logg = logg;
            v.g = std::exp(logg);
        };
        const auto& p = params;
        switch (kind) {
            case BaselineKind::Exponential: {
                double l = p[0];
                from_hazard(l * t, std::log(l) - l * t);
                break;
            }
            case BaselineKind::Lomax: {
                double b = p[0], d = p[1];
                double L = std::log1p(t / d);
                from_hazard(b * L, std::log(b / d) - (b + 1.0) * L);
                break;
            }
            case BaselineKind::Weibull: {
                double l = p[0], b = p[1];
                double z = l * std::pow(t, b);
                from_hazard(z, std::log(l * b) + (b - 1.0) * std::log(t) - z);
                break;
            }
            case BaselineKind::Gompertz: {
                double b = p[0], l = p[1];
                double z = (b / l) * std::expm1(l * t);
                from_hazard(z, std::log(b) + l * t - z);
                break;
            }
            case BaselineKind::ModifiedWeibull: {
                double s = p[0], b = p[1], gm = p[2];
                double z = s * t + (b > 0.0 ? b * std::pow(t, gm) : 0.0);
                double rate = s + (b > 0.0 ? b * gm * std::pow(t, gm - 1.0) : 0.0);
                from_hazard(z, std::log(rate) - z);
                break;
            }
            case BaselineKind::ExtendedWeibull: {
                double d = p[0];
                double E = hook->E(t);
                from_hazard(d * E, std::log(d) + std::log(hook->e(t)) - d * E);
                break;
            }
            case BaselineKind::Frechet: {
                double l = p[0], d = p[1];
                if (t <= 0.0) {
                    v = {0.0, 0.0, 1.0, -INFINITY, -INFINITY, 0.0};
                    break;
                }
                double z = std::pow(d / t, l);
                v.logG = -z;
                v.G = std::exp(-z);
                v.Gbar = -std::expm1(-z);
                v.logGbar = v.Gbar < 0.5 ? std::log(v.Gbar) : std::log1p(-v.G);
                v.logg = std::log(l) + std::log(z) - std::log(t) - z;
                v.g = std::exp(v.logg);
                break;
            }
            case BaselineKind::ExponentiatedPareto: {
                double k = p[0], gm = p[1], s = p[2];
                double x = std::pow(s / t, k);
                double l1 = std::log1p(-x);
                v.logG = gm * l1;
                v.G = std::exp(v.logG);
                v.Gbar = -std::expm1(v.logG);
                v.logGbar = v.Gbar < 0.5 ? std::log(v.Gbar) : std::log1p(-v.G);
                v.logg = std::log(gm * k) + std::log(x) - std::log(t) + (gm - 1.0) * l1;
                v.g = std::exp(v.logg);
                break;
            }
            case BaselineKind::Power: {
                double k = p[0], s = p[1];
                double ls = std::log(s * t);
                v.logG = k * ls;
                v.G = std::pow(s * t, k);  // exact for k = 1
                v.Gbar = -std::expm1(v.logG);
                v.logGbar = v.Gbar < 0.5 ? std::log(v.Gbar) : std::log1p(-v.G);
                v.logg = std::log(k) + std::log(s) + (k - 1.0) * ls;
                v.g = std::exp(v.logg);
                break;
            }
        }
        return v;
    }

    // g'(t)/g(t)
    double dlog_pdf(double t) const {
        const auto& p = params;
        switch (kind) {
            case BaselineKind::Exponential: return -p[0];
            case BaselineKind::Lomax: return -(p[0] + 1.0) / (p[1] + t);
            case BaselineKind::Weibull: {
                double l = p[0], b = p[1];
                return (b - 1.0) / t - l * b * std::pow(t, b - 1.0);
            }
            case BaselineKind::Frechet: {
                double l = p[0], d = p[1];
                return -(l + 1.0) / t + l * std::pow(d / t, l) / t;
            }
            case BaselineKind::Gompertz: return p[1] - p[0] * std::exp(p[1] * t);
            case BaselineKind::ModifiedWeibull: {
                double s = p[0], b = p[1], gm = p[2];
                if (b == 0.0) return -s;
                double r = s + b * gm * std::pow(t, gm - 1.0);
                return b * gm * (gm - 1.0) * std::pow(t, gm - 2.0) / r - r;
            }
            case BaselineKind::ExponentiatedPareto: {
                double k = p[0], gm = p[1], s = p[2];
                double x = std::pow(s / t, k);
                return -(k + 1.0) / t + (gm - 1.0) * k * x / (t * (1.0 - x));
            }
            case BaselineKind::Power: return (p[0] - 1.0) / t;
            case BaselineKind::ExtendedWeibull: {
                double e = hook->e(t);
                double de;
                if (hook->de) {
                    de = hook->de(t);
                } else {
                    double h = 1e-6 * std::max(1.0, std::abs(t));
                    de = (hook->e(t + h) - hook->e(t - h)) / (2.0 * h);
                }
                return -p[0] * e + de / e;
            }
        }
        return NAN;
    }

    bool has_d2log_pdf() const {
        switch (kind) {
            case BaselineKind::Exponential:
            case BaselineKind::Lomax:
            case BaselineKind::Weibull:
            case BaselineKind::Frechet:
            case BaselineKind::Gompertz:
            case BaselineKind::Power: return true;
            default: return false;
        }
    }

    // d^2/dt^2 log g(t)
    double d2log_pdf(double t) const {
        const auto& p = params;
        switch (kind) {
            case BaselineKind::Exponential: return 0.0;
            case BaselineKind::Lomax: return (p[0] + 1.0) / ((p[1] + t) * (p[1] + t));
            case BaselineKind::Weibull: {
                double l = p[0], b = p[1];
                return -(b - 1.0) / (t * t) - l * b * (b - 1.0) * std::pow(t, b - 2.0);
            }
            case BaselineKind::Frechet: {
                double l = p[0], d = p[1];
                return (l + 1.0) / (t * t) - l * (l + 1.0) * std::pow(d / t, l) / (t * t);
            }
            case BaselineKind::Gompertz: return -p[0] * p[1] * std::exp(p[1] * t);
            case BaselineKind::Power: return -(p[0] - 1.0) / (t * t);
            default: throw ArgumentError(name() + ": no analytic second derivative of log g");
        }
    }

    // Quantile from the pair (G, 1-G), both supplied so either tail stays accurate.
    double quantile_pair(double G, double Gbar) const {
        if (G <= 0.0) return lower();
        if (Gbar <= 0.0) return upper();
        const auto& p = params;
        const double H = G < 0.5 ? -std::log1p(-G) : -std::log(Gbar);
        const double logG = G < 0.5 ? std::log(G) : std::log1p(-Gbar);
        switch (kind) {
            case BaselineKind::Exponential: return H / p[0];
            case BaselineKind::Lomax: return p[1] * std::expm1(H / p[0]);
            case BaselineKind::Weibull: return std::pow(H / p[0], 1.0 / p[1]);
            case BaselineKind::Gompertz: return std::log1p(p[1] * H / p[0]) / p[1];
            case BaselineKind::Frechet: return p[1] * std::pow(-logG, -1.0 / p[0]);
            case BaselineKind::ExponentiatedPareto:
                return p[2] * std::pow(-std::expm1(logG / p[1]), -1.0 / p[0]);
            case BaselineKind::Power: return std::exp(logG / p[0]) / p[1];
            case BaselineKind::ModifiedWeibull:
            case BaselineKind::ExtendedWeibull: return bisect_quantile(G, Gbar);
        }
        return NAN;
    }

    double quantile(double p) const {
        if (!(p >= 0.0 && p < 1.0)) throw ArgumentError("quantile: p must lie in [0,1)");
        return quantile_pair(p, 1.0 - p);
    }

    // Derivatives of log G(t), log(1 - G(t)) and log g(t) with respect to each
    // baseline parameter, in closed form for every kind.
    void param_grad(double t, std::vector<double>& dlogG, std::vector<double>& dlogGbar,
                    std::vector<double>& dlogg) const {
        const std::size_t n = params.size();
        dlogG.assign(n, 0.0);
        dlogGbar.assign(n, 0.0);
        dlogg.assign(n, 0.0);
        const auto& p = params;
        const BaselineValues v = values(t);
        // hazard-type kinds supply d log Gbar = -dH; lower-type kinds supply d log G
        bool hazard_type = true;
        switch (kind) {
            case BaselineKind::Exponential:
                dlogGbar[0] = -t;
                dlogg[0] = 1.0 / p[0] - t;
                break;
            case BaselineKind::Lomax: {
                const double b = p[0], d = p[1];
                const double L = std::log1p(t / d), q = t / (d * (d + t));
                dlogGbar[0] = -L;
                dlogGbar[1] = b * q;
                dlogg[0] = 1.0 / b - L;
                dlogg[1] = -1.0 / d + (b + 1.0) * q;
                break;
            }
            case BaselineKind::Weibull: {
                const double l = p[0], b = p[1];
                const double tb = std::pow(t, b), lt = std::log(t);
                dlogGbar[0] = -tb;
                dlogGbar[1] = -l * tb * lt;
                dlogg[0] = 1.0 / l - tb;
                dlogg[1] = 1.0 / b + lt - l * tb * lt;
                break;
            }
            case BaselineKind::Gompertz: {
                const double b = p[0], l = p[1];
                const double em = std::expm1(l * t);
                const double H = (b / l) * em;
                const double dHl = -H / l + (b / l) * t * std::exp(l * t);
                dlogGbar[0] = -H / b;
                dlogGbar[1] = -dHl;
                dlogg[0] = 1.0 / b - H / b;
                dlogg[1] = t - dHl;
                break;
            }
            case BaselineKind::ModifiedWeibull: {
                const double sg = p[0], b = p[1], gm = p[2];
                const double tg = std::pow(t, gm), lt = std::log(t);
                const double rate = sg + b * gm * tg / t;
                dlogGbar[0] = -t;
                dlogGbar[1] = -tg;
                dlogGbar[2] = -b * tg * lt;
                dlogg[0] = 1.0 / rate - t;
                dlogg[1] = gm * tg / t / rate - tg;
                dlogg[2] = b * tg / t * (1.0 + gm * lt) / rate - b * tg * lt;
                break;
            }
            case BaselineKind::ExtendedWeibull: {
                const double E = hook->E(t);
                dlogGbar[0] = -E;
                dlogg[0] = 1.0 / p[0] - E;
                break;
            }
            case BaselineKind::Frechet: {
                hazard_type = false;
                const double l = p[0], d = p[1];
                const double ld = std::log(d / t), z = std::pow(d / t, l);
                dlogG[0] = -z * ld;
                dlogG[1] = -l * z / d;
                dlogg[0] = 1.0 / l + ld - z * ld;
                dlogg[1] = l / d - l * z / d;
                break;
            }
            case BaselineKind::ExponentiatedPareto: {
                hazard_type = false;
                const double k = p[0], gm = p[1], sc = p[2];
                const double x = std::pow(sc / t, k), ls = std::log(sc / t);
                const double l1 = std::log1p(-x);
                const double omx = -std::expm1(k * ls);
                const double dl1k = -x * ls / omx, dl1s = -k * x / (sc * omx);
                dlogG[0] = gm * dl1k;
                dlogG[1] = l1;
                dlogG[2] = gm * dl1s;
                dlogg[0] = 1.0 / k + ls + (gm - 1.0) * dl1k;
                dlogg[1] = 1.0 / gm + l1;
                dlogg[2] = k / sc + (gm - 1.0) * dl1s;
                break;
            }
            case BaselineKind::Power: {
                hazard_type = false;
                const double k = p[0], sc = p[1];
                const double ls = std::log(sc * t);
                dlogG[0] = ls;
                dlogG[1] = k / sc;
                dlogg[0] = 1.0 / k + ls;
                dlogg[1] = k / sc;
                break;
            }
        }
        // d log G = -(Gbar / G) d log Gbar and conversely
        for (std::size_t j = 0; j < n; ++j) {
            if (hazard_type)
                dlogG[j] = -dlogGbar[j] * std::exp(v.logGbar - v.logG);
            else
                dlogGbar[j] = -dlogG[j] * std::exp(v.logG - v.logGbar);
        }
    }

private:
    double bisect_quantile(double G, double Gbar) const {
        const double lo0 = lower();
        const bool use_upper_tail = G > 0.5;
        // true when F(t) has reached the target
        auto reached = [&](double t) {
            BaselineValues v = values(t);
            return use_upper_tail ? v.Gbar <= Gbar : v.G >= G;
        };
        double lo = lo0, hi;
        if (std::isfinite(upper())) {
            hi = upper();
        } else {
            double step = 1.0;
            hi = lo0 + step;
            int guard = 0;
            while (!reached(hi)) {
                lo = hi;
                step *= 2.0;
                hi = lo0 + step;
                if (++guard > 2000) throw NumericalError("quantile bracket failed");
            }
        }
        for (int it = 0; it < 2000; ++it) {
            double mid = lo + 0.5 * (hi - lo);
            if (!(mid > lo && mid < hi)) break;
            if (reached(mid))
                hi = mid;
            else
                lo = mid;
        }
        return hi;
    }
};

inline std::pair<double, double> eval_baseline(const Baseline& m, double t) {
    m.require_valid();
    if (!m.in_support(t))
        throw DomainError(m.name() + ": t=" + std::to_string(t) + " outside support");
    auto v = m.values(t);
    return {v.g, v.G};
}

inline double invert_baseline(const Baseline& m, double p) {
    m.require_valid();
    if (!(p >= 0.0 && p < 1.0)) throw ArgumentError("invert_baseline: p must lie in [0,1)");
    return m.quantile_pair(p, 1.0 - p);
}

inline Verdict validate_params(const Baseline& m) { return m.validate(); }

}  // namespace gmokw
