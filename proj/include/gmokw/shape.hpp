#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "error.hpp"
#include "family.hpp"

namespace gmokw {

enum class ShapeMode { density, hazard };
enum class CriticalKind { maximum, minimum, inflexion };

inline std::string critical_kind_name(CriticalKind k) {
    switch (k) {
        case CriticalKind::maximum: return "maximum";
        case CriticalKind::minimum: return "minimum";
        case CriticalKind::inflexion: return "inflexion";
    }
    return "?";
}

struct CriticalPoint {
    double location = 0.0;
    CriticalKind kind = CriticalKind::inflexion;
    double discriminant = 0.0;
};

namespace detail {

// q = g G^{a-1} / (1 - G^a),  r = g G^{a-1} (1 - G^a)^{b-1} / D
struct ShapeTerms {
    double dlg;     // g'/g
    double gG;      // g / G
    double q;
    double r;
};

inline ShapeTerms shape_terms(const ModelSpec& s, double t) {
    const auto& f = s.family;
    auto P = family_parts(s, t);
    if (P.side != 0 || !(t > s.baseline.lower()) || !(t < s.baseline.upper()))
        throw DomainError("derivative of log density requested at a support endpoint or outside");
    ShapeTerms T;
    T.dlg = s.baseline.dlog_pdf(t);
    T.gG = std::exp(P.bv.logg - P.bv.logG);
    const double base = P.bv.logg + (f.a - 1.0) * P.bv.logG;
    T.q = std::exp(base - P.L1);
    T.r = std::exp(base + (f.b - 1.0) * P.L1 - P.logD);
    return T;
}

}  // namespace detail

inline double dlog_pdf(const ModelSpec& s, double t) {
    s.require_valid();
    const auto& f = s.family;
    auto T = detail::shape_terms(s, t);
    return T.dlg + (f.a - 1.0) * T.gG + f.a * (1.0 - f.b * f.theta) * T.q -
           (f.theta + 1.0) * f.alpha_bar() * f.a * f.b * T.r;
}

inline double dlog_hrf(const ModelSpec& s, double t) {
    s.require_valid();
    const auto& f = s.family;
    auto T = detail::shape_terms(s, t);
    return T.dlg + (f.a - 1.0) * T.gG + f.a * T.q - f.alpha_bar() * f.a * f.b * T.r;
}

namespace detail {

// Second derivatives of log f and log h, from analytic d^2 log g.
inline double d2log_analytic(const ModelSpec& s, double t, ShapeMode mode) {
    const auto& f = s.family;
    auto T = shape_terms(s, t);
    const double d2lg = s.baseline.d2log_pdf(t);
    const double gG = T.gG;
    // d/dt (g/G) = (g' G - g^2) / G^2 = (g/G)(g'/g - g/G)
    const double dgG = gG * (T.dlg - gG);
    const double dlogq = T.dlg + (f.a - 1.0) * gG + f.a * T.q;
    const double dq = T.q * dlogq;
    const double dlogP = T.dlg + (f.a - 1.0) * gG - (f.b - 1.0) * f.a * T.q;
    const double dr = T.r * (dlogP - f.alpha_bar() * f.a * f.b * T.r);
    if (mode == ShapeMode::density)
        return d2lg + (f.a - 1.0) * dgG + f.a * (1.0 - f.b * f.theta) * dq -
               (f.theta + 1.0) * f.alpha_bar() * f.a * f.b * dr;
    return d2lg + (f.a - 1.0) * dgG + f.a * dq - f.alpha_bar() * f.a * f.b * dr;
}

}  // namespace detail

// lambda(t) = d^2/dt^2 log f ; analytic for baselines that provide d^2 log g.
inline double lambda_t(const ModelSpec& s, double t) {
    s.require_valid();
    return detail::d2log_analytic(s, t, ShapeMode::density);
}

// gamma(t) = d^2/dt^2 log h.
inline double gamma_t(const ModelSpec& s, double t) {
    s.require_valid();
    return detail::d2log_analytic(s, t, ShapeMode::hazard);
}

inline double dlog_shape(const ModelSpec& s, double t, ShapeMode mode) {
    return mode == ShapeMode::density ? dlog_pdf(s, t) : dlog_hrf(s, t);
}

// Numeric second derivative by central differences of the analytic first derivative.
inline double d2log_numeric(const ModelSpec& s, double t, ShapeMode mode) {
    double h = 1e-5 * std::max(std::abs(t), 1e-3);
    const double lo = s.baseline.lower(), hi = s.baseline.upper();
    h = std::min({h, 0.5 * (t - lo), std::isfinite(hi) ? 0.5 * (hi - t) : h});
    return (dlog_shape(s, t + h, mode) - dlog_shape(s, t - h, mode)) / (2.0 * h);
}

inline std::vector<CriticalPoint> critical_points(const ModelSpec& s, ShapeMode mode,
                                                  int grid = 2048, double inflex_tol = 1e-8) {
    s.require_valid();
    std::vector<CriticalPoint> out;
    double lo = quantile(s, 1e-6), hi = quantile(s, 1.0 - 1e-6);
    if (!(hi > lo)) return out;
    const bool logspace = lo > 0.0;
    std::vector<double> ts(grid), ds(grid);
    for (int i = 0; i < grid; ++i) {
        double u = static_cast<double>(i) / (grid - 1);
        ts[i] = logspace ? std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)))
                         : lo + u * (hi - lo);
        ds[i] = dlog_shape(s, ts[i], mode);
    }
    for (int i = 0; i + 1 < grid; ++i) {
        double a = ts[i], b = ts[i + 1], fa = ds[i], fb = ds[i + 1];
        if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
        if (fa == 0.0) {
            if (i > 0 && ds[i - 1] * fb < 0.0) {
            } else {
                continue;
            }
        }
        if (!(fa * fb < 0.0) && fa != 0.0) continue;
        double x = a;
        if (fa != 0.0) {
            for (int it = 0; it < 200; ++it) {
                double m = a + 0.5 * (b - a);
                if (!(m > a && m < b)) break;
                double fm = dlog_shape(s, m, mode);
                if (fm == 0.0) {
                    a = b = m;
                    break;
                }
                if ((fm > 0.0) == (fa > 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            x = 0.5 * (a + b);
        }
        CriticalPoint cp;
        cp.location = x;
        cp.discriminant = d2log_numeric(s, x, mode);
        if (std::abs(cp.discriminant) <= inflex_tol)
            cp.kind = CriticalKind::inflexion;
        else
            cp.kind = cp.discriminant < 0.0 ? CriticalKind::maximum : CriticalKind::minimum;
        out.push_back(cp);
    }
    return out;
}

// Location of the highest density maximum (or the maximizing endpoint of the scan range).
inline double density_mode(const ModelSpec& s) {
    auto cps = critical_points(s, ShapeMode::density);
    double best = NAN, bv = -INFINITY;
    for (const auto& c : cps) {
        if (c.kind != CriticalKind::maximum) continue;
        double v = log_pdf(s, c.location);
        if (v > bv) {
            bv = v;
            best = c.location;
        }
    }
    return best;
}

enum class Endpoint { lower, upper };

struct AsymptoteForm {
    std::string quantity;  // "pdf", "hrf", "sf"
    std::function<double(double)> leading_form;
    double ratio_at_probe = NAN;
};

struct AsymptoteReport {
    Endpoint endpoint = Endpoint::lower;
    double probe = NAN;
    std::vector<AsymptoteForm> forms;
};

// Leading behaviour near a support endpoint; ratios exact/leading at the probe.
// Probe defaults to quantile(1e-6) at the lower end and quantile(1 - 1e-8) at the upper end.
inline AsymptoteReport asymptote(const ModelSpec& s, Endpoint ep, double probe_p = NAN) {
    s.require_valid();
    const auto f = s.family;
    const Baseline base = s.baseline;
    AsymptoteReport rep;
    rep.endpoint = ep;
    if (std::isnan(probe_p)) probe_p = ep == Endpoint::lower ? 1e-6 : 1.0 - 1e-8;
    double t = quantile_pair(s, probe_p, 1.0 - probe_p);
    // a probe quantile closer to a finite end than t can resolve rounds onto the end;
    // step inward to the nearest point where the tail mass is still positive
    const double inward = ep == Endpoint::lower ? INFINITY : -INFINITY;
    for (int i = 0; i < 4096; ++i) {
        const double tail = ep == Endpoint::lower ? cdf(s, t) : sf(s, t);
        if (tail > 0.0 && pdf(s, t) > 0.0 && s.baseline.in_support(t)) break;
        t = std::nextafter(t, inward);
    }
    rep.probe = t;
    const double lab = std::log(f.theta) + std::log(f.a) + std::log(f.b);
    if (ep == Endpoint::lower) {
        auto lead = [=](double x) {
            auto v = base.values(x);
            return std::exp(lab + v.logg + (f.a - 1.0) * v.logG - std::log(f.alpha));
        };
        rep.forms.push_back({"pdf", lead, pdf(s, t) / lead(t)});
        rep.forms.push_back({"hrf", lead, hrf(s, t) / lead(t)});
    } else {
        auto L1of = [=](const BaselineValues& v) { return log1m_pow(v, f.a); };
        auto lead_pdf = [=](double x) {
            auto v = base.values(x);
            return std::exp(lab + f.theta * std::log(f.alpha) + v.logg +
                            (f.b * f.theta - 1.0) * L1of(v));
        };
        auto lead_sf = [=](double x) {
            auto v = base.values(x);
            return std::exp(f.theta * std::log(f.alpha) + f.b * f.theta * L1of(v));
        };
        auto lead_hrf = [=](double x) {
            auto v = base.values(x);
            return std::exp(lab + v.logg + (f.a - 1.0) * v.logG - L1of(v));
        };
        rep.forms.push_back({"pdf", lead_pdf, pdf(s, t) / lead_pdf(t)});
        rep.forms.push_back({"sf", lead_sf, sf(s, t) / lead_sf(t)});
        rep.forms.push_back({"hrf", lead_hrf, hrf(s, t) / lead_hrf(t)});
    }
    return rep;
}

struct OrderingVerdict {
    bool inconclusive = false;
    std::string reason;
    bool lr_nonincreasing = true;  // f1/f2 nonincreasing
    bool sf_order = true;          // sf1 <= sf2
    bool hrf_order = true;         // hrf1 >= hrf2
    bool rhrf_order = true;        // rhrf1 <= rhrf2
    int points = 0;
    bool all() const { return !inconclusive && lr_nonincreasing && sf_order && hrf_order && rhrf_order; }
};

// Grid check of the likelihood-ratio ordering chain for alpha1 <= alpha2 with
// shared theta, a, b and baseline.
inline OrderingVerdict check_lr_order(ModelSpec s1, ModelSpec s2, int grid_size = 2000,
                                      double rel_tol = 1e-10) {
    s1.require_valid();
    s2.require_valid();
    OrderingVerdict v;
    const auto &f1 = s1.family, &f2 = s2.family;
    if (f1.theta != f2.theta || f1.a != f2.a || f1.b != f2.b ||
        s1.baseline.kind != s2.baseline.kind || s1.baseline.params != s2.baseline.params ||
        s1.baseline.hook != s2.baseline.hook) {
        v.inconclusive = true;
        v.reason = "specs differ in more than alpha";
        return v;
    }
    if (s1.family.alpha > s2.family.alpha) std::swap(s1, s2);
    const double lo = std::min(quantile(s1, 1e-6), quantile(s2, 1e-6));
    const double hi = std::max(quantile(s1, 1.0 - 1e-6), quantile(s2, 1.0 - 1e-6));
    const bool logspace = lo > 0.0;
    double prev_lr = INFINITY;
    for (int i = 0; i < grid_size; ++i) {
        double u = static_cast<double>(i) / (grid_size - 1);
        double t = logspace ? std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)))
                            : lo + u * (hi - lo);
        if (!(t > s1.baseline.lower() && t < s1.baseline.upper())) continue;
        ++v.points;
        const double lr = log_pdf(s1, t) - log_pdf(s2, t);
        const double slack = rel_tol * std::max(1.0, std::abs(lr));
        if (lr > prev_lr + slack) v.lr_nonincreasing = false;
        prev_lr = lr;
        if (log_sf(s1, t) > log_sf(s2, t) + rel_tol * std::max(1.0, std::abs(log_sf(s2, t))))
            v.sf_order = false;
        const double h1 = log_hrf(s1, t), h2 = log_hrf(s2, t);
        if (h1 < h2 - rel_tol * std::max(1.0, std::abs(h2))) v.hrf_order = false;
        const double r1 = log_rhrf(s1, t), r2 = log_rhrf(s2, t);
        if (r1 > r2 + rel_tol * std::max(1.0, std::abs(r2))) v.rhrf_order = false;
    }
    return v;
}

}  // namespace gmokw
