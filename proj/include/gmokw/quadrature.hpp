#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "error.hpp"

namespace gmokw {

namespace detail {

struct GaussLegendre64 {
    std::array<double, 64> x{};
    std::array<double, 64> w{};

    GaussLegendre64() {
        constexpr int n = 64;
        for (int i = 0; i < n / 2; ++i) {
            double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p1 = 1.0, p2 = 0.0;
                for (int j = 1; j <= n; ++j) {
                    double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
                }
                pp = n * (z * p1 - p2) / (z * z - 1.0);
                double dz = p1 / pp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            x[i] = -z;
            x[n - 1 - i] = z;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
        }
    }
};

inline const GaussLegendre64& gl64() {
    static const GaussLegendre64 rule;
    return rule;
}

template <class F>
double gl_panel(F&& f, double lo, double hi) {
    const auto& r = gl64();
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double s = 0.0;
    for (int i = 0; i < 64; ++i) s += r.w[i] * f(c + h * r.x[i]);
    return s * h;
}

inline double split_point(double lo, double hi) {
    if (lo > 0.0 && hi > 4.0 * lo) return std::sqrt(lo * hi);
    return 0.5 * (lo + hi);
}

}  // namespace detail

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
    // integrate_over_quantiles only: points where dyadic panels became narrower than
    // min_rel_width * |t|, so the mass beyond them was not integrated (NaN if never
    // reached). Below that width rounding of t perturbs a density with an endpoint
    // singularity more than the requested tolerance.
    double lo_cut = NAN, hi_cut = NAN;
};

// Globally adaptive 64-point Gauss-Legendre on [lo, hi].
template <class F>
QuadResult integrate_adaptive(F&& f, double lo, double hi, double rel_tol, double abs_tol = 0.0,
                              int max_panels = 4000) {
    struct Panel {
        double lo, hi, value, error;
        bool operator<(const Panel& o) const { return error < o.error; }
    };
    QuadResult out;
    if (lo == hi) {
        out.converged = true;
        return out;
    }
    auto make = [&](double a, double b) {
        double m = detail::split_point(a, b);
        double whole = detail::gl_panel(f, a, b);
        double halves = detail::gl_panel(f, a, m) + detail::gl_panel(f, m, b);
        return Panel{a, b, halves, std::abs(whole - halves)};
    };
    std::priority_queue<Panel> heap;
    Panel first = make(lo, hi);
    double total = first.value, err = first.error;
    heap.push(first);
    int count = 1;
    while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (count >= max_panels || !std::isfinite(total)) {
            out.value = total;
            out.error = err;
            return out;
        }
        Panel p = heap.top();
        heap.pop();
        double m = detail::split_point(p.lo, p.hi);
        if (!(m > p.lo && m < p.hi)) {
            // cannot split further; accept
            out.value = total;
            out.error = err;
            out.converged = err <= std::max(abs_tol, 1e3 * rel_tol * std::abs(total));
            return out;
        }
        Panel l = make(p.lo, m), r = make(m, p.hi);
        total += l.value + r.value - p.value;
        err += l.error + r.error - p.error;
        heap.push(l);
        heap.push(r);
        count += 2;
    }
    // recompute the sum to shed accumulated update rounding
    double s = 0.0, e = 0.0;
    while (!heap.empty()) {
        s += heap.top().value;
        e += heap.top().error;
        heap.pop();
    }
    out.value = s;
    out.error = e;
    out.converged = true;
    return out;
}

template <class F>
double integrate(F&& f, double lo, double hi, double rel_tol, double abs_tol = 0.0) {
    auto r = integrate_adaptive(f, lo, hi, rel_tol, abs_tol);
    if (!r.converged) throw QuadratureError("adaptive quadrature did not converge", r.value, r.error);
    return r.value;
}

namespace detail {

// Sum panel contributions toward one endpoint until a geometric tail bound
// drops below tol * |total|. panel(k) integrates the k-th dyadic panel.
template <class P>
bool sum_dyadic(P&& panel, double tol, double& acc, double& bound, double scale_hint,
                int max_panels) {
    double prev = 0.0;
    int quiet = 0;
    for (int k = 1; k <= max_panels; ++k) {
        double v = panel(k);
        if (!std::isfinite(v)) {
            bound = INFINITY;
            return false;
        }
        acc += v;
        double mag = std::max(std::abs(acc), scale_hint);
        double av = std::abs(v);
        double tail = INFINITY;
        if (av == 0.0) {
            tail = 0.0;
        } else if (prev > 0.0 && av < prev) {
            double r = av / prev;
            tail = av * r / (1.0 - r);
        }
        bound = tail;
        if (tail <= tol * mag) {
            if (++quiet >= 2) return true;
        } else {
            quiet = 0;
        }
        prev = av;
    }
    return false;
}

}  // namespace detail

// Integral over (0,1) of h(p, q) with q = 1 - p passed exactly. Dyadic panels
// [2^-(k+1), 2^-k] toward each end isolate endpoint singularities.
template <class H>
QuadResult integrate_unit(H&& h, double tol, int max_panels = 1000) {
    QuadResult out;
    const double panel_tol = std::max(tol * 0.1, 1e-15);
    double left = 0.0, right = 0.0, bl = 0.0, br = 0.0;
    auto lp = [&](int k) {
        double a = std::ldexp(1.0, -k - 1), b = std::ldexp(1.0, -k);
        auto r = integrate_adaptive([&](double p) { return h(p, 1.0 - p); }, a, b, panel_tol);
        return r.value;
    };
    auto rp = [&](int k) {
        double a = std::ldexp(1.0, -k - 1), b = std::ldexp(1.0, -k);
        auto r = integrate_adaptive([&](double q) { return h(1.0 - q, q); }, a, b, panel_tol);
        return r.value;
    };
    // seed magnitude from the central panels so an all-zero side stops at once
    double hint = std::abs(lp(1)) + std::abs(rp(1));
    bool okl = detail::sum_dyadic(lp, tol, left, bl, hint * tol, max_panels);
    bool okr = detail::sum_dyadic(rp, tol, right, br, hint * tol, max_panels);
    out.value = left + right;
    out.error = bl + br;
    out.converged = okl && okr;
    return out;
}

template <class H>
double integrate_unit_or_throw(H&& h, double tol, const char* what = "unit-interval integral") {
    auto r = integrate_unit(h, tol);
    if (!r.converged) throw QuadratureError(what, r.value, r.error);
    return r.value;
}

// int pdf(t) dt over the range mapped from probabilities (p_lo, 1) by a
// quantile function Q(p, q); panels end at quantiles of dyadic probabilities.
template <class Pdf, class Q>
QuadResult integrate_over_quantiles(Pdf&& pdf, Q&& quant, double tol, double min_rel_width = 1e-6,
                                    int max_panels = 1000) {
    QuadResult out;
    const double panel_tol = std::max(tol * 0.01, 1e-15);
    const double rel = std::max(min_rel_width, 4.0 * std::numeric_limits<double>::epsilon());
    auto unresolved = [&](double a, double b) {
        return !(b - a > rel * std::max(std::abs(a), std::abs(b)));
    };
    auto seg = [&](double a, double b) { return integrate_adaptive(pdf, a, b, panel_tol).value; };
    auto lp = [&](int k) {
        if (!std::isnan(out.lo_cut)) return 0.0;
        const double a = quant(std::ldexp(1.0, -k - 1), 1.0 - std::ldexp(1.0, -k - 1));
        const double b = quant(std::ldexp(1.0, -k), 1.0 - std::ldexp(1.0, -k));
        if (unresolved(a, b)) {
            out.lo_cut = b;
            return 0.0;
        }
        return seg(a, b);
    };
    auto rp = [&](int k) {
        if (!std::isnan(out.hi_cut)) return 0.0;
        const double qa = std::ldexp(1.0, -k), qb = std::ldexp(1.0, -k - 1);
        const double a = quant(1.0 - qa, qa), b = quant(1.0 - qb, qb);
        if (unresolved(a, b)) {
            out.hi_cut = a;
            return 0.0;
        }
        return seg(a, b);
    };
    double left = 0.0, right = 0.0, bl = 0.0, br = 0.0;
    bool okl = detail::sum_dyadic(lp, tol, left, bl, 0.25 * tol, max_panels);
    bool okr = detail::sum_dyadic(rp, tol, right, br, 0.25 * tol, max_panels);
    out.value = left + right;
    out.error = bl + br;
    out.converged = okl && okr;
    return out;
}

}  // namespace gmokw
