#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace gmokw {

struct NelderMeadOptions {
    int max_iter = 20000;
    double f_tol = 1e-10;
    double x_tol = 1e-8;
    double initial_step = 0.5;
    int restarts = 6;
    std::vector<double> lower;  // optional box; empty = unbounded
    std::vector<double> upper;
};

struct NelderMeadResult {
    std::vector<double> x;
    double fx = INFINITY;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

// Nelder-Mead minimizer; trial points are clamped into the box when one is given.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0, const NelderMeadOptions& opt = {}) {
    const std::size_t n = x0.size();
    NelderMeadResult res;
    auto clamp = [&](std::vector<double>& x) {
        if (opt.lower.empty()) return;
        for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], opt.lower[i], opt.upper[i]);
    };
    auto eval = [&](const std::vector<double>& x) {
        ++res.evaluations;
        double v = f(x);
        return std::isnan(v) ? INFINITY : v;
    };
    clamp(x0);
    if (n == 0) {
        res.x = x0;
        res.fx = eval(x0);
        res.converged = true;
        return res;
    }
    std::vector<double> best = x0;
    double fbest = eval(x0);
    int total_iter = 0;
    for (int round = 0; round <= opt.restarts; ++round) {
        std::vector<std::vector<double>> X(n + 1, best);
        std::vector<double> F(n + 1);
        F[0] = fbest;
        for (std::size_t i = 0; i < n; ++i) {
            X[i + 1][i] += opt.initial_step;
            clamp(X[i + 1]);
            if (X[i + 1][i] == best[i]) {
                X[i + 1][i] -= opt.initial_step;
                clamp(X[i + 1]);
            }
            F[i + 1] = eval(X[i + 1]);
        }
        std::vector<std::size_t> idx(n + 1);
        bool conv = false;
        for (int it = 0; it < opt.max_iter; ++it, ++total_iter) {
            std::iota(idx.begin(), idx.end(), 0);
            std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return F[a] < F[b]; });
            const auto ib = idx[0], iw = idx[n], isw = idx[n - 1];
            double xspread = 0.0;
            for (std::size_t k = 1; k <= n; ++k)
                for (std::size_t i = 0; i < n; ++i)
                    xspread = std::max(xspread, std::abs(X[idx[k]][i] - X[ib][i]));
            if (std::abs(F[iw] - F[ib]) <= opt.f_tol && xspread <= opt.x_tol) {
                conv = true;
                break;
            }
            std::vector<double> c(n, 0.0);
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t i = 0; i < n; ++i) c[i] += X[idx[k]][i] / n;
            auto along = [&](double coef) {
                std::vector<double> y(n);
                for (std::size_t i = 0; i < n; ++i) y[i] = c[i] + coef * (X[iw][i] - c[i]);
                clamp(y);
                return y;
            };
            auto xr = along(-1.0);
            double fr = eval(xr);
            if (fr < F[ib]) {
                auto xe = along(-2.0);
                double fe = eval(xe);
                if (fe < fr) {
                    X[iw] = xe;
                    F[iw] = fe;
                } else {
                    X[iw] = xr;
                    F[iw] = fr;
                }
                continue;
            }
            if (fr < F[isw]) {
                X[iw] = xr;
                F[iw] = fr;
                continue;
            }
            const bool outside = fr < F[iw];
            auto xc = along(outside ? -0.5 : 0.5);
            double fc = eval(xc);
            if (fc < (outside ? fr : F[iw])) {
                X[iw] = xc;
                F[iw] = fc;
                continue;
            }
            for (std::size_t k = 1; k <= n; ++k) {
                auto& y = X[idx[k]];
                for (std::size_t i = 0; i < n; ++i) y[i] = X[ib][i] + 0.5 * (y[i] - X[ib][i]);
                F[idx[k]] = eval(y);
            }
        }
        std::size_t ib = std::min_element(F.begin(), F.end()) - F.begin();
        const double improvement = fbest - F[ib];
        if (F[ib] <= fbest) {
            best = X[ib];
            fbest = F[ib];
        }
        res.converged = conv;
        if (round > 0 && conv && improvement <= opt.f_tol) break;
    }
    res.x = best;
    res.fx = fbest;
    res.iterations = total_iter;
    return res;
}

}  // namespace gmokw
