#pragma once

#include <array>
#include <cmath>
#include <limits>

namespace gmokw {

struct DiffResult {
    double value = NAN;
    double error = INFINITY;
};

// Ridders' extrapolated central difference: a Neville tableau over shrinking
// steps h0, h0/1.4, ...; returns the entry with the smallest error estimate.
template <class F>
DiffResult ridders_derivative(F&& f, double x, double h0, int ntab = 10) {
    constexpr double con = 1.4, con2 = con * con, safe = 2.0;
    constexpr int kMax = 16;
    ntab = std::min(ntab, kMax);
    std::array<std::array<double, kMax>, kMax> a{};
    DiffResult out;
    double h = h0;
    a[0][0] = (f(x + h) - f(x - h)) / (2.0 * h);
    out.value = a[0][0];
    for (int i = 1; i < ntab; ++i) {
        h /= con;
        a[0][i] = (f(x + h) - f(x - h)) / (2.0 * h);
        double fac = con2;
        for (int j = 1; j <= i; ++j) {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= con2;
            const double err = std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
            if (err <= out.error) {
                out.error = err;
                out.value = a[j][i];
            }
        }
        if (std::abs(a[i][i] - a[i - 1][i - 1]) >= safe * out.error) break;
    }
    return out;
}

}  // namespace gmokw
