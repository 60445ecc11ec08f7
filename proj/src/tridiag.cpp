#include "maser/tridiag.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "maser/errors.hpp"

namespace maser {

void Tridiag::apply(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = size();
    assert(x.size() == n && y.size() == n);
    if (n == 1) {
        y[0] = diag[0] * x[0];
        return;
    }
    y[0] = diag[0] * x[0] + sup[0] * x[1];
    for (std::size_t i = 1; i + 1 < n; ++i)
        y[i] = sub[i] * x[i - 1] + diag[i] * x[i] + sup[i] * x[i + 1];
    y[n - 1] = sub[n - 1] * x[n - 2] + diag[n - 1] * x[n - 1];
}

std::vector<double> Tridiag::apply(std::span<const double> x) const {
    std::vector<double> y(size());
    apply(x, y);
    return y;
}

Tridiag Tridiag::transposed() const {
    const std::size_t n = size();
    Tridiag t(n);
    t.diag = diag;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        t.sub[i + 1] = sup[i];
        t.sup[i] = sub[i + 1];
    }
    return t;
}

double Tridiag::max_abs_diag() const {
    double m = 0.0;
    for (double d : diag) m = std::max(m, std::abs(d));
    return m;
}

std::vector<double> Tridiag::column_sums() const {
    const std::size_t n = size();
    std::vector<double> s(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        s[j] = diag[j];
        if (j + 1 < n) s[j] += sub[j + 1]; // flow j -> j+1
        if (j > 0) s[j] += sup[j - 1];     // flow j -> j-1
    }
    return s;
}

std::vector<double> solve_tridiag(const Tridiag& a, std::span<const double> b,
                                  double shift) {
    const std::size_t n = a.size();
    if (b.size() != n) throw SolveError("solve_tridiag: size mismatch");
    if (n == 0) return {};

    // Working bands: dl (col i-1), d (col i), du (col i+1) and the fill-in
    // second superdiagonal du2 created by row swaps.
    std::vector<double> dl(a.sub.begin(), a.sub.end());
    std::vector<double> d(n), du(a.sup.begin(), a.sup.end()), du2(n, 0.0);
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) d[i] = a.diag[i] - shift;

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        scale = std::max({scale, std::abs(dl[i]), std::abs(d[i]), std::abs(du[i])});
    const double tiny = scale * 1e-280 + 1e-280;

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i + 1])) {
            if (std::abs(d[i]) < tiny)
                throw SolveError("solve_tridiag: vanishing pivot");
            const double fact = dl[i + 1] / d[i];
            dl[i + 1] = 0.0;
            d[i + 1] -= fact * du[i];
            x[i + 1] -= fact * x[i];
        } else {
            // Swap rows i and i+1; |fact| <= 1 afterwards.
            const double fact = d[i] / dl[i + 1];
            const double row_d = dl[i + 1];
            const double row_du = d[i + 1];
            const double row_du2 = (i + 2 < n) ? du[i + 1] : 0.0;

            d[i + 1] = du[i] - fact * row_du;
            du[i + 1] = (i + 2 < n) ? -fact * row_du2 : 0.0;
            d[i] = row_d;
            du[i] = row_du;
            du2[i] = row_du2;
            dl[i + 1] = 0.0;

            std::swap(x[i], x[i + 1]);
            x[i + 1] -= fact * x[i];
        }
    }
    if (std::abs(d[n - 1]) < tiny)
        throw SolveError("solve_tridiag: vanishing pivot in last row");

    x[n - 1] /= d[n - 1];
    if (n >= 2) {
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
        for (std::size_t k = n - 2; k-- > 0;)
            x[k] = (x[k] - du[k] * x[k + 1] - du2[k] * x[k + 2]) / d[k];
    }
    return x;
}

} // namespace maser
