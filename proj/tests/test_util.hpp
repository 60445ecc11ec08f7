#pragma once

// Test-only numerical oracles, deliberately independent of the library's
// uniformization / banded-solve code paths: dense Taylor matrix
// exponential with scaling and squaring, dense Gaussian elimination with
// partial pivoting and one step of iterative refinement, and a quadratic
// brute-force Kolmogorov-Smirnov statistic.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "maser/tridiag.hpp"

namespace testutil {

struct Dense {
    std::size_t n = 0;
    std::vector<double> a; // row major

    explicit Dense(std::size_t n_) : n(n_), a(n_ * n_, 0.0) {}
    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

inline Dense dense_from_tridiag(const maser::Tridiag& t) {
    Dense d(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        d.at(i, i) = t.diag[i];
        if (i > 0) d.at(i, i - 1) = t.sub[i];
        if (i + 1 < t.size()) d.at(i, i + 1) = t.sup[i];
    }
    return d;
}

inline std::vector<double> matvec(const Dense& m, std::span<const double> x) {
    std::vector<double> y(m.n, 0.0);
    for (std::size_t i = 0; i < m.n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.n; ++j) s += m.at(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

inline Dense matmul(const Dense& a, const Dense& b) {
    Dense c(a.n);
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t k = 0; k < a.n; ++k) {
            const double v = a.at(i, k);
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < a.n; ++j) c.at(i, j) += v * b.at(k, j);
        }
    return c;
}

// Dense e^{tau A} by Taylor series with scaling and squaring.
inline Dense dense_expm(const Dense& a, double tau) {
    const std::size_t n = a.n;
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(a.at(i, j));
        norm = std::max(norm, row);
    }
    int squarings = 0;
    double scaled = norm * std::abs(tau);
    while (scaled > 0.5) {
        scaled /= 2.0;
        ++squarings;
    }
    const double h = tau / std::ldexp(1.0, squarings);

    Dense result(n), term(n);
    for (std::size_t i = 0; i < n; ++i) {
        result.at(i, i) = 1.0;
        term.at(i, i) = 1.0;
    }
    for (int k = 1; k <= 40; ++k) {
        term = matmul(term, a);
        double maxterm = 0.0;
        for (std::size_t i = 0; i < n * n; ++i) {
            term.a[i] *= h / k;
            result.a[i] += term.a[i];
            maxterm = std::max(maxterm, std::abs(term.a[i]));
        }
        if (maxterm < 1e-20) break;
    }
    for (int s = 0; s < squarings; ++s) result = matmul(result, result);
    return result;
}

// Solves A x = b by GEPP plus one iterative-refinement pass.
inline std::vector<double> dense_solve(const Dense& a_in, std::vector<double> b) {
    const std::size_t n = a_in.n;
    auto factor_solve = [&](std::vector<double> rhs) {
        Dense m = a_in;
        std::vector<double> y = std::move(rhs);
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t p = col;
            for (std::size_t r = col + 1; r < n; ++r)
                if (std::abs(m.at(r, col)) > std::abs(m.at(p, col))) p = r;
            if (p != col) {
                for (std::size_t j = 0; j < n; ++j)
                    std::swap(m.at(col, j), m.at(p, j));
                std::swap(y[col], y[p]);
            }
            const double d = m.at(col, col);
            for (std::size_t r = col + 1; r < n; ++r) {
                const double f = m.at(r, col) / d;
                if (f == 0.0) continue;
                for (std::size_t j = col; j < n; ++j) m.at(r, j) -= f * m.at(col, j);
                y[r] -= f * y[col];
            }
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = y[i];
            for (std::size_t j = i + 1; j < n; ++j) s -= m.at(i, j) * y[j];
            y[i] = s / m.at(i, i);
        }
        return y;
    };

    std::vector<double> x = factor_solve(b);
    // One refinement pass with a compensated residual.
    std::vector<double> r(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        long double s = b[i];
        for (std::size_t j = 0; j < n; ++j)
            s -= static_cast<long double>(a_in.at(i, j)) * x[j];
        r[i] = static_cast<double>(s);
    }
    const std::vector<double> dx = factor_solve(r);
    for (std::size_t i = 0; i < n; ++i) x[i] += dx[i];
    return x;
}

// Stationary distribution as the null vector of the generator, by replacing
// the last equation with the normalization constraint.
inline std::vector<double> dense_nullspace_distribution(const maser::Tridiag& gen) {
    const std::size_t n = gen.size();
    Dense a = dense_from_tridiag(gen);
    std::vector<double> b(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) a.at(n - 1, j) = 1.0;
    b[n - 1] = 1.0;
    return dense_solve(a, b);
}

// O(n*m) Kolmogorov-Smirnov oracle.
inline double brute_force_ks(std::span<const double> x, std::span<const double> y) {
    std::vector<double> support(x.begin(), x.end());
    support.insert(support.end(), y.begin(), y.end());
    double d = 0.0;
    for (double v : support) {
        double fx = 0.0, fy = 0.0;
        for (double xi : x)
            if (xi <= v) fx += 1.0;
        for (double yi : y)
            if (yi <= v) fy += 1.0;
        d = std::max(d, std::abs(fx / static_cast<double>(x.size()) -
                                 fy / static_cast<double>(y.size())));
    }
    return d;
}

} // namespace testutil
