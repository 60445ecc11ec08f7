#include "maser/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "maser/errors.hpp"
#include "maser/generators.hpp"
#include "maser/state.hpp"
#include "maser/stationary.hpp"
#include "maser/tridiag.hpp"

namespace maser {

namespace {

Tridiag tilted_generator(const GeneratorSet& g, std::array<double, 2> s) {
    const std::size_t n = g.l0.size();
    Tridiag a = g.l0;
    const double e1 = std::exp(s[0]);
    const double e2 = std::exp(s[1]);
    for (std::size_t i = 0; i < n; ++i) {
        a.sub[i] += e1 * g.j1.rate[i];
        a.diag[i] += e2 * g.j2.rate[i];
    }
    return a;
}

double rayleigh_quotient(const Tridiag& a, const std::vector<double>& left,
                         const std::vector<double>& right) {
    const std::size_t n = a.size();
    std::vector<double> ar(n);
    a.apply(right, ar);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += left[i] * ar[i];
        den += left[i] * right[i];
    }
    if (den == 0.0) throw NumericalError("tilted eigenvalue: degenerate pairing");
    return num / den;
}

void normalize_l1(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    if (s == 0.0) throw NumericalError("tilted eigenvalue: zero iterate");
    for (double& x : v) x /= s;
}

// Largest-real-part eigenvalue by two-sided Rayleigh-quotient iteration.
// The tilted generator is an irreducible Metzler matrix, so this eigenvalue
// is real and simple with positive left/right eigenvectors; the stationary
// state and the flat vector are good starting points for small |s|.
double perron_eigenvalue(const Tridiag& a, const std::vector<double>& right0) {
    const std::size_t n = a.size();
    const Tridiag at = a.transposed();

    std::vector<double> x = right0;
    std::vector<double> y(n, 1.0 / static_cast<double>(n));
    normalize_l1(x);

    double mu = rayleigh_quotient(a, y, x);
    const double scale = std::max(1.0, a.max_abs_diag());

    double prev_change = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 80; ++it) {
        std::vector<double> xn, yn;
        try {
            xn = solve_tridiag(a, x, mu);
            yn = solve_tridiag(at, y, mu);
        } catch (const SolveError&) {
            // Shift sits numerically on the eigenvalue; nudge and retry.
            mu += scale * 1e-13;
            continue;
        }
        normalize_l1(xn);
        normalize_l1(yn);
        x.swap(xn);
        y.swap(yn);

        const double mu_next = rayleigh_quotient(a, y, x);
        const double change = std::abs(mu_next - mu);
        mu = mu_next;
        if (change <= 1e-13 * scale && prev_change <= 1e-12 * scale) return mu;
        prev_change = change;
    }
    throw NumericalError("tilted eigenvalue: RQI did not converge");
}

} // namespace

double tilted_cgf_eigenvalue(const ModelParams& p, std::array<double, 2> s) {
    if (std::abs(s[0]) > 0.5 || std::abs(s[1]) > 0.5)
        throw DomainError("tilted_cgf_eigenvalue: |s| must be <= 0.5");
    const GeneratorSet g = build_generators(p);
    const Tridiag a = tilted_generator(g, s);
    return perron_eigenvalue(a, stationary_state(p).probs);
}

namespace {

struct RatesResult {
    std::array<double, 2> rates;
    double step_diff;
};

// grad_s lambda(0) at the given phi by Richardson-checked central
// differences; lambda(0) = 0 is not needed for first derivatives.
RatesResult rates_at(ModelParams p, double phi, double h) {
    p.phi = phi;
    auto lam = [&](double s1, double s2) {
        return tilted_cgf_eigenvalue(p, {s1, s2});
    };
    RatesResult out{};
    double max_diff = 0.0;
    for (int a = 0; a < 2; ++a) {
        auto central = [&](double step) {
            const double up = a == 0 ? lam(step, 0.0) : lam(0.0, step);
            const double dn = a == 0 ? lam(-step, 0.0) : lam(0.0, -step);
            return (up - dn) / (2.0 * step);
        };
        const double coarse = central(h);
        const double fine = central(0.5 * h);
        out.rates[a] = (4.0 * fine - coarse) / 3.0;
        max_diff = std::max(max_diff,
                            std::abs(fine - coarse) / std::max(std::abs(fine), 1e-300));
    }
    out.step_diff = max_diff;
    return out;
}

} // namespace

CountsGaussianLimit gaussian_limit(const ModelParams& p, double h_s, double h_phi) {
    p.validate();
    CountsGaussianLimit out;

    auto lam = [&](double s1, double s2) {
        return tilted_cgf_eigenvalue(p, {s1, s2});
    };

    const RatesResult r0 = rates_at(p, p.phi, h_s);
    out.rates = r0.rates;
    out.rates_step_diff = r0.step_diff;

    // Hessian of lambda at s = 0 (lambda(0) = 0 exactly on the truncated
    // space, but evaluate it anyway to absorb solver bias).
    auto hessian = [&](double h) {
        std::array<std::array<double, 2>, 2> v{};
        const double l00 = lam(0.0, 0.0);
        v[0][0] = (lam(h, 0.0) - 2.0 * l00 + lam(-h, 0.0)) / (h * h);
        v[1][1] = (lam(0.0, h) - 2.0 * l00 + lam(0.0, -h)) / (h * h);
        v[0][1] = v[1][0] =
            (lam(h, h) - lam(h, -h) - lam(-h, h) + lam(-h, -h)) / (4.0 * h * h);
        return v;
    };
    const auto vc = hessian(h_s);
    const auto vf = hessian(0.5 * h_s);
    double vdiff = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            out.v[a][b] = (4.0 * vf[a][b] - vc[a][b]) / 3.0;
            vdiff = std::max(vdiff, std::abs(vf[a][b] - vc[a][b]) /
                                        std::max(std::abs(vf[a][b]), 1e-300));
        }
    out.v_step_diff = vdiff;
    out.v[0][1] = out.v[1][0] = 0.5 * (out.v[0][1] + out.v[1][0]);

    // mu = d rates / d phi, Richardson-checked in the phi step.
    auto mu_at = [&](double hp) {
        const RatesResult up = rates_at(p, p.phi + hp, h_s);
        const RatesResult dn = rates_at(p, p.phi - hp, h_s);
        return std::array<double, 2>{(up.rates[0] - dn.rates[0]) / (2.0 * hp),
                                     (up.rates[1] - dn.rates[1]) / (2.0 * hp)};
    };
    const auto mc = mu_at(h_phi);
    const auto mf = mu_at(0.5 * h_phi);
    double mdiff = 0.0;
    for (int a = 0; a < 2; ++a) {
        out.mu[a] = (4.0 * mf[a] - mc[a]) / 3.0;
        mdiff = std::max(mdiff, std::abs(mf[a] - mc[a]) /
                                    std::max(std::abs(mf[a]), 1e-300));
    }
    out.mu_step_diff = mdiff;

    // Clamp v to positive semidefinite (2x2 spectral decomposition).
    const double tr = out.v[0][0] + out.v[1][1];
    const double det = out.v[0][0] * out.v[1][1] - out.v[0][1] * out.v[1][0];
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    const double lo_eig = tr / 2.0 - disc;
    if (lo_eig < -1e-10 * std::max(1.0, tr))
        out.psd_clamped = true; // genuine violation, beyond FD noise
    if (lo_eig < 0.0) {
        // Shift the spectrum up just enough; keeps the dominant direction.
        out.v[0][0] -= lo_eig;
        out.v[1][1] -= lo_eig;
        out.psd_clamped = true;
    }
    return out;
}

FisherCounts fisher_counts(const CountsGaussianLimit& limit) {
    FisherCounts out;
    const auto& v = limit.v;
    const auto& mu = limit.mu;
    out.i1 = v[0][0] > 0.0 ? mu[0] * mu[0] / v[0][0] : 0.0;
    out.i2 = v[1][1] > 0.0 ? mu[1] * mu[1] / v[1][1] : 0.0;

    const double det = v[0][0] * v[1][1] - v[0][1] * v[1][0];
    const double scale = std::max({std::abs(v[0][0]), std::abs(v[1][1]), 1e-300});
    if (det > 1e-12 * scale * scale) {
        // Closed form of the generalized Rayleigh maximum.
        const double a = v[1][1] * mu[0] - v[0][1] * mu[1];
        const double b = v[0][0] * mu[1] - v[1][0] * mu[0];
        out.i_star = (mu[0] * a + mu[1] * b) / det;
    } else {
        // Singular covariance: information is infinite along null directions
        // unless mu lies in the range of v.
        const double tr = v[0][0] + v[1][1];
        if (tr <= 0.0) {
            out.infinite_information = mu[0] != 0.0 || mu[1] != 0.0;
            out.i_star = 0.0;
        } else {
            // Range direction is the eigenvector of the nonzero eigenvalue.
            const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
            const double hi_eig = tr / 2.0 + disc;
            double ex = v[0][1], ey = hi_eig - v[0][0];
            const double norm = std::hypot(ex, ey);
            if (norm == 0.0) {
                ex = 1.0;
                ey = 0.0;
            } else {
                ex /= norm;
                ey /= norm;
            }
            const double along = mu[0] * ex + mu[1] * ey;
            const double ortho = std::abs(mu[0] * ey - mu[1] * ex);
            out.infinite_information = ortho > 1e-8 * std::max(1.0, std::abs(along));
            out.i_star = along * along / hi_eig;
        }
    }
    out.i_star = std::max(out.i_star, std::max(out.i1, out.i2) - 1e-12);
    return out;
}

double fisher_full_monitoring(const ModelParams& p) {
    return 4.0 * p.n_ex * stationary_state(p).mean_photon();
}

} // namespace maser
