#pragma once

#include <array>

#include "maser/params.hpp"

namespace maser {

// Gaussian limit of the rescaled atom counts (Lambda_1, Lambda_2)/sqrt(t):
// rates are the asymptotic count rates (m1, m2), mu their phi-derivative
// and v the asymptotic covariance matrix.
struct CountsGaussianLimit {
    std::array<double, 2> rates{};
    std::array<double, 2> mu{};
    std::array<std::array<double, 2>, 2> v{};
    // Richardson agreement diagnostics (relative, h vs h/2).
    double rates_step_diff = 0.0;
    double v_step_diff = 0.0;
    double mu_step_diff = 0.0;
    bool psd_clamped = false;
};

// Eigenvalue of maximal real part of the tilted generator
// L(s) = L0 + e^{s1} J1 + e^{s2} J2 on the truncated space; lambda(0) = 0.
// This is the scaled cumulant generating function of the atom counts.
// Requires |s_a| <= 0.5; throws NumericalError on non-convergence.
double tilted_cgf_eigenvalue(const ModelParams& p, std::array<double, 2> s);

// rates = grad_s lambda(0), v = Hessian_s lambda(0), mu = d rates / d phi,
// all by Richardson-checked central differences on the eigenvalue.
CountsGaussianLimit gaussian_limit(const ModelParams& p,
                                   double h_s = 1e-4, double h_phi = 1e-4);

struct FisherCounts {
    double i1 = 0.0;
    double i2 = 0.0;
    double i_star = 0.0;
    bool infinite_information = false; // v singular with mu outside its range
};

// I1 = mu1^2/V11, I2 = mu2^2/V22 and the optimum over linear combinations
// I* = mu^T V^{-1} mu (computed on the non-null subspace when V is
// singular).
FisherCounts fisher_counts(const CountsGaussianLimit& limit);

// Benchmark information of full environment monitoring:
// 4 * n_ex * mean stationary photon number.
double fisher_full_monitoring(const ModelParams& p);

} // namespace maser
