#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace maser {

// Tridiagonal operator acting on column vectors indexed by Fock level:
//
//   (A x)[n] = sub[n]*x[n-1] + diag[n]*x[n] + sup[n]*x[n+1]
//
// sub[0] and sup[size-1] are unused and kept at 0. Generators in this code
// base follow the column convention: probability flows A[target][source],
// so trace preservation means every column sums to zero.
struct Tridiag {
    std::vector<double> sub, diag, sup;

    Tridiag() = default;
    explicit Tridiag(std::size_t n) : sub(n, 0.0), diag(n, 0.0), sup(n, 0.0) {}

    std::size_t size() const { return diag.size(); }

    void apply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> apply(std::span<const double> x) const;

    Tridiag transposed() const;

    double max_abs_diag() const;
    std::vector<double> column_sums() const;
};

// Solves (A - shift*I) x = b by Gaussian elimination with partial pivoting
// (LAPACK gtsv-style, with one fill-in superdiagonal). Throws SolveError if a
// pivot underflows relative to the matrix scale.
std::vector<double> solve_tridiag(const Tridiag& a, std::span<const double> b,
                                  double shift = 0.0);

} // namespace maser
