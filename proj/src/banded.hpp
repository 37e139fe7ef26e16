#pragma once

// Symmetric banded matrices (LAPACK upper band storage, column-major) and the
// generalized eigensolvers used by the radial solver.

#include <vector>

namespace trapspec::detail {

struct SymBand {
    int n = 0;
    int kd = 0;
    std::vector<double> ab;

    SymBand(int n_, int kd_) : n(n_), kd(kd_), ab(static_cast<std::size_t>(kd_ + 1) * n_, 0.0) {}
    int ld() const { return kd + 1; }
    // Requires i <= j <= i + kd.
    double& upper(int i, int j) { return ab[static_cast<std::size_t>(kd + i - j) + static_cast<std::size_t>(j) * ld()]; }
    double get(int i, int j) const;
    void multiply(const double* x, double* y) const;
};

struct EigenPairs {
    std::vector<double> values;
    std::vector<double> vectors;  // n x m column-major, S-orthonormal
    int m = 0;
};

// Lowest `count` eigenpairs of H c = E S c (all of them for count >= n).
EigenPairs generalized_eigen(const SymBand& H, const SymBand& S, int count, bool want_vectors);

// Eigenvectors for the eigenvalues already in `pairs` by shifted inverse
// iteration and Rayleigh-quotient polishing on banded LU factors. Componentwise
// stable, so states whose amplitude spans many decades (trap states next to a
// deep well) stay accurate. Refines the eigenvalues in place.
void inverse_iteration(const SymBand& H, const SymBand& S, EigenPairs& pairs);

}  // namespace trapspec::detail
