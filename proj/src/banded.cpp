#include "banded.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include <lapacke.h>

#include "trapspec/error.hpp"

namespace trapspec::detail {

double SymBand::get(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (j - i > kd) return 0.0;
    return ab[static_cast<std::size_t>(kd + i - j) + static_cast<std::size_t>(j) * ld()];
}

void SymBand::multiply(const double* x, double* y) const {
    std::fill(y, y + n, 0.0);
    for (int j = 0; j < n; ++j) {
        const double* col = &ab[static_cast<std::size_t>(j) * ld()];
        for (int i = std::max(0, j - kd); i < j; ++i) {
            double a = col[kd + i - j];
            y[i] += a * x[j];
            y[j] += a * x[i];
        }
        y[j] += col[kd] * x[j];
    }
}

namespace {

// Banded LU of (H - sigma S) in LAPACK general band storage.
class ShiftedLU {
public:
    ShiftedLU(const SymBand& H, const SymBand& S)
        : H_(H), S_(S), n_(H.n), kd_(H.kd), ld_(3 * H.kd + 1),
          lu_(static_cast<std::size_t>(ld_) * n_), ipiv_(n_) {}

    bool factor(double sigma) {
        std::fill(lu_.begin(), lu_.end(), 0.0);
        for (int j = 0; j < n_; ++j)
            for (int i = std::max(0, j - kd_); i <= std::min(n_ - 1, j + kd_); ++i)
                lu_[static_cast<std::size_t>(2 * kd_ + i - j) + static_cast<std::size_t>(j) * ld_] =
                    H_.get(i, j) - sigma * S_.get(i, j);
        lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kd_, kd_, lu_.data(), ld_, ipiv_.data());
        return info == 0;
    }

    // Shifted factorization, nudging sigma off an exactly singular pivot.
    bool factor_near(double sigma) {
        if (factor(sigma)) return true;
        double scale = std::max(std::abs(sigma), 1e-300);
        for (int bump = 1; bump < 8; ++bump)
            if (factor(sigma + scale * 1e-13 * bump)) return true;
        return false;
    }

    bool solve(double* y) {
        return LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, kd_, kd_, 1, lu_.data(), ld_, ipiv_.data(), y, n_) == 0;
    }

private:
    const SymBand& H_;
    const SymBand& S_;
    int n_, kd_, ld_;
    std::vector<double> lu_;
    std::vector<lapack_int> ipiv_;
};

double s_norm(const SymBand& S, const double* x, std::vector<double>& work) {
    S.multiply(x, work.data());
    double s = 0.0;
    for (int i = 0; i < S.n; ++i) s += x[i] * work[i];
    return std::sqrt(std::max(s, 0.0));
}

double rayleigh(const SymBand& H, const SymBand& S, const double* x, std::vector<double>& work) {
    H.multiply(x, work.data());
    double num = 0.0;
    for (int i = 0; i < H.n; ++i) num += x[i] * work[i];
    S.multiply(x, work.data());
    double den = 0.0;
    for (int i = 0; i < H.n; ++i) den += x[i] * work[i];
    return num / den;
}

// One inverse-iteration sweep: x <- (H - sigma S)^-1 S x, S-orthogonalized
// against `prev` (columns of length n) and S-normalized.
bool inverse_step(ShiftedLU& lu, const SymBand& S, double* x, const double* prev, int nprev,
                  std::vector<double>& y, std::vector<double>& work) {
    const int n = S.n;
    S.multiply(x, y.data());
    if (!lu.solve(y.data())) return false;
    for (int pass = 0; pass < 2 && nprev > 0; ++pass) {
        S.multiply(y.data(), work.data());
        for (int j = 0; j < nprev; ++j) {
            const double* p = prev + static_cast<std::size_t>(j) * n;
            double c = 0.0;
            for (int i = 0; i < n; ++i) c += p[i] * work[i];
            for (int i = 0; i < n; ++i) y[i] -= c * p[i];
        }
    }
    double nrm = s_norm(S, y.data(), work);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) return false;
    for (int i = 0; i < n; ++i) x[i] = y[i] / nrm;
    return true;
}

}  // namespace

EigenPairs generalized_eigen(const SymBand& H, const SymBand& S, int count, bool want_vectors) {
    const int n = H.n;
    if (S.n != n || S.kd > H.kd) throw NumericError("banded matrices do not match");
    std::vector<double> a = H.ab, b = S.ab;
    EigenPairs out;
    lapack_int info;
    if (count >= n) {
        char jobz = want_vectors ? 'V' : 'N';
        out.values.resize(n);
        if (want_vectors) out.vectors.resize(static_cast<std::size_t>(n) * n);
        info = LAPACKE_dsbgvd(LAPACK_COL_MAJOR, jobz, 'U', n, H.kd, S.kd, a.data(), H.ld(), b.data(),
                              S.ld(), out.values.data(), want_vectors ? out.vectors.data() : nullptr, n);
        out.m = n;
    } else {
        std::vector<double> q(1);
        std::vector<lapack_int> ifail(n);
        lapack_int m = 0;
        out.values.resize(n);
        double dummy = 0.0;
        info = LAPACKE_dsbgvx(LAPACK_COL_MAJOR, 'N', 'I', 'U', n, H.kd, S.kd, a.data(), H.ld(), b.data(),
                              S.ld(), q.data(), 1, 0.0, 0.0, 1, count, 0.0, &m, out.values.data(), &dummy, 1,
                              ifail.data());
        out.m = m;
        out.values.resize(m);
    }
    if (info > n)
        throw ConfigError("overlap matrix is not positive definite (LAPACK info " + std::to_string(info) + ")");
    if (info != 0)
        throw NumericError("banded eigensolver failed (LAPACK info " + std::to_string(info) + ")");
    if (count < n && want_vectors) inverse_iteration(H, S, out);
    return out;
}

void inverse_iteration(const SymBand& H, const SymBand& S, EigenPairs& pairs) {
    const int n = H.n, m = pairs.m;
    pairs.vectors.assign(static_cast<std::size_t>(n) * m, 0.0);
    ShiftedLU lu(H, S);
    std::vector<double> y(n), work(n);
    std::uint64_t state = 0x9E3779B97F4A7C15ull;
    for (int k = 0; k < m; ++k) {
        double* x = pairs.vectors.data() + static_cast<std::size_t>(k) * n;
        for (int i = 0; i < n; ++i) {
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            x[i] = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
        }
        const double* prev = pairs.vectors.data();
        double sigma = pairs.values[k];
        bool ok = lu.factor_near(sigma);
        for (int it = 0; ok && it < 3; ++it) ok = inverse_step(lu, S, x, prev, k, y, work);
        for (int rqi = 0; ok && rqi < 2; ++rqi) {
            sigma = rayleigh(H, S, x, work);
            ok = lu.factor_near(sigma) && inverse_step(lu, S, x, prev, k, y, work);
        }
        if (!ok) throw NumericError("inverse iteration failed for eigenpair " + std::to_string(k));
        pairs.values[k] = rayleigh(H, S, x, work);
    }
}

}  // namespace trapspec::detail
