#include "trapspec/bspline.hpp"

#include <algorithm>
#include <cmath>

#include "trapspec/error.hpp"

namespace trapspec {

BSplineBasis::BSplineBasis(std::vector<double> knots, int order) : t_(std::move(knots)), k_(order) {
    if (k_ < 2) throw ConfigError("B-spline order must be >= 2");
    if (static_cast<int>(t_.size()) < 2 * k_) throw ConfigError("too few knots");
    for (std::size_t i = 1; i < t_.size(); ++i)
        if (t_[i] < t_[i - 1]) throw ConfigError("knots must be non-decreasing");
    if (!(right() > left())) throw ConfigError("empty B-spline domain");
}

int BSplineBasis::span(double x) const {
    int n = size();
    if (x >= t_[n]) {
        int i = n - 1;
        while (i > k_ - 1 && t_[i] == t_[i + 1]) --i;
        return i;
    }
    if (x <= t_[k_ - 1]) {
        int i = k_ - 1;
        while (t_[i + 1] == t_[i]) ++i;
        return i;
    }
    auto it = std::upper_bound(t_.begin() + k_ - 1, t_.begin() + n + 1, x);
    return static_cast<int>(it - t_.begin()) - 1;
}

void BSplineBasis::evaluate(int i, double x, double* N, double* dN) const {
    // Cox-de Boor triangle; ndu holds values of all orders for the derivative.
    const int p = k_ - 1;
    double ndu[16][16];
    double left[16], right[16];
    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = x - t_[i + 1 - j];
        right[j] = t_[i + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            double temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }
    for (int r = 0; r <= p; ++r) N[r] = ndu[r][p];
    if (!dN) return;
    for (int r = 0; r <= p; ++r) {
        double d = 0.0;
        if (r >= 1) d += ndu[r - 1][p - 1] / ndu[p][r - 1];
        if (r <= p - 1) d -= ndu[r][p - 1] / ndu[p][r];
        dN[r] = p * d;
    }
}

std::vector<double> clamped_knots(const std::vector<double>& breaks, int order,
                                  const std::vector<double>& multiple, int mult) {
    if (breaks.size() < 2) throw ConfigError("need at least two breakpoints");
    if (order > 16) throw ConfigError("B-spline order above 16 is not supported");
    std::vector<double> t(order - 1, breaks.front());
    for (std::size_t i = 0; i < breaks.size(); ++i) {
        int m = 1;
        if (i > 0 && i + 1 < breaks.size() &&
            std::find(multiple.begin(), multiple.end(), breaks[i]) != multiple.end())
            m = std::min(mult, order - 1);
        t.insert(t.end(), m, breaks[i]);
    }
    t.insert(t.end(), order - 1, breaks.back());
    return t;
}

}  // namespace trapspec
