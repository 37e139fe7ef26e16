#pragma once

#include <vector>

namespace trapspec {

// B-splines of order k (degree k-1) on a clamped knot vector.
class BSplineBasis {
public:
    BSplineBasis(std::vector<double> knots, int order);

    int order() const { return k_; }
    int size() const { return static_cast<int>(t_.size()) - k_; }
    const std::vector<double>& knots() const { return t_; }
    double left() const { return t_[k_ - 1]; }
    double right() const { return t_[t_.size() - k_]; }

    // Knot span index i with t[i] <= x < t[i+1] (last non-empty span at the right end).
    int span(double x) const;
    // Values (and optionally first derivatives) of the k splines that are nonzero
    // on span i; the first of them has index i - k + 1.
    void evaluate(int span, double x, double* values, double* derivs) const;

private:
    std::vector<double> t_;
    int k_;
};

// Clamped knot vector from strictly increasing breakpoints; interior breakpoints
// listed in `multiple` get multiplicity `mult`.
std::vector<double> clamped_knots(const std::vector<double>& breaks, int order,
                                  const std::vector<double>& multiple = {}, int mult = 1);

}  // namespace trapspec
