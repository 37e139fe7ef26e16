#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "trapspec/bspline.hpp"
#include "trapspec/potentials.hpp"

namespace trapspec {

struct BasisSpec {
    double R_min = 0.0;
    double R_max = 0.0;  // 0 selects max(8 a_ho, 3 R_out(E_cut))
    int size = 400;      // number of radial functions N
    int order = 8;
    // Fraction of knots distributed by the local de Broglie wavelength; the rest
    // are uniform in R. 0 gives a uniform grid.
    double grading = 0.8;
    // Energy used for the local wavelength; NaN selects 10 omega (0 without trap).
    double E_cut = std::numeric_limits<double>::quiet_NaN();
    // Extra points where the potential is not smooth.
    std::vector<double> breakpoints;

    void validate() const;
};

// A potential curve together with the trap system it is solved in; the knot
// layout is adapted to all targets of a basis.
struct BasisTarget {
    const PotentialCurve* curve;
    TrapSystem sys;
};

// Radial B-spline basis with u(R_min) = u(R_max) = 0 and its quadrature rule.
class RadialBasis {
public:
    static constexpr int quad_points = 16;

    RadialBasis(BSplineBasis splines);

    const BSplineBasis& splines() const { return splines_; }
    int size() const { return splines_.size() - 2; }
    int order() const { return splines_.order(); }
    double R_min() const { return splines_.left(); }
    double R_max() const { return splines_.right(); }

    std::size_t node_count() const { return nodes_.size(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    // Radial-function index of the first nonzero spline at node q (may be -1).
    int first(std::size_t q) const { return first_[q]; }
    const double* values(std::size_t q) const { return &vals_[q * order()]; }
    const double* derivs(std::size_t q) const { return &ders_[q * order()]; }

    double evaluate(const std::vector<double>& coef, double R) const;
    std::vector<double> at_nodes(const std::vector<double>& coef) const;
    bool same_as(const RadialBasis& other) const;

private:
    BSplineBasis splines_;
    std::vector<double> nodes_, weights_, vals_, ders_;
    std::vector<int> first_;
};

std::shared_ptr<const RadialBasis> make_basis(const BasisSpec& spec, const std::vector<BasisTarget>& targets);
// Box edge used when spec.R_max is 0.
double default_R_max(const PotentialCurve& curve, const TrapSystem& sys, double E_cut);

enum class StateLabel { bound, trap_induced, continuum };
const char* label_name(StateLabel l);

struct VibrationalState {
    int v = 0;
    double E = 0.0;
    int J = 0;
    StateLabel label = StateLabel::bound;
    int nodes = 0;
    std::shared_ptr<const RadialBasis> basis;
    std::vector<double> coef;

    double operator()(double R) const { return basis->evaluate(coef, R); }
    std::vector<double> at_nodes() const { return basis->at_nodes(coef); }
};

// The `count` lowest eigenpairs. For count < N the eigenvectors come from
// banded inverse iteration; count = N uses a full divide-and-conquer solve.
std::vector<VibrationalState> solve_radial(const PotentialCurve& curve, const TrapSystem& sys,
                                           const BasisSpec& spec, int count);
std::vector<VibrationalState> solve_radial(const PotentialCurve& curve, const TrapSystem& sys,
                                           std::shared_ptr<const RadialBasis> basis, int count);
// Eigenvalues only.
std::vector<double> solve_energies(const PotentialCurve& curve, const TrapSystem& sys,
                                   std::shared_ptr<const RadialBasis> basis, int count);

// Sign changes of u between lobes whose peak exceeds tol * max|u|; smaller
// lobes are discretization noise in the forbidden tails.
int count_nodes(const VibrationalState& state, double tol = 1e-9);

struct Classification {
    std::vector<StateLabel> labels;
    std::optional<int> first_trap_induced;
};
Classification classify_states(const std::vector<VibrationalState>& states, const TrapSystem& sys);

// Largest R in [R_lo, R_hi] with effective_potential(R) = E.
double outer_turning_point(const PotentialCurve& curve, const TrapSystem& sys, double E,
                           double R_lo, double R_hi);

}  // namespace trapspec
