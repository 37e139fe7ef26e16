#pragma once

#include <vector>

#include "trapspec/error.hpp"
#include "trapspec/potentials.hpp"
#include "trapspec/radial_solver.hpp"

namespace trapspec {

struct ScatteringPoint {
    double R_max;
    double E0;  // lowest positive box energy, hartree
    double a;   // R_max - pi / k
};

struct ScatteringResult {
    double a_sc = 0.0;
    double k = 0.0;  // probe wavenumber at the largest box
    std::vector<ScatteringPoint> history;
};

class ConvergenceError : public NumericError {
public:
    ConvergenceError(const std::string& what, std::vector<ScatteringPoint> history)
        : NumericError(what), history_(std::move(history)) {}
    const std::vector<ScatteringPoint>& history() const { return history_; }

private:
    std::vector<ScatteringPoint> history_;
};

struct ScatteringOptions {
    double tol = 0.005;  // relative, against max(|a|, 1 bohr)
    int size = 400;      // basis size for the first box; grows with the box length
    int order = 8;
    double grading = 0.8;
};

// Box-method a_sc over an increasing R_max schedule, with Richardson
// extrapolation in 1/R^2 and 1/R^3 over consecutive triples. Throws
// ConvergenceError carrying the history when no triple is self-consistent.
ScatteringResult scattering_length(const PotentialCurve& curve, double mu,
                                   const std::vector<double>& schedule,
                                   const ScatteringOptions& opt = {});
// Schedule {L, 2L, 4L, 8L, 16L} with L from the interaction range.
std::vector<double> default_schedule(const PotentialCurve& curve, double mu);

// Length scale of the interaction: beta_n = (2 mu C_n)^(1/(n-2)) for the
// leading tail, otherwise the short-range extent.
double interaction_length(const PotentialCurve& curve, double mu);

struct MassTuning {
    double mu;
    double a_sc;
};

// Reduced mass near mu0 (within mu0 * (1 +- rel_span)) whose a_sc equals
// target_a, on the branch closest to mu0. The box schedule is fixed at mu0 so
// a_sc(mu) is smooth between poles.
MassTuning tune_mass(const PotentialCurve& curve, double mu0, double target_a, double rel_span = 0.1,
                     const ScatteringOptions& opt = {});

// s-wave phase shift in (-pi/2, pi/2] at collision energy E > 0.
double phase_shift(const PotentialCurve& curve, double mu, double E);
// -tan(delta)/k; ResonanceError when cos(delta) vanishes.
double energy_dependent_a(const PotentialCurve& curve, double mu, double E);

}  // namespace trapspec
