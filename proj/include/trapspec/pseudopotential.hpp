#pragma once

#include <vector>

#include "trapspec/potentials.hpp"

namespace trapspec {

// Contact interaction with scattering length a (bohr) in the trap of sys.
struct PseudoModel {
    double a = 0.0;
    TrapSystem sys;

    double xi() const;  // a / a_ho, may be +-inf
};

struct PseudoState {
    int n_t = 0;
    double x = 1.5;           // E / omega
    double nu = 0.0;          // x/2 - 3/4
    double A2 = 0.0;          // |A|^2, bohr^-3
    bool oscillator = false;  // xi = 0: A2 holds the oscillator norm instead
};

// Scaled energies x solving Gamma(3/4 - x/2) / Gamma(1/4 - x/2) = 1 / (2 xi),
// ascending. For xi > 0 the first root is the molecular branch (x < 1/2).
std::vector<double> energy_roots(double xi, int count);
// Root n of the trap branch, in (2n + 1/2, 2n + 5/2).
double trap_branch_root(double xi, int n);
double molecular_root(double xi);

// xi(x) from the root condition, and dx/dxi along a branch.
double xi_of_x(double x);
double dx_dxi(double x);
// xi^2 dx/dxi, finite at the unitarity points.
double xi2_dx_dxi(double x);
// dx/dxi at x0 from the Gamma/digamma quotient 4 Gamma(a) / (Gamma(b) (psi(a) - psi(b))),
// a = 3/4 - x/2, b = 1/4 - x/2, by symmetric evaluation at x0 +- eps and
// Richardson extrapolation (eps = 1e-2 ... 1e-4). Usable at the removable
// singularities x0 = 2n + 3/2.
double dx_dxi_richardson(double x0);

std::vector<PseudoState> pseudo_states(const PseudoModel& model, int count);
PseudoState pseudo_state(const PseudoModel& model, double x, int n_t);
// |A|^2 = 8 pi^2 (mu omega)^(3/2) xi^2 dx/dxi; oscillator norm for xi = 0.
double normalization(const PseudoModel& model, const PseudoState& state);
// Reduced radial amplitude, unit L2 norm on [0, inf), positive as R -> 0+.
double pseudo_wavefunction(const PseudoState& state, const PseudoModel& model, double R);

double f_c_ho(double omega, double omega_ref);
// [A(omega)/A(omega_ref)]^2 omega_ref/omega for the first trap-branch state.
double f_c_pseudo(double a, double mu, double omega, double omega_ref);
// Same with separate scattering lengths (e.g. a_E per frequency); the
// reference must be interacting.
double f_c_pseudo(double a, double a_ref, double mu, double omega, double omega_ref);
// Ratio of squared first trap-branch wavefunctions at R_lin.
double f_c_pseudo_at(double R_lin, double a, double a_ref, double mu, double omega, double omega_ref);

struct SeriesValue {
    double value = 0.0;
    bool warning = false;  // |xi| >= 1: outside the useful range of the series
};

constexpr int max_series_order = 24;
// Taylor coefficient t_k of x(xi) = sum t_k xi^k (t_0 = 3/2).
double series_coefficient(int k);
SeriesValue energy_series(double xi, int order);
// sum_{n<order} (n+1) t_{n+1} xi^n, the series for dx/dxi.
SeriesValue dx_dxi_series(double xi, int order);
SeriesValue f_c_series(double xi, double xi_ref, double omega, double omega_ref, int order);

// Scattering length reproducing a trap energy E_ground (self-consistency).
double self_consistent_aE(double E_ground, const TrapSystem& sys);

}  // namespace trapspec
