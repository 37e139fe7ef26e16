#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trapspec/potentials.hpp"
#include "trapspec/radial_solver.hpp"

namespace trapspec {

// Electronic transition dipole D(R): constant, or tabulated with the
// declared asymptote used beyond the last sample.
class DipoleFunction {
public:
    static DipoleFunction constant(double D_at);
    static DipoleFunction table(std::vector<double> R, std::vector<double> D, double D_at);
    static DipoleFunction load_table(const std::string& path, double D_at);

    double operator()(double R) const;
    double asymptote() const { return D_at_; }
    bool is_constant() const { return !table_; }

private:
    struct Table;
    double D_at_ = 1.0;
    std::shared_ptr<const Table> table_;
};

// |int u_i D u_f dR|^2 with the basis quadrature. Both states must share a basis.
double transition_moment(const VibrationalState& initial, const VibrationalState& final,
                         const DipoleFunction& D);
// Same with the initial amplitude given at the quadrature nodes of final.basis.
double transition_moment(const std::vector<double>& initial_at_nodes, const VibrationalState& final,
                         const DipoleFunction& D);
double rate(double I, double laser_intensity);

struct SumRule {
    double sum;       // sum over states of I^v
    double integral;  // <initial| D^2 |initial>
    double defect;    // sum - integral
};
SumRule sum_rule(const VibrationalState& initial, const DipoleFunction& D,
                 const std::vector<VibrationalState>& states);

struct SpectrumRow {
    int v = 0;
    double E = 0.0;
    StateLabel label = StateLabel::bound;
    double R_out = 0.0;  // NaN when there is no outer turning point in the box
    double I = 0.0;
    double Gamma = 0.0;
    std::optional<double> f, g;
};

struct SpectrumMeta {
    double omega = 0.0;
    double mu = 0.0;
    std::optional<double> a_sc;
    double laser_intensity = 1.0;
    int initial_v = 0;
    double initial_E = 0.0;
};

struct SpectrumTable {
    SpectrumMeta meta;
    std::vector<SpectrumRow> rows;
};

// Rows for the given final states against one initial state; quadratures run
// on `threads` workers, rows stay ordered by v.
SpectrumTable build_spectrum(const VibrationalState& initial, const std::vector<VibrationalState>& finals,
                             const PotentialCurve& final_curve, const TrapSystem& final_sys,
                             const DipoleFunction& D, double laser_intensity, int threads = 1);

struct SpectrumRun {
    SpectrumTable table;
    std::shared_ptr<const RadialBasis> basis;
    std::vector<VibrationalState> initial_states;  // up to and including the initial state
    VibrationalState initial;
    std::vector<VibrationalState> finals;
};

struct SpectrumSetup {
    BasisSpec basis;
    int final_count = 0;  // 0: all final states with E < 0
    int J_final = -1;     // rotational quantum number of the final states; -1: same as the initial
    double laser_intensity = 1.0;
    int threads = 1;
};

// Solves both curves in the same trap on one shared basis and tabulates the spectrum from the
// first trap-induced state (first E >= 0 state) of the initial curve.
SpectrumRun run_spectrum(const PotentialCurve& initial_curve, const PotentialCurve& final_curve,
                         const TrapSystem& sys, const DipoleFunction& D, const SpectrumSetup& setup);

// Number of E < 0 eigenvalues on the basis.
int count_bound(const PotentialCurve& curve, const TrapSystem& sys, const std::shared_ptr<const RadialBasis>& basis);

enum class Enhancement { epa, spa, neutral, undefined };
const char* enhancement_name(Enhancement e);

struct Ratio {
    int v;
    double value;  // NaN when undefined
    Enhancement kind;
};

// f^v = I^v(omega) / I^v(omega_ref).
std::vector<Ratio> enhancement_f(const SpectrumTable& spec, const SpectrumTable& ref);
// g^v = I^v(omega, a) / I^v(omega_ref, a_ref ~ 0).
std::vector<Ratio> enhancement_g(const SpectrumTable& spec, const SpectrumTable& ref);

struct ConstantRegime {
    double f_c = 1.0;
    double plateau_median = 1.0;
    bool plateau_warning = false;  // f_c and plateau median differ by more than 2 %
    std::optional<int> v_break_predicted;
    std::optional<int> v_break_empirical;
    std::optional<double> R_0;
};

// f_c = f^{v=0}; R_0 is the first R where |sqrt(f_c) Psi(R; omega_ref) - Psi(R; omega)|
// exceeds `threshold`; the predicted break is the first v with R_out > R_0 and
// the empirical one the first v with |f^v/f_c - 1| > 10 %.
ConstantRegime constant_regime(const std::vector<Ratio>& f, const SpectrumTable& spec,
                               const VibrationalState& initial, const VibrationalState& initial_ref,
                               double threshold = 1e-3);

struct Window {
    std::vector<int> dips;
    std::optional<double> R_x;
};

// Dips: v whose I^v is more than a decade below both neighbours. R_x: largest
// node of the initial state beyond molecular_radius.
Window find_window(const SpectrumTable& spec, const VibrationalState& initial, double molecular_radius);
// Interior nodes of a state (linear interpolation between quadrature nodes),
// ignoring lobes below tol * max|u|.
std::vector<double> node_positions(const VibrationalState& state, double tol = 1e-9);

}  // namespace trapspec
