#include "trapspec/trapspec.h"

#include <cmath>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "trapspec/error.hpp"
#include "trapspec/pseudopotential.hpp"
#include "trapspec/radial_solver.hpp"
#include "trapspec/scattering.hpp"
#include "trapspec/spectra.hpp"
#include "trapspec/units.hpp"

using namespace trapspec;

struct ts_curve {
    PotentialCurve curve;
};

struct ts_states {
    PotentialCurve curve;
    TrapSystem sys;
    std::vector<VibrationalState> states;
    std::vector<double> R_out;
};

struct ts_dipole {
    DipoleFunction D;
};

struct ts_spectrum {
    SpectrumRun run;
};

namespace {

thread_local std::string last_error;
constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

ts_status fail(ts_status s, const char* msg) {
    last_error = msg;
    return s;
}

// Runs f and maps library exceptions to status codes.
template <class F>
ts_status guard(F&& f) {
    try {
        f();
        last_error.clear();
        return TS_OK;
    } catch (const ConvergenceError& e) {
        return fail(TS_CONVERGENCE, e.what());
    } catch (const Error& e) {
        switch (e.kind()) {
            case ErrorKind::domain: return fail(TS_DOMAIN_ERROR, e.what());
            case ErrorKind::config: return fail(TS_CONFIG_ERROR, e.what());
            case ErrorKind::io: return fail(TS_IO_ERROR, e.what());
            case ErrorKind::resonance: return fail(TS_RESONANCE, e.what());
            case ErrorKind::convergence: return fail(TS_CONVERGENCE, e.what());
            case ErrorKind::numeric: break;
        }
        return fail(TS_NUMERIC_ERROR, e.what());
    } catch (const std::bad_alloc&) {
        return fail(TS_NUMERIC_ERROR, "out of memory");
    } catch (const std::exception& e) {
        return fail(TS_NUMERIC_ERROR, e.what());
    }
}

std::vector<DispersionTerm> tail_of(const int* n, const double* C, size_t count) {
    std::vector<DispersionTerm> t;
    if (count == 0) return t;
    if (!n || !C) throw ConfigError("tail arrays are null");
    for (size_t i = 0; i < count; ++i) t.push_back({n[i], C[i]});
    return t;
}

double join_radius(double R_m) { return R_m > 0.0 ? R_m : std::numeric_limits<double>::infinity(); }

BasisSpec basis_of(const ts_basis_spec* s) {
    BasisSpec b;
    if (!s) return b;
    b.R_min = s->R_min;
    b.R_max = s->R_max;
    b.size = s->size;
    b.order = s->order;
    b.grading = s->grading;
    b.E_cut = s->E_cut;
    if (s->n_breakpoints > 0) {
        if (!s->breakpoints) throw ConfigError("breakpoint array is null");
        b.breakpoints.assign(s->breakpoints, s->breakpoints + s->n_breakpoints);
    }
    return b;
}

TrapSystem system_of(const ts_system* s) {
    if (!s) throw ConfigError("system is null");
    return TrapSystem{s->mu, s->J, s->omega};
}

ScatteringOptions scat_of(const ts_scat_options* o) {
    ScatteringOptions s;
    if (!o) return s;
    s.tol = o->tol;
    s.size = o->size;
    s.order = o->order;
    s.grading = o->grading;
    return s;
}

#define TS_REQUIRE(cond, what) \
    if (!(cond)) return fail(TS_INVALID_ARGUMENT, what)

template <class Make>
ts_status make_curve(ts_curve** out, Make&& make) {
    TS_REQUIRE(out, "output pointer is null");
    *out = nullptr;
    return guard([&] { *out = new ts_curve{make()}; });
}

}  // namespace

extern "C" {

const char* ts_last_error(void) { return last_error.c_str(); }

const char* ts_status_name(ts_status s) {
    switch (s) {
        case TS_OK: return "ok";
        case TS_DOMAIN_ERROR: return "domain error";
        case TS_CONFIG_ERROR: return "configuration error";
        case TS_NUMERIC_ERROR: return "numerical error";
        case TS_IO_ERROR: return "i/o error";
        case TS_INVALID_ARGUMENT: return "invalid argument";
        case TS_RESONANCE: return "resonance";
        case TS_CONVERGENCE: return "not converged";
    }
    return "unknown status";
}

const char* ts_label_name(int label) {
    if (label < TS_LABEL_BOUND || label > TS_LABEL_CONTINUUM) return "?";
    return trapspec::label_name(static_cast<StateLabel>(label));
}

const char* ts_enhancement_name(int kind) {
    if (kind < TS_EPA || kind > TS_UNDEFINED) return "?";
    return trapspec::enhancement_name(static_cast<Enhancement>(kind));
}

const char* ts_version(void) { return "1.0.0"; }

double ts_omega_from_kHz(double nu_kHz) { return units::omega_from_kHz(nu_kHz); }
double ts_kHz_from_omega(double omega) { return units::kHz_from_omega(omega); }
double ts_me_from_amu(double m_amu) { return units::me_from_amu(m_amu); }

void ts_basis_spec_default(ts_basis_spec* spec) {
    if (!spec) return;
    BasisSpec b;
    *spec = ts_basis_spec{b.R_min, b.R_max, b.size, b.order, b.grading, b.E_cut, nullptr, 0};
}

/* curves */

ts_status ts_curve_zero(ts_curve** out) {
    return make_curve(out, [] { return PotentialCurve::zero(); });
}

ts_status ts_curve_morse(double De, double Re, double alpha, const int* tail_n, const double* tail_C, size_t n_tail,
                         double R_m, ts_curve** out) {
    return make_curve(out, [&] {
        return PotentialCurve::morse(De, Re, alpha, tail_of(tail_n, tail_C, n_tail), join_radius(R_m));
    });
}

ts_status ts_curve_lennard_jones(double A12, const int* tail_n, const double* tail_C, size_t n_tail, double R_m,
                                 ts_curve** out) {
    return make_curve(out, [&] {
        return PotentialCurve::lennard_jones(A12, tail_of(tail_n, tail_C, n_tail), join_radius(R_m));
    });
}

ts_status ts_curve_square_well(double V0, double sigma, ts_curve** out) {
    return make_curve(out, [&] { return PotentialCurve::square_well(V0, sigma); });
}

ts_status ts_curve_table(const double* R, const double* V, size_t n, const int* tail_n, const double* tail_C,
                         size_t n_tail, double R_m, double join_tolerance, ts_curve** out) {
    TS_REQUIRE(R && V, "table arrays are null");
    return make_curve(out, [&] {
        return PotentialCurve::table(std::vector<double>(R, R + n), std::vector<double>(V, V + n),
                                     tail_of(tail_n, tail_C, n_tail), join_radius(R_m), join_tolerance);
    });
}

ts_status ts_curve_load_table(const char* path, const int* tail_n, const double* tail_C, size_t n_tail, double R_m,
                              double join_tolerance, ts_curve** out) {
    TS_REQUIRE(path, "path is null");
    return make_curve(out, [&] {
        return PotentialCurve::load_table(path, tail_of(tail_n, tail_C, n_tail), join_radius(R_m), join_tolerance);
    });
}

ts_status ts_curve_with_hard_wall(const ts_curve* curve, double R_wall, ts_curve** out) {
    TS_REQUIRE(curve, "curve is null");
    return make_curve(out, [&] { return curve->curve.with_hard_wall(R_wall); });
}

ts_status ts_curve_eval(const ts_curve* curve, double R, double* V) {
    TS_REQUIRE(curve && V, "null argument");
    return guard([&] { *V = curve->curve(R); });
}

ts_status ts_curve_interaction_length(const ts_curve* curve, double mu, double* length) {
    TS_REQUIRE(curve && length, "null argument");
    return guard([&] { *length = interaction_length(curve->curve, mu); });
}

void ts_curve_free(ts_curve* curve) { delete curve; }

/* radial solver */

ts_status ts_solve(const ts_curve* curve, const ts_system* sys, const ts_basis_spec* spec, int count,
                   ts_states** out) {
    TS_REQUIRE(curve && sys && out, "null argument");
    *out = nullptr;
    return guard([&] {
        auto* s = new ts_states{curve->curve, system_of(sys), {}, {}};
        try {
            s->states = solve_radial(s->curve, s->sys, basis_of(spec), count);
            const auto& b = *s->states.front().basis;
            for (const auto& st : s->states) {
                double r = nan_v;
                try {
                    r = outer_turning_point(s->curve, s->sys, st.E, b.R_min(), b.R_max());
                } catch (const Error&) {
                }
                s->R_out.push_back(r);
            }
        } catch (...) {
            delete s;
            throw;
        }
        *out = s;
    });
}

size_t ts_states_count(const ts_states* states) { return states ? states->states.size() : 0; }

ts_status ts_states_info(const ts_states* states, size_t i, ts_state_info* info) {
    TS_REQUIRE(states && info, "null argument");
    TS_REQUIRE(i < states->states.size(), "state index out of range");
    const auto& s = states->states[i];
    *info = ts_state_info{s.v, s.E, static_cast<int>(s.label), s.nodes, states->R_out[i]};
    return TS_OK;
}

ts_status ts_states_eval(const ts_states* states, size_t i, double R, double* u) {
    TS_REQUIRE(states && u, "null argument");
    TS_REQUIRE(i < states->states.size(), "state index out of range");
    return guard([&] { *u = states->states[i](R); });
}

ts_status ts_states_box(const ts_states* states, double* R_min, double* R_max, int* size) {
    TS_REQUIRE(states && !states->states.empty(), "null argument");
    const auto& b = *states->states.front().basis;
    if (R_min) *R_min = b.R_min();
    if (R_max) *R_max = b.R_max();
    if (size) *size = b.size();
    return TS_OK;
}

void ts_states_free(ts_states* states) { delete states; }

/* scattering */

void ts_scat_options_default(ts_scat_options* opt) {
    if (!opt) return;
    ScatteringOptions s;
    *opt = ts_scat_options{s.tol, s.size, s.order, s.grading};
}

ts_status ts_scattering_length(const ts_curve* curve, double mu, const double* schedule, size_t n_schedule,
                               const ts_scat_options* opt, double* a_sc, ts_scat_point* history, size_t capacity,
                               size_t* n_history) {
    TS_REQUIRE(curve && a_sc, "null argument");
    TS_REQUIRE(!(n_schedule > 0 && !schedule), "schedule is null");
    TS_REQUIRE(!(capacity > 0 && !history), "history buffer is null");
    auto copy_history = [&](const std::vector<ScatteringPoint>& h) {
        for (size_t i = 0; i < h.size() && i < capacity; ++i) history[i] = ts_scat_point{h[i].R_max, h[i].E0, h[i].a};
        if (n_history) *n_history = h.size();
    };
    if (n_history) *n_history = 0;
    *a_sc = nan_v;
    return guard([&] {
        std::vector<double> sch = n_schedule > 0 ? std::vector<double>(schedule, schedule + n_schedule)
                                                 : default_schedule(curve->curve, mu);
        try {
            auto r = scattering_length(curve->curve, mu, sch, scat_of(opt));
            copy_history(r.history);
            *a_sc = r.a_sc;
        } catch (const ConvergenceError& e) {
            copy_history(e.history());
            throw;
        }
    });
}

ts_status ts_phase_shift(const ts_curve* curve, double mu, double E, double* delta) {
    TS_REQUIRE(curve && delta, "null argument");
    return guard([&] { *delta = phase_shift(curve->curve, mu, E); });
}

ts_status ts_energy_dependent_a(const ts_curve* curve, double mu, double E, double* a) {
    TS_REQUIRE(curve && a, "null argument");
    return guard([&] { *a = energy_dependent_a(curve->curve, mu, E); });
}

ts_status ts_tune_mass(const ts_curve* curve, double mu0, double target_a, double rel_span,
                       const ts_scat_options* opt, double* mu, double* a_sc) {
    TS_REQUIRE(curve && mu, "null argument");
    return guard([&] {
        auto t = tune_mass(curve->curve, mu0, target_a, rel_span, scat_of(opt));
        *mu = t.mu;
        if (a_sc) *a_sc = t.a_sc;
    });
}

/* pseudopotential */

ts_status ts_pseudo_xi(double a, const ts_system* sys, double* xi) {
    TS_REQUIRE(sys && xi, "null argument");
    return guard([&] {
        PseudoModel m{a, system_of(sys)};
        m.sys.validate();
        *xi = m.xi();
    });
}

ts_status ts_pseudo_roots(double xi, int count, double* x) {
    TS_REQUIRE(x, "null argument");
    TS_REQUIRE(count >= 1, "count must be >= 1");
    return guard([&] {
        auto r = energy_roots(xi, count);
        for (int i = 0; i < count; ++i) x[i] = r[i];
    });
}

ts_status ts_pseudo_state(double a, const ts_system* sys, int n_t, double* x, double* A2) {
    TS_REQUIRE(sys, "null argument");
    TS_REQUIRE(n_t >= 0, "n_t must be >= 0");
    return guard([&] {
        PseudoModel m{a, system_of(sys)};
        auto s = pseudo_states(m, n_t + 1).back();
        if (x) *x = s.x;
        if (A2) *A2 = s.A2;
    });
}

ts_status ts_pseudo_wavefunction(double a, const ts_system* sys, int n_t, double R, double* u) {
    TS_REQUIRE(sys && u, "null argument");
    TS_REQUIRE(n_t >= 0, "n_t must be >= 0");
    return guard([&] {
        PseudoModel m{a, system_of(sys)};
        auto s = pseudo_states(m, n_t + 1).back();
        *u = pseudo_wavefunction(s, m, R);
    });
}

ts_status ts_pseudo_f_c(double a, double a_ref, double mu, double omega, double omega_ref, double* f_c) {
    TS_REQUIRE(f_c, "null argument");
    return guard([&] {
        *f_c = std::isnan(a_ref) ? f_c_pseudo(a, mu, omega, omega_ref) : f_c_pseudo(a, a_ref, mu, omega, omega_ref);
    });
}

ts_status ts_pseudo_f_c_ho(double omega, double omega_ref, double* f_c) {
    TS_REQUIRE(f_c, "null argument");
    return guard([&] { *f_c = f_c_ho(omega, omega_ref); });
}

ts_status ts_pseudo_energy_series(double xi, int order, double* x, int* warning) {
    TS_REQUIRE(x, "null argument");
    return guard([&] {
        auto s = energy_series(xi, order);
        *x = s.value;
        if (warning) *warning = s.warning;
    });
}

ts_status ts_pseudo_f_c_series(double xi, double xi_ref, double omega, double omega_ref, int order, double* f_c,
                               int* warning) {
    TS_REQUIRE(f_c, "null argument");
    return guard([&] {
        auto s = f_c_series(xi, xi_ref, omega, omega_ref, order);
        *f_c = s.value;
        if (warning) *warning = s.warning;
    });
}

ts_status ts_pseudo_self_consistent_a(double E, const ts_system* sys, double* a) {
    TS_REQUIRE(sys && a, "null argument");
    return guard([&] { *a = self_consistent_aE(E, system_of(sys)); });
}

/* dipole */

ts_status ts_dipole_constant(double D_at, ts_dipole** out) {
    TS_REQUIRE(out, "null argument");
    *out = nullptr;
    return guard([&] { *out = new ts_dipole{DipoleFunction::constant(D_at)}; });
}

ts_status ts_dipole_table(const double* R, const double* D, size_t n, double D_at, ts_dipole** out) {
    TS_REQUIRE(R && D && out, "null argument");
    *out = nullptr;
    return guard([&] {
        *out = new ts_dipole{DipoleFunction::table(std::vector<double>(R, R + n), std::vector<double>(D, D + n), D_at)};
    });
}

ts_status ts_dipole_load_table(const char* path, double D_at, ts_dipole** out) {
    TS_REQUIRE(path && out, "null argument");
    *out = nullptr;
    return guard([&] { *out = new ts_dipole{DipoleFunction::load_table(path, D_at)}; });
}

void ts_dipole_free(ts_dipole* dipole) { delete dipole; }

/* spectra */

void ts_spectrum_options_default(ts_spectrum_options* opt) {
    if (!opt) return;
    ts_basis_spec_default(&opt->basis);
    SpectrumSetup s;
    opt->final_count = s.final_count;
    opt->J_final = s.J_final;
    opt->laser_intensity = s.laser_intensity;
    opt->threads = s.threads;
}

ts_status ts_spectrum_run(const ts_curve* initial, const ts_curve* final_curve, const ts_system* sys,
                          const ts_dipole* dipole, const ts_spectrum_options* opt, ts_spectrum** out) {
    TS_REQUIRE(initial && final_curve && sys && dipole && out, "null argument");
    *out = nullptr;
    return guard([&] {
        SpectrumSetup setup;
        if (opt) {
            setup.basis = basis_of(&opt->basis);
            setup.final_count = opt->final_count;
            setup.J_final = opt->J_final;
            setup.laser_intensity = opt->laser_intensity;
            setup.threads = opt->threads;
        }
        auto run = run_spectrum(initial->curve, final_curve->curve, system_of(sys), dipole->D, setup);
        *out = new ts_spectrum{std::move(run)};
    });
}

size_t ts_spectrum_rows(const ts_spectrum* spec) { return spec ? spec->run.table.rows.size() : 0; }

ts_status ts_spectrum_row_get(const ts_spectrum* spec, size_t i, ts_spectrum_row* row) {
    TS_REQUIRE(spec && row, "null argument");
    TS_REQUIRE(i < spec->run.table.rows.size(), "row index out of range");
    const auto& r = spec->run.table.rows[i];
    *row = ts_spectrum_row{r.v, r.E, static_cast<int>(r.label), r.R_out, r.I, r.Gamma};
    return TS_OK;
}

ts_status ts_spectrum_initial(const ts_spectrum* spec, int* v, double* E) {
    TS_REQUIRE(spec, "null argument");
    if (v) *v = spec->run.initial.v;
    if (E) *E = spec->run.initial.E;
    return TS_OK;
}

ts_status ts_spectrum_initial_eval(const ts_spectrum* spec, double R, double* u) {
    TS_REQUIRE(spec && u, "null argument");
    return guard([&] { *u = spec->run.initial(R); });
}

ts_status ts_spectrum_box(const ts_spectrum* spec, double* R_min, double* R_max, int* size) {
    TS_REQUIRE(spec, "null argument");
    const auto& b = *spec->run.basis;
    if (R_min) *R_min = b.R_min();
    if (R_max) *R_max = b.R_max();
    if (size) *size = b.size();
    return TS_OK;
}

ts_status ts_spectrum_window(const ts_spectrum* spec, double molecular_radius, int* dips, size_t capacity,
                             size_t* n_dips, double* R_x) {
    TS_REQUIRE(spec, "null argument");
    TS_REQUIRE(!(capacity > 0 && !dips), "dip buffer is null");
    return guard([&] {
        auto w = find_window(spec->run.table, spec->run.initial, molecular_radius);
        for (size_t i = 0; i < w.dips.size() && i < capacity; ++i) dips[i] = w.dips[i];
        if (n_dips) *n_dips = w.dips.size();
        if (R_x) *R_x = w.R_x ? *w.R_x : nan_v;
    });
}

ts_status ts_spectrum_constant_regime(const ts_spectrum* spec, const ts_spectrum* ref, double threshold,
                                      ts_regime* out) {
    TS_REQUIRE(spec && ref && out, "null argument");
    return guard([&] {
        auto f = enhancement_f(spec->run.table, ref->run.table);
        auto c = constant_regime(f, spec->run.table, spec->run.initial, ref->run.initial, threshold);
        *out = ts_regime{c.f_c,
                         c.plateau_median,
                         c.plateau_warning,
                         c.v_break_predicted.value_or(-1),
                         c.v_break_empirical.value_or(-1),
                         c.R_0.value_or(nan_v)};
    });
}

void ts_spectrum_free(ts_spectrum* spec) { delete spec; }

ts_status ts_enhancement(const double* I, const double* I_ref, size_t n, double* ratio, int* kind) {
    TS_REQUIRE(n == 0 || (I && I_ref && ratio), "null argument");
    return guard([&] {
        SpectrumTable a, b;
        for (size_t i = 0; i < n; ++i) {
            SpectrumRow r;
            r.v = static_cast<int>(i);
            r.I = I[i];
            a.rows.push_back(r);
            r.I = I_ref[i];
            b.rows.push_back(r);
        }
        auto f = enhancement_f(a, b);
        for (size_t i = 0; i < n; ++i) {
            ratio[i] = f[i].value;
            if (kind) kind[i] = static_cast<int>(f[i].kind);
        }
    });
}

}  // extern "C"
