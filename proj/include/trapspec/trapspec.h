/* C interface to the trapspec library. All quantities in Hartree atomic units
   unless a name says otherwise. Functions return a ts_status; on failure the
   message is available from ts_last_error() on the calling thread. Handles are
   opaque and owned by the caller (free with the matching *_free). */
#ifndef TRAPSPEC_H
#define TRAPSPEC_H

#include <stddef.h>

#if defined(TRAPSPEC_BUILDING)
#define TS_API __attribute__((visibility("default")))
#else
#define TS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ts_status {
    TS_OK = 0,
    TS_DOMAIN_ERROR = 1,
    TS_CONFIG_ERROR = 2,
    TS_NUMERIC_ERROR = 3,
    TS_IO_ERROR = 4,
    TS_INVALID_ARGUMENT = 5,
    TS_RESONANCE = 6,
    TS_CONVERGENCE = 7
} ts_status;

enum { TS_LABEL_BOUND = 0, TS_LABEL_TRAP_INDUCED = 1, TS_LABEL_CONTINUUM = 2 };
enum { TS_EPA = 0, TS_SPA = 1, TS_NEUTRAL = 2, TS_UNDEFINED = 3 };

TS_API const char* ts_last_error(void);
TS_API const char* ts_status_name(ts_status s);
TS_API const char* ts_label_name(int label);
TS_API const char* ts_enhancement_name(int kind);
TS_API const char* ts_version(void);

TS_API double ts_omega_from_kHz(double nu_kHz);
TS_API double ts_kHz_from_omega(double omega);
TS_API double ts_me_from_amu(double m_amu);

typedef struct ts_curve ts_curve;
typedef struct ts_states ts_states;
typedef struct ts_dipole ts_dipole;
typedef struct ts_spectrum ts_spectrum;

typedef struct ts_system {
    double mu;    /* reduced mass, electron masses */
    int J;
    double omega; /* trap angular frequency, hartree */
} ts_system;

typedef struct ts_basis_spec {
    double R_min;
    double R_max;   /* 0: automatic */
    int size;
    int order;
    double grading;
    double E_cut;   /* NaN: 10 omega */
    const double* breakpoints;
    size_t n_breakpoints;
} ts_basis_spec;

TS_API void ts_basis_spec_default(ts_basis_spec* spec);

/* Potential curves. Tail terms are -C[i] / R^n[i]; R_m <= 0 means no join radius. */
TS_API ts_status ts_curve_zero(ts_curve** out);
TS_API ts_status ts_curve_morse(double De, double Re, double alpha, const int* tail_n, const double* tail_C,
                                size_t n_tail, double R_m, ts_curve** out);
TS_API ts_status ts_curve_lennard_jones(double A12, const int* tail_n, const double* tail_C, size_t n_tail,
                                        double R_m, ts_curve** out);
TS_API ts_status ts_curve_square_well(double V0, double sigma, ts_curve** out);
TS_API ts_status ts_curve_table(const double* R, const double* V, size_t n, const int* tail_n,
                                const double* tail_C, size_t n_tail, double R_m, double join_tolerance,
                                ts_curve** out);
TS_API ts_status ts_curve_load_table(const char* path, const int* tail_n, const double* tail_C, size_t n_tail,
                                     double R_m, double join_tolerance, ts_curve** out);
TS_API ts_status ts_curve_with_hard_wall(const ts_curve* curve, double R_wall, ts_curve** out);
TS_API ts_status ts_curve_eval(const ts_curve* curve, double R, double* V);
TS_API ts_status ts_curve_interaction_length(const ts_curve* curve, double mu, double* length);
TS_API void ts_curve_free(ts_curve* curve);

/* Trapped radial eigenstates. */
typedef struct ts_state_info {
    int v;
    double E;
    int label;
    int nodes;
    double R_out; /* outer classical turning point, NaN if none inside the box */
} ts_state_info;

TS_API ts_status ts_solve(const ts_curve* curve, const ts_system* sys, const ts_basis_spec* spec, int count,
                          ts_states** out);
TS_API size_t ts_states_count(const ts_states* states);
TS_API ts_status ts_states_info(const ts_states* states, size_t i, ts_state_info* info);
TS_API ts_status ts_states_eval(const ts_states* states, size_t i, double R, double* u);
TS_API ts_status ts_states_box(const ts_states* states, double* R_min, double* R_max, int* size);
TS_API void ts_states_free(ts_states* states);

/* Scattering. */
typedef struct ts_scat_options {
    double tol;
    int size;
    int order;
    double grading;
} ts_scat_options;

typedef struct ts_scat_point {
    double R_max;
    double E0;
    double a;
} ts_scat_point;

TS_API void ts_scat_options_default(ts_scat_options* opt);
/* schedule == NULL or n_schedule == 0 selects the default box schedule. The
   history is filled up to `capacity` entries also when TS_CONVERGENCE is returned. */
TS_API ts_status ts_scattering_length(const ts_curve* curve, double mu, const double* schedule, size_t n_schedule,
                                      const ts_scat_options* opt, double* a_sc, ts_scat_point* history,
                                      size_t capacity, size_t* n_history);
TS_API ts_status ts_phase_shift(const ts_curve* curve, double mu, double E, double* delta);
TS_API ts_status ts_energy_dependent_a(const ts_curve* curve, double mu, double E, double* a);
TS_API ts_status ts_tune_mass(const ts_curve* curve, double mu0, double target_a, double rel_span,
                              const ts_scat_options* opt, double* mu, double* a_sc);

/* Contact-interaction (pseudopotential) model. */
TS_API ts_status ts_pseudo_xi(double a, const ts_system* sys, double* xi);
TS_API ts_status ts_pseudo_roots(double xi, int count, double* x);
TS_API ts_status ts_pseudo_state(double a, const ts_system* sys, int n_t, double* x, double* A2);
TS_API ts_status ts_pseudo_wavefunction(double a, const ts_system* sys, int n_t, double R, double* u);
TS_API ts_status ts_pseudo_f_c(double a, double a_ref, double mu, double omega, double omega_ref, double* f_c);
TS_API ts_status ts_pseudo_f_c_ho(double omega, double omega_ref, double* f_c);
TS_API ts_status ts_pseudo_energy_series(double xi, int order, double* x, int* warning);
TS_API ts_status ts_pseudo_f_c_series(double xi, double xi_ref, double omega, double omega_ref, int order,
                                      double* f_c, int* warning);
TS_API ts_status ts_pseudo_self_consistent_a(double E, const ts_system* sys, double* a);

/* Transition dipole. */
TS_API ts_status ts_dipole_constant(double D_at, ts_dipole** out);
TS_API ts_status ts_dipole_table(const double* R, const double* D, size_t n, double D_at, ts_dipole** out);
TS_API ts_status ts_dipole_load_table(const char* path, double D_at, ts_dipole** out);
TS_API void ts_dipole_free(ts_dipole* dipole);

/* Photoassociation spectra. */
typedef struct ts_spectrum_options {
    ts_basis_spec basis;
    int final_count; /* 0: all bound final states */
    int J_final;     /* -1: same as the initial J */
    double laser_intensity;
    int threads;
} ts_spectrum_options;

typedef struct ts_spectrum_row {
    int v;
    double E;
    int label;
    double R_out;
    double I;
    double Gamma;
} ts_spectrum_row;

typedef struct ts_regime {
    double f_c;
    double plateau_median;
    int plateau_warning;
    int v_break_predicted; /* -1: none */
    int v_break_empirical; /* -1: none */
    double R_0;            /* NaN: none */
} ts_regime;

TS_API void ts_spectrum_options_default(ts_spectrum_options* opt);
TS_API ts_status ts_spectrum_run(const ts_curve* initial, const ts_curve* final_curve, const ts_system* sys,
                                 const ts_dipole* dipole, const ts_spectrum_options* opt, ts_spectrum** out);
TS_API size_t ts_spectrum_rows(const ts_spectrum* spec);
TS_API ts_status ts_spectrum_row_get(const ts_spectrum* spec, size_t i, ts_spectrum_row* row);
TS_API ts_status ts_spectrum_initial(const ts_spectrum* spec, int* v, double* E);
TS_API ts_status ts_spectrum_initial_eval(const ts_spectrum* spec, double R, double* u);
TS_API ts_status ts_spectrum_box(const ts_spectrum* spec, double* R_min, double* R_max, int* size);
TS_API ts_status ts_spectrum_window(const ts_spectrum* spec, double molecular_radius, int* dips, size_t capacity,
                                    size_t* n_dips, double* R_x);
TS_API ts_status ts_spectrum_constant_regime(const ts_spectrum* spec, const ts_spectrum* ref, double threshold,
                                             ts_regime* out);
TS_API void ts_spectrum_free(ts_spectrum* spec);

/* Per-level ratios I[i] / I_ref[i] with EPA/SPA flags. */
TS_API ts_status ts_enhancement(const double* I, const double* I_ref, size_t n, double* ratio, int* kind);

#ifdef __cplusplus
}
#endif

#endif
