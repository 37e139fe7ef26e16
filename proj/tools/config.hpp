#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "trapspec/trapspec.h"

namespace tsc {

constexpr double unset = std::numeric_limits<double>::quiet_NaN();

struct TailTerm {
    int n;
    double C;
};

struct CurveConfig {
    std::string model = "zero";  // zero | morse | lennard_jones | square_well | table
    double De = 0, Re = 0, alpha = 0;
    double A12 = 0;
    double V0 = 0, sigma = 0;
    std::string file;
    double R_m = 0;  // 0: no join radius
    double join_tolerance = 1e-3;
    double hard_wall = 0;
    std::vector<TailTerm> tail;
};

struct BasisConfig {
    ts_basis_spec spec{};
    std::vector<double> breakpoints;
    int states = 10;
};

struct ScatConfig {
    ts_scat_options opt{};
    std::vector<double> schedule;
    double target_a = unset;
    double mass_span = 0.1;
};

struct PseudoConfig {
    std::vector<double> xi;
    std::vector<double> a;
    int count = 3;
    int series_order = 6;
};

struct SpectrumConfig {
    int final_count = 0;
    double laser_intensity = 1.0;
    double threshold = 1e-3;
};

struct SweepConfig {
    std::vector<double> omegas;
    std::vector<double> mass_factors;
    double omega_ref = unset;
    double mass_factor_ref = 1.0;
    int final_count = 6;
};

struct OutputConfig {
    bool wavefunctions = false;
    int wavefunction_points = 400;
};

struct RunConfig {
    double mu_base = unset;  // electron masses, before mass_factor
    double mass_factor = 1.0;
    double mass_factor_ref = unset;
    int J = 0;
    int J_final = -1;
    CurveConfig initial, final_curve;
    bool has_initial = false, has_final = false;
    std::vector<double> omegas;  // hartree
    double omega_ref = unset;
    double D_at = 1.0;
    std::string dipole_file;
    BasisConfig solver;
    ScatConfig scattering;
    PseudoConfig pseudo;
    SpectrumConfig spectrum;
    SweepConfig sweep;
    OutputConfig outputs;
    bool has_sweep = false;

    nlohmann::json source;  // parsed file, for hashing

    double mu() const { return mu_base * mass_factor; }
};

// Parses and validates; throws CliError(Exit::config) with the offending key.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);

}  // namespace tsc
