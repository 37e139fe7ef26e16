#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "errors.hpp"

namespace tsc {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw CliError(Exit::config, "config " + where + ": " + what);
}

// Object reader that records consumed keys and rejects the rest.
class Obj {
public:
    Obj(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) bad(where_, "expected an object");
    }
    ~Obj() noexcept(false) {
        if (std::uncaught_exceptions()) return;
        for (const auto& [k, v] : j_.items())
            if (!used_.count(k)) bad(where_ + "." + k, "unknown key (dimensional keys need a unit suffix)");
    }
    bool has(const std::string& k) {
        if (!j_.contains(k)) return false;
        used_.insert(k);
        return true;
    }
    const json& at(const std::string& k) {
        used_.insert(k);
        return j_.at(k);
    }
    std::string path(const std::string& k) const { return where_ + "." + k; }

    double num(const std::string& k, double def) {
        if (!has(k)) return def;
        const auto& v = j_.at(k);
        if (!v.is_number()) bad(path(k), "expected a number");
        double x = v.get<double>();
        if (!std::isfinite(x)) bad(path(k), "must be finite");
        return x;
    }
    double req(const std::string& k) {
        if (!j_.contains(k)) bad(path(k), "missing");
        return num(k, 0.0);
    }
    int integer(const std::string& k, int def) {
        if (!has(k)) return def;
        const auto& v = j_.at(k);
        if (!v.is_number_integer()) bad(path(k), "expected an integer");
        return v.get<int>();
    }
    bool boolean(const std::string& k, bool def) {
        if (!has(k)) return def;
        const auto& v = j_.at(k);
        if (!v.is_boolean()) bad(path(k), "expected true or false");
        return v.get<bool>();
    }
    std::string str(const std::string& k, const std::string& def) {
        if (!has(k)) return def;
        const auto& v = j_.at(k);
        if (!v.is_string()) bad(path(k), "expected a string");
        return v.get<std::string>();
    }
    std::vector<double> list(const std::string& k) {
        std::vector<double> out;
        if (!has(k)) return out;
        const auto& v = j_.at(k);
        if (v.is_number()) return {v.get<double>()};
        if (!v.is_array()) bad(path(k), "expected a number or a list of numbers");
        for (const auto& x : v) {
            if (!x.is_number()) bad(path(k), "expected numbers");
            out.push_back(x.get<double>());
        }
        for (double x : out)
            if (!std::isfinite(x)) bad(path(k), "must be finite");
        return out;
    }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> used_;
};

std::string resolve(const std::string& file, const std::filesystem::path& base) {
    std::filesystem::path p(file);
    if (p.is_relative()) p = base / p;
    if (!std::filesystem::exists(p)) throw CliError(Exit::config, "referenced file not found: " + p.string());
    return p.string();
}

CurveConfig parse_curve(const json& j, const std::string& where, const std::filesystem::path& base) {
    Obj o(j, where);
    CurveConfig c;
    c.model = o.str("model", "");
    if (c.model.empty()) bad(o.path("model"), "missing");
    if (c.model == "morse") {
        c.De = o.req("De_hartree");
        c.Re = o.req("Re_bohr");
        c.alpha = o.req("alpha_per_bohr");
    } else if (c.model == "lennard_jones") {
        c.A12 = o.req("A12_au");
    } else if (c.model == "square_well") {
        c.V0 = o.req("V0_hartree");
        c.sigma = o.req("sigma_bohr");
    } else if (c.model == "table") {
        c.file = o.str("file", "");
        if (c.file.empty()) bad(o.path("file"), "missing");
        c.file = resolve(c.file, base);
        c.join_tolerance = o.num("join_tolerance", c.join_tolerance);
    } else if (c.model != "zero") {
        bad(o.path("model"), "unknown model '" + c.model + "' (zero, morse, lennard_jones, square_well, table)");
    }
    c.R_m = o.num("R_m_bohr", 0.0);
    c.hard_wall = o.num("hard_wall_bohr", 0.0);
    if (o.has("tail")) {
        const auto& t = o.at("tail");
        if (!t.is_array()) bad(o.path("tail"), "expected a list of {n, C_au}");
        for (std::size_t i = 0; i < t.size(); ++i) {
            Obj term(t[i], o.path("tail") + "[" + std::to_string(i) + "]");
            int n = term.integer("n", 0);
            if (n < 3) bad(term.path("n"), "must be an integer >= 3");
            c.tail.push_back({n, term.req("C_au")});
        }
    }
    if (c.model == "zero" && !c.tail.empty()) bad(where, "the zero model takes no tail");
    return c;
}

std::vector<double> omegas_from(Obj& o, const std::string& nu_key, const std::string& omega_key) {
    auto nu = o.list(nu_key);
    auto om = o.list(omega_key);
    if (!nu.empty() && !om.empty()) bad(o.path(nu_key), "give either " + nu_key + " or " + omega_key);
    for (double& x : nu) x = ts_omega_from_kHz(x);
    auto out = nu.empty() ? om : nu;
    for (double w : out)
        if (w < 0.0) bad(o.path(nu.empty() ? omega_key : nu_key), "trap frequencies must be >= 0");
    return out;
}

double scalar_omega(Obj& o, const std::string& nu_key, const std::string& omega_key) {
    auto w = omegas_from(o, nu_key, omega_key);
    if (w.size() > 1) bad(o.path(nu_key), "expected a single value");
    return w.empty() ? unset : w.front();
}

}  // namespace

RunConfig parse_config(const json& j, const std::filesystem::path& base) {
    RunConfig c;
    c.source = j;
    Obj root(j, "$");
    ts_basis_spec_default(&c.solver.spec);
    ts_scat_options_default(&c.scattering.opt);

    if (root.has("system")) {
        Obj s(root.at("system"), "$.system");
        int given = 0;
        if (s.has("mu_me")) c.mu_base = s.num("mu_me", 0), ++given;
        if (s.has("mu_amu")) c.mu_base = ts_me_from_amu(s.num("mu_amu", 0)), ++given;
        if (s.has("atom_mass_amu")) c.mu_base = 0.5 * ts_me_from_amu(s.num("atom_mass_amu", 0)), ++given;
        if (given > 1) bad("$.system", "give exactly one of mu_me, mu_amu, atom_mass_amu");
        if (given == 1 && !(c.mu_base > 0.0)) bad("$.system", "mass must be positive");
        c.mass_factor = s.num("mass_factor", 1.0);
        c.mass_factor_ref = s.num("mass_factor_ref", unset);
        if (!(c.mass_factor > 0.0)) bad(s.path("mass_factor"), "must be positive");
        c.J = s.integer("J", 0);
        c.J_final = s.integer("J_final", -1);
        if (c.J < 0) bad(s.path("J"), "must be >= 0");
        if (c.J_final < -1) bad(s.path("J_final"), "must be >= 0");
    }
    if (root.has("potentials")) {
        Obj p(root.at("potentials"), "$.potentials");
        if (p.has("initial")) c.initial = parse_curve(p.at("initial"), "$.potentials.initial", base), c.has_initial = true;
        if (p.has("final")) c.final_curve = parse_curve(p.at("final"), "$.potentials.final", base), c.has_final = true;
    }
    if (root.has("trap")) {
        Obj t(root.at("trap"), "$.trap");
        c.omegas = omegas_from(t, "nu_kHz", "omega_au");
        c.omega_ref = scalar_omega(t, "nu_ref_kHz", "omega_ref_au");
    }
    if (root.has("dipole")) {
        Obj d(root.at("dipole"), "$.dipole");
        c.D_at = d.num("D_at_au", 1.0);
        std::string f = d.str("file", "");
        if (!f.empty()) c.dipole_file = resolve(f, base);
    }
    if (root.has("solver")) {
        Obj s(root.at("solver"), "$.solver");
        auto& b = c.solver.spec;
        b.size = s.integer("size", b.size);
        b.order = s.integer("order", b.order);
        b.grading = s.num("grading", b.grading);
        b.R_min = s.num("R_min_bohr", b.R_min);
        b.R_max = s.num("R_max_bohr", b.R_max);
        b.E_cut = s.num("E_cut_hartree", b.E_cut);
        c.solver.breakpoints = s.list("breakpoints_bohr");
        c.solver.states = s.integer("states", c.solver.states);
        if (c.solver.states < 1) bad(s.path("states"), "must be >= 1");
    }
    if (root.has("scattering")) {
        Obj s(root.at("scattering"), "$.scattering");
        auto& o = c.scattering.opt;
        o.tol = s.num("tol", o.tol);
        o.size = s.integer("size", o.size);
        o.order = s.integer("order", o.order);
        o.grading = s.num("grading", o.grading);
        c.scattering.schedule = s.list("schedule_bohr");
        c.scattering.target_a = s.num("target_a_bohr", unset);
        c.scattering.mass_span = s.num("mass_span", c.scattering.mass_span);
    }
    if (root.has("pseudo")) {
        Obj s(root.at("pseudo"), "$.pseudo");
        c.pseudo.xi = s.list("xi");
        c.pseudo.a = s.list("a_bohr");
        c.pseudo.count = s.integer("count", c.pseudo.count);
        c.pseudo.series_order = s.integer("series_order", c.pseudo.series_order);
        if (c.pseudo.count < 1) bad(s.path("count"), "must be >= 1");
    }
    if (root.has("spectrum")) {
        Obj s(root.at("spectrum"), "$.spectrum");
        c.spectrum.final_count = s.integer("final_count", 0);
        c.spectrum.laser_intensity = s.num("laser_intensity_au", 1.0);
        c.spectrum.threshold = s.num("breakdown_threshold", c.spectrum.threshold);
        if (c.spectrum.final_count < 0) bad(s.path("final_count"), "must be >= 0");
    }
    if (root.has("sweep")) {
        Obj s(root.at("sweep"), "$.sweep");
        c.has_sweep = true;
        c.sweep.omegas = omegas_from(s, "nu_kHz", "omega_au");
        c.sweep.omega_ref = scalar_omega(s, "nu_ref_kHz", "omega_ref_au");
        c.sweep.mass_factors = s.list("mass_factors");
        c.sweep.mass_factor_ref = s.num("mass_factor_ref", 1.0);
        c.sweep.final_count = s.integer("final_count", c.sweep.final_count);
        for (double m : c.sweep.mass_factors)
            if (!(m > 0.0)) bad(s.path("mass_factors"), "must be positive");
        if (c.sweep.final_count < 1) bad(s.path("final_count"), "must be >= 1");
    }
    if (root.has("outputs")) {
        Obj s(root.at("outputs"), "$.outputs");
        c.outputs.wavefunctions = s.boolean("wavefunctions", false);
        c.outputs.wavefunction_points = s.integer("wavefunction_points", c.outputs.wavefunction_points);
        if (c.outputs.wavefunction_points < 2) bad(s.path("wavefunction_points"), "must be >= 2");
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CliError(Exit::config, "cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::exception& e) {
        throw CliError(Exit::config, "config " + path.string() + ": " + e.what());
    }
    auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    return parse_config(j, base);
}

}  // namespace tsc
