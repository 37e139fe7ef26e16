#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "config.hpp"
#include "errors.hpp"
#include "handles.hpp"

namespace tsc {

namespace fs = std::filesystem;

Curve make_curve(const CurveConfig& c, const std::string& what) {
    std::vector<int> n;
    std::vector<double> C;
    for (const auto& t : c.tail) {
        n.push_back(t.n);
        C.push_back(t.C);
    }
    ts_curve* p = nullptr;
    ts_status s = TS_OK;
    if (c.model == "zero") {
        s = ts_curve_zero(&p);
    } else if (c.model == "morse") {
        s = ts_curve_morse(c.De, c.Re, c.alpha, n.data(), C.data(), n.size(), c.R_m, &p);
    } else if (c.model == "lennard_jones") {
        s = ts_curve_lennard_jones(c.A12, n.data(), C.data(), n.size(), c.R_m, &p);
    } else if (c.model == "square_well") {
        s = ts_curve_square_well(c.V0, c.sigma, &p);
    } else if (c.model == "table") {
        s = ts_curve_load_table(c.file.c_str(), n.data(), C.data(), n.size(), c.R_m, c.join_tolerance, &p);
    }
    Curve curve(p);
    check(s, what);
    if (c.hard_wall > 0.0) {
        ts_curve* w = nullptr;
        check(ts_curve_with_hard_wall(curve.get(), c.hard_wall, &w), what);
        curve.reset(w);
    }
    return curve;
}

Dipole make_dipole(const RunConfig& c) {
    ts_dipole* p = nullptr;
    ts_status s = c.dipole_file.empty() ? ts_dipole_constant(c.D_at, &p)
                                        : ts_dipole_load_table(c.dipole_file.c_str(), c.D_at, &p);
    Dipole d(p);
    check(s, "dipole");
    return d;
}

namespace {

std::string hash_of(const std::string& command, const std::string& payload) {
    return hex64(fnv1a64(command + "\n" + payload));
}

Emitter emitter_for(const Options& o, const std::string& command, const std::string& hash, bool need_dir = false) {
    Emitter e;
    e.command = command;
    e.hash = hash;
    e.format = o.format;
    if (o.out || need_dir) {
        e.dir = fs::path(o.out.value_or("."));
        std::error_code ec;
        fs::create_directories(*e.dir, ec);
        if (ec) throw CliError(Exit::config, "cannot create output directory " + e.dir->string());
    }
    return e;
}

std::string num(double x) { return format_number(x); }
std::string nu_tag(double omega) { return fmt::format("nu{:g}kHz", ts_kHz_from_omega(omega)); }

RunConfig load(const Options& o, const std::string& command) {
    if (o.config.empty()) throw CliError(Exit::config, command + " needs --config");
    return load_config(o.config);
}

void require_mass(const RunConfig& c) {
    if (std::isnan(c.mu_base)) throw CliError(Exit::config, "config $.system: mass missing (mu_me, mu_amu or atom_mass_amu)");
}

void require_trap(const RunConfig& c) {
    if (c.omegas.empty()) throw CliError(Exit::config, "config $.trap: nu_kHz or omega_au missing");
}

const CurveConfig& curve_config(const RunConfig& c, const std::string& which) {
    if (which == "initial") {
        if (!c.has_initial) throw CliError(Exit::config, "config $.potentials.initial missing");
        return c.initial;
    }
    if (which == "final") {
        if (!c.has_final) throw CliError(Exit::config, "config $.potentials.final missing");
        return c.final_curve;
    }
    throw CliError(Exit::config, "curve must be 'initial' or 'final'");
}

ts_basis_spec basis_of(const RunConfig& c) {
    ts_basis_spec b = c.solver.spec;
    b.breakpoints = c.solver.breakpoints.empty() ? nullptr : c.solver.breakpoints.data();
    b.n_breakpoints = c.solver.breakpoints.size();
    return b;
}

// Mixed uniform/geometric grid covering both the molecular and the trap scale.
std::vector<double> dump_grid(double R_lo, double R_hi, int points) {
    std::vector<double> g;
    int half = std::max(1, points / 2);
    for (int i = 1; i <= half; ++i) g.push_back(R_lo + (R_hi - R_lo) * i / half);
    double g0 = std::max(R_lo, 1e-4 * R_hi);
    if (g0 <= 0.0) g0 = 1e-4 * R_hi;
    for (int i = 0; i < points - half; ++i)
        g.push_back(g0 * std::pow(R_hi / g0, static_cast<double>(i) / std::max(1, points - half)));
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    g.erase(std::remove_if(g.begin(), g.end(), [&](double R) { return R <= R_lo || R >= R_hi; }), g.end());
    return g;
}

std::vector<ts_spectrum_row> rows_of(const ts_spectrum* s) {
    std::vector<ts_spectrum_row> rows(ts_spectrum_rows(s));
    for (std::size_t i = 0; i < rows.size(); ++i) check(ts_spectrum_row_get(s, i, &rows[i]));
    return rows;
}

Spectrum run_spectrum(const ts_curve* initial, const ts_curve* final_curve, const ts_dipole* D, const RunConfig& c,
                      double mu, double omega, int final_count, int threads) {
    ts_system sys{mu, c.J, omega};
    ts_spectrum_options opt;
    ts_spectrum_options_default(&opt);
    opt.basis = basis_of(c);
    opt.final_count = final_count;
    opt.J_final = c.J_final;
    opt.laser_intensity = c.spectrum.laser_intensity;
    opt.threads = threads;
    ts_spectrum* p = nullptr;
    spdlog::info("spectrum: mu = {} me, nu = {} kHz", mu, ts_kHz_from_omega(omega));
    ts_status s = ts_spectrum_run(initial, final_curve, &sys, D, &opt, &p);
    Spectrum out(p);
    check(s, fmt::format("spectrum at nu = {:g} kHz", ts_kHz_from_omega(omega)));
    return out;
}

}  // namespace

int cmd_solve(const Options& o, const std::string& which) {
    auto c = load(o, "solve");
    require_mass(c);
    require_trap(c);
    auto curve = make_curve(curve_config(c, which), "potentials." + which);
    int J = (which == "final" && c.J_final >= 0) ? c.J_final : c.J;
    auto em = emitter_for(o, "solve", hash_of("solve", c.source.dump() + "\ncurve=" + which));

    Table st{"states", {{"curve", which}, {"mu_me", num(c.mu())}, {"J", std::to_string(J)}},
             {"nu_kHz", "omega_au", "v", "E_hartree", "E_over_omega", "label", "nodes", "R_out_bohr"}, {}};
    Table wf{"wavefunctions", {{"curve", which}}, {"nu_kHz", "v", "R_bohr", "u"}, {}};
    ts_basis_spec spec = basis_of(c);
    for (double omega : c.omegas) {
        ts_system sys{c.mu(), J, omega};
        ts_states* p = nullptr;
        ts_status s = ts_solve(curve.get(), &sys, &spec, c.solver.states, &p);
        States states(p);
        check(s, fmt::format("solve at nu = {:g} kHz", ts_kHz_from_omega(omega)));
        double nu = ts_kHz_from_omega(omega);
        for (std::size_t i = 0; i < ts_states_count(states.get()); ++i) {
            ts_state_info info;
            check(ts_states_info(states.get(), i, &info));
            st.rows.push_back({nu, omega, static_cast<long long>(info.v), info.E,
                               omega > 0.0 ? info.E / omega : unset, std::string(ts_label_name(info.label)),
                               static_cast<long long>(info.nodes), info.R_out});
        }
        if (c.outputs.wavefunctions) {
            double R_lo, R_hi;
            check(ts_states_box(states.get(), &R_lo, &R_hi, nullptr));
            auto grid = dump_grid(R_lo, R_hi, c.outputs.wavefunction_points);
            for (std::size_t i = 0; i < ts_states_count(states.get()); ++i)
                for (double R : grid) {
                    double u;
                    check(ts_states_eval(states.get(), i, R, &u));
                    wf.rows.push_back({nu, static_cast<long long>(i), R, u});
                }
        }
    }
    em.write(st);
    if (c.outputs.wavefunctions) em.write(wf);
    return 0;
}

int cmd_spectrum(const Options& o) {
    auto c = load(o, "spectrum");
    require_mass(c);
    require_trap(c);
    auto initial = make_curve(curve_config(c, "initial"), "potentials.initial");
    auto final_curve = make_curve(curve_config(c, "final"), "potentials.final");
    auto D = make_dipole(c);
    auto em = emitter_for(o, "spectrum", hash_of("spectrum", c.source.dump()));

    int final_count = c.spectrum.final_count;
    Spectrum ref, gref;
    if (!std::isnan(c.omega_ref)) {
        ref = run_spectrum(initial.get(), final_curve.get(), D.get(), c, c.mu(), c.omega_ref, final_count, o.jobs);
        if (final_count == 0) final_count = static_cast<int>(ts_spectrum_rows(ref.get()));
    }
    if (!std::isnan(c.mass_factor_ref)) {
        if (std::isnan(c.omega_ref)) throw CliError(Exit::config, "g_v needs $.trap.nu_ref_kHz");
        gref = run_spectrum(initial.get(), final_curve.get(), D.get(), c, c.mu_base * c.mass_factor_ref, c.omega_ref,
                            final_count, o.jobs);
        if (static_cast<int>(ts_spectrum_rows(gref.get())) != final_count)
            throw CliError(Exit::numeric, "reference spectra index different numbers of final states");
    }
    double beta = 0.0;
    check(ts_curve_interaction_length(initial.get(), c.mu(), &beta), "interaction length");

    for (double omega : c.omegas) {
        auto spec = run_spectrum(initial.get(), final_curve.get(), D.get(), c, c.mu(), omega, final_count, o.jobs);
        auto rows = rows_of(spec.get());
        std::vector<double> I(rows.size()), f(rows.size(), unset), g(rows.size(), unset);
        for (std::size_t i = 0; i < rows.size(); ++i) I[i] = rows[i].I;
        auto ratio_to = [&](const Spectrum& r, std::vector<double>& out) {
            auto rr = rows_of(r.get());
            if (rr.size() != rows.size()) throw CliError(Exit::numeric, "spectra index different numbers of final states");
            std::vector<double> Iref(rr.size());
            for (std::size_t i = 0; i < rr.size(); ++i) Iref[i] = rr[i].I;
            check(ts_enhancement(I.data(), Iref.data(), I.size(), out.data(), nullptr));
        };
        if (ref) ratio_to(ref, f);
        if (gref) ratio_to(gref, g);

        int v0;
        double E0, R_lo, R_hi;
        int size;
        check(ts_spectrum_initial(spec.get(), &v0, &E0));
        check(ts_spectrum_box(spec.get(), &R_lo, &R_hi, &size));
        Table t{"spectrum_" + nu_tag(omega),
                {{"nu_kHz", num(ts_kHz_from_omega(omega))},
                 {"omega_au", num(omega)},
                 {"mu_me", num(c.mu())},
                 {"initial_v", std::to_string(v0)},
                 {"initial_E_hartree", num(E0)},
                 {"box_R_max_bohr", num(R_hi)},
                 {"basis_size", std::to_string(size)},
                 {"laser_intensity_au", num(c.spectrum.laser_intensity)}},
                {"v", "E_v_hartree", "label", "R_out_bohr", "I_v", "Gamma_v", "f_v", "g_v"},
                {}};
        std::vector<int> dips(rows.size());
        std::size_t n_dips = 0;
        double R_x = unset;
        check(ts_spectrum_window(spec.get(), 2.0 * beta, dips.data(), dips.size(), &n_dips, &R_x));
        std::string dl;
        for (std::size_t i = 0; i < n_dips; ++i) dl += (i ? " " : "") + std::to_string(dips[i]);
        t.meta.push_back({"window_R_x_bohr", num(R_x)});
        t.meta.push_back({"dips", dl.empty() ? "none" : dl});
        if (ref) {
            ts_regime reg;
            ts_status s = ts_spectrum_constant_regime(spec.get(), ref.get(), c.spectrum.threshold, &reg);
            if (s == TS_OK) {
                t.meta.push_back({"f_c", num(reg.f_c)});
                t.meta.push_back({"f_c_plateau_median", num(reg.plateau_median)});
                t.meta.push_back({"v_break_predicted", std::to_string(reg.v_break_predicted)});
                t.meta.push_back({"v_break_empirical", std::to_string(reg.v_break_empirical)});
                t.meta.push_back({"R_0_bohr", num(reg.R_0)});
                if (reg.plateau_warning) spdlog::warn("f_c differs from the plateau median by more than 2 %");
            } else {
                spdlog::warn("constant regime: {}", ts_last_error());
                t.meta.push_back({"f_c", "n/a"});
            }
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            t.rows.push_back({static_cast<long long>(r.v), r.E, std::string(ts_label_name(r.label)), r.R_out, r.I,
                              r.Gamma, ref ? Cell(f[i]) : Cell(), gref ? Cell(g[i]) : Cell()});
        }
        em.write(t);
    }
    return 0;
}

int cmd_scatlen(const Options& o, const std::string& which) {
    auto c = load(o, "scatlen");
    require_mass(c);
    auto curve = make_curve(curve_config(c, which), "potentials." + which);
    auto em = emitter_for(o, "scatlen", hash_of("scatlen", c.source.dump() + "\ncurve=" + which));
    double mu = c.mu();
    Table t{"scatlen", {{"curve", which}}, {"step", "R_max_bohr", "E0_hartree", "a_bohr"}, {}};
    if (!std::isnan(c.scattering.target_a)) {
        double a_t;
        check(ts_tune_mass(curve.get(), mu, c.scattering.target_a, c.scattering.mass_span, &c.scattering.opt, &mu, &a_t),
              "mass tuning");
        t.meta.push_back({"target_a_bohr", num(c.scattering.target_a)});
        t.meta.push_back({"tuned_mass_factor", num(mu / c.mu_base)});
    }
    double beta = 0.0;
    check(ts_curve_interaction_length(curve.get(), mu, &beta), "interaction length");
    t.meta.push_back({"mu_me", num(mu)});
    t.meta.push_back({"interaction_length_bohr", num(beta)});
    std::vector<ts_scat_point> hist(64);
    std::size_t n_hist = 0;
    double a = unset;
    const auto& sch = c.scattering.schedule;
    ts_status s = ts_scattering_length(curve.get(), mu, sch.empty() ? nullptr : sch.data(), sch.size(),
                                       &c.scattering.opt, &a, hist.data(), hist.size(), &n_hist);
    std::string err = s == TS_OK ? "" : ts_last_error();
    t.meta.push_back({"a_sc_bohr", num(a)});
    t.meta.push_back({"status", s == TS_OK ? "converged" : ts_status_name(s)});
    for (std::size_t i = 0; i < std::min(n_hist, hist.size()); ++i)
        t.rows.push_back({static_cast<long long>(i), hist[i].R_max, hist[i].E0, hist[i].a});
    if (s == TS_OK || s == TS_CONVERGENCE) em.write(t);
    if (s != TS_OK) throw CliError(exit_for(s), "scattering length: " + err);
    return 0;
}

int cmd_pseudo(const Options& o, const std::vector<double>& xi_cli, int count_cli) {
    std::optional<RunConfig> c;
    if (!o.config.empty()) c = load_config(o.config);
    std::vector<double> xis = xi_cli;
    int count = count_cli > 0 ? count_cli : (c ? c->pseudo.count : 3);
    int order = c ? c->pseudo.series_order : 6;
    if (c) xis.insert(xis.end(), c->pseudo.xi.begin(), c->pseudo.xi.end());
    bool fc_table = c && !c->pseudo.a.empty();
    if (xis.empty() && !fc_table) throw CliError(Exit::config, "pseudo needs --xi or $.pseudo.xi / $.pseudo.a_bohr");

    nlohmann::json key;
    key["xi"] = xi_cli;
    key["count"] = count;
    key["config"] = c ? c->source : nlohmann::json();
    auto em = emitter_for(o, "pseudo", hash_of("pseudo", key.dump()));

    if (!xis.empty()) {
        Table t{"pseudo_roots", {{"series_order", std::to_string(order)}},
                {"xi", "branch", "n", "x", "x_series", "series_warning", "xi_roundtrip"}, {}};
        const ts_system unit{1.0, 0, 1.0};  // a_ho = 1, so a = xi
        for (double xi : xis) {
            std::vector<double> x(count);
            check(ts_pseudo_roots(xi, count, x.data()), fmt::format("roots at xi = {}", xi));
            bool molecular = xi > 0.0;
            int n = 0;
            for (int i = 0; i < count; ++i) {
                bool mol = molecular && i == 0;
                Cell xs, warn;
                if (!mol && n == 0) {
                    double v;
                    int w;
                    check(ts_pseudo_energy_series(xi, order, &v, &w));
                    xs = v;
                    warn = static_cast<long long>(w);
                }
                double back = unset;
                if (std::isfinite(xi) && ts_pseudo_self_consistent_a(x[i], &unit, &back) != TS_OK) back = unset;
                t.rows.push_back({xi, std::string(mol ? "molecular" : "trap"), static_cast<long long>(mol ? 0 : n), x[i],
                                  xs, warn, back});
                if (!mol) ++n;
            }
        }
        em.write(t);
    }
    if (fc_table) {
        require_mass(*c);
        require_trap(*c);
        if (std::isnan(c->omega_ref)) throw CliError(Exit::config, "f_c needs $.trap.nu_ref_kHz");
        Table t{"pseudo_fc", {{"mu_me", num(c->mu())}, {"nu_ref_kHz", num(ts_kHz_from_omega(c->omega_ref))}},
                {"a_bohr", "nu_kHz", "xi", "x0", "f_c_pseudo", "f_c_series", "series_warning", "f_c_ho"}, {}};
        for (double a : c->pseudo.a)
            for (double omega : c->omegas) {
                ts_system sys{c->mu(), c->J, omega}, ref{c->mu(), c->J, c->omega_ref};
                double xi, xi_ref, x0, fc, fs, fho;
                int warn;
                check(ts_pseudo_xi(a, &sys, &xi));
                check(ts_pseudo_xi(a, &ref, &xi_ref));
                check(ts_pseudo_state(a, &sys, 0, &x0, nullptr));
                check(ts_pseudo_f_c(a, unset, c->mu(), omega, c->omega_ref, &fc), "f_c");
                check(ts_pseudo_f_c_series(xi, xi_ref, omega, c->omega_ref, order, &fs, &warn), "f_c series");
                check(ts_pseudo_f_c_ho(omega, c->omega_ref, &fho));
                t.rows.push_back({a, ts_kHz_from_omega(omega), xi, x0, fc, fs, static_cast<long long>(warn), fho});
            }
        em.write(t);
    }
    return 0;
}

int cmd_compare(const Options& o, const std::string& spec_path, const std::string& ref_path, const std::string& kind) {
    if (kind != "f" && kind != "g") throw CliError(Exit::config, "--kind must be f or g");
    auto read_text = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw CliError(Exit::config, "cannot open " + p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    auto a = read_csv(spec_path), b = read_csv(ref_path);
    auto em = emitter_for(o, "compare", hash_of("compare", kind + "\n" + read_text(spec_path) + "\n" + read_text(ref_path)));
    auto column = [](const CsvData& d, const std::string& name, const std::string& file) {
        int i = d.column(name);
        if (i < 0) throw CliError(Exit::config, file + ": column " + name + " missing");
        return i;
    };
    int av = column(a, "v", spec_path), aI = column(a, "I_v", spec_path);
    int bv = column(b, "v", ref_path), bI = column(b, "I_v", ref_path);
    if (a.rows.size() != b.rows.size())
        throw CliError(Exit::config, "spectra index different numbers of final states");
    std::vector<double> I, Iref;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        if (a.rows[i][av] != b.rows[i][bv]) throw CliError(Exit::config, "spectra use different final-state indexing");
        try {
            I.push_back(std::stod(a.rows[i][aI]));
            Iref.push_back(std::stod(b.rows[i][bI]));
        } catch (const std::exception&) {
            throw CliError(Exit::config, "non-numeric I_v in row " + std::to_string(i));
        }
    }
    std::vector<double> r(I.size());
    std::vector<int> k(I.size());
    check(ts_enhancement(I.data(), Iref.data(), I.size(), r.data(), k.data()));
    std::string col = kind + "_v";
    Table t{"compare",
            {{"spectrum", fs::path(spec_path).filename().string()}, {"reference", fs::path(ref_path).filename().string()}},
            {"v", "I_v", "I_ref_v", col, "class"},
            {}};
    double c0 = r.empty() ? unset : r[0];
    int vb = -1;
    for (std::size_t i = 0; i < r.size(); ++i) {
        t.rows.push_back({std::stoll(a.rows[i][av]), I[i], Iref[i], r[i], std::string(ts_enhancement_name(k[i]))});
        if (vb < 0 && !(std::abs(r[i] / c0 - 1.0) <= 0.10)) vb = static_cast<int>(i);
    }
    t.meta.push_back({kind + "_c", num(c0)});
    t.meta.push_back({"v_break_empirical", std::to_string(vb)});
    em.write(t);
    return 0;
}

namespace {

struct SweepPoint {
    double omega, factor;
};

struct SweepRow {
    std::vector<Cell> cells;
};

}  // namespace

int cmd_sweep(const Options& o) {
    auto c = load(o, "sweep");
    require_mass(c);
    if (!c.has_sweep) throw CliError(Exit::config, "config $.sweep missing");
    if (c.sweep.omegas.empty() || c.sweep.mass_factors.empty())
        throw CliError(Exit::config, "config $.sweep needs nu_kHz and mass_factors");
    double omega_ref = !std::isnan(c.sweep.omega_ref) ? c.sweep.omega_ref : c.omega_ref;
    if (std::isnan(omega_ref)) throw CliError(Exit::config, "config $.sweep.nu_ref_kHz missing");
    auto initial = make_curve(curve_config(c, "initial"), "potentials.initial");
    auto final_curve = make_curve(curve_config(c, "final"), "potentials.final");
    auto D = make_dipole(c);
    const int jobs = std::max(1, o.jobs);
    const int nf = c.sweep.final_count;

    std::vector<SweepPoint> pts;
    for (double w : c.sweep.omegas)
        for (double m : c.sweep.mass_factors) pts.push_back({w, m});

    const std::string hash = hash_of("sweep", c.source.dump());
    auto em = emitter_for(o, "sweep", hash, true);
    Table t{"sweep",
            {{"nu_ref_kHz", num(ts_kHz_from_omega(omega_ref))},
             {"mass_factor_ref", num(c.sweep.mass_factor_ref)},
             {"mu_base_me", num(c.mu_base)},
             {"final_count", std::to_string(nf)},
             {"points", std::to_string(pts.size())}},
            {"index", "nu_kHz", "mass_factor", "mu_me", "a_sc_bohr", "a_ho_bohr", "xi", "E_init_over_omega", "I_v0",
             "g_c", "g_spread"},
            {}};
    const std::string header = csv_header(em.command, em.hash, t.meta, t.columns);

    // Resume: keep the complete rows of an earlier run with the same header.
    std::size_t done = 0;
    const fs::path path = em.path_for("sweep");
    const bool csv = o.format == Format::csv;
    if (csv && fs::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        std::string text = ss.str();
        if (text.compare(0, header.size(), header) != 0)
            throw CliError(Exit::config, path.string() + " belongs to a different configuration; remove it first");
        std::size_t pos = header.size(), keep = pos;
        while (done < pts.size()) {
            auto nl = text.find('\n', pos);
            if (nl == std::string::npos) break;
            if (text.compare(pos, std::to_string(done).size() + 1, std::to_string(done) + ",") != 0) break;
            pos = keep = nl + 1;
            ++done;
        }
        fs::resize_file(path, keep);
        if (done) spdlog::info("sweep: resuming after {} of {} points", done, pts.size());
    } else if (csv) {
        std::ofstream(path, std::ios::binary | std::ios::trunc) << header;
    }

    std::vector<double> factors = c.sweep.mass_factors;
    std::sort(factors.begin(), factors.end());
    factors.erase(std::unique(factors.begin(), factors.end()), factors.end());

    // Runs f(i) for i in [0, n) on the worker pool; the first failure is rethrown.
    auto parallel = [&](std::size_t n, auto&& f) {
        std::atomic<std::size_t> next{0};
        std::exception_ptr err;
        std::mutex m;
        auto work = [&] {
            for (;;) {
                std::size_t i = next++;
                if (i >= n) return;
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lk(m);
                    if (!err) err = std::current_exception();
                    next = n;
                }
            }
        };
        std::vector<std::jthread> pool;
        for (int k = 1; k < jobs; ++k) pool.emplace_back(work);
        work();
        pool.clear();
        if (err) std::rethrow_exception(err);
    };

    std::vector<double> a_sc(factors.size(), unset);
    parallel(factors.size(), [&](std::size_t i) {
        const auto& sch = c.scattering.schedule;
        double a = unset;
        ts_status s = ts_scattering_length(initial.get(), c.mu_base * factors[i], sch.empty() ? nullptr : sch.data(),
                                           sch.size(), &c.scattering.opt, &a, nullptr, 0, nullptr);
        if (s != TS_OK) spdlog::warn("a_sc at mass factor {}: {}", factors[i], ts_last_error());
        a_sc[i] = s == TS_OK ? a : unset;
    });
    auto a_of = [&](double f) {
        return a_sc[std::lower_bound(factors.begin(), factors.end(), f) - factors.begin()];
    };

    auto ref = run_spectrum(initial.get(), final_curve.get(), D.get(), c, c.mu_base * c.sweep.mass_factor_ref,
                            omega_ref, nf, 1);
    auto ref_rows = rows_of(ref.get());

    std::vector<std::optional<SweepRow>> results(pts.size());
    std::mutex mtx;
    std::condition_variable cv;
    std::size_t emitted = done;
    std::ofstream out;
    if (csv) out.open(path, std::ios::binary | std::ios::app);

    auto compute = [&](std::size_t k) {
        std::size_t i = done + k;
        const auto& p = pts[i];
        double mu = c.mu_base * p.factor;
        auto spec = run_spectrum(initial.get(), final_curve.get(), D.get(), c, mu, p.omega, nf, 1);
        auto rows = rows_of(spec.get());
        if (rows.size() != ref_rows.size()) throw CliError(Exit::numeric, "sweep point with a different final-state count");
        std::vector<double> I(rows.size()), Iref(rows.size()), g(rows.size());
        for (std::size_t v = 0; v < rows.size(); ++v) I[v] = rows[v].I, Iref[v] = ref_rows[v].I;
        check(ts_enhancement(I.data(), Iref.data(), I.size(), g.data(), nullptr));
        double spread = 0.0;
        for (double x : g) spread = std::max(spread, std::abs(x / g[0] - 1.0));
        int v0;
        double E0;
        check(ts_spectrum_initial(spec.get(), &v0, &E0));
        double a = a_of(p.factor);
        double a_ho = 1.0 / std::sqrt(mu * p.omega);
        SweepRow r{{static_cast<long long>(i), ts_kHz_from_omega(p.omega), p.factor, mu, a, a_ho, a / a_ho,
                    E0 / p.omega, I[0], g[0], spread}};
        std::lock_guard lk(mtx);
        results[i] = std::move(r);
        cv.notify_all();
    };

    // Emitter: rows go out strictly in index order as they complete.
    std::exception_ptr failure;
    std::jthread writer([&] {
        std::unique_lock lk(mtx);
        while (emitted < pts.size()) {
            cv.wait(lk, [&] { return emitted >= pts.size() || results[emitted] || failure; });
            if (failure) return;
            while (emitted < pts.size() && results[emitted]) {
                if (csv) {
                    out << csv_row(results[emitted]->cells);
                    out.flush();
                }
                ++emitted;
            }
        }
    });
    try {
        parallel(pts.size() - done, compute);
    } catch (...) {
        {
            std::lock_guard lk(mtx);
            failure = std::current_exception();
        }
        cv.notify_all();
        writer.join();
        throw;
    }
    writer.join();
    if (!csv) {
        for (auto& r : results)
            if (r) t.rows.push_back(std::move(r->cells));
        em.write(t);
    }
    return 0;
}

}  // namespace tsc
