#include "trapspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <boost/math/interpolators/makima.hpp>

#include "trapspec/error.hpp"
#include "trapspec/units.hpp"

namespace trapspec {

namespace {
constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();
}

struct DipoleFunction::Table {
    double r0, r1;
    boost::math::interpolators::makima<std::vector<double>> spline;
};

DipoleFunction DipoleFunction::constant(double D_at) {
    if (!std::isfinite(D_at)) throw ConfigError("dipole asymptote must be finite");
    DipoleFunction d;
    d.D_at_ = D_at;
    return d;
}

DipoleFunction DipoleFunction::table(std::vector<double> R, std::vector<double> D, double D_at) {
    if (R.size() != D.size()) throw ConfigError("dipole table columns differ in length");
    if (R.size() < 4) throw ConfigError("dipole table needs at least 4 points");
    for (std::size_t i = 0; i < R.size(); ++i) {
        if (!std::isfinite(R[i]) || !std::isfinite(D[i])) throw ConfigError("dipole table has non-finite entries");
        if (i > 0 && !(R[i] > R[i - 1])) throw ConfigError("dipole table R must be strictly increasing");
    }
    if (!(R.front() > 0.0)) throw ConfigError("dipole table R must be positive");
    if (!std::isfinite(D_at)) throw ConfigError("dipole asymptote must be finite");
    DipoleFunction d;
    d.D_at_ = D_at;
    double r0 = R.front(), r1 = R.back();
    d.table_ = std::make_shared<const Table>(
        Table{r0, r1, boost::math::interpolators::makima<std::vector<double>>(std::move(R), std::move(D))});
    return d;
}

DipoleFunction DipoleFunction::load_table(const std::string& path, double D_at) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dipole table " + path);
    std::vector<double> R, D;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double r, v;
        if (!(ls >> r)) continue;
        if (!(ls >> v)) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected two columns");
        R.push_back(r);
        D.push_back(v);
    }
    return table(std::move(R), std::move(D), D_at);
}

double DipoleFunction::operator()(double R) const {
    if (!table_) return D_at_;
    if (R >= table_->r1) return D_at_;
    if (R <= table_->r0) return table_->spline(table_->r0);
    return table_->spline(R);
}

double transition_moment(const std::vector<double>& ui, const VibrationalState& final, const DipoleFunction& D) {
    const auto& b = *final.basis;
    if (ui.size() != b.node_count()) throw ConfigError("initial state sampled on a different grid");
    auto uf = final.at_nodes();
    const auto& R = b.nodes();
    const auto& w = b.weights();
    double s = 0.0;
    if (D.is_constant()) {
        for (std::size_t q = 0; q < R.size(); ++q) s += w[q] * ui[q] * uf[q];
        s *= D.asymptote();
    } else {
        for (std::size_t q = 0; q < R.size(); ++q) s += w[q] * ui[q] * D(R[q]) * uf[q];
    }
    return s * s;
}

double transition_moment(const VibrationalState& initial, const VibrationalState& final, const DipoleFunction& D) {
    if (!initial.basis || !final.basis) throw ConfigError("state without basis");
    if (!initial.basis->same_as(*final.basis))
        throw ConfigError("initial and final states live on different boxes");
    return transition_moment(initial.at_nodes(), final, D);
}

double rate(double I, double laser_intensity) {
    if (!(laser_intensity >= 0.0)) throw ConfigError("laser intensity must be >= 0");
    return 4.0 * units::pi * units::pi * I * laser_intensity;
}

SumRule sum_rule(const VibrationalState& initial, const DipoleFunction& D,
                 const std::vector<VibrationalState>& states) {
    auto ui = initial.at_nodes();
    const auto& b = *initial.basis;
    double integral = 0.0;
    for (std::size_t q = 0; q < b.node_count(); ++q) {
        double d = D(b.nodes()[q]);
        integral += b.weights()[q] * ui[q] * ui[q] * d * d;
    }
    double sum = 0.0;
    for (const auto& s : states) {
        if (!s.basis->same_as(b)) throw ConfigError("sum rule needs states on one box");
        sum += transition_moment(ui, s, D);
    }
    return {sum, integral, sum - integral};
}

SpectrumTable build_spectrum(const VibrationalState& initial, const std::vector<VibrationalState>& finals,
                             const PotentialCurve& final_curve, const TrapSystem& final_sys,
                             const DipoleFunction& D, double laser_intensity, int threads) {
    if (!initial.basis) throw ConfigError("initial state without basis");
    SpectrumTable t;
    t.meta.omega = final_sys.omega;
    t.meta.mu = final_sys.mu;
    t.meta.laser_intensity = laser_intensity;
    t.meta.initial_v = initial.v;
    t.meta.initial_E = initial.E;
    t.rows.resize(finals.size());
    for (const auto& f : finals)
        if (!f.basis || !initial.basis->same_as(*f.basis))
            throw ConfigError("initial and final states live on different boxes");
    auto ui = initial.at_nodes();
    const double R_lo = initial.basis->R_min(), R_hi = initial.basis->R_max();

    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < finals.size(); i += stride) {
            const auto& f = finals[i];
            auto& r = t.rows[i];
            r.v = f.v;
            r.E = f.E;
            r.label = f.label;
            try {
                r.R_out = outer_turning_point(final_curve, final_sys, f.E, R_lo, R_hi);
            } catch (const Error&) {
                r.R_out = nan_v;
            }
            r.I = transition_moment(ui, f, D);
            r.Gamma = rate(r.I, laser_intensity);
        }
    };
    std::size_t nt = static_cast<std::size_t>(std::clamp(threads, 1, 256));
    nt = std::min(nt, std::max<std::size_t>(finals.size(), 1));
    if (nt == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        std::vector<std::exception_ptr> errs(nt);
        for (std::size_t k = 0; k < nt; ++k)
            pool.emplace_back([&, k] {
                try {
                    work(k, nt);
                } catch (...) {
                    errs[k] = std::current_exception();
                }
            });
        pool.clear();
        for (auto& e : errs)
            if (e) std::rethrow_exception(e);
    }
    return t;
}

int count_bound(const PotentialCurve& curve, const TrapSystem& sys, const std::shared_ptr<const RadialBasis>& basis) {
    const int n = basis->size();
    int count = std::min(n, 64);
    for (;;) {
        auto E = solve_energies(curve, sys, basis, count);
        int neg = static_cast<int>(std::count_if(E.begin(), E.end(), [](double e) { return e < 0.0; }));
        if (neg < count || count == n) return neg;
        count = std::min(n, 2 * count);
    }
}

SpectrumRun run_spectrum(const PotentialCurve& initial_curve, const PotentialCurve& final_curve,
                         const TrapSystem& sys, const DipoleFunction& D, const SpectrumSetup& setup) {
    sys.validate();
    if (setup.final_count < 0) throw ConfigError("final state count must be >= 0");
    TrapSystem fsys = sys;
    if (setup.J_final >= 0) fsys.J = setup.J_final;
    SpectrumRun run;
    run.basis = make_basis(setup.basis, {BasisTarget{&initial_curve, sys}, BasisTarget{&final_curve, fsys}});
    int n_init = count_bound(initial_curve, sys, run.basis) + 1;
    if (n_init > run.basis->size()) throw ConfigError("basis too small for the initial state");
    run.initial_states = solve_radial(initial_curve, sys, run.basis, n_init);
    run.initial = run.initial_states.back();
    if (run.initial.E < 0.0) throw NumericError("no trap-induced initial state found");

    int n_final = setup.final_count > 0 ? setup.final_count : count_bound(final_curve, fsys, run.basis);
    if (n_final < 1) throw ConfigError("final curve has no bound states in the box");
    if (n_final > run.basis->size()) throw ConfigError("more final states requested than basis functions");
    run.finals = solve_radial(final_curve, fsys, run.basis, n_final);
    run.table = build_spectrum(run.initial, run.finals, final_curve, fsys, D, setup.laser_intensity, setup.threads);
    return run;
}

const char* enhancement_name(Enhancement e) {
    switch (e) {
        case Enhancement::epa: return "EPA";
        case Enhancement::spa: return "SPA";
        case Enhancement::neutral: return "neutral";
        case Enhancement::undefined: return "undefined";
    }
    return "?";
}

namespace {

std::vector<Ratio> ratio(const SpectrumTable& spec, const SpectrumTable& ref) {
    if (spec.rows.size() != ref.rows.size())
        throw ConfigError("spectra index different numbers of final states");
    std::vector<Ratio> out;
    out.reserve(spec.rows.size());
    for (std::size_t i = 0; i < spec.rows.size(); ++i) {
        if (spec.rows[i].v != ref.rows[i].v) throw ConfigError("spectra use different final-state indexing");
        double num = spec.rows[i].I, den = ref.rows[i].I;
        Ratio r{spec.rows[i].v, nan_v, Enhancement::undefined};
        if (den > 0.0 && std::isfinite(num)) {
            r.value = num / den;
            r.kind = r.value > 1.0 ? Enhancement::epa : (r.value < 1.0 ? Enhancement::spa : Enhancement::neutral);
        }
        out.push_back(r);
    }
    return out;
}

}  // namespace

std::vector<Ratio> enhancement_f(const SpectrumTable& spec, const SpectrumTable& ref) { return ratio(spec, ref); }
std::vector<Ratio> enhancement_g(const SpectrumTable& spec, const SpectrumTable& ref) { return ratio(spec, ref); }

ConstantRegime constant_regime(const std::vector<Ratio>& f, const SpectrumTable& spec,
                               const VibrationalState& initial, const VibrationalState& initial_ref,
                               double threshold) {
    if (f.empty() || f.front().kind == Enhancement::undefined)
        throw NumericError("no constant plateau: f at v = 0 is undefined");
    if (!(threshold > 0.0)) throw ConfigError("breakdown threshold must be positive");
    ConstantRegime c;
    c.f_c = f.front().value;
    for (const auto& r : f) {
        if (r.kind == Enhancement::undefined || std::abs(r.value / c.f_c - 1.0) > 0.10) {
            c.v_break_empirical = r.v;
            break;
        }
    }
    std::vector<double> plateau;
    for (const auto& r : f) {
        if (c.v_break_empirical && r.v >= *c.v_break_empirical) break;
        plateau.push_back(r.value);
    }
    if (plateau.size() < 2) throw NumericError("no constant plateau: f varies from v = 1 on");
    std::sort(plateau.begin(), plateau.end());
    std::size_t m = plateau.size();
    c.plateau_median = m % 2 ? plateau[m / 2] : 0.5 * (plateau[m / 2 - 1] + plateau[m / 2]);
    c.plateau_warning = std::abs(c.f_c / c.plateau_median - 1.0) > 0.02;

    // Delta(R) on the quadrature nodes of the trapped state, inside both boxes.
    const auto& b = *initial.basis;
    const double R_end = std::min(b.R_max(), initial_ref.basis->R_max());
    const double sq = std::sqrt(c.f_c);
    auto u = initial.at_nodes();
    for (std::size_t q = 0; q < b.node_count(); ++q) {
        double R = b.nodes()[q];
        if (R < initial_ref.basis->R_min()) continue;
        if (R > R_end) break;
        if (std::abs(sq * initial_ref(R) - u[q]) > threshold) {
            c.R_0 = R;
            break;
        }
    }
    if (c.R_0) {
        for (const auto& r : spec.rows)
            if (std::isfinite(r.R_out) && r.R_out > *c.R_0) {
                c.v_break_predicted = r.v;
                break;
            }
    }
    return c;
}

std::vector<double> node_positions(const VibrationalState& state, double tol) {
    const auto& R = state.basis->nodes();
    auto u = state.at_nodes();
    double mx = 0.0;
    for (double x : u) mx = std::max(mx, std::abs(x));
    struct Run {
        int sign;
        std::size_t start;
    };
    std::vector<Run> runs;  // significant runs, consecutive same-sign runs merged
    int sign = 0;
    std::size_t start = 0;
    double peak = 0.0;
    auto close_run = [&]() {
        if (sign != 0 && peak >= tol * mx && (runs.empty() || runs.back().sign != sign)) runs.push_back({sign, start});
    };
    for (std::size_t q = 0; q < u.size(); ++q) {
        if (u[q] == 0.0) continue;
        int s = u[q] > 0.0 ? 1 : -1;
        if (s != sign) {
            close_run();
            sign = s;
            start = q;
            peak = 0.0;
        }
        peak = std::max(peak, std::abs(u[q]));
    }
    close_run();
    std::vector<double> out;
    for (std::size_t k = 1; k < runs.size(); ++k) {
        std::size_t q = runs[k].start;
        std::size_t p = q;
        while (p > 0 && u[p - 1] == 0.0) --p;
        if (p == 0) {
            out.push_back(R[q]);
            continue;
        }
        --p;
        double t = u[p] / (u[p] - u[q]);
        out.push_back(R[p] + t * (R[q] - R[p]));
    }
    return out;
}

Window find_window(const SpectrumTable& spec, const VibrationalState& initial, double molecular_radius) {
    Window w;
    const auto& rows = spec.rows;
    auto lg = [](double I) { return I > 0.0 ? std::log10(I) : -std::numeric_limits<double>::infinity(); };
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        double c = lg(rows[i].I);
        if (c < lg(rows[i - 1].I) - 1.0 && c < lg(rows[i + 1].I) - 1.0) w.dips.push_back(rows[i].v);
    }
    auto nodes = node_positions(initial);
    if (!nodes.empty() && nodes.back() > molecular_radius) w.R_x = nodes.back();
    return w;
}

}  // namespace trapspec
