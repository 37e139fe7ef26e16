#include "trapspec/radial_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "banded.hpp"
#include "trapspec/error.hpp"

namespace trapspec {

namespace {

constexpr int aux_points = 20000;

double resolve_E_cut(const BasisSpec& spec, const std::vector<BasisTarget>& targets) {
    if (!std::isnan(spec.E_cut)) return spec.E_cut;
    double e = 0.0;
    for (const auto& t : targets) e = std::max(e, 10.0 * t.sys.omega);
    return e;
}

// Geometric plus uniform sample points on [lo, hi].
std::vector<double> aux_grid(double lo, double hi) {
    std::vector<double> g;
    g.reserve(2 * aux_points + 2);
    for (int i = 0; i <= aux_points; ++i) g.push_back(lo + (hi - lo) * i / aux_points);
    double g0 = std::max(lo, 1e-7 * hi);
    double ratio = std::log(hi / g0);
    for (int i = 0; i <= aux_points; ++i) g.push_back(g0 * std::exp(ratio * i / aux_points));
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    while (!g.empty() && g.front() < lo) g.erase(g.begin());
    if (g.front() > lo) g.insert(g.begin(), lo);
    g.back() = hi;
    return g;
}

// Radius inside which the interaction exceeds 1e4 times the working energy
// scale; the wavefunction is negligible there, so it becomes the inner wall.
double automatic_wall(const PotentialCurve& curve, double lo, double hi, double scale) {
    double g0 = std::max(lo, 1e-7 * hi);
    const int n = 4000;
    std::vector<double> R(n + 1), V(n + 1);
    double ratio = std::log(hi / g0);
    std::size_t imin = 0;
    for (int i = 0; i <= n; ++i) {
        R[i] = g0 * std::exp(ratio * i / n);
        V[i] = curve(R[i]);
        if (std::isfinite(V[i]) && (!std::isfinite(V[imin]) || V[i] < V[imin])) imin = i;
    }
    double clamp = 1e4 * std::max(scale, std::abs(std::isfinite(V[imin]) ? V[imin] : 0.0));
    std::size_t i = imin;
    while (i > 0 && V[i - 1] < clamp) --i;
    if (i == 0) return lo;
    auto f = [&](double r) { return curve(r) - clamp; };
    boost::math::tools::eps_tolerance<double> tol(30);
    boost::uintmax_t it = 100;
    auto br = boost::math::tools::bisect(f, R[i - 1], R[i], tol, it);
    return 0.5 * (br.first + br.second);
}

}  // namespace

void BasisSpec::validate() const {
    if (!(R_min >= 0.0)) throw ConfigError("R_min must be >= 0");
    if (R_max != 0.0 && !(R_max > R_min)) throw ConfigError("R_max must exceed R_min");
    if (size < 10) throw ConfigError("basis size must be >= 10");
    if (order < 6 || order > 15) throw ConfigError("B-spline order must be in [6, 15]");
    if (!(grading >= 0.0 && grading < 1.0)) throw ConfigError("grading must be in [0, 1)");
    if (!std::isnan(E_cut) && !std::isfinite(E_cut)) throw ConfigError("E_cut must be finite");
}

const char* label_name(StateLabel l) {
    switch (l) {
    case StateLabel::bound: return "bound";
    case StateLabel::trap_induced: return "trap_induced";
    case StateLabel::continuum: return "continuum";
    }
    return "?";
}

RadialBasis::RadialBasis(BSplineBasis splines) : splines_(std::move(splines)) {
    using G = boost::math::quadrature::gauss<double, quad_points>;
    const auto& xa = G::abscissa();
    const auto& wa = G::weights();
    std::vector<double> gx, gw;
    for (std::size_t i = 0; i < xa.size(); ++i) {
        gx.push_back(-xa[i]);
        gw.push_back(wa[i]);
        if (xa[i] != 0.0) {
            gx.push_back(xa[i]);
            gw.push_back(wa[i]);
        }
    }
    std::vector<std::size_t> idx(gx.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return gx[a] < gx[b]; });

    const int k = order();
    const auto& t = splines_.knots();
    std::vector<double> v(k), d(k);
    for (int s = k - 1; s < splines_.size(); ++s) {
        double a = t[s], b = t[s + 1];
        if (!(b > a)) continue;
        double h = 0.5 * (b - a), c = 0.5 * (a + b);
        for (auto j : idx) {
            double x = c + h * gx[j];
            splines_.evaluate(s, x, v.data(), d.data());
            nodes_.push_back(x);
            weights_.push_back(h * gw[j]);
            first_.push_back(s - k + 1 - 1);
            vals_.insert(vals_.end(), v.begin(), v.end());
            ders_.insert(ders_.end(), d.begin(), d.end());
        }
    }
}

double RadialBasis::evaluate(const std::vector<double>& coef, double R) const {
    if (R < R_min() || R > R_max()) return 0.0;
    const int k = order();
    int s = splines_.span(R);
    double v[16];
    splines_.evaluate(s, R, v, nullptr);
    int f = s - k + 1 - 1;
    double u = 0.0;
    for (int a = 0; a < k; ++a) {
        int r = f + a;
        if (r >= 0 && r < size()) u += coef[r] * v[a];
    }
    return u;
}

std::vector<double> RadialBasis::at_nodes(const std::vector<double>& coef) const {
    const int k = order(), n = size();
    std::vector<double> u(nodes_.size(), 0.0);
    for (std::size_t q = 0; q < nodes_.size(); ++q) {
        const double* v = values(q);
        int f = first_[q];
        double s = 0.0;
        for (int a = 0; a < k; ++a) {
            int r = f + a;
            if (r >= 0 && r < n) s += coef[r] * v[a];
        }
        u[q] = s;
    }
    return u;
}

bool RadialBasis::same_as(const RadialBasis& other) const {
    return this == &other ||
           (order() == other.order() && splines_.knots() == other.splines_.knots());
}

double outer_turning_point(const PotentialCurve& curve, const TrapSystem& sys, double E,
                           double R_lo, double R_hi) {
    if (!(R_hi > R_lo) || !(R_hi > 0.0)) throw DomainError("empty turning-point search range");
    auto f = [&](double R) { return effective_potential(curve, sys, R) - E; };
    if (!(f(R_hi) > 0.0)) throw DomainError("no outer turning point inside the search range");
    double lo = std::max(R_lo, std::max(curve.inner_wall(), 1e-9 * R_hi));
    const int n = 4000;
    double ratio = std::log(R_hi / lo);
    double prev = R_hi;
    for (int i = n - 1; i >= 0; --i) {
        double R = lo * std::exp(ratio * i / n);
        if (i == 0) R = lo;
        double fr = f(R);
        if (fr <= 0.0) {
            if (fr == 0.0) return R;
            boost::math::tools::eps_tolerance<double> tol(40);
            boost::uintmax_t it = 200;
            auto br = boost::math::tools::bisect(f, R, prev, tol, it);
            return 0.5 * (br.first + br.second);
        }
        prev = R;
    }
    throw DomainError("energy lies below the effective potential everywhere in the range");
}

double default_R_max(const PotentialCurve& curve, const TrapSystem& sys, double E_cut) {
    if (!(sys.omega > 0.0)) throw ConfigError("R_max must be given explicitly when omega = 0");
    double a = sys.a_ho();
    double r = 8.0 * a;
    if (E_cut > 0.0) {
        double hi = 4.0 * std::sqrt(2.0 * E_cut / sys.mu) / sys.omega + 8.0 * a;
        try {
            r = std::max(r, 3.0 * outer_turning_point(curve, sys, E_cut, 0.0, hi));
        } catch (const DomainError&) {
        }
    }
    return r;
}

std::shared_ptr<const RadialBasis> make_basis(const BasisSpec& spec, const std::vector<BasisTarget>& targets) {
    spec.validate();
    if (targets.empty()) throw ConfigError("basis needs at least one target curve");
    for (const auto& t : targets) t.sys.validate();
    const double E_cut = resolve_E_cut(spec, targets);
    double R_max = spec.R_max;
    if (R_max == 0.0)
        for (const auto& t : targets) R_max = std::max(R_max, default_R_max(*t.curve, t.sys, E_cut));
    double R_lo = spec.R_min;
    for (const auto& t : targets) R_lo = std::max(R_lo, t.curve->inner_wall());
    if (!(R_max > R_lo)) throw ConfigError("box is empty after applying the inner wall");

    double scale = std::abs(E_cut);
    for (const auto& t : targets) scale = std::max(scale, 10.0 * t.sys.omega);
    double R_wall = R_lo;
    for (const auto& t : targets) R_wall = std::max(R_wall, automatic_wall(*t.curve, R_lo, R_max, scale));
    R_lo = R_wall;

    const int k = spec.order;
    std::vector<double> bps;
    for (double b : spec.breakpoints)
        if (b > R_lo && b < R_max) bps.push_back(b);
    for (const auto& t : targets)
        for (double b : t.curve->breakpoints())
            if (b > R_lo && b < R_max) bps.push_back(b);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    const int n_int = spec.size - k + 3 - static_cast<int>(bps.size()) * (k - 3);
    if (n_int < 2 + static_cast<int>(bps.size()))
        throw ConfigError("basis size too small for the order and breakpoints");

    // Knot density: local wavenumber (capped near walls) plus a uniform floor.
    std::vector<double> R = aux_grid(R_lo, R_max);
    std::vector<double> kloc(R.size(), 0.0);
    for (const auto& t : targets) {
        double vmin = std::numeric_limits<double>::infinity();
        std::vector<double> ve(R.size());
        for (std::size_t i = 0; i < R.size(); ++i) {
            double r = std::max(R[i], 1e-300);
            ve[i] = effective_potential(*t.curve, t.sys, r);
            if (std::isfinite(ve[i])) vmin = std::min(vmin, ve[i]);
        }
        double kcap = 2.0 * std::sqrt(2.0 * t.sys.mu * std::max(E_cut - vmin, 0.0));
        for (std::size_t i = 0; i < R.size(); ++i) {
            double kl = std::isfinite(ve[i]) ? std::sqrt(2.0 * t.sys.mu * std::abs(E_cut - ve[i])) : kcap;
            kloc[i] = std::max(kloc[i], std::min(kl, kcap));
        }
    }
    std::vector<double> cdf(R.size(), 0.0);
    for (std::size_t i = 1; i < R.size(); ++i)
        cdf[i] = cdf[i - 1] + 0.5 * (kloc[i] + kloc[i - 1]) * (R[i] - R[i - 1]);
    const double phase = cdf.back();
    const double L = R_max - R_lo;
    const double g = phase > 0.0 && std::isfinite(phase) ? spec.grading : 0.0;
    for (std::size_t i = 0; i < R.size(); ++i)
        cdf[i] = (g > 0.0 ? g * cdf[i] / phase : 0.0) + (1.0 - g) * (R[i] - R_lo) / L;

    std::vector<double> breaks(n_int + 1);
    breaks.front() = R_lo;
    breaks.back() = R_max;
    std::size_t j = 0;
    for (int i = 1; i < n_int; ++i) {
        double target = static_cast<double>(i) / n_int;
        while (j + 1 < cdf.size() && cdf[j + 1] < target) ++j;
        double c0 = cdf[j], c1 = cdf[j + 1];
        double w = c1 > c0 ? (target - c0) / (c1 - c0) : 0.0;
        breaks[i] = R[j] + w * (R[j + 1] - R[j]);
    }
    for (double b : bps) {
        auto it = std::lower_bound(breaks.begin() + 1, breaks.end() - 1, b);
        auto best = it;
        if (it != breaks.begin() + 1 && (it == breaks.end() - 1 || b - *(it - 1) < *it - b)) best = it - 1;
        *best = b;
    }
    for (std::size_t i = 1; i < breaks.size(); ++i)
        if (!(breaks[i] > breaks[i - 1])) throw ConfigError("breakpoints too close for the basis size");
    auto knots = clamped_knots(breaks, k, bps, k - 2);
    return std::make_shared<const RadialBasis>(BSplineBasis(std::move(knots), k));
}

namespace {

struct Assembled {
    detail::SymBand H, S;
};

Assembled assemble(const PotentialCurve& curve, const TrapSystem& sys, const RadialBasis& basis) {
    const int n = basis.size(), k = basis.order();
    Assembled m{detail::SymBand(n, k - 1), detail::SymBand(n, k - 1)};
    const double kin = 0.5 / sys.mu;
    for (std::size_t q = 0; q < basis.node_count(); ++q) {
        double R = basis.nodes()[q], w = basis.weights()[q];
        double V = effective_potential(curve, sys, R);
        if (!std::isfinite(V)) throw ConfigError("potential is infinite inside the basis domain");
        const double* b = basis.values(q);
        const double* d = basis.derivs(q);
        int f = basis.first(q);
        for (int a = 0; a < k; ++a) {
            int i = f + a;
            if (i < 0 || i >= n) continue;
            for (int c = a; c < k; ++c) {
                int jj = f + c;
                if (jj < 0 || jj >= n) continue;
                m.S.upper(i, jj) += w * b[a] * b[c];
                m.H.upper(i, jj) += w * (kin * d[a] * d[c] + V * b[a] * b[c]);
            }
        }
    }
    return m;
}

void fix_sign_and_count(VibrationalState& s) {
    auto u = s.at_nodes();
    double mx = 0.0;
    for (double x : u) mx = std::max(mx, std::abs(x));
    for (double x : u) {
        if (std::abs(x) >= 1e-6 * mx) {
            if (x < 0.0) {
                for (auto& c : s.coef) c = -c;
            }
            break;
        }
    }
    s.nodes = count_nodes(s);
}

}  // namespace

std::vector<VibrationalState> solve_radial(const PotentialCurve& curve, const TrapSystem& sys,
                                           std::shared_ptr<const RadialBasis> basis, int count) {
    sys.validate();
    if (!basis) throw ConfigError("missing basis");
    const int n = basis->size();
    if (count < 1 || count > n) throw ConfigError("state count must be in [1, N]");
    auto m = assemble(curve, sys, *basis);
    auto eig = detail::generalized_eigen(m.H, m.S, count, true);
    if (eig.m < count) throw NumericError("eigensolver returned fewer states than requested");
    std::vector<VibrationalState> out(count);
    for (int i = 0; i < count; ++i) {
        auto& s = out[i];
        s.E = eig.values[i];
        s.J = sys.J;
        s.basis = basis;
        s.coef.assign(eig.vectors.begin() + static_cast<std::ptrdiff_t>(i) * n,
                      eig.vectors.begin() + static_cast<std::ptrdiff_t>(i + 1) * n);
        fix_sign_and_count(s);
    }
    std::stable_sort(out.begin(), out.end(), [](const VibrationalState& a, const VibrationalState& b) {
        double tol = 1e-14 * std::max(std::abs(a.E), std::abs(b.E));
        if (std::abs(a.E - b.E) > tol) return a.E < b.E;
        return a.nodes < b.nodes;
    });
    for (int i = 0; i < count; ++i) {
        out[i].v = i;
        out[i].label = out[i].E < 0.0 ? StateLabel::bound
                                      : (sys.omega > 0.0 ? StateLabel::trap_induced : StateLabel::continuum);
    }
    return out;
}

std::vector<VibrationalState> solve_radial(const PotentialCurve& curve, const TrapSystem& sys,
                                           const BasisSpec& spec, int count) {
    auto basis = make_basis(spec, {BasisTarget{&curve, sys}});
    return solve_radial(curve, sys, basis, count);
}

std::vector<double> solve_energies(const PotentialCurve& curve, const TrapSystem& sys,
                                   std::shared_ptr<const RadialBasis> basis, int count) {
    sys.validate();
    if (!basis) throw ConfigError("missing basis");
    if (count < 1 || count > basis->size()) throw ConfigError("state count must be in [1, N]");
    auto m = assemble(curve, sys, *basis);
    auto eig = detail::generalized_eigen(m.H, m.S, count, false);
    if (eig.m < count) throw NumericError("eigensolver returned fewer states than requested");
    return eig.values;
}

int count_nodes(const VibrationalState& state, double tol) {
    auto u = state.at_nodes();
    double mx = 0.0;
    for (double x : u) mx = std::max(mx, std::abs(x));
    // Runs of equal sign; runs whose peak stays below tol * max are wiggle.
    std::vector<int> signs;
    int sign = 0;
    double peak = 0.0;
    auto close_run = [&]() {
        if (sign != 0 && peak >= tol * mx && (signs.empty() || signs.back() != sign)) signs.push_back(sign);
    };
    for (double x : u) {
        if (x == 0.0) continue;
        int s = x > 0.0 ? 1 : -1;
        if (s != sign) {
            close_run();
            sign = s;
            peak = 0.0;
        }
        peak = std::max(peak, std::abs(x));
    }
    close_run();
    return signs.empty() ? 0 : static_cast<int>(signs.size()) - 1;
}

Classification classify_states(const std::vector<VibrationalState>& states, const TrapSystem& sys) {
    Classification c;
    for (std::size_t i = 0; i < states.size(); ++i) {
        StateLabel l = states[i].E < 0.0 ? StateLabel::bound
                                         : (sys.omega > 0.0 ? StateLabel::trap_induced : StateLabel::continuum);
        c.labels.push_back(l);
        if (l != StateLabel::bound && !c.first_trap_induced) c.first_trap_induced = static_cast<int>(i);
    }
    return c;
}

}  // namespace trapspec
