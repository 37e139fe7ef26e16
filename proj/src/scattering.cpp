#include "trapspec/scattering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

namespace trapspec {

namespace {

using std::numbers::pi;

// Lowest positive box energy; the eigenvalue is polished by inverse iteration
// since the plain banded solve carries an absolute error of order eps*||H||.
double lowest_positive(const PotentialCurve& curve, double mu, const std::shared_ptr<const RadialBasis>& basis) {
    TrapSystem sys{mu, 0, 0.0};
    int count = std::min(16, basis->size());
    while (true) {
        auto E = solve_energies(curve, sys, basis, count);
        for (int i = 0; i < count; ++i) {
            if (E[i] > 0.0) {
                auto st = solve_radial(curve, sys, basis, std::min(i + 2, basis->size()));
                for (const auto& s : st)
                    if (s.E > 0.0) return s.E;
            }
        }
        if (count == basis->size()) throw NumericError("no positive box state");
        count = std::min(2 * count, basis->size());
    }
}

// a(R) = a + c/R^2 + d/R^3 through three points.
double richardson3(const ScatteringPoint& p, const ScatteringPoint& q, const ScatteringPoint& r) {
    auto row = [](const ScatteringPoint& s) {
        return std::array<double, 4>{1.0, 1.0 / (s.R_max * s.R_max), 1.0 / (s.R_max * s.R_max * s.R_max), s.a};
    };
    std::array<std::array<double, 4>, 3> m{row(p), row(q), row(r)};
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int i = c + 1; i < 3; ++i)
            if (std::abs(m[i][c]) > std::abs(m[piv][c])) piv = i;
        std::swap(m[c], m[piv]);
        for (int i = 0; i < 3; ++i) {
            if (i == c) continue;
            double f = m[i][c] / m[c][c];
            for (int j = c; j < 4; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return m[0][3] / m[0][0];
}

// a(R) = a + c/R^2 through two points.
double richardson2(const ScatteringPoint& p, const ScatteringPoint& q) {
    double w1 = p.R_max * p.R_max, w2 = q.R_max * q.R_max;
    return (w2 * q.a - w1 * p.a) / (w2 - w1);
}

}  // namespace

double interaction_length(const PotentialCurve& curve, double mu) {
    DispersionTerm lead = curve.leading_tail();
    if (lead.n > 2 && lead.Cn > 0.0) return std::pow(2.0 * mu * lead.Cn, 1.0 / (lead.n - 2));
    double ext = curve.short_range_extent();
    if (ext > 0.0) return ext;
    return 1.0;
}

std::vector<double> default_schedule(const PotentialCurve& curve, double mu) {
    double L = 50.0 * interaction_length(curve, mu);
    return {L, 2 * L, 4 * L, 8 * L, 16 * L};
}

ScatteringResult scattering_length(const PotentialCurve& curve, double mu, const std::vector<double>& schedule,
                                   const ScatteringOptions& opt) {
    if (!(mu > 0.0)) throw DomainError("reduced mass must be positive");
    if (schedule.size() < 3) throw ConfigError("scattering-length schedule needs at least three boxes");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (!(schedule[i] > schedule[i - 1])) throw ConfigError("schedule must be increasing");
    if (!(opt.tol > 0.0)) throw ConfigError("tolerance must be positive");
    const double R0 = schedule.front();
    ScatteringResult res;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        BasisSpec spec;
        spec.R_max = schedule[i];
        spec.order = opt.order;
        spec.grading = opt.grading;
        spec.E_cut = 0.0;
        spec.size = opt.size + static_cast<int>(std::ceil((1.0 - opt.grading) * opt.size * (schedule[i] / R0 - 1.0)));
        TrapSystem sys{mu, 0, 0.0};
        auto basis = make_basis(spec, {BasisTarget{&curve, sys}});
        double E0 = lowest_positive(curve, mu, basis);
        double k = std::sqrt(2.0 * mu * E0);
        res.history.push_back({basis->R_max(), E0, basis->R_max() - pi / k});
        res.k = k;
        if (res.history.size() < 3) continue;
        const auto& h = res.history;
        std::size_t n = h.size();
        double A1 = richardson2(h[n - 3], h[n - 2]);
        double A2 = richardson2(h[n - 2], h[n - 1]);
        double a = richardson3(h[n - 3], h[n - 2], h[n - 1]);
        if (std::abs(A2 - A1) <= opt.tol * std::max(std::abs(a), 1.0)) {
            res.a_sc = a;
            return res;
        }
    }
    throw ConvergenceError("scattering length did not converge over the R_max schedule "
                           "(near-threshold resonance, |a| comparable to R_max?)",
                           res.history);
}

namespace {

struct Matching {
    double num, den, k;
};

Matching match(const PotentialCurve& curve, double mu, double E) {
    if (!(mu > 0.0)) throw DomainError("reduced mass must be positive");
    if (!(E > 0.0) || !std::isfinite(E)) throw DomainError("phase shift needs E > 0");
    const double k = std::sqrt(2.0 * mu * E);
    const double beta = interaction_length(curve, mu);
    double R1 = std::max(40.0 * beta, 2.0 * curve.short_range_extent());
    if (curve.leading_tail().n == 0) R1 = std::max(2.0 * curve.short_range_extent(), 1.0);
    if (k * R1 < 1e-7) throw DomainError("collision energy below the numerical floor");
    const double R2 = R1 + std::min(pi / (2.0 * k), R1);

    // Start of integration: hard wall, origin for potentials finite at R -> 0,
    // otherwise deep enough inside the repulsive core (about 30 e-folds).
    double Rs = curve.inner_wall();
    if (Rs == 0.0) {
        double tiny = 1e-6 * std::max(beta, 1.0);
        double v0 = curve(tiny);
        if (v0 < 0.0 && std::abs(v0) > 1e6 * E && curve.model() != PotentialCurve::Model::square_well &&
            curve.model() != PotentialCurve::Model::morse)
            throw DomainError("potential has no repulsive core; add a hard wall");
        if (v0 > E && !std::isinf(v0)) {
            double Rt = tiny;
            while (curve(Rt) > E && Rt < R1) Rt *= 1.01;
            double s = 0.0, R = Rt;
            while (s < 30.0 && R > tiny) {
                double Rn = R * 0.999;
                double kap = std::sqrt(2.0 * mu * std::max(curve(Rn) - E, 0.0));
                s += kap * (R - Rn);
                R = Rn;
            }
            Rs = s >= 30.0 ? R : 0.0;
        }
    }

    using state = std::array<double, 2>;
    auto rhs = [&](const state& y, state& dy, double R) {
        dy[0] = y[1];
        dy[1] = 2.0 * mu * (curve(std::max(R, 1e-300)) - E) * y[0];
    };
    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<state>>(1e-13, 1e-12);
    state y{0.0, 1.0};
    std::vector<double> stops;
    for (double b : curve.breakpoints())
        if (b > Rs && b < R1) stops.push_back(b);
    stops.push_back(R1);
    double R = Rs;
    double dt = std::min(1e-3, 1e-3 * std::max(beta, 1.0));
    for (double stop : stops) {
        ode::integrate_adaptive(stepper, rhs, y, R, stop, dt);
        R = stop;
        double nrm = std::hypot(y[0], y[1] / std::max(k, 1e-300));
        y[0] /= nrm;
        y[1] /= nrm;
    }
    double u1 = y[0];
    ode::integrate_adaptive(stepper, rhs, y, R1, R2, dt);
    double u2 = y[0];
    Matching m;
    m.num = u1 * std::sin(k * R2) - u2 * std::sin(k * R1);
    m.den = u2 * std::cos(k * R1) - u1 * std::cos(k * R2);
    m.k = k;
    return m;
}

}  // namespace

double phase_shift(const PotentialCurve& curve, double mu, double E) {
    Matching m = match(curve, mu, E);
    double d = std::atan2(m.num, m.den);
    if (d > pi / 2) d -= pi;
    if (d <= -pi / 2) d += pi;
    return d;
}

double energy_dependent_a(const PotentialCurve& curve, double mu, double E) {
    Matching m = match(curve, mu, E);
    double h = std::hypot(m.num, m.den);
    if (std::abs(m.den) < 1e-8 * h) throw ResonanceError("phase shift at pi/2: a_E diverges");
    return -m.num / (m.den * m.k);
}

}  // namespace trapspec

namespace trapspec {

MassTuning tune_mass(const PotentialCurve& curve, double mu0, double target_a, double rel_span,
                     const ScatteringOptions& opt) {
    if (!(mu0 > 0.0) || !(rel_span > 0.0 && rel_span < 1.0) || !std::isfinite(target_a))
        throw ConfigError("mass tuning needs mu0 > 0, 0 < rel_span < 1 and a finite target");
    auto schedule = default_schedule(curve, mu0);
    if (4.0 * std::abs(target_a) > schedule.front()) {
        double s = 4.0 * std::abs(target_a) / schedule.front();
        for (double& R : schedule) R *= s;
    }
    // theta = atan(a / L) is continuous modulo pi through the poles of a(mu),
    // so sin(2 (theta - theta_t)) is continuous in mu. Its zeros are the target
    // and the conjugate a = -L^2 / target; only the former is accepted.
    const double L = interaction_length(curve, mu0);
    const double theta_t = std::atan(target_a / L);
    auto theta = [&](double mu) {
        try {
            return std::atan(scattering_length(curve, mu, schedule, opt).a_sc / L);
        } catch (const ConvergenceError&) {
            return 0.5 * std::numbers::pi;  // |a| beyond the box schedule
        }
    };
    auto h = [&](double mu) { return std::sin(2.0 * (theta(mu) - theta_t)); };

    constexpr int scan = 24;
    std::vector<double> mus(scan + 1), hs(scan + 1), cs(scan + 1);
    for (int i = 0; i <= scan; ++i) {
        mus[i] = mu0 * (1.0 - rel_span + 2.0 * rel_span * i / scan);
        double th = theta(mus[i]);
        hs[i] = std::sin(2.0 * (th - theta_t));
        cs[i] = std::cos(2.0 * (th - theta_t));
    }
    std::vector<double> roots;
    for (int i = 0; i < scan; ++i) {
        if (cs[i] + cs[i + 1] <= 0.0) continue;  // bracket around the conjugate zero
        if (hs[i] == 0.0) {
            roots.push_back(mus[i]);
            continue;
        }
        if (hs[i] * hs[i + 1] > 0.0) continue;
        std::uintmax_t it = 80;
        auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::abs(x); };
        auto br = boost::math::tools::toms748_solve(h, mus[i], mus[i + 1], hs[i], hs[i + 1], tol, it);
        roots.push_back(0.5 * (br.first + br.second));
    }
    std::optional<MassTuning> best;
    for (double mu : roots) {
        if (std::cos(2.0 * (theta(mu) - theta_t)) < 0.0) continue;
        if (!best || std::abs(mu - mu0) < std::abs(best->mu - mu0))
            best = MassTuning{mu, scattering_length(curve, mu, schedule, opt).a_sc};
    }
    if (!best) throw NumericError("no mass in range reproduces the target scattering length");
    return *best;
}

}  // namespace trapspec
