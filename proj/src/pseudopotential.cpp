#include "trapspec/pseudopotential.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/math/tools/roots.hpp>

#include "trapspec/error.hpp"
#include "trapspec/special_functions.hpp"

namespace trapspec {

namespace {

using std::numbers::pi;

// For x >= 0 the Gamma quotient is written with positive arguments:
// xi = -tan(pi a) G / 2, a = 3/4 - x/2, G = Gamma(1/4 + x/2) / Gamma(3/4 + x/2).
struct Reflected {
    double G, s, c, dpsi;
};

Reflected reflected(double x) {
    double p = 0.25 + 0.5 * x, q = 0.75 + 0.5 * x;
    double a = 0.75 - 0.5 * x;
    Reflected r;
    r.G = boost::math::tgamma_ratio(p, q);
    r.s = boost::math::sin_pi(a);
    r.c = boost::math::cos_pi(a);
    r.dpsi = boost::math::digamma(p) - boost::math::digamma(q);
    return r;
}

// atan(xi(x)) without forming xi, continuous across the poles of xi.
double phase_of_x(double x) {
    if (x < 0.0) return std::atan(xi_of_x(x));
    Reflected r = reflected(x);
    return std::atan2(-r.G * r.s * (r.c < 0.0 ? -1.0 : 1.0), 2.0 * std::abs(r.c));
}

double solve_in(double lo, double hi, double flo, double fhi, double theta) {
    auto f = [theta](double x) { return std::sin(phase_of_x(x) - theta); };
    boost::math::tools::eps_tolerance<double> tol(50);
    boost::uintmax_t it = 300;
    auto br = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, it);
    return 0.5 * (br.first + br.second);
}

double printed_dx_dxi(double x) {
    double a = 0.75 - 0.5 * x, b = 0.25 - 0.5 * x;
    return 4.0 * boost::math::tgamma(a) /
           (boost::math::tgamma(b) * (boost::math::digamma(a) - boost::math::digamma(b)));
}

const std::array<double, max_series_order + 1>& coefficients() {
    static const std::array<double, max_series_order + 1> table = [] {
        constexpr int M = max_series_order;
        // xi(t) with t = (3/2 - x)/2:
        // xi = -sqrt(pi) t/(1-2t) exp(-2 ln2 t + sum_k (-1)^k (2^k-2) zeta(k) t^k / k)
        std::array<double, M + 1> g{}, h{}, c{};
        g[1] = -2.0 * std::numbers::ln2;
        for (int k = 2; k <= M; ++k)
            g[k] = ((k % 2) ? -1.0 : 1.0) * (std::ldexp(1.0, k) - 2.0) * std::riemann_zeta(k) / k;
        h[0] = 1.0;
        for (int n = 1; n <= M; ++n) {
            double s = 0.0;
            for (int k = 1; k <= n; ++k) s += k * g[k] * h[n - k];
            h[n] = s / n;
        }
        for (int j = 0; j < M; ++j) {
            double s = 0.0;
            for (int i = 0; i <= j; ++i) s += std::ldexp(h[i], j - i);
            c[j + 1] = -std::sqrt(pi) * s;
        }
        // Reversion: t(xi) = sum d_m xi^m with xi(t(xi)) = xi.
        std::array<double, M + 1> d{};
        d[1] = 1.0 / c[1];
        for (int m = 2; m <= M; ++m) {
            std::array<double, M + 1> pw{}, acc{};
            for (int i = 1; i < m; ++i) pw[i] = d[i];
            for (int k = 1; k <= m; ++k) {
                for (int i = 0; i <= m; ++i) acc[i] += c[k] * pw[i];
                std::array<double, M + 1> nx{};
                for (int i = 1; i <= m; ++i)
                    for (int j = 1; i + j <= m; ++j) nx[i + j] += pw[i] * d[j];
                pw = nx;
            }
            d[m] = -acc[m] / c[1];
        }
        std::array<double, M + 1> t{};
        t[0] = 1.5;
        for (int k = 1; k <= M; ++k) t[k] = -2.0 * d[k];
        return t;
    }();
    return table;
}

}  // namespace

double PseudoModel::xi() const {
    if (std::isinf(a)) return a;
    return a / sys.a_ho();
}

double xi_of_x(double x) {
    if (!std::isfinite(x)) throw DomainError("scaled energy must be finite");
    if (x < 0.0) {
        double a = 0.75 - 0.5 * x;
        return 0.5 * boost::math::tgamma_ratio(a - 0.5, a);
    }
    Reflected r = reflected(x);
    if (r.c == 0.0) return std::numeric_limits<double>::infinity();
    return -0.5 * r.G * r.s / r.c;
}

double dx_dxi(double x) {
    if (x < 0.0) {
        double a = 0.75 - 0.5 * x;
        double xi = 0.5 * boost::math::tgamma_ratio(a - 0.5, a);
        return 2.0 / (xi * (boost::math::digamma(a) - boost::math::digamma(a - 0.5)));
    }
    Reflected r = reflected(x);
    return 4.0 * r.c * r.c / (r.G * (pi - r.s * r.c * r.dpsi));
}

double xi2_dx_dxi(double x) {
    if (x < 0.0) {
        double a = 0.75 - 0.5 * x;
        double xi = 0.5 * boost::math::tgamma_ratio(a - 0.5, a);
        return 2.0 * xi / (boost::math::digamma(a) - boost::math::digamma(a - 0.5));
    }
    Reflected r = reflected(x);
    return r.G * r.s * r.s / (pi - r.s * r.c * r.dpsi);
}

double dx_dxi_richardson(double x0) {
    constexpr int levels = 7;  // eps = 1e-2 / 2^j, down to ~1.6e-4
    double T[levels][levels];
    for (int j = 0; j < levels; ++j) {
        double eps = 1e-2 / std::ldexp(1.0, j);
        T[j][0] = 0.5 * (printed_dx_dxi(x0 + eps) + printed_dx_dxi(x0 - eps));
        double f = 1.0;
        for (int k = 1; k <= j; ++k) {
            f *= 4.0;
            T[j][k] = T[j][k - 1] + (T[j][k - 1] - T[j - 1][k - 1]) / (f - 1.0);
        }
    }
    return T[levels - 1][levels - 1];
}

double trap_branch_root(double xi, int n) {
    if (n < 0) throw DomainError("branch index must be >= 0");
    if (std::isnan(xi)) throw DomainError("xi is NaN");
    double lo = 2.0 * n + 0.5, hi = 2.0 * n + 2.5;
    if (xi == 0.0) return 2.0 * n + 1.5;
    if (std::isinf(xi)) return xi > 0 ? hi : lo;
    double theta = std::atan(xi);
    return solve_in(lo, hi, -std::cos(theta), std::cos(theta), theta);
}

double molecular_root(double xi) {
    if (!(xi > 0.0)) throw DomainError("molecular root exists only for xi > 0");
    if (std::isinf(xi)) return 0.5;
    double theta = std::atan(xi);
    double lo = -1.0 / (xi * xi) - 1.0;
    while (std::sin(phase_of_x(lo) - theta) >= 0.0) lo = 2.0 * lo - 1.0;
    return solve_in(lo, 0.5, std::sin(phase_of_x(lo) - theta), std::cos(theta), theta);
}

std::vector<double> energy_roots(double xi, int count) {
    if (count < 1) throw DomainError("root count must be >= 1");
    if (std::isnan(xi)) throw DomainError("xi is NaN");
    std::vector<double> x;
    if (std::isinf(xi)) {
        for (int n = 0; n < count; ++n) x.push_back(2.0 * n + 0.5);
        return x;
    }
    if (xi > 0.0) x.push_back(molecular_root(xi));
    for (int n = 0; static_cast<int>(x.size()) < count; ++n) x.push_back(trap_branch_root(xi, n));
    return x;
}

double normalization(const PseudoModel& model, const PseudoState& state) {
    const double mw = model.sys.mu * model.sys.omega;
    if (model.xi() == 0.0) {
        int n = static_cast<int>(std::lround((state.x - 1.5) / 2.0));
        double a = model.sys.a_ho();
        return 2.0 * std::exp(std::lgamma(n + 1.0) - std::lgamma(n + 1.5)) / (a * a * a);
    }
    return 8.0 * pi * pi * std::pow(mw, 1.5) * xi2_dx_dxi(state.x);
}

PseudoState pseudo_state(const PseudoModel& model, double x, int n_t) {
    if (!(model.sys.omega > 0.0)) throw DomainError("pseudopotential model needs omega > 0");
    PseudoState s;
    s.n_t = n_t;
    s.x = x;
    s.nu = 0.5 * x - 0.75;
    s.oscillator = model.xi() == 0.0;
    s.A2 = normalization(model, s);
    return s;
}

std::vector<PseudoState> pseudo_states(const PseudoModel& model, int count) {
    auto roots = energy_roots(model.xi(), count);
    std::vector<PseudoState> out;
    for (std::size_t i = 0; i < roots.size(); ++i) out.push_back(pseudo_state(model, roots[i], static_cast<int>(i)));
    return out;
}

double pseudo_wavefunction(const PseudoState& state, const PseudoModel& model, double R) {
    if (!(R >= 0.0)) throw DomainError("pseudo wavefunction needs R >= 0");
    const double xi = model.xi();
    if (std::isinf(xi)) throw DomainError("wavefunction at unitarity needs a finite scattering length");
    const double a_ho = model.sys.a_ho();
    const double mw = model.sys.mu * model.sys.omega;
    const double x = state.x;
    const double alpha = 0.75 - 0.5 * x;  // -nu
    // Psi = C R exp(-z/2) U(-nu, 3/2, z) with C = pi^(-3/2) A Gamma(-nu) / 2.
    double C;
    if (std::abs(xi) < 1.0) {
        double b = 0.25 - 0.5 * x;
        C = std::abs(boost::math::tgamma(b)) * std::sqrt(dx_dxi(x) / (2.0 * pi)) * std::pow(mw, 0.75);
    } else {
        C = 0.5 * std::pow(pi, -1.5) * std::sqrt(state.A2) * std::abs(boost::math::tgamma(alpha));
    }
    int sign;
    if (xi == 0.0) {
        sign = (std::lround((x - 1.5) / 2.0) % 2) ? -1 : 1;
    } else {
        boost::math::lgamma(alpha, &sign);
    }
    C *= sign;
    if (R == 0.0) return xi == 0.0 ? 0.0 : C * std::sqrt(pi) * a_ho / boost::math::tgamma(alpha);
    double z = (R / a_ho) * (R / a_ho);
    if (z > 1400.0) return 0.0;
    return C * R * std::exp(-0.5 * z) * tricomi_u(alpha, 1.5, z);
}

double f_c_ho(double omega, double omega_ref) {
    if (!(omega > 0.0) || !(omega_ref > 0.0)) throw DomainError("trap frequencies must be positive");
    return std::pow(omega / omega_ref, 1.5);
}

double f_c_pseudo(double a, double mu, double omega, double omega_ref) {
    return f_c_pseudo(a, a, mu, omega, omega_ref);
}

double f_c_pseudo(double a, double a_ref, double mu, double omega, double omega_ref) {
    double ho = f_c_ho(omega, omega_ref);
    if (a == a_ref && a == 0.0) return ho;
    TrapSystem s{mu, 0, omega}, r{mu, 0, omega_ref};
    double xi = a / s.a_ho(), xr = a_ref / r.a_ho();
    double x = trap_branch_root(xi, 0), x_ref = trap_branch_root(xr, 0);
    if (a == a_ref && std::abs(xi) < 1.0 && std::abs(xr) < 1.0) return ho * dx_dxi(x) / dx_dxi(x_ref);
    double den = xi2_dx_dxi(x_ref);
    if (!(den > 0.0)) throw DomainError("reference state vanishes at R = 0; use f_c_pseudo_at");
    return std::sqrt(omega / omega_ref) * xi2_dx_dxi(x) / den;
}

double f_c_pseudo_at(double R_lin, double a, double a_ref, double mu, double omega, double omega_ref) {
    PseudoModel m{a, TrapSystem{mu, 0, omega}}, r{a_ref, TrapSystem{mu, 0, omega_ref}};
    auto s = pseudo_state(m, trap_branch_root(m.xi(), 0), 0);
    auto sr = pseudo_state(r, trap_branch_root(r.xi(), 0), 0);
    double u = pseudo_wavefunction(s, m, R_lin), ur = pseudo_wavefunction(sr, r, R_lin);
    return (u * u) / (ur * ur);
}

double series_coefficient(int k) {
    if (k < 0 || k > max_series_order) throw DomainError("series order out of range");
    return coefficients()[k];
}

SeriesValue energy_series(double xi, int order) {
    if (order < 0 || order > max_series_order) throw DomainError("series order out of range");
    if (!std::isfinite(xi)) throw DomainError("series needs finite xi");
    const auto& t = coefficients();
    double v = 0.0;
    for (int k = order; k >= 0; --k) v = v * xi + t[k];
    return {v, std::abs(xi) >= 1.0};
}

SeriesValue dx_dxi_series(double xi, int order) {
    if (order < 1 || order > max_series_order) throw DomainError("series order out of range");
    if (!std::isfinite(xi)) throw DomainError("series needs finite xi");
    const auto& t = coefficients();
    double v = 0.0;
    for (int n = order - 1; n >= 0; --n) v = v * xi + (n + 1) * t[n + 1];
    return {v, std::abs(xi) >= 1.0};
}

SeriesValue f_c_series(double xi, double xi_ref, double omega, double omega_ref, int order) {
    auto s = dx_dxi_series(xi, order), r = dx_dxi_series(xi_ref, order);
    return {f_c_ho(omega, omega_ref) * s.value / r.value, s.warning || r.warning};
}

double self_consistent_aE(double E_ground, const TrapSystem& sys) {
    if (!(sys.omega > 0.0)) throw DomainError("self-consistent a_E needs omega > 0");
    double xi = xi_of_x(E_ground / sys.omega);
    if (!std::isfinite(xi) || std::abs(xi) > 1e12)
        throw ResonanceError("energy sits at a unitarity point; a_E is infinite");
    return xi * sys.a_ho();
}

}  // namespace trapspec
