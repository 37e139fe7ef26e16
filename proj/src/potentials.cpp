#include "trapspec/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/math/interpolators/makima.hpp>

#include "trapspec/error.hpp"

namespace trapspec {

namespace {

std::vector<DispersionTerm> checked_tail(std::vector<DispersionTerm> tail) {
    for (const auto& t : tail) {
        if (t.n < 3) throw ConfigError("dispersion term needs n >= 3");
        if (!std::isfinite(t.Cn)) throw ConfigError("dispersion coefficient is not finite");
    }
    std::sort(tail.begin(), tail.end(),
              [](const DispersionTerm& a, const DispersionTerm& b) { return a.n < b.n; });
    return tail;
}

}  // namespace

struct PotentialCurve::Table {
    double R_first, R_last;
    boost::math::interpolators::makima<std::vector<double>> spline;
};

void TrapSystem::validate() const {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError("reduced mass must be positive");
    if (J < 0) throw ConfigError("J must be non-negative");
    if (!(omega >= 0.0) || !std::isfinite(omega)) throw ConfigError("trap frequency must be >= 0");
}

double TrapSystem::a_ho() const {
    if (!(omega > 0.0)) throw DomainError("a_ho is undefined for omega = 0");
    return 1.0 / std::sqrt(mu * omega);
}

PotentialCurve PotentialCurve::zero() { return PotentialCurve{}; }

PotentialCurve PotentialCurve::tail_only(std::vector<DispersionTerm> tail) {
    PotentialCurve c;
    c.tail_ = checked_tail(std::move(tail));
    c.R_m_ = 0.0;
    return c;
}

PotentialCurve PotentialCurve::morse(double De, double Re, double alpha,
                                     std::vector<DispersionTerm> tail, double R_m) {
    if (!(De > 0.0) || !(Re > 0.0) || !(alpha > 0.0))
        throw ConfigError("Morse parameters must be positive");
    PotentialCurve c;
    c.model_ = Model::morse;
    c.p0_ = De;
    c.p1_ = Re;
    c.p2_ = alpha;
    c.tail_ = checked_tail(std::move(tail));
    c.R_m_ = R_m;
    if (std::isfinite(R_m)) c.check_join(default_join_tolerance);
    return c;
}

PotentialCurve PotentialCurve::lennard_jones(double A12, std::vector<DispersionTerm> tail,
                                             double R_m) {
    if (!(A12 > 0.0)) throw ConfigError("repulsive coefficient must be positive");
    PotentialCurve c;
    c.model_ = Model::lennard_jones;
    c.p0_ = A12;
    c.tail_ = checked_tail(std::move(tail));
    c.R_m_ = R_m;
    if (std::isfinite(R_m)) c.check_join(default_join_tolerance);
    return c;
}

PotentialCurve PotentialCurve::square_well(double V0, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(V0)) throw ConfigError("bad square-well parameters");
    PotentialCurve c;
    c.model_ = Model::square_well;
    c.p0_ = V0;
    c.p1_ = sigma;
    c.R_m_ = sigma;
    return c;
}

PotentialCurve PotentialCurve::table(std::vector<double> R, std::vector<double> V,
                                     std::vector<DispersionTerm> tail, double R_m,
                                     double join_tolerance) {
    if (R.size() != V.size()) throw ConfigError("table columns differ in length");
    if (R.size() < 4) throw ConfigError("table needs at least four points");
    for (std::size_t i = 0; i < R.size(); ++i) {
        if (!std::isfinite(R[i]) || !std::isfinite(V[i])) throw ConfigError("table value not finite");
        if (i > 0 && !(R[i] > R[i - 1])) throw ConfigError("table grid must be strictly increasing");
    }
    if (!(R.front() > 0.0)) throw ConfigError("table grid must start at R > 0");
    if (!(R_m >= R.front()) || R_m > R.back())
        throw ConfigError("match radius must lie inside the table range");
    PotentialCurve c;
    c.model_ = Model::table;
    c.tail_ = checked_tail(std::move(tail));
    c.R_m_ = R_m;
    c.wall_ = R.front();
    double r0 = R.front(), r1 = R.back();
    c.table_ = std::make_shared<const Table>(
        Table{r0, r1, boost::math::interpolators::makima<std::vector<double>>(std::move(R), std::move(V))});
    c.check_join(join_tolerance);
    return c;
}

PotentialCurve PotentialCurve::load_table(const std::string& path, std::vector<DispersionTerm> tail,
                                          double R_m, double join_tolerance) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open potential table " + path);
    std::vector<double> R, V;
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
        V.push_back(v);
    }
    return table(std::move(R), std::move(V), std::move(tail), R_m, join_tolerance);
}

PotentialCurve PotentialCurve::with_hard_wall(double R_wall) const {
    if (!(R_wall >= 0.0)) throw ConfigError("hard wall radius must be >= 0");
    PotentialCurve c = *this;
    c.wall_ = std::max(wall_, R_wall);
    return c;
}

void PotentialCurve::check_join(double tol) const {
    double sr = short_range(R_m_);
    double tl = tail_value(R_m_);
    double scale = std::max(std::abs(tl), std::abs(sr));
    if (std::abs(sr - tl) > tol * scale)
        throw ConfigError("short-range part and tail disagree at the match radius");
}

double PotentialCurve::tail_value(double R) const {
    double v = 0.0;
    for (const auto& t : tail_) v -= t.Cn / std::pow(R, t.n);
    return v;
}

double PotentialCurve::short_range(double R) const {
    switch (model_) {
    case Model::zero: return tail_value(R);
    case Model::morse: {
        double e = std::exp(-p2_ * (R - p1_));
        return p0_ * ((1.0 - e) * (1.0 - e) - 1.0);
    }
    case Model::lennard_jones: {
        double r6 = R * R * R * R * R * R;
        return p0_ / (r6 * r6) + tail_value(R);
    }
    case Model::square_well: return -p0_;
    case Model::table: return table_->spline(std::min(R, table_->R_last));
    }
    return 0.0;
}

double PotentialCurve::operator()(double R) const {
    if (!(R > 0.0)) throw DomainError("potential evaluated at R <= 0");
    if (R < wall_) return std::numeric_limits<double>::infinity();
    if (R < R_m_) return short_range(R);
    return tail_value(R);
}

std::vector<double> PotentialCurve::breakpoints() const {
    std::vector<double> bp;
    if (std::isfinite(R_m_) && R_m_ > wall_ && model_ != Model::zero) bp.push_back(R_m_);
    return bp;
}

double PotentialCurve::short_range_extent() const {
    switch (model_) {
    case Model::zero: return wall_;
    case Model::square_well: return p1_;
    case Model::table: return R_m_;
    case Model::morse: return std::min(R_m_, p1_ + 40.0 / p2_);
    case Model::lennard_jones: {
        if (std::isfinite(R_m_)) return R_m_;
        DispersionTerm lead = leading_tail();
        if (lead.n == 0 || lead.Cn <= 0.0) return std::pow(p0_ / 1e-16, 1.0 / 12.0);
        // A/R^12 below 1e-12 of the leading tail
        return std::pow(p0_ / (1e-12 * lead.Cn), 1.0 / (12.0 - lead.n));
    }
    }
    return wall_;
}

DispersionTerm PotentialCurve::leading_tail() const {
    for (const auto& t : tail_)
        if (t.Cn != 0.0) return t;
    return DispersionTerm{0, 0.0};
}

double effective_potential(const PotentialCurve& curve, const TrapSystem& sys, double R) {
    double v = curve(R);
    double cent = sys.J == 0 ? 0.0 : sys.J * (sys.J + 1.0) / (2.0 * sys.mu * R * R);
    return v + cent + 0.5 * sys.mu * sys.omega * sys.omega * R * R;
}

double scale_mass(double mu0, double factor) {
    if (!(factor > 0.0)) throw DomainError("mass scale factor must be positive");
    if (!(mu0 > 0.0)) throw DomainError("reduced mass must be positive");
    return mu0 * factor;
}

double trap_crossing_radius(double Cn, int n, const TrapSystem& sys) {
    if (!(Cn > 0.0)) throw DomainError("crossing radius needs C_n > 0");
    if (n < 1) throw DomainError("crossing radius needs n >= 1");
    if (!(sys.omega > 0.0)) throw DomainError("no trap crossing for omega = 0");
    return std::pow(2.0 * Cn / (sys.mu * sys.omega * sys.omega), 1.0 / (n + 2));
}

}  // namespace trapspec
