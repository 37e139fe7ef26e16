#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace trapspec {

// Dispersion term -C_n / R^n.
struct DispersionTerm {
    int n = 6;
    double Cn = 0.0;
};

// Reduced mass mu (electron masses), rotational quantum number J, trap angular
// frequency omega (hartree).
struct TrapSystem {
    double mu = 1.0;
    int J = 0;
    double omega = 0.0;

    void validate() const;
    double a_ho() const;
};

class PotentialCurve {
public:
    enum class Model { zero, table, morse, lennard_jones, square_well };

    static constexpr double default_join_tolerance = 1e-3;

    static PotentialCurve zero();
    static PotentialCurve tail_only(std::vector<DispersionTerm> tail);
    // De[(1 - exp(-alpha (R - Re)))^2 - 1] inside R_m, tail outside.
    static PotentialCurve morse(double De, double Re, double alpha,
                                std::vector<DispersionTerm> tail = {},
                                double R_m = std::numeric_limits<double>::infinity());
    // A12 / R^12 - sum C_n / R^n. With finite R_m the A12 term is dropped beyond R_m.
    static PotentialCurve lennard_jones(double A12, std::vector<DispersionTerm> tail,
                                        double R_m = std::numeric_limits<double>::infinity());
    // -V0 for R < sigma, zero outside.
    static PotentialCurve square_well(double V0, double sigma);
    // Sampled short-range table joined to the tail at R_m. The first sample
    // acts as a hard inner wall.
    static PotentialCurve table(std::vector<double> R, std::vector<double> V,
                                std::vector<DispersionTerm> tail, double R_m,
                                double join_tolerance = default_join_tolerance);
    static PotentialCurve load_table(const std::string& path, std::vector<DispersionTerm> tail,
                                     double R_m, double join_tolerance = default_join_tolerance);

    // Copy with an impenetrable wall at R_wall (u(R_wall) = 0).
    PotentialCurve with_hard_wall(double R_wall) const;

    // V_int(R). Returns +inf inside a hard wall. Throws DomainError for R <= 0.
    double operator()(double R) const;
    double tail_value(double R) const;

    Model model() const { return model_; }
    const std::vector<DispersionTerm>& tail() const { return tail_; }
    double match_radius() const { return R_m_; }
    double inner_wall() const { return wall_; }
    // Points where V is not smooth; the solver puts knots there.
    std::vector<double> breakpoints() const;
    // Radius beyond which V equals its dispersion tail to working precision
    // (or vanishes for tail-free models).
    double short_range_extent() const;
    // Leading (smallest n) dispersion term; n = 0 when there is no tail.
    DispersionTerm leading_tail() const;

private:
    struct Table;
    Model model_ = Model::zero;
    std::vector<DispersionTerm> tail_;
    double R_m_ = std::numeric_limits<double>::infinity();
    double wall_ = 0.0;
    double p0_ = 0.0, p1_ = 0.0, p2_ = 0.0;
    std::shared_ptr<const Table> table_;

    double short_range(double R) const;
    void check_join(double tol) const;
};

double effective_potential(const PotentialCurve& curve, const TrapSystem& sys, double R);
double scale_mass(double mu0, double factor);
// Solves C_n/R^n = mu omega^2 R^2 / 2.
double trap_crossing_radius(double Cn, int n, const TrapSystem& sys);

}  // namespace trapspec
