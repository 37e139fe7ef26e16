#include <cmath>
#include <initializer_list>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "trapspec/error.hpp"
#include "trapspec/spectra.hpp"

using namespace trapspec;

namespace {

std::vector<VibrationalState> oscillator(int count, int size = 200) {
    BasisSpec spec;
    spec.size = size;
    spec.E_cut = 4.0 * count + 10.0;
    return solve_radial(PotentialCurve::zero(), {1.0, 0, 1.0}, spec, count);
}

SpectrumTable table_of(std::vector<double> I) {
    SpectrumTable t;
    for (std::size_t v = 0; v < I.size(); ++v) {
        SpectrumRow r;
        r.v = static_cast<int>(v);
        r.I = I[v];
        t.rows.push_back(r);
    }
    return t;
}

// Two Morse wells in a weak trap, solved on a shared basis.
struct Pair {
    PotentialCurve a = PotentialCurve::morse(0.05, 6.0, 1.0);
    PotentialCurve b = PotentialCurve::morse(0.03, 7.0, 0.8);
    TrapSystem sys{500.0, 0, 1e-5};
    std::shared_ptr<const RadialBasis> basis;
    Pair(int size) {
        BasisSpec spec;
        spec.size = size;
        basis = make_basis(spec, {{&a, sys}, {&b, sys}});
    }
};

}  // namespace

TEST_CASE("dipole function") {
    auto c = DipoleFunction::constant(2.5);
    CHECK(c.is_constant());
    CHECK(c(3.0) == 2.5);
    auto t = DipoleFunction::table({1, 2, 3, 4, 5}, {0.5, 0.7, 0.8, 0.9, 1.0}, 1.2);
    CHECK_FALSE(t.is_constant());
    CHECK(t(2.0) == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(t(4.0) == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(t(0.5) == 0.5);
    CHECK(t(9.0) == 1.2);
    CHECK(t.asymptote() == 1.2);
    CHECK_THROWS_AS(DipoleFunction::table({1, 2, 3}, {1, 1, 1}, 1.0), ConfigError);
    CHECK_THROWS_AS(DipoleFunction::load_table("/nonexistent/dipole.dat", 1.0), IoError);
}

TEST_CASE("transition moments on one basis") {
    auto st = oscillator(6);
    auto D = DipoleFunction::constant(1.0);
    for (int i = 0; i < 6; ++i) {
        CHECK(transition_moment(st[i], st[i], D) == doctest::Approx(1.0).epsilon(1e-10));
        for (int j = i + 1; j < 6; ++j) CHECK(transition_moment(st[i], st[j], D) < 1e-12);
    }
    CHECK(transition_moment(st[1], st[1], DipoleFunction::constant(3.0)) == doctest::Approx(9.0).epsilon(1e-10));
    auto other = oscillator(2, 120);
    CHECK_THROWS_AS(transition_moment(st[0], other[0], D), ConfigError);
}

TEST_CASE("rate") {
    CHECK(rate(0.5, 2.0) == doctest::Approx(4 * std::numbers::pi * std::numbers::pi));
    CHECK(rate(0.0, 5.0) == 0.0);
}

TEST_CASE("closure over a complete final set") {
    Pair p(120);
    int N = p.basis->size();
    auto init = solve_radial(p.a, p.sys, p.basis, 12);
    auto finals = solve_radial(p.b, p.sys, p.basis, N);
    REQUIRE(static_cast<int>(finals.size()) == N);
    auto D1 = DipoleFunction::constant(1.0);
    for (int v : {0, 11}) {
        auto s = sum_rule(init[v], D1, finals);
        CHECK(s.integral == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(s.defect) < 1e-10);
    }
    auto Dt = DipoleFunction::table({3, 5, 7, 9, 12, 15}, {0.2, 0.5, 0.9, 1.0, 1.1, 1.15}, 1.2);
    auto s = sum_rule(init[11], Dt, finals);
    // D u is not in the spline span: Bessel's inequality, small projection loss
    CHECK(s.integral < 1.2 * 1.2);
    CHECK(s.defect < 1e-12);
    CHECK(std::abs(s.defect) < 1e-4 * s.integral);
}

TEST_CASE("run_spectrum picks the first trap state and orders rows") {
    Pair p(160);
    SpectrumSetup setup;
    setup.basis.size = 160;
    auto D = DipoleFunction::constant(1.0);
    auto run = run_spectrum(p.a, p.b, p.sys, D, setup);
    int nb_a = count_bound(p.a, p.sys, run.basis);
    int nb_b = count_bound(p.b, p.sys, run.basis);
    CHECK(run.initial.v == nb_a);
    CHECK(run.initial.E >= 0.0);
    REQUIRE(run.initial_states.size() >= 2);
    CHECK(run.initial_states.back().E == run.initial.E);
    CHECK(run.initial_states[run.initial_states.size() - 2].E < 0.0);
    REQUIRE(static_cast<int>(run.table.rows.size()) == nb_b);
    for (std::size_t i = 0; i < run.table.rows.size(); ++i) {
        const auto& r = run.table.rows[i];
        CHECK(r.v == static_cast<int>(i));
        CHECK(r.E < 0.0);
        CHECK(r.label == StateLabel::bound);
        CHECK(r.Gamma == doctest::Approx(4 * std::numbers::pi * std::numbers::pi * r.I));
        CHECK(r.R_out > 0.0);
    }
    setup.final_count = 3;
    setup.threads = 3;
    auto few = run_spectrum(p.a, p.b, p.sys, D, setup);
    REQUIRE(few.table.rows.size() == 3);
    for (int v = 0; v < 3; ++v) CHECK(few.table.rows[v].I == doctest::Approx(run.table.rows[v].I).epsilon(1e-9));
}

TEST_CASE("enhancement ratios") {
    auto a = table_of({2.0, 0.5, 1.0, 0.0});
    auto b = table_of({1.0, 1.0, 1.0, 0.0});
    auto f = enhancement_f(a, b);
    REQUIRE(f.size() == 4);
    CHECK(f[0].kind == Enhancement::epa);
    CHECK(f[0].value == 2.0);
    CHECK(f[1].kind == Enhancement::spa);
    CHECK(f[2].kind == Enhancement::neutral);
    CHECK(f[3].kind == Enhancement::undefined);
    CHECK(std::isnan(f[3].value));
    CHECK(std::string(enhancement_name(Enhancement::epa)) == "EPA");

    auto g = enhancement_g(a, b);
    for (int v = 0; v < 3; ++v) CHECK(g[v].value == f[v].value);
    CHECK_THROWS_AS(enhancement_f(a, table_of({1.0})), ConfigError);
}

TEST_CASE("constant regime at the reference frequency") {
    Pair p(160);
    SpectrumSetup setup;
    setup.basis.size = 160;
    auto D = DipoleFunction::constant(1.0);
    auto run = run_spectrum(p.a, p.b, p.sys, D, setup);
    auto f = enhancement_f(run.table, run.table);
    auto c = constant_regime(f, run.table, run.initial, run.initial);
    CHECK(c.f_c == 1.0);
    CHECK_FALSE(c.plateau_warning);
    CHECK_FALSE(c.v_break_empirical);
    CHECK_FALSE(c.R_0);
    CHECK_FALSE(c.v_break_predicted);
}

TEST_CASE("nodes and window") {
    auto st = oscillator(3);
    auto n1 = node_positions(st[1]);
    REQUIRE(n1.size() == 1);
    CHECK(n1[0] == doctest::Approx(std::sqrt(1.5)).epsilon(1e-6));
    auto n2 = node_positions(st[2]);
    REQUIRE(n2.size() == 2);
    CHECK(n2[0] == doctest::Approx(std::sqrt(2.5 - std::sqrt(2.5))).epsilon(1e-6));
    CHECK(n2[1] == doctest::Approx(std::sqrt(2.5 + std::sqrt(2.5))).epsilon(1e-6));

    auto t = table_of({1.0, 0.9, 0.01, 1.1, 0.5, 0.2, 0.001});
    auto w = find_window(t, st[2], 1.0);
    REQUIRE(w.dips.size() == 1);
    CHECK(w.dips[0] == 2);
    REQUIRE(w.R_x);
    CHECK(*w.R_x == doctest::Approx(n2[1]).epsilon(1e-12));
    CHECK_FALSE(find_window(t, st[2], 3.0).R_x);
    CHECK_FALSE(find_window(t, st[0], 0.1).R_x);
}
