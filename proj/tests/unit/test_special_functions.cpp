#include <cmath>
#include <initializer_list>

#include "doctest.h"
#include "trapspec/special_functions.hpp"

using trapspec::tricomi_u;

namespace {

struct UCase {
    double a, z, U;
};

// U(a, 3/2, z) from a 120-digit Kummer-series evaluation (mpmath).
const UCase u_oracle[] = {
    {-50, 1e-8, 2.4448400136375523e+65},
    {-50, 1e-4, 2.4366993419858314e+65},
    {-50, 0.01, 1.706201478125661e+65},
    {-50, 0.5, -1.8766103578876014e+64},
    {-50, 3, -2.1972551497581685e+64},
    {-50, 12, -1.9995129071867014e+66},
    {-50, 30, 6.6495730763437849e+69},
    {-50, 50, 1.5201070622133552e+74},
    {-33.7, 1e-8, 4.6680452028744088e+41},
    {-33.7, 1e-4, 5.0291027850743937e+39},
    {-33.7, 0.01, 4.9530039882937849e+38},
    {-33.7, 0.5, 1.9440304950266004e+37},
    {-33.7, 3, 1.0656791819441293e+38},
    {-33.7, 12, -1.153283988531774e+39},
    {-33.7, 30, -2.8487379752168974e+41},
    {-33.7, 50, -4.886332365407981e+46},
    {-20.5, 1e-8, -6.2527966261857813e+22},
    {-20.5, 1e-4, -6.2265549989045326e+20},
    {-20.5, 0.01, -3.7973232232510969e+19},
    {-20.5, 0.5, -1.1072078458452364e+19},
    {-20.5, 3, 1.6098247988925208e+19},
    {-20.5, 12, -7.3377026261145848e+20},
    {-20.5, 30, 4.0557943606413218e+24},
    {-20.5, 50, -3.6654956610308184e+27},
    {-7.3, 1e-8, 42346415.16128236},
    {-7.3, 1e-4, 405516.8356466451},
    {-7.3, 0.01, 19273.455198201309},
    {-7.3, 0.5, -772.50575123616165},
    {-7.3, 3, -8846.7666564586347},
    {-7.3, 12, 677696.21301486011},
    {-7.3, 30, 4095229583.3608517},
    {-7.3, 50, 654038288593.96716},
    {-3, 1e-8, -13.124999737500001},
    {-3, 1e-4, -13.122375104999},
    {-3, 0.01, -12.863549},
    {-3, 0.5, -2.5},
    {-3, 3, -1.875},
    {-3, 12, 517.875},
    {-3, 30, 18324.375},
    {-3, 50, 100049.375},
    {-2.25, 1e-8, -10166.534282853402},
    {-2.25, 1e-4, -98.116201851310743},
    {-2.25, 0.01, -6.1377390350415808},
    {-2.25, 0.5, 2.630646912921049},
    {-2.25, 3, -3.8613057180731166},
    {-2.25, 12, 142.34990409340934},
    {-2.25, 30, 1687.6911535527586},
    {-2.25, 50, 5843.1694920286229},
    {-1, 1e-8, -1.49999999},
    {-1, 1e-4, -1.4999},
    {-1, 0.01, -1.49},
    {-1, 0.5, -1.0},
    {-1, 3, 1.5},
    {-1, 12, 10.5},
    {-1, 30, 28.5},
    {-1, 50, 48.5},
    {-0.5, 1e-8, -4999.9999},
    {-0.5, 1e-4, -49.99},
    {-0.5, 0.01, -4.9},
    {-0.5, 0.5, 0.0},
    {-0.5, 3, 1.4433756729740644},
    {-0.5, 12, 3.3197640478403481},
    {-0.5, 30, 5.3859384821341334},
    {-0.5, 50, 7.0003571337468205},
    {0.3, 1e-8, 5925.4392221447233},
    {0.3, 1e-4, 59.854915428899296},
    {0.3, 0.01, 6.5112592096230405},
    {0.3, 0.5, 1.3237376507795524},
    {0.3, 3, 0.73180689111746503},
    {0.3, 12, 0.47679003343119819},
    {0.3, 30, 0.36117440203403344},
    {0.3, 50, 0.30961683656699401},
    {0.75, 1e-8, 14463.11317756889},
    {0.75, 1e-4, 143.67035085376375},
    {0.75, 0.01, 13.55406661372708},
    {0.75, 0.5, 1.4102860143211257},
    {0.75, 3, 0.41760185177500134},
    {0.75, 12, 0.15286759936582566},
    {0.75, 30, 0.077540668681634538},
    {0.75, 50, 0.052987715738449572},
    {1, 1e-8, 17722.538686287213},
    {1, 1e-4, 175.26297717665031},
    {1, 0.01, 15.889286263174076},
    {1, 0.5, 1.3113590848375969},
    {1, 3, 0.29404397494230225},
    {1, 12, 0.080224193073169823},
    {1, 30, 0.032803476425991905},
    {1, 50, 0.019805719294346384},
    {2.7, 1e-8, 11471.309527792628},
    {2.7, 1e-4, 111.57780678437508},
    {2.7, 0.01, 8.7091067519433396},
    {2.7, 0.5, 0.27694051178446134},
    {2.7, 3, 0.015987388439468507},
    {2.7, 12, 0.00081106131546134931},
    {2.7, 30, 8.5708974721836125e-5},
    {2.7, 50, 2.311791929470094e-5},
    {5, 1e-8, 738.21774242939834},
    {5, 1e-4, 7.087008795126735},
    {5, 0.01, 0.49117528096526014},
    {5, 0.5, 0.0070945796888587558},
    {5, 3, 0.00011779236651436568},
    {5, 12, 1.0090646179367432e-6},
    {5, 30, 2.153322803294955e-8},
    {5, 50, 2.1242258796602308e-9},
};

}  // namespace

TEST_CASE("tricomi_u matches the high-precision oracle") {
    double worst = 0.0;
    for (const auto& c : u_oracle) {
        double u = tricomi_u(c.a, 1.5, c.z);
        INFO("a = " << c.a << ", z = " << c.z);
        if (c.U == 0.0) {  // exact zero of (z - 1/2)/sqrt(z)
            CHECK(std::abs(u) < 1e-14);
            continue;
        }
        double rel = std::abs(u / c.U - 1.0);
        worst = std::max(worst, rel);
        CHECK(rel < 1e-10);
    }
    MESSAGE("worst relative error " << worst);
}

TEST_CASE("tricomi_u polynomial cases") {
    for (double z : {1e-8, 1e-3, 0.4, 2.0, 17.0, 50.0}) {
        CHECK(tricomi_u(0.0, 1.5, z) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(tricomi_u(-1.0, 1.5, z) == doctest::Approx(z - 1.5).epsilon(1e-12));
        // U(-2, b, z) = z^2 - 2(b+1) z + b(b+1)
        CHECK(tricomi_u(-2.0, 1.5, z) == doctest::Approx(z * z - 5.0 * z + 3.75).epsilon(1e-11));
    }
}

TEST_CASE("tricomi_u leading asymptotics") {
    double z = 50.0, a = 0.3;
    double ratio = tricomi_u(a, 1.5, z) * std::pow(z, a);
    // next term: -a (a - b + 1) / z
    CHECK(std::abs(ratio - (1.0 - a * (a - 0.5) / z)) < 1e-3);
    CHECK(std::abs(ratio - 1.0) < 1e-2);
}

TEST_CASE("tricomi_u Wronskian-type recurrence consistency") {
    // U(a-1) + (b - 2a - z) U(a) + a (a - b + 1) U(a+1) = 0
    for (double a : {-3.3, -0.4, 0.6, 2.2}) {
        for (double z : {0.05, 1.0, 9.0}) {
            double lhs = tricomi_u(a - 1, 1.5, z) + (1.5 - 2 * a - z) * tricomi_u(a, 1.5, z) +
                         a * (a - 0.5) * tricomi_u(a + 1, 1.5, z);
            double scale = std::abs(tricomi_u(a - 1, 1.5, z)) + std::abs((1.5 - 2 * a - z) * tricomi_u(a, 1.5, z));
            CHECK(std::abs(lhs) < 1e-11 * scale);
        }
    }
}

TEST_CASE("tricomi_u rejects z <= 0") {
    CHECK_THROWS(tricomi_u(0.5, 1.5, 0.0));
    CHECK_THROWS(tricomi_u(0.5, 1.5, -1.0));
}
