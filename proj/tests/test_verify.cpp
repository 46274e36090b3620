#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "heightlab/verify.hpp"

using namespace heightlab;

namespace {

CurvePoint pt(long xn, long xd, long yn, long yd) {
    return CurvePoint::affine(QuadElt(Rat(xn, xd)), QuadElt(Rat(yn, yd)));
}

const WeierstrassCurve E37(Rat(0), Rat(0), Rat(1), Rat(-1), Rat(0));
const WeierstrassCurve Esplit(Rat(1), Rat(0), Rat(0), Rat(0), Rat(-4));
const WeierstrassCurve E11(Rat(0), Rat(-1), Rat(1), Rat(-10), Rat(-20));

}  // namespace

TEST_CASE("weight sums match the quartic closed form exactly") {
    CHECK(pairing_weight_sum(2) == Rat(2));
    CHECK(pairing_weight_sum(3) == Rat(12));
    CHECK(pairing_weight_identity(30));
}

TEST_CASE("numeric pairing sum collapses to the closed form") {
    auto rep = pairing_numeric_check(E37, pt(0, 1, 0, 1), 12, 1e-5);
    CHECK(rep.rows.size() == 11);
    CHECK(rep.all_hold);
    for (auto& r : rep.rows) CHECK(r.holds);
}

TEST_CASE("torsion points are rejected by the sweeps") {
    CHECK_THROWS_AS(pairing_numeric_check(E11, pt(5, 1, 5, 1), 8, 1e-5), input_error);
    CHECK_THROWS_AS(quadraticity_check(E11, pt(5, 1, 5, 1), 8), input_error);
}

TEST_CASE("multiple sum dominates the counting line at a split prime") {
    auto rep = multiple_sum_check(Esplit, pt(4, 1, 6, 1), Int(2), 1, 12);
    CHECK(rep.rows.size() == 11);
    CHECK(rep.all_hold);
    // the gap must widen: the lhs is quartic in s, the rhs quadratic
    auto& rows = rep.rows;
    CHECK((rows.back().lhs - rows.back().rhs).value() >
          (rows.front().lhs - rows.front().rhs).value());

    CHECK_THROWS_AS(multiple_sum_check(E37, pt(0, 1, 0, 1), Int(37), 1, 6), input_error);
}

TEST_CASE("archimedean repulsion stays above the discrepancy line") {
    auto a = pair_repulsion_check(Esplit, pt(4, 1, 6, 1), 10);
    CHECK(a.rows.size() == 9);
    CHECK(a.all_hold);

    auto b = pair_repulsion_check(E37, pt(0, 1, 0, 1), 10);
    CHECK(b.all_hold);
}

TEST_CASE("dynamical route doubles the curve route along multiples") {
    auto rep = dynamical_match_check(E37, pt(0, 1, 0, 1), 3, 1e-6);
    CHECK(rep.rows.size() == 3);
    CHECK(rep.all_hold);
}

TEST_CASE("heights scale quadratically in the multiplier") {
    auto rep = quadraticity_check(E37, pt(0, 1, 0, 1), 6, 1e-6);
    CHECK(rep.all_hold);
    auto rep2 = quadraticity_check(Esplit, pt(4, 1, 6, 1), 4, 1e-6);
    CHECK(rep2.all_hold);
}
