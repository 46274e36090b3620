#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "heightlab/heights.hpp"
#include "heightlab/lattes.hpp"
#include "heightlab/numeric.hpp"

#include <set>

using namespace heightlab;

namespace {

Rat rq(long n, long d = 1) { return Rat(n, d); }

CurvePoint rpoint(long xn, long xd, long yn, long yd) {
    return CurvePoint::affine(QuadElt(Rat(xn, xd)), QuadElt(Rat(yn, yd)));
}

}  // namespace

TEST_CASE("lattes map reproduces x-coordinate doubling") {
    auto E = WeierstrassCurve::short_form(rq(-2), rq(0));
    LattesMap f(rq(-2), rq(0));
    CHECK(f.scale() == rq(1));

    auto img = f.apply(rq(-1));
    REQUIRE(img.has_value());
    CHECK(*img == rq(9, 4));

    for (const auto& P : rational_point_search(E, 2.5)) {
        if (P.infinity) continue;
        auto Q = scalar_mul(E, Int(2), P);
        auto fx = f.apply(P.x.rational());
        if (Q.infinity) {
            CHECK_FALSE(fx.has_value());
        } else {
            REQUIRE(fx.has_value());
            CHECK(*fx == Q.x.rational());
        }
    }
}

TEST_CASE("rational parameters integralize by exact conjugation") {
    LattesMap f(rq(-1, 4), rq(0));
    CHECK(f.A_int() == Int(-4));
    CHECK(f.B_int() == Int(0));
    CHECK(f.scale() == rq(4));

    // the conjugated map computes the same rational dynamics
    LattesMap g(rq(-4), rq(0));
    Rat t(3, 5);
    auto ft = f.apply(t);
    auto gt = g.apply(t * rq(4));
    REQUIRE(ft.has_value());
    REQUIRE(gt.has_value());
    CHECK(*ft * rq(4) == *gt);

    // and the same canonical height
    RealApprox hf = lattes_height(f, t, 1e-9);
    RealApprox hg = lattes_height(g, t * rq(4), 1e-9);
    CHECK(hf.agrees_with(hg, 1e-8));
}

TEST_CASE("orbit classification separates torsion shadows from wandering points") {
    LattesMap f(rq(0), rq(1));  // doubling on y^2 = x^3 + 1

    auto orb = classify_orbit(f, rq(2));
    CHECK(orb.preperiodic);
    CHECK(orb.preperiod == 1);
    CHECK(orb.period == 1);
    REQUIRE(orb.points.size() == 2);
    CHECK(orb.points[0] == rq(2));
    CHECK(orb.points[1] == rq(0));

    auto tor2 = classify_orbit(f, rq(-1));  // x of a two-torsion point
    CHECK(tor2.preperiodic);
    CHECK(tor2.hits_infinity);

    CHECK_FALSE(is_preperiodic(f, rq(3)));
    LattesMap g(rq(-2), rq(0));
    CHECK(is_preperiodic(g, rq(0)));  // (0,0) is two-torsion
    CHECK_FALSE(is_preperiodic(g, rq(-1)));
}

TEST_CASE("height vanishes exactly on preperiodic points") {
    LattesMap f(rq(0), rq(1));
    RealApprox h = lattes_height(f, rq(2));
    CHECK(h.to_double() == 0.0);
    CHECK(h.error() == 0.0);
}

TEST_CASE("height transforms by four under the map") {
    LattesMap f(rq(-2), rq(0));
    for (Rat t : {rq(3), rq(-5, 7), rq(2)}) {
        auto ft = f.apply(t);
        REQUIRE(ft.has_value());
        RealApprox h = lattes_height(f, t, 1e-10);
        RealApprox hf = lattes_height(f, *ft, 1e-10);
        RealApprox four(4.0);
        CHECK(hf.agrees_with(h * four, 1e-8));
    }
}

TEST_CASE("height matches the certified naive-limit envelope") {
    LattesMap f(rq(-2), rq(0));
    Rat t(2);
    RealApprox h = lattes_height(f, t, 1e-10);
    Rat cur = t;
    int n = 5;
    for (int i = 0; i < n; ++i) {
        auto next = f.apply(cur);
        REQUIRE(next.has_value());
        cur = *next;
    }
    double naive = weil_height_rational(cur).to_double() / std::pow(4.0, n);
    double envelope = f.bound().c.upper().convert_to<double>() / (3.0 * std::pow(4.0, n));
    CHECK(std::abs(h.to_double() - naive) <= envelope + 1e-9);
}

TEST_CASE("dynamical height doubles the elliptic height") {
    RealApprox two(2.0);

    // short curve with its own rational points
    auto Eg = WeierstrassCurve::short_form(rq(-2), rq(0));
    LattesMap fg(rq(-2), rq(0));
    auto P0 = rpoint(-1, 1, 1, 1);
    REQUIRE(on_curve(Eg, P0));
    for (int k = 1; k <= 3; ++k) {
        auto Q = scalar_mul(Eg, Int(k), P0);
        RealApprox hE = canonical_height(Eg, Q);
        RealApprox hf = lattes_height(fg, Q.x.rational(), 1e-9);
        CHECK(hf.agrees_with(hE * two, 1e-7));
    }

    // general models go through their integral short form
    auto E37 = WeierstrassCurve(rq(0), rq(0), rq(1), rq(-1), rq(0));
    auto T37 = to_integral_short_any(E37);
    auto Es37 = E37.transformed(T37);
    LattesMap f37(Es37.A(), Es37.B());
    for (const auto& P : {rpoint(0, 1, 0, 1), rpoint(1, 1, 0, 1), rpoint(2, 1, -3, 1)}) {
        REQUIRE(on_curve(E37, P));
        auto Pm = transform_point(T37, P);
        RealApprox hE = canonical_height(E37, P);
        RealApprox hf = lattes_height(f37, Pm.x.rational(), 1e-9);
        CHECK(hf.agrees_with(hE * two, 1e-7));
    }

    auto E389 = WeierstrassCurve(rq(0), rq(1), rq(1), rq(-2), rq(0));
    auto T389 = to_integral_short_any(E389);
    auto Es389 = E389.transformed(T389);
    LattesMap f389(Es389.A(), Es389.B());
    for (const auto& P : {rpoint(0, 1, 0, 1), rpoint(1, 1, 0, 1), rpoint(-1, 1, 1, 1)}) {
        REQUIRE(on_curve(E389, P));
        auto Pm = transform_point(T389, P);
        RealApprox hE = canonical_height(E389, P);
        RealApprox hf = lattes_height(f389, Pm.x.rational(), 1e-9);
        CHECK(hf.agrees_with(hE * two, 1e-7));
    }
}

TEST_CASE("preperiodic rational points are exactly the torsion shadows") {
    // box sweep: x = n/d preperiodic under the curve's doubling map iff x is
    // the x-coordinate of a torsion point over the quadratic field generated
    // by y. Torsion orders over quadratic fields stay <= 18, so division
    // polynomials up to m = 18 decide the algebraic side.
    for (auto [Av, Bv] : std::vector<std::pair<long, long>>{{0, 1}, {-2, 0}}) {
        auto E = WeierstrassCurve::short_form(rq(Av), rq(Bv));
        LattesMap f(rq(Av), rq(Bv));
        IntPoly cubic({Int(Bv), Int(Av), Int(0), Int(1)});
        std::vector<IntPoly> gm;
        for (int m = 3; m <= 18; ++m) gm.push_back(division_polynomial(E, m));
        for (long d = 1; d <= 8; ++d) {
            for (long n = -8; n <= 8; ++n) {
                if (boost::multiprecision::gcd(Int(n), Int(d)) != 1) continue;
                Rat t(n, d);
                bool dyn = is_preperiodic(f, t);
                bool alg = cubic.eval(t) == 0;
                for (const auto& g : gm) {
                    if (alg) break;
                    alg = g.eval(t) == 0;
                }
                CHECK(dyn == alg);
            }
        }
    }
}

TEST_CASE("preimage polynomials and their separability") {
    LattesMap f(rq(-2), rq(0));

    auto pre = preimage_polynomial(f, rq(9, 4));
    CHECK(pre.poly.degree() == 4);
    CHECK(pre.poly.eval(rq(-1)) == 0);
    CHECK(pre.separable);

    // 0 is the image of the two-torsion abscissa 0; its preimages are the
    // four-torsion abscissae, each doubled: (x^2 + 2)^2
    auto crit = preimage_polynomial(f, rq(0));
    CHECK(crit.poly == IntPoly({Int(4), Int(0), Int(4), Int(0), Int(1)}));
    CHECK_FALSE(crit.separable);

    LattesMap g(rq(0), rq(1));
    auto pre0 = preimage_polynomial(g, rq(0));
    CHECK(pre0.poly == IntPoly({Int(0), Int(-8), Int(0), Int(0), Int(1)}));
    CHECK(pre0.separable);
    CHECK(pre0.poly.eval(rq(2)) == 0);
}

TEST_CASE("small height tower above five") {
    auto seq = small_height_sequence(Int(5), 3, 1e-9);
    CHECK(seq.alpha0 == rq(-5));
    CHECK(seq.level_ratio == Rat(1, 4));
    REQUIRE(seq.levels.size() == 3);

    // level polynomial of the first preimages, frozen by hand:
    // xi^4 + 4 xi^3 + 4 xi^2 - 8 xi + 4
    CHECK(seq.levels[0].xi_poly == IntPoly({Int(4), Int(-8), Int(4), Int(4), Int(1)}));
    CHECK(seq.levels[0].alpha_poly ==
          IntPoly({Int(2500), Int(-1000), Int(100), Int(20), Int(1)}));
    CHECK(seq.levels[1].xi_poly.degree() == 16);
    CHECK(seq.levels[2].xi_poly.degree() == 64);
    for (const auto& lvl : seq.levels) {
        CHECK(lvl.xi_poly.leading() == 1);
        CHECK(lvl.cert.verdict == RamVerdict::Unramified);
    }

    // heights decay by exactly 1/4 per level
    RealApprox quarter(0.25);
    CHECK(seq.levels[0].height.agrees_with(seq.base_height * quarter, 1e-10));
    CHECK(seq.levels[2].height.agrees_with(
        seq.levels[1].height * quarter, 1e-10));

    // the seed height is twice the canonical height of (-1, 1) on
    // y^2 = x^3 - 2x: the twist conjugation x -> px preserves it
    auto Eg = WeierstrassCurve::short_form(rq(-2), rq(0));
    auto P0 = rpoint(-1, 1, 1, 1);
    REQUIRE_FALSE(is_torsion(Eg, P0));
    RealApprox two(2.0);
    CHECK(seq.base_height.agrees_with(canonical_height(Eg, P0) * two, 1e-8));
    CHECK(seq.base_height.certainly_positive());

    // the seed height does not depend on p
    auto seq7 = small_height_sequence(Int(7), 1, 1e-9);
    CHECK(seq7.base_height.agrees_with(seq.base_height, 1e-8));

    CHECK_THROWS_AS(small_height_sequence(Int(4), 2), input_error);
    CHECK_THROWS_AS(small_height_sequence(Int(2), 2), input_error);
}

TEST_CASE("height certificates respect the requested accuracy") {
    LattesMap f(rq(-2), rq(0));
    RealApprox coarse = lattes_height(f, rq(3), 1e-4);
    RealApprox fine = lattes_height(f, rq(3), 1e-10);
    CHECK(coarse.error() <= 1.01e-4);
    CHECK(fine.error() <= 1.01e-10);
    CHECK(coarse.agrees_with(fine, 1e-4));
}
