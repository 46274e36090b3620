#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "heightlab/numeric.hpp"
#include "heightlab/poly.hpp"
#include "heightlab/quad.hpp"
#include "heightlab/real.hpp"

#include <cmath>
#include <random>

using namespace heightlab;

TEST_CASE("interval arithmetic propagates certified error bounds") {
    RealApprox a(Rat(1, 3));
    RealApprox b(Rat(1, 7));
    RealApprox c = a * b + a - b;
    RealApprox expect(Rat(1, 3) * Rat(1, 7) + Rat(1, 3) - Rat(1, 7));
    CHECK(c.agrees_with(expect, 1e-30));
    CHECK(c.error() < 1e-30);

    RealApprox loose(0.1, 0.25);
    CHECK(!loose.certainly_positive());
    CHECK(!loose.certainly_negative());
    CHECK((loose + RealApprox(1.0)).certainly_positive());
    CHECK(RealApprox(-2.0, 0.5).certainly_negative());
    CHECK(RealApprox(1.0, 0.25).certainly_positive());
}

TEST_CASE("logarithm and exponential respect interval bounds") {
    RealApprox x(Rat(7, 2));
    RealApprox l = log(x);
    CHECK(std::abs(l.to_double() - std::log(3.5)) < 1e-15);
    CHECK_THROWS_AS(log(RealApprox(0.0, 0.1)), precision_error);
    RealApprox back = exp(l);
    CHECK(back.agrees_with(x, 1e-25));
    CHECK(sqrt(RealApprox(Rat(2))).agrees_with(RealApprox(std::sqrt(2.0), 1e-15), 1e-14));
}

TEST_CASE("naive height of rationals") {
    CHECK(weil_height_rational(Rat(0)).to_double() == doctest::Approx(0.0));
    CHECK(weil_height_rational(Rat(1)).to_double() == doctest::Approx(0.0));
    CHECK(weil_height_rational(Rat(3, 2)).to_double() == doctest::Approx(std::log(3)));
    CHECK(weil_height_rational(Rat(-2, 9)).to_double() == doctest::Approx(std::log(9)));
    CHECK(weil_height_rational(Rat(2981, 4)).to_double() == doctest::Approx(std::log(2981)));
}

TEST_CASE("p-adic valuations") {
    CHECK(ord_p(Int(48), Int(2)).v == 4);
    CHECK(ord_p(Int(48), Int(3)).v == 1);
    CHECK(ord_p(Int(48), Int(5)).v == 0);
    CHECK(ord_p(Int(0), Int(5)).infinite);
    CHECK(ord_p(Rat(3, 8), Int(2)).v == -3);
    CHECK(ord_p(Rat(-9, 14), Int(3)).v == 2);
    auto [red, k] = strip_p(Int(2000), Int(5));
    CHECK(red == 16);
    CHECK(k == 3);
}

namespace {

double bisect(double lo, double hi, double (*f)(double)) {
    for (int i = 0; i < 200; ++i) {
        double mid = (lo + hi) / 2;
        if (f(lo) * f(mid) <= 0)
            hi = mid;
        else
            lo = mid;
    }
    return (lo + hi) / 2;
}

}  // namespace

TEST_CASE("Lambert W against independent bisection") {
    // Principal branch at 1: the omega constant.
    double omega = bisect(0.1, 1.0, [](double w) { return w * std::exp(w) - 1.0; });
    RealApprox w0 = lambert_w(0, RealApprox(1.0));
    CHECK(std::abs(w0.to_double() - omega) < 1e-12);
    CHECK(std::abs(omega - 0.5671432904097838) < 1e-12);

    // Lower branch at -0.1.
    double wm = bisect(-10.0, -1.0, [](double w) { return w * std::exp(w) + 0.1; });
    RealApprox w1 = lambert_w(-1, RealApprox(-0.1));
    CHECK(std::abs(w1.to_double() - wm) < 1e-11);
    CHECK(std::abs(wm - (-3.577152063957297)) < 1e-11);

    // Defining identity w e^w = y on both branches, randomized.
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> upos(-0.36, 8.0), uneg(-0.367, -0.001);
    for (int i = 0; i < 200; ++i) {
        double y = upos(rng);
        RealApprox w = lambert_w(0, RealApprox(y));
        RealApprox resid = w * exp(w) - RealApprox(y);
        CHECK(std::abs(resid.to_double()) < 1e-22 + resid.error());
    }
    for (int i = 0; i < 200; ++i) {
        double y = uneg(rng);
        RealApprox w = lambert_w(-1, RealApprox(y));
        RealApprox resid = w * exp(w) - RealApprox(y);
        CHECK(std::abs(resid.to_double()) < 1e-22 + resid.error());
        CHECK(w.to_double() < -1.0 + 1e-9);
    }

    // Near the branch point both branches collapse to -1.
    RealApprox near = lambert_w(0, RealApprox(-std::exp(-1.0) + 1e-18, 1e-20));
    CHECK(std::abs(near.to_double() + 1.0) < 0.01);
    CHECK_THROWS_AS(lambert_w(-1, RealApprox(0.5)), domain_error);
    CHECK_THROWS_AS(lambert_w(0, RealApprox(-1.0)), domain_error);
}

TEST_CASE("positivity threshold of a*s - b - log s") {
    // Oracle: bisection for a = 1, b = 2 (root near 3.1462).
    double r12 = bisect(2.0, 40.0, [](double s) { return s - 2.0 - std::log(s); });
    PositivityThreshold th = positivity_threshold(RealApprox(1.0), RealApprox(2.0));
    CHECK(std::abs(th.root.to_double() - r12) < 1e-10);
    CHECK(th.root.to_double() > 3.14);
    CHECK(th.root.to_double() < 3.15);

    CHECK_THROWS_AS(positivity_threshold(RealApprox(2.0), RealApprox(0.5)), domain_error);

    std::mt19937 rng(7771);
    std::uniform_real_distribution<double> ua(0.05, 2.0), ub(0.5, 20.0);
    for (int i = 0; i < 200; ++i) {
        double a = ua(rng), b = ub(rng);
        if (b <= 1 + std::log(a) + 0.05)
            continue;
        PositivityThreshold t = positivity_threshold(RealApprox(a), RealApprox(b));
        double root = t.root.to_double();
        double margin = std::max(1e-9, 10 * t.root.error());
        double above = a * (root + margin) - b - std::log(root + margin);
        double below = a * (root - margin) - b - std::log(root - margin);
        CHECK(above > -1e-12);
        CHECK(below < 1e-12);
        CHECK(t.lower <= root);
        CHECK(t.upper.to_double() >= root - 1e-12);
        // Everything at or beyond the certified upper end stays positive.
        double s = t.upper.to_double() * 1.000001 + 1e-9;
        CHECK(a * s - b - std::log(s) > 0);
    }
}

TEST_CASE("heights from minimal polynomials: pure roots of two") {
    for (int n = 1; n <= 6; ++n) {
        std::vector<Int> cs(n + 1, Int(0));
        cs[0] = -2;
        cs[n] = 1;
        RealApprox h = height_from_minpoly(IntPoly(cs), 1e-12);
        CHECK(std::abs(h.to_double() - std::log(2.0) / n) < 1e-10);
    }
}

TEST_CASE("heights from minimal polynomials: assorted frozen values") {
    // Rational 3/4 via 4x - 3: height log 4.
    CHECK(std::abs(height_from_minpoly(IntPoly({Int(-3), Int(4)}), 1e-12).to_double() -
                   std::log(4.0)) < 1e-12);
    // Roots of unity have height zero.
    CHECK(std::abs(height_from_minpoly(IntPoly({Int(1), Int(1), Int(1)}), 1e-12).to_double()) <
          1e-10);
    // Golden ratio: Mahler measure is phi itself, height log(phi)/2.
    double lphi = std::log((1.0 + std::sqrt(5.0)) / 2.0);
    CHECK(std::abs(height_from_minpoly(IntPoly({Int(-1), Int(-1), Int(1)}), 1e-12).to_double() -
                   lphi / 2) < 1e-10);
    // Multiplicities do not change the height: (x^2-3)^2 vs x^2-3.
    IntPoly f({Int(-3), Int(0), Int(1)});
    RealApprox h1 = height_from_minpoly(f, 1e-12);
    RealApprox h2 = height_from_minpoly(f * f, 1e-12);
    CHECK(std::abs(h1.to_double() - h2.to_double()) < 1e-10);
    CHECK(std::abs(h1.to_double() - std::log(3.0) / 2) < 1e-10);
}

TEST_CASE("complex root isolation certifies disjoint disks") {
    // (x^2+1)(x-2)(x+3): all roots simple and well separated.
    IntPoly f = IntPoly({Int(1), Int(0), Int(1)}) * IntPoly({Int(-2), Int(1)}) *
                IntPoly({Int(3), Int(1)});
    auto roots = complex_roots(f, 1e-20);
    REQUIRE(roots.size() == 4);
    int found_i = 0, found_2 = 0, found_m3 = 0;
    for (const auto& r : roots) {
        CHECK(r.radius < 1e-20);
        double re = static_cast<double>(r.re), im = static_cast<double>(r.im);
        if (std::abs(re - 2) < 1e-10 && std::abs(im) < 1e-10)
            ++found_2;
        if (std::abs(re + 3) < 1e-10 && std::abs(im) < 1e-10)
            ++found_m3;
        if (std::abs(re) < 1e-10 && std::abs(std::abs(im) - 1) < 1e-10)
            ++found_i;
    }
    CHECK(found_2 == 1);
    CHECK(found_m3 == 1);
    CHECK(found_i == 2);
}

TEST_CASE("integer factorization round trip and squarefree parts") {
    Int n = Int(2) * 2 * 2 * 2 * 2 * 9 * 7 * 101;
    auto fac = factorize(n);
    Int back = 1;
    for (auto& [p, e] : fac) {
        CHECK(is_probable_prime(p));
        back *= pow(p, static_cast<unsigned>(e));
    }
    CHECK(back == n);

    auto [s1, t1] = squarefree_part(Int(18));
    CHECK(s1 == 2);
    CHECK(t1 == 3);
    auto [s2, t2] = squarefree_part(Int(-12));
    CHECK(s2 == -3);
    CHECK(t2 == 2);
    auto [s3, t3] = squarefree_part(Int(1));
    CHECK(s3 == 1);
    CHECK(t3 == 1);

    std::mt19937 rng(424242);
    std::uniform_int_distribution<long> d(2, 4000);
    for (int i = 0; i < 300; ++i) {
        Int m = d(rng);
        auto [s, t] = squarefree_part(m);
        CHECK(s * t * t == m);
        auto [s_again, t_again] = squarefree_part(s);
        CHECK(t_again == 1);
    }

    Int root;
    CHECK(is_perfect_square(Int(144), &root));
    CHECK(root == 12);
    CHECK(!is_perfect_square(Int(145), &root));
    CHECK(is_perfect_square(Int(0), &root));
    CHECK(root == 0);
}

TEST_CASE("quadratic field elements: golden ratio identities") {
    QuadElt g(Rat(1, 2), Rat(1, 2), Int(5));
    CHECK(g * g == g + QuadElt(Rat(1)));
    CHECK(g.norm() == Rat(-1));
    CHECK(g.trace() == Rat(1));
    auto mp = g.min_poly();
    REQUIRE(mp.size() == 3);
    CHECK(mp[0] == Rat(-1));
    CHECK(mp[1] == Rat(-1));
    CHECK(mp[2] == Rat(1));
    CHECK(g / g == QuadElt(Rat(1)));
    CHECK((g * g.conj()) == QuadElt(g.norm()));
    CHECK(!g.is_rational());
    CHECK((g - g).is_rational());
    CHECK(g.embed().to_double() == doctest::Approx((1 + std::sqrt(5.0)) / 2));
}

TEST_CASE("polynomial utilities") {
    IntPoly f({Int(-1), Int(0), Int(1)});   // x^2 - 1
    IntPoly g({Int(1), Int(2), Int(1)});    // (x+1)^2
    IntPoly prod = f * g;
    CHECK(prod.degree() == 4);
    CHECK(prod.eval(Rat(2)) == Rat(27));

    auto sq = squarefree_decompose(prod);   // (x-1) * (x+1)^3
    Int lead = 1;
    IntPoly rebuilt = IntPoly::constant(1);
    for (auto& part : sq) {
        for (int i = 0; i < part.mult; ++i)
            rebuilt = rebuilt * part.poly;
    }
    CHECK((rebuilt == prod || rebuilt * IntPoly::constant(-1) == prod));
    bool saw_cubed = false;
    for (auto& part : sq)
        if (part.mult == 3 && part.poly.degree() == 1)
            saw_cubed = true;
    CHECK(saw_cubed);

    RatPoly m = RatPoly({Rat(-2), Rat(0), Rat(1)});  // x^2 - 2, monic
    RatPoly r = rem_mod_small(IntPoly({Int(0), Int(0), Int(0), Int(1)}), m);
    REQUIRE(r.degree() == 1);
    CHECK(r[1] == Rat(2));
    CHECK(r[0] == Rat(0));

    IntPoly scaled = f.scale_arg(Rat(1, 3));  // x^2/9 - 1 cleared: x^2 - 9
    CHECK(scaled.eval(Rat(3)) == Rat(0));
}
