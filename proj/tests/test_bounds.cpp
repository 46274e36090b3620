#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "heightlab/bounds.hpp"
#include "heightlab/heights.hpp"

using namespace heightlab;

namespace {

BoundInput make_input(long p, long d, long e, long N, RealApprox hj) {
    BoundInput in;
    in.p = p;
    in.d = d;
    in.e = e;
    in.ordv_jinv = N;
    in.hj = hj;
    return in;
}

}  // namespace

TEST_CASE("pigeonhole count on a hand-checked input") {
    // p = 7, d = 1, h(j) = 4 log 7: inner value 45.34..., so the count is 46
    auto in = make_input(7, 1, 1, 1, log_int(Int(7)) * RealApprox(4.0));
    CHECK(multiplicity_count(in) == 46);

    RealApprox thr = multiplicity_threshold(in);
    CHECK(thr.certainly_positive());
    CHECK(thr.upper() < 46);
    CHECK(thr.lower() > 0.625);
}

TEST_CASE("count dominates the Lambert threshold across a grid") {
    for (long p : {2L, 3L, 5L, 7L, 37L}) {
        for (double hj : {0.7, 5.0, 20.0}) {
            for (long d : {1L, 2L}) {
                auto in = make_input(p, d, 1, 1, RealApprox(hj));
                long c = multiplicity_count(in);
                RealApprox thr = multiplicity_threshold(in);
                CHECK(c >= 1);
                CHECK(thr.upper() < static_cast<double>(c));
                CHECK(thr.lower() > 0.625);
            }
        }
    }
}

TEST_CASE("split floors stay positive and halve exactly for the dynamical map") {
    for (long p : {2L, 5L, 37L}) {
        for (long N : {1L, 2L, 5L}) {
            for (long e : {1L, 2L, 3L}) {
                auto in = make_input(p, 1, e, N, RealApprox(8.0));
                auto ell = bound_elliptic_split(in);
                auto lat = bound_lattes_split(in);
                CHECK(ell.height_floor.certainly_positive());
                CHECK(lat.height_floor.certainly_positive());
                CHECK(lat.height_floor.value() == ell.height_floor.value() / 2);
                CHECK(ell.torsion_cap.value() > 0);
                CHECK(lat.torsion_cap.value() > ell.torsion_cap.value());
            }
        }
    }
}

TEST_CASE("galois-stable variant replaces the factorial by e") {
    auto in = make_input(5, 2, 3, 2, RealApprox(4.0));
    auto gal = bound_galois_stable(in);
    // same kernel with multiplier e instead of e!
    RealApprox direct = split_height_floor(in, Int(3));
    CHECK(gal.height_floor.value() == direct.value());
    RealApprox viafact = split_height_floor(in, Int(6));
    CHECK(gal.height_floor.value() > viafact.value());

    // for e <= 2 the factorial equals e and the floors coincide exactly
    auto in2 = make_input(5, 2, 2, 2, RealApprox(4.0));
    CHECK(bound_galois_stable(in2).height_floor.value() ==
          bound_elliptic_split(in2).height_floor.value());

    Int X = Int(gal.count) * 2 * 3;
    CHECK(gal.torsion_cap.value() == RealApprox(Rat(X * X)).value());
}

TEST_CASE("additive variant shifts the count and squares twelve") {
    auto in = make_input(7, 1, 1, 1, RealApprox(3.0));
    auto add = bound_additive_unramified(in);
    CHECK(add.height_floor.certainly_positive());

    bool saw_shift = false, saw_144 = false;
    for (auto& [k, v] : add.trace) {
        if (k == "count_plus_2" && v == std::to_string(add.count + 2)) saw_shift = true;
        if (k == "multiplier_squared" && v == "144") saw_144 = true;
    }
    CHECK(saw_shift);
    CHECK(saw_144);

    Int capb = 12 * Int(add.count) + 24;
    CHECK(add.torsion_cap.value() == RealApprox(Rat(capb * capb)).value());

    auto ramified = make_input(7, 1, 2, 1, RealApprox(3.0));
    CHECK_THROWS_AS(bound_additive_unramified(ramified), input_error);
}

TEST_CASE("scan bound dominates the closed form") {
    for (long p : {2L, 7L, 37L}) {
        for (double hj : {1.5, 9.0}) {
            auto in = make_input(p, 1, 1, 1, RealApprox(hj));
            RealApprox scan = best_scan_bound(in);
            RealApprox closed = bound_elliptic_split(in).height_floor;
            CHECK((scan - closed).certainly_positive());
        }
    }
}

TEST_CASE("totally real floor is explicit in h(j)") {
    RealApprox b = bound_totally_real(RealApprox(0.0));
    CHECK(b.agrees_with(RealApprox(Rat(1, 10800000)), 1e-12));
    CHECK(bound_totally_real(RealApprox(5.0)).value() < b.value());
}

TEST_CASE("tower cap and the preperiodic bound") {
    CHECK(preperiodic_tower_cap(Int(3), 1, 1, 0) == 784);
    CHECK(preperiodic_tower_cap(Int(2), 1, 1, 0) == 81);
    CHECK(preperiodic_tower_cap(Int(2), 2, 1, 200) == 28800);

    PreperBoundInput in{Int(3), 1, 1, 0, RealApprox(0.0)};
    auto out = bound_preperiodic_tower(in);
    CHECK(out.height_floor.certainly_positive());
    CHECK(out.torsion_cap.value() > 2);
    bool sawM = false;
    for (auto& [k, v] : out.trace)
        if (k == "M" && v == "784") sawM = true;
    CHECK(sawM);
}

TEST_CASE("bound input read off a curve at a multiplicative prime") {
    auto E37 = WeierstrassCurve(Rat(0), Rat(0), Rat(1), Rat(-1), Rat(0));
    auto in = bound_input_from_curve(E37, Int(37));
    CHECK(in.ordv_jinv == 1);
    auto res = bound_elliptic_split(in);
    CHECK(res.height_floor.certainly_positive());
    // the floor must sit below the actual minimal height on the curve
    auto P = CurvePoint::affine(QuadElt(Rat(0)), QuadElt(Rat(0)));
    RealApprox h = canonical_height(E37, P);
    CHECK(res.height_floor.upper() < h.lower());

    auto Esplit2 = WeierstrassCurve(Rat(1), Rat(0), Rat(0), Rat(0), Rat(-4));
    auto in2 = bound_input_from_curve(Esplit2, Int(2));
    CHECK(in2.ordv_jinv == 2);

    CHECK_THROWS_AS(bound_input_from_curve(E37, Int(2)), input_error);
}

TEST_CASE("degree needed to reach split reduction") {
    auto Esplit2 = WeierstrassCurve(Rat(1), Rat(0), Rat(0), Rat(0), Rat(-4));
    auto s1 = split_degree(Esplit2, Int(2));
    CHECK(s1.k == 1);
    CHECK(s1.e_ext == 1);

    auto E37 = WeierstrassCurve(Rat(0), Rat(0), Rat(1), Rat(-1), Rat(0));
    auto s2 = split_degree(E37, Int(37));
    CHECK(s2.k == 2);
    CHECK(s2.e_ext == 1);

    // twist of a multiplicative curve: additive, potentially multiplicative
    auto E11 = WeierstrassCurve(Rat(0), Rat(-1), Rat(1), Rat(-10), Rat(-20));
    auto T = to_integral_short_any(E11);
    auto Es = E11.transformed(T);
    auto Etw = twist(Es, Rat(11));
    auto lr = local_reduction(Etw, Int(11));
    REQUIRE(lr.type == ReductionType::Additive);
    REQUIRE(lr.potentially_multiplicative);
    auto s3 = split_degree(Etw, Int(11));
    CHECK(s3.k == 2);
    CHECK(s3.e_ext == 2);

    // j = 1728 twist is potentially good
    auto Ecm = WeierstrassCurve::short_form(Rat(-50), Rat(0));
    CHECK_THROWS_AS(split_degree(Ecm, Int(5)), input_error);

    auto ext = bound_extension_split(bound_input_from_curve(E37, Int(37)), s2.k, s2.e_ext);
    CHECK(ext.height_floor.certainly_positive());
    CHECK(ext.height_floor.value() <
          bound_elliptic_split(bound_input_from_curve(E37, Int(37))).height_floor.value());
}
