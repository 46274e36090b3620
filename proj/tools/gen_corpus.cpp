// Regenerates data/curves.jsonl: curve/prime pairs with reduction data frozen
// from the point-count oracle, plus role markers for curves the checks rely on.
// Types here come from counting alone so the table stays independent of the
// algebraic classification the tests compare against.

#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "heightlab/curve.hpp"
#include "heightlab/numeric.hpp"
#include "heightlab/reduction.hpp"

using namespace heightlab;

namespace {

struct Entry {
    WeierstrassCurve E;
    Int p;
    std::string label;
    std::string role;
    CurvePoint point;  // infinity = none
};

std::string curve_key(const WeierstrassCurve& E, const Int& p) {
    std::ostringstream os;
    os << E.a1() << "|" << E.a2() << "|" << E.a3() << "|" << E.a4() << "|" << E.a6()
       << "@" << p;
    return os.str();
}

long rat_long(const Rat& q) { return numerator(q).convert_to<long>(); }

void print_entry(const Entry& en) {
    const auto& E = en.E;
    auto gm = global_minimal_model(E);
    ReductionType t = classify_by_point_count(gm.minimal, en.p);
    Int count = nonsingular_point_count(gm.minimal, en.p);

    std::ostringstream os;
    os << "{\"curve\":[" << rat_long(E.a1()) << "," << rat_long(E.a2()) << ","
       << rat_long(E.a3()) << "," << rat_long(E.a4()) << "," << rat_long(E.a6()) << "]"
       << ",\"p\":" << en.p << ",\"oracle_type\":\"" << reduction_type_name(t) << "\""
       << ",\"nonsingular_count\":" << count;
    if (t == ReductionType::MultiplicativeSplit ||
        t == ReductionType::MultiplicativeNonsplit) {
        Valuation vj = ord_p(E.j(), en.p);
        os << ",\"component_index\":" << -vj.v;
    }
    if (!en.label.empty()) os << ",\"label\":\"" << en.label << "\"";
    if (!en.role.empty()) os << ",\"role\":\"" << en.role << "\"";
    if (!en.point.infinity)
        os << ",\"point\":[\"" << en.point.x.rational() << "\",\""
           << en.point.y.rational() << "\"]";
    os << "}";
    std::cout << os.str() << "\n";
}

}  // namespace

int main() {
    std::vector<Entry> entries;
    std::set<std::string> seen;
    auto push = [&](Entry en) {
        if (seen.insert(curve_key(en.E, en.p)).second) entries.push_back(std::move(en));
    };

    auto P = [](long xn, long xd, long yn, long yd) {
        return CurvePoint::affine(QuadElt(Rat(xn, xd)), QuadElt(Rat(yn, yd)));
    };
    auto none = CurvePoint::at_infinity();

    auto W = [](long a1, long a2, long a3, long a4, long a6) {
        return WeierstrassCurve(Rat(a1), Rat(a2), Rat(a3), Rat(a4), Rat(a6));
    };

    // hand-picked anchors with known points
    push({W(0, 0, 1, -1, 0), Int(37), "37a1", "rank1-anchor", P(0, 1, 0, 1)});
    push({W(0, -1, 1, -10, -20), Int(11), "11a1", "torsion-anchor", P(5, 1, 5, 1)});
    push({W(0, 1, 1, -2, 0), Int(389), "389a1", "rank2-anchor", P(0, 1, 0, 1)});
    push({W(0, 0, 1, -7, 6), Int(5077), "5077a1", "rank3-anchor", P(0, 1, 2, 1)});
    push({W(1, 0, 0, 0, -4), Int(2), "", "split-anchor", P(4, 1, 6, 1)});
    push({W(0, 0, 0, -2, 0), Int(2), "", "additive-anchor", none});

    // second split-multiplicative curve carrying a certified non-torsion point
    long found_split = 1;
    for (long A = -6; A <= 6 && found_split < 2; ++A) {
        for (long B = -6; B <= 6 && found_split < 2; ++B) {
            Rat disc = Rat(-16) * (Rat(4) * A * A * A + Rat(27) * B * B);
            if (disc == 0) continue;
            auto E = W(0, 0, 0, A, B);
            auto gm = global_minimal_model(E);
            for (auto& [q, e] : gm.disc_factorization) {
                if (q < 3 || q > 500) continue;
                if (classify_by_point_count(gm.minimal, q) !=
                    ReductionType::MultiplicativeSplit)
                    continue;
                CurvePoint best = none;
                for (auto& R : rational_point_search(E, 3.0)) {
                    if (R.infinity || is_torsion(E, R)) continue;
                    best = R;
                    break;
                }
                if (best.infinity) continue;
                push({E, q, "", "split-anchor", best});
                ++found_split;
                break;
            }
        }
    }

    // bulk sweep: every bad prime up to 1000 of a grid of short curves,
    // plus one good prime each for contrast
    for (long A = -5; A <= 5; ++A) {
        for (long B = -5; B <= 5; ++B) {
            if (entries.size() >= 64) break;
            Rat disc = Rat(-16) * (Rat(4) * A * A * A + Rat(27) * B * B);
            if (disc == 0) continue;
            auto E = W(0, 0, 0, A, B);
            auto gm = global_minimal_model(E);
            for (auto& [q, e] : gm.disc_factorization) {
                if (q > 1000) continue;
                push({E, q, "", "", none});
            }
            for (long g : {5L, 7L, 11L, 13L}) {
                Valuation v = ord_p(Rat(gm.minimal.disc()), Int(g));
                if (v.v == 0 && !v.infinite) {
                    push({E, Int(g), "", "", none});
                    break;
                }
            }
        }
    }

    for (auto& en : entries) print_entry(en);
    return 0;
}
