#pragma once

#include "heightlab/numeric.hpp"
#include "heightlab/reduction.hpp"

#include <string>
#include <vector>

namespace heightlab {

/// Arithmetic data entering the explicit height floors at a multiplicative
/// place: residue characteristic p, field degree d, ramification cap e for
/// the places above p, ord_v(1/j) > 0 at the place, and the height of j.
struct BoundInput {
    Int p;
    long d = 1;
    long e = 1;
    long ordv_jinv = 1;
    RealApprox hj;
};

/// Fill a BoundInput from a curve at a multiplicative prime of the given
/// degree-d field picture (d = e = 1 describes rational points).
/// input_error if the reduction at p is not multiplicative.
BoundInput bound_input_from_curve(const WeierstrassCurve& E, const Int& p, long d = 1,
                                  long e = 1);

/// The pigeonhole count ceil((10 d / log p)(log(6 d / log p) + h(j)/6 + 32/5)),
/// with interval escalation until the ceiling is unambiguous.
long multiplicity_count(const BoundInput& in);

/// Real threshold behind the count, as the Lambert-W root of
/// (log p / 6d) x - (h(j)/6 + 32/5) - log x. Always below the count.
RealApprox multiplicity_threshold(const BoundInput& in);

/// Shared kernel of the split-multiplicative floors:
/// ((log p / 2d) c - 3 log 2) / ((8c^3 - 2c) (multiplier * ord_v(1/j))^2)
/// where c is the pigeonhole count. The callers pass multiplier = e! or e.
RealApprox split_height_floor(const BoundInput& in, const Int& multiplier);

struct LowerBoundResult {
    RealApprox height_floor;  // certified positive lower bound on the locus
    RealApprox torsion_cap;   // strict upper bound for the exceptional count
    long count = 0;           // the pigeonhole count used
    std::vector<std::pair<std::string, std::string>> trace;
};

/// Height floor for non-torsion points of E in fields of degree d with
/// ramification at most e above the split-multiplicative p, plus the cap
/// (1/3) X^3 + (1/2) X^2, X = e! * count * ord, on the torsion in that locus.
LowerBoundResult bound_elliptic_split(const BoundInput& in);

/// Same data for the associated Lattes map: the floor halves exactly, and
/// the preperiodic cap is (4/3) X^3 + X^2 (the sharper line (4/3) X^3 + X + 2
/// from the counting argument is reported in the trace).
LowerBoundResult bound_lattes_split(const BoundInput& in);

/// Nonsplit-multiplicative or potentially multiplicative additive reduction:
/// pass to the degree-k extension where the reduction becomes split
/// (k from split_degree), with the place data rescaled by the ramification
/// picked up on the way.
LowerBoundResult bound_extension_split(const BoundInput& in, long k_degree,
                                       long e_extension);

/// Galois-stable fields: the factorial improves to e itself, and the torsion
/// cap sharpens to (count * ord * e)^2.
LowerBoundResult bound_galois_stable(const BoundInput& in);

/// Additive reduction reached through unramified extensions (e = 1): the
/// count shifts by 2 and the multiplier is 12 (squared to 144), with cap
/// (12 count + 24)^2. ord_v(1/j) is not used.
LowerBoundResult bound_additive_unramified(const BoundInput& in);

/// Totally real fields: hhat_f >= 1 / (108 (h(j) + 10)^5) for the Lattes map.
RealApprox bound_totally_real(const RealApprox& hj);

/// Tower cap M = max(p^(6f) + 1 + 2 p^(3f), 72 e nu) entering the
/// preperiodic-points bound; nu = max(0, -ord_w(j)).
Int preperiodic_tower_cap(const Int& p, long e, long f, long nu);

struct PreperBoundInput {
    Int p;
    long e = 1;  // ramification of w | p
    long f = 1;  // residue degree of w | p
    long nu = 0; // max(0, -ord_w(j))
    RealApprox hj;
};

/// Field-uniform floor and preperiodic count bound over extensions L with
/// one place w | p of bounded (e, f): floor
/// (25/256) (log p / 6eM)^3 / (log(6eM) + log p / 3e + h(j)/6 + 32/5)^2 and
/// cap (24 e M / 5 log p)(same log sum) + 2.
LowerBoundResult bound_preperiodic_tower(const PreperBoundInput& in);

/// max over integer s in [2, 4 count] of
/// ((log p / 2d) s - (h(j)/2 + 96/5) - 3 log s) / ((s^3 - s)(e! ord)^2);
/// never below the closed-form floor, which is its value at s = 2 count.
RealApprox best_scan_bound(const BoundInput& in);

/// Smallest extension degree k (with the ramification e_ext it forces above
/// p) over which the reduction becomes split multiplicative: 1 for split,
/// 2 for nonsplit (unramified quadratic), 2 or 4 through a quadratic twist
/// for potentially multiplicative additive reduction, 48 as the certified
/// general fallback. input_error when the reduction is potentially good.
struct SplitDegree {
    long k;
    long e_ext;
};
SplitDegree split_degree(const WeierstrassCurve& E, const Int& p);

}  // namespace heightlab
