#pragma once

#include <string>
#include <vector>

#include "heightlab/bounds.hpp"
#include "heightlab/curve.hpp"
#include "heightlab/heights.hpp"
#include "heightlab/lattes.hpp"

namespace heightlab {

/// One row of an inequality sweep: the two sides at parameter s and whether
/// lhs >= rhs held within the certified enclosures.
struct CheckRow {
    long s = 0;
    RealApprox lhs;
    RealApprox rhs;
    bool holds = false;
};

struct CheckReport {
    std::string name;
    bool all_hold = true;
    std::vector<CheckRow> rows;
};

/// 2 * sum_{i=1}^{s-1} i^2 (s - i), the weight total for the multiple sums
/// below. Equals (s^4 - s^2) / 6; pairing_weight_identity checks that
/// in exact arithmetic for every s up to smax.
Rat pairing_weight_sum(long s);
bool pairing_weight_identity(long smax);

/// sum_{d=1}^{s-1} 2(s-d) hhat([d]Q) against (s^4 - s^2)/6 * hhat(Q), each
/// height computed independently. Holds up to numeric error because
/// hhat([d]Q) = d^2 hhat(Q).
CheckReport pairing_numeric_check(const WeierstrassCurve& E, const CurvePoint& Q,
                                  long smax, double tol = 1e-5);

/// Counting inequality at a split multiplicative prime: for Q non-torsion and
/// s >= 2,
///   sum_{d=1}^{s-1} 2(s-d) hhat([d]Q)
///     >= (log p / 12d) s^2 - (h(j)/12 + 16/5) s - (s/2) log s.
/// Sweeps s = 2..smax and records both sides.
CheckReport multiple_sum_check(const WeierstrassCurve& E, const CurvePoint& Q,
                               const Int& p, long field_degree, long smax);

/// Archimedean pair repulsion: with R_i = [i]Q distinct for i = 1..s,
///   sum_{i != j} lambda_inf(R_i - R_j)
///     >= -(s/2) log s - (16/5) s - (s/12) log^+ |1/j|.
CheckReport pair_repulsion_check(const WeierstrassCurve& E, const CurvePoint& Q,
                                 long smax);

/// hhat_f(x(P)) against 2 hhat_E(P) along multiples of P, through the exact
/// dynamical route and the curve route separately.
CheckReport dynamical_match_check(const WeierstrassCurve& E, const CurvePoint& P,
                                  long mmax, double tol = 1e-6);

/// hhat([m]P) against m^2 hhat(P), both sides computed from scratch.
CheckReport quadraticity_check(const WeierstrassCurve& E, const CurvePoint& P,
                               long mmax, double tol = 1e-6);

}  // namespace heightlab
