#pragma once

#include "heightlab/reduction.hpp"

namespace heightlab {

/// Certified one-step height drift of the x-coordinate duplication map
/// x -> (x^4 - b4 x^2 - 2 b6 x - b8) / (4x^3 + b2 x^2 + 2 b4 x + b6)
/// on an integral model: |h(x(2P)) - 4 h(x(P))| <= c. The lower direction
/// comes from Bezout cofactors of the two quartics, the upper from
/// coefficient sums, and gcd_cap bounds the numerator/denominator cancellation.
/// cofactor_norm is the largest weighted 1-norm among the cofactor rows:
/// max(|F|, |G|) >= max(|n|, |d|)^4 / (cofactor_norm * gcd of the solve).
struct DuplicationBound {
    RealApprox log_upper;
    RealApprox log_lower;
    RealApprox c;
    Int gcd_cap;
    Rat cofactor_norm;
};
DuplicationBound duplication_bound(const WeierstrassCurve& E_integral);

struct HeightOptions {
    double eps = 1e-10;       // absolute error target
    long max_bits = 1500000;  // cap on numerator/denominator bits in the doubling route
};

/// Neron-Tate canonical height of a rational point, certified to opt.eps.
/// Doubling limit h = lim 4^{-n} h_x([2^n]P) / 2 with an explicit tail bound;
/// switches to the local decomposition when iterates would exceed max_bits.
RealApprox canonical_height(const WeierstrassCurve& E, const CurvePoint& P,
                            const HeightOptions& opt = {});

/// Same value assembled from certified local heights on the global minimal
/// model (independent route, used to cross-check the doubling limit).
RealApprox canonical_height_decomposed(const WeierstrassCurve& E, const CurvePoint& P,
                                       double eps = 1e-10);

/// Archimedean local height in the model-independent normalization
/// (behaves like (1/2) log |x| - (1/12) log |disc| near the origin).
RealApprox local_height_archimedean(const WeierstrassCurve& E, const CurvePoint& P,
                                    double eps = 1e-10);

/// Tate telescoping series for the archimedean local height in the naive
/// normalization (1/2) log |x| + o(1); add -(1/12) log |disc| for the
/// canonical one. Exposed separately for the summation identities.
RealApprox tate_series(const WeierstrassCurve& E, const CurvePoint& P, double eps = 1e-10);

/// Non-archimedean canonical local height at p. Requires the point to reduce
/// into the identity component at p (input_error otherwise):
/// (1/2) max(0, -ord_p x) log p + (1/12) ord_p(disc_min) log p on the minimal model.
RealApprox local_height_nonarchimedean(const WeierstrassCurve& E, const CurvePoint& P,
                                       const Int& p);

/// Height pairing <P, Q> = (h(P+Q) - h(P) - h(Q)) / 2.
RealApprox height_pairing(const WeierstrassCurve& E, const CurvePoint& P, const CurvePoint& Q,
                          const HeightOptions& opt = {});

struct LocalHeightTerm {
    Int p;  // 0 marks the archimedean place
    RealApprox value;
};

/// Full certified decomposition: canonical height of P together with the
/// local heights of [L]P on the global minimal model, where L is the smallest
/// multiplier pushing P onto the identity component everywhere.
struct HeightBreakdown {
    RealApprox total;                   // canonical height of P itself
    Int smooth_multiple = 1;            // L
    std::vector<LocalHeightTerm> terms; // local heights of [L]P, sum = L^2 total
    WeierstrassCurve minimal_model;
    HeightBreakdown(RealApprox t, WeierstrassCurve m)
        : total(std::move(t)), minimal_model(std::move(m)) {}
};
HeightBreakdown canonical_height_breakdown(const WeierstrassCurve& E, const CurvePoint& P,
                                           double eps = 1e-10);

}  // namespace heightlab
