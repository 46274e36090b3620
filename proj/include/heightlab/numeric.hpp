#pragma once

#include "heightlab/poly.hpp"
#include "heightlab/real.hpp"

namespace heightlab {

/// Value of a p-adic valuation: an integer, or +infinity (attained only at 0).
struct Valuation {
    bool infinite = false;
    long v = 0;

    static Valuation infinity() { return {true, 0}; }
    static Valuation of(long value) { return {false, value}; }
    bool operator==(const Valuation& o) const {
        return infinite == o.infinite && (infinite || v == o.v);
    }
};

/// ord_p of a nonzero rational; Valuation::infinity() for 0. p must be prime (>= 2).
Valuation ord_p(const Rat& x, const Int& p);
Valuation ord_p(const Int& x, const Int& p);

/// Strip every factor of p: returns (x / p^ord, ord). x nonzero.
std::pair<Int, long> strip_p(const Int& x, const Int& p);

/// Lambert W on branch 0 (y >= -1/e) or branch -1 (-1/e <= y < 0),
/// solved by bracketed bisection on x e^x = y. Near the branch point the
/// result is pinned to -1 with an error bound from the local expansion.
RealApprox lambert_w(int branch, const RealApprox& y);

struct PositivityThreshold {
    RealApprox root;   // unique root of a x - b - log x beyond which it stays positive
    double lower;      // certified 5/8
    RealApprox upper;  // (8 / (5a)) (log(1/a) + b)
};

/// For b >= a > 0: r(x) = a x - b - log x has its largest root at
/// -(1/a) W_{-1}(-a e^{-b}), and r > 0 to the right of it.
PositivityThreshold positivity_threshold(const RealApprox& a, const RealApprox& b);

/// Absolute logarithmic Weil height of any root of f (irreducible not required:
/// uses (1/deg) log M(squarefree-respecting Mahler measure)). For an algebraic
/// number given by its minimal polynomial this is h(alpha). eps = target error.
RealApprox height_from_minpoly(const IntPoly& f, double eps);

/// Complex roots of f to certified accuracy: pairs (root approximation, radius).
struct ComplexApprox {
    Float re, im;
    double radius;
};
std::vector<ComplexApprox> complex_roots(const IntPoly& f, double eps);

}  // namespace heightlab
