#pragma once

#include "heightlab/curve.hpp"

#include <string>

namespace heightlab {

enum class RamVerdict { Unramified, Ramified, Inconclusive };

const char* ram_verdict_name(RamVerdict v);

/// Ramification certificate for a prime p against either a quadratic field
/// (exact answer) or the splitting field of an integer polynomial
/// (squarefree-mod-p sufficient test).
struct RamCert {
    Int p;
    RamVerdict verdict = RamVerdict::Inconclusive;
    int index = 1;        // ramification index when verdict is Ramified
    std::string subject;  // human-readable description of the certified field
};

/// Exact ramification of p in Q(sqrt(D)) for squarefree D != 0, 1.
/// Odd p ramifies iff p | D; p = 2 is unramified iff D = 1 mod 4.
RamCert quadratic_ramification(const Int& D, const Int& p);

/// Sufficient certificate: if g is separable of full degree mod p, every root
/// of g generates a field unramified at p. Never claims ramification.
RamCert unramified_certificate(const IntPoly& g, const Int& p);

/// A point of E(Q_bar) landing in the maximal extension unramified at p,
/// with machine certificates. Coordinates are described by defining data:
/// rational values where the construction gives them, otherwise minimal
/// polynomials of degree 2 (x), 3 (x, the p = 2 branch) or 4 (y).
struct UnramifiedPoint {
    Int p;
    long n = 0;             // index in the search sequence that succeeded
    bool x_rational = false;
    Rat x;                  // valid when x_rational
    bool y_rational = false;
    Rat y;                  // valid when y_rational
    IntPoly x_minpoly;      // always set (degree 1 when x is rational)
    IntPoly y_minpoly;      // set when y is irrational
    RamCert x_cert;
    RamCert y_cert;
    bool non_torsion_certified = false;  // no m-torsion x-coordinate, m <= 30
};

/// Realizes the generic unramified non-torsion point on y^2 = x^3 + Ax + B
/// (integral at p): x_n = np / np + sqrt(A) / np + 1 depending on the
/// valuations of A and B for odd p, and y_n = 2n / 2n + 1 with x a root of
/// x^3 + Ax + (B - y_n^2) for p = 2. Scans n = 1..n_cap until both the
/// ramification and the non-torsion certificates hold.
UnramifiedPoint construct_unramified_point(const WeierstrassCurve& E, const Int& p,
                                           long n_cap = 50);

}  // namespace heightlab
