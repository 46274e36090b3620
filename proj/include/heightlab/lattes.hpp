#pragma once

#include "heightlab/heights.hpp"
#include "heightlab/ramify.hpp"

#include <optional>

namespace heightlab {

/// The degree-4 rational map f(x) = (x^4 - 2Ax^2 - 8Bx + A^2) / (4x^3 + 4Ax + 4B)
/// induced on x-coordinates by doubling on y^2 = x^3 + Ax + B, so that
/// f(x(P)) = x([2]P) and the dynamical canonical height satisfies
/// hhat_f(x(P)) = 2 hhat(P). Rational (A, B) are conjugated by x -> v^2 x
/// to an integral pair; the conjugation changes no canonical height.
class LattesMap {
  public:
    LattesMap(const Rat& A, const Rat& B);

    const Rat& A() const { return A0_; }
    const Rat& B() const { return B0_; }
    /// Integral parameters of the conjugated map.
    const Int& A_int() const { return Ai_; }
    const Int& B_int() const { return Bi_; }
    /// v^2 of the conjugation x -> v^2 x (1 when A, B already integral).
    const Rat& scale() const { return scale_; }
    /// The curve y^2 = x^3 + A_int x + B_int whose doubling realizes the map.
    const WeierstrassCurve& curve() const { return curve_; }
    /// Height drift data of the conjugated map (shared with the curve route).
    const DuplicationBound& bound() const { return bound_; }

    /// Exact image f(t); nullopt when t is a pole (f(t) = infinity).
    std::optional<Rat> apply(const Rat& t) const;

  private:
    Rat A0_, B0_, scale_;
    Int Ai_, Bi_;
    WeierstrassCurve curve_;
    DuplicationBound bound_;
};

/// Exact orbit classification. Either the forward orbit revisits a state
/// (preperiodic, with preperiod + period reported and the orbit listed up to
/// the first repeat) or its naive height certifiably escapes the
/// preperiodicity bound c/3 (+1 margin) and the point has positive height.
struct LattesOrbit {
    bool preperiodic = false;
    long preperiod = -1;
    long period = -1;
    bool hits_infinity = false;
    std::vector<Rat> points;  // orbit in the input coordinates
};
LattesOrbit classify_orbit(const LattesMap& f, const Rat& t, long max_steps = 100000);
bool is_preperiodic(const LattesMap& f, const Rat& t);

/// Dynamical canonical height hhat_f(t) = lim 4^{-k} h(f^k(t)), certified to
/// eps. Preperiodic points short-circuit to exact zero. The series is summed
/// per place: an interval iteration of the normalized quartic pair handles
/// the archimedean term, and residue tracking mod p^E recovers the gcd
/// corrections for the finitely many p dividing the cancellation cap.
RealApprox lattes_height(const LattesMap& f, const Rat& t, double eps = 1e-10);

/// Numerator of f(x) - beta: the degree-4 polynomial whose roots are the
/// preimages of beta. separable reports whether the four preimages are
/// distinct (false exactly at critical values).
struct PreimagePoly {
    IntPoly poly;
    bool separable;
};
PreimagePoly preimage_polynomial(const LattesMap& f, const Rat& beta);

/// Level k of the small-height tower above p: alpha_k = p xi_k where
/// f_0^k(xi_k) = -1 for the map of y^2 = x^3 - 2x. Q(alpha_k) = Q(xi_k),
/// so the ramification certificate runs on the monic xi-polynomial.
struct SmallHeightLevel {
    int level;
    IntPoly xi_poly;     // L_k, monic of degree 4^k, defines xi_k
    IntPoly alpha_poly;  // p^(4^k) L_k(x / p), defines alpha_k = p xi_k
    RamCert cert;        // unramifiedness of Q(xi_k) = Q(alpha_k) at p
    RealApprox height;   // hhat_f(alpha_k) = base_height / 4^k
};

/// Sequence of algebraic points of the Lattes map for y^2 = x^3 - 2p^2 x
/// whose heights decay by exactly 1/4 per level while the generated fields
/// stay unramified at p (certified level by level).
struct SmallHeightSequence {
    Int p;
    Rat alpha0;                // -p, the rational seed alpha_0
    RealApprox base_height;    // hhat_f(alpha_0) > 0, certified
    Rat level_ratio;           // exactly 1/4
    std::vector<SmallHeightLevel> levels;
};
SmallHeightSequence small_height_sequence(const Int& p, int levels, double eps = 1e-10);

}  // namespace heightlab
