#pragma once

#include "heightlab/poly.hpp"
#include "heightlab/quad.hpp"

#include <optional>

namespace heightlab {

/// Change of Weierstrass coordinates x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
struct ModelTransform {
    Rat u = 1, r = 0, s = 0, t = 0;

    ModelTransform inverse() const;
    /// first *this, then next.
    ModelTransform compose(const ModelTransform& next) const;
};

/// Elliptic curve y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q
/// with the standard derived quantities. Nonsingularity is enforced.
class WeierstrassCurve {
  public:
    WeierstrassCurve(Rat a1, Rat a2, Rat a3, Rat a4, Rat a6);
    static WeierstrassCurve short_form(Rat A, Rat B) {
        return WeierstrassCurve(0, 0, 0, std::move(A), std::move(B));
    }

    const Rat& a1() const { return a1_; }
    const Rat& a2() const { return a2_; }
    const Rat& a3() const { return a3_; }
    const Rat& a4() const { return a4_; }
    const Rat& a6() const { return a6_; }
    const Rat& b2() const { return b2_; }
    const Rat& b4() const { return b4_; }
    const Rat& b6() const { return b6_; }
    const Rat& b8() const { return b8_; }
    const Rat& c4() const { return c4_; }
    const Rat& c6() const { return c6_; }
    const Rat& disc() const { return disc_; }
    const Rat& j() const { return j_; }

    bool is_short() const { return a1_ == 0 && a2_ == 0 && a3_ == 0; }
    bool is_integral() const;
    /// Short-form coefficients; requires is_short().
    const Rat& A() const;
    const Rat& B() const;

    bool operator==(const WeierstrassCurve& o) const;

    /// Apply a coordinate change; invariants transform by powers of u.
    WeierstrassCurve transformed(const ModelTransform& t) const;

    std::string str() const;

  private:
    Rat a1_, a2_, a3_, a4_, a6_;
    Rat b2_, b4_, b6_, b8_, c4_, c6_, disc_, j_;
};

/// Affine point with coordinates in Q or a common quadratic field, or infinity.
struct CurvePoint {
    bool infinity = true;
    QuadElt x, y;

    static CurvePoint at_infinity() { return CurvePoint{}; }
    static CurvePoint affine(QuadElt px, QuadElt py) {
        return CurvePoint{false, std::move(px), std::move(py)};
    }
    bool is_rational() const {
        return infinity || (x.is_rational() && y.is_rational());
    }
    bool operator==(const CurvePoint& o) const;
    std::string str() const;
};

bool on_curve(const WeierstrassCurve& E, const CurvePoint& P);
CurvePoint negate(const WeierstrassCurve& E, const CurvePoint& P);
CurvePoint add(const WeierstrassCurve& E, const CurvePoint& P, const CurvePoint& Q);
CurvePoint scalar_mul(const WeierstrassCurve& E, const Int& m, const CurvePoint& P);

/// Map a point through a coordinate change (same direction as transformed()).
CurvePoint transform_point(const ModelTransform& t, const CurvePoint& P);

/// Transform bringing E to y^2 = x^3 + Ax + B (rational A, B).
ModelTransform to_short_form(const WeierstrassCurve& E);
/// Transform scaling a short-form curve to integral short form (minimal scaling).
ModelTransform to_integral_short(const WeierstrassCurve& E_short);
/// Composition of the two, for any input model.
ModelTransform to_integral_short_any(const WeierstrassCurve& E);

/// x-division polynomial: psi_m for odd m, psi_m / y for even m,
/// on an integral short model. psi_1 = 1, psi_2 (conventionally /y) = 2,
/// psi_3 = 3x^4 + 6Ax^2 + 12Bx - A^2.
IntPoly division_polynomial(const WeierstrassCurve& E, int m);

/// Full rational torsion subgroup including the point at infinity,
/// by Lutz-Nagell on the integral short model plus order verification.
std::vector<CurvePoint> rational_torsion(const WeierstrassCurve& E);

/// Is P a torsion point (order <= 12 by Mazur)? P must be rational.
bool is_torsion(const WeierstrassCurve& E, const CurvePoint& P);

/// Certify a point with algebraic x of degree <= 2 non-torsion by checking
/// gcd(minpoly_x, division polynomial data) for orders m <= mmax.
bool certify_non_torsion_x(const WeierstrassCurve& E_short_integral, const RatPoly& minpoly_x,
                           int mmax = 30);

/// Quadratic twist of a short-form curve: y^2 = x^3 + g^2 A x + g^3 B.
WeierstrassCurve twist(const WeierstrassCurve& E_short, const Rat& gamma);
/// x-coordinate map of the twist isomorphism.
Rat twist_x(const Rat& x, const Rat& gamma);

/// All affine rational points with naive x-height <= hmax on the integralized
/// short model, mapped back to E. Exhaustive in x = n / d^2.
std::vector<CurvePoint> rational_point_search(const WeierstrassCurve& E, double hmax);

}  // namespace heightlab
