#include "heightlab/curve.hpp"

#include "heightlab/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace heightlab {

ModelTransform ModelTransform::inverse() const {
    ModelTransform inv;
    inv.u = Rat(1) / u;
    inv.r = -r / (u * u);
    inv.s = -s / u;
    inv.t = (r * s - t) / (u * u * u);
    return inv;
}

ModelTransform ModelTransform::compose(const ModelTransform& next) const {
    ModelTransform c;
    c.u = u * next.u;
    c.r = u * u * next.r + r;
    c.s = s + u * next.s;
    c.t = u * u * u * next.t + u * u * s * next.r + t;
    return c;
}

WeierstrassCurve::WeierstrassCurve(Rat a1, Rat a2, Rat a3, Rat a4, Rat a6)
    : a1_(std::move(a1)), a2_(std::move(a2)), a3_(std::move(a3)), a4_(std::move(a4)),
      a6_(std::move(a6)) {
    b2_ = a1_ * a1_ + 4 * a2_;
    b4_ = 2 * a4_ + a1_ * a3_;
    b6_ = a3_ * a3_ + 4 * a6_;
    b8_ = a1_ * a1_ * a6_ + 4 * a2_ * a6_ - a1_ * a3_ * a4_ + a2_ * a3_ * a3_ - a4_ * a4_;
    c4_ = b2_ * b2_ - 24 * b4_;
    c6_ = -b2_ * b2_ * b2_ + 36 * b2_ * b4_ - 216 * b6_;
    disc_ = -b2_ * b2_ * b8_ - 8 * b4_ * b4_ * b4_ - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;
    if (disc_ == 0)
        throw input_error("singular Weierstrass equation (discriminant zero)");
    if (4 * b8_ != b2_ * b6_ - b4_ * b4_ || c4_ * c4_ * c4_ - c6_ * c6_ != 1728 * disc_)
        throw std::logic_error("Weierstrass invariant identities failed");
    j_ = c4_ * c4_ * c4_ / disc_;
}

bool WeierstrassCurve::is_integral() const {
    for (const Rat* a : {&a1_, &a2_, &a3_, &a4_, &a6_})
        if (boost::multiprecision::denominator(*a) != 1)
            return false;
    return true;
}

const Rat& WeierstrassCurve::A() const {
    if (!is_short())
        throw input_error("A() requires a short Weierstrass model");
    return a4_;
}

const Rat& WeierstrassCurve::B() const {
    if (!is_short())
        throw input_error("B() requires a short Weierstrass model");
    return a6_;
}

bool WeierstrassCurve::operator==(const WeierstrassCurve& o) const {
    return a1_ == o.a1_ && a2_ == o.a2_ && a3_ == o.a3_ && a4_ == o.a4_ && a6_ == o.a6_;
}

WeierstrassCurve WeierstrassCurve::transformed(const ModelTransform& T) const {
    const Rat &u = T.u, &r = T.r, &s = T.s, &t = T.t;
    if (u == 0)
        throw input_error("transform with u = 0");
    Rat u2 = u * u, u3 = u2 * u;
    Rat na1 = (a1_ + 2 * s) / u;
    Rat na2 = (a2_ - s * a1_ + 3 * r - s * s) / u2;
    Rat na3 = (a3_ + r * a1_ + 2 * t) / u3;
    Rat na4 = (a4_ - s * a3_ + 2 * r * a2_ - (t + r * s) * a1_ + 3 * r * r - 2 * s * t) /
              (u2 * u2);
    Rat na6 = (a6_ + r * a4_ + r * r * a2_ + r * r * r - t * a3_ - t * t - r * t * a1_) /
              (u3 * u3);
    WeierstrassCurve out(na1, na2, na3, na4, na6);
    if (out.disc_ * u3 * u3 * u3 * u3 != disc_)
        throw std::logic_error("discriminant scaling failed in transform");
    return out;
}

std::string WeierstrassCurve::str() const {
    std::ostringstream os;
    os << "[" << a1_ << "," << a2_ << "," << a3_ << "," << a4_ << "," << a6_ << "]";
    return os.str();
}

bool CurvePoint::operator==(const CurvePoint& o) const {
    if (infinity || o.infinity)
        return infinity == o.infinity;
    return x == o.x && y == o.y;
}

std::string CurvePoint::str() const {
    if (infinity)
        return "O";
    return "(" + x.str() + ", " + y.str() + ")";
}

bool on_curve(const WeierstrassCurve& E, const CurvePoint& P) {
    if (P.infinity)
        return true;
    QuadElt a1(E.a1()), a2(E.a2()), a3(E.a3()), a4(E.a4()), a6(E.a6());
    QuadElt lhs = P.y * P.y + a1 * P.x * P.y + a3 * P.y;
    QuadElt rhs = P.x * P.x * P.x + a2 * P.x * P.x + a4 * P.x + a6;
    return lhs == rhs;
}

CurvePoint negate(const WeierstrassCurve& E, const CurvePoint& P) {
    if (P.infinity)
        return P;
    QuadElt ny = -P.y - QuadElt(E.a1()) * P.x - QuadElt(E.a3());
    return CurvePoint::affine(P.x, ny);
}

CurvePoint add(const WeierstrassCurve& E, const CurvePoint& P, const CurvePoint& Q) {
    if (P.infinity)
        return Q;
    if (Q.infinity)
        return P;
    QuadElt a1(E.a1()), a2(E.a2()), a3(E.a3()), a4(E.a4());
    QuadElt lambda;
    if (P.x == Q.x) {
        QuadElt denom = P.y + P.y + a1 * P.x + a3;
        if (Q.y == -P.y - a1 * P.x - a3)
            return CurvePoint::at_infinity();
        lambda = (QuadElt(3) * P.x * P.x + QuadElt(2) * a2 * P.x + a4 - a1 * P.y) / denom;
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
    }
    QuadElt x3 = lambda * lambda + a1 * lambda - a2 - P.x - Q.x;
    QuadElt y3 = lambda * (P.x - x3) - P.y - a1 * x3 - a3;
    return CurvePoint::affine(x3, y3);
}

CurvePoint scalar_mul(const WeierstrassCurve& E, const Int& m, const CurvePoint& P) {
    if (m < 0)
        return negate(E, scalar_mul(E, -m, P));
    CurvePoint acc = CurvePoint::at_infinity();
    CurvePoint base = P;
    Int k = m;
    while (k > 0) {
        if ((k & 1) != 0)
            acc = add(E, acc, base);
        k >>= 1;
        if (k > 0)
            base = add(E, base, base);
    }
    return acc;
}

CurvePoint transform_point(const ModelTransform& T, const CurvePoint& P) {
    if (P.infinity)
        return P;
    QuadElt u2(T.u * T.u), u3(T.u * T.u * T.u);
    QuadElt nx = (P.x - QuadElt(T.r)) / u2;
    QuadElt ny = (P.y - QuadElt(T.s) * (P.x - QuadElt(T.r)) - QuadElt(T.t)) / u3;
    return CurvePoint::affine(nx, ny);
}

ModelTransform to_short_form(const WeierstrassCurve& E) {
    ModelTransform t1{1, 0, -E.a1() / 2, -E.a3() / 2};
    WeierstrassCurve E1 = E.transformed(t1);
    ModelTransform t2{1, -E1.b2() / 12, 0, 0};
    ModelTransform T = t1.compose(t2);
    WeierstrassCurve Es = E.transformed(T);
    if (!Es.is_short())
        throw std::logic_error("short form reduction failed");
    return T;
}

ModelTransform to_integral_short(const WeierstrassCurve& E_short) {
    if (!E_short.is_short())
        throw input_error("to_integral_short requires a short model");
    Int dA = boost::multiprecision::denominator(E_short.A());
    Int dB = boost::multiprecision::denominator(E_short.B());
    Int v = 1;
    for (const auto& [p, e] : factorize(dA * dB)) {
        long eA = ord_p(dA, p).v;
        long eB = ord_p(dB, p).v;
        long need = std::max((eA + 3) / 4, (eB + 5) / 6);
        v *= pow(p, static_cast<unsigned>(need));
    }
    return ModelTransform{Rat(1) / v, 0, 0, 0};
}

ModelTransform to_integral_short_any(const WeierstrassCurve& E) {
    ModelTransform T = to_short_form(E);
    return T.compose(to_integral_short(E.transformed(T)));
}

namespace {

IntPoly divide_exact_int(const IntPoly& f, const Int& c) {
    std::vector<Int> out(f.coeffs().size());
    for (size_t i = 0; i < out.size(); ++i) {
        if (f.coeffs()[i] % c != 0)
            throw std::logic_error("inexact division in division polynomial recurrence");
        out[i] = f.coeffs()[i] / c;
    }
    return IntPoly(out);
}

// g[m] = psi_m for odd m, psi_m / y for even m, on y^2 = x^3 + Ax + B.
std::vector<IntPoly> division_poly_table(const Int& A, const Int& B, int mmax) {
    std::vector<IntPoly> g(std::max(mmax + 1, 5));
    IntPoly F({B, A, 0, 1});
    IntPoly F2 = F * F;
    g[0] = IntPoly();
    g[1] = IntPoly::constant(1);
    g[2] = IntPoly::constant(2);
    g[3] = IntPoly({-A * A, 12 * B, 6 * A, 0, 3});
    g[4] = IntPoly({-32 * B * B - 4 * A * A * A, -16 * A * B, -20 * A * A, 80 * B, 20 * A, 0, 4});
    for (int n = 5; n <= mmax; ++n) {
        if (n % 2 == 1) {
            int k = (n - 1) / 2;
            IntPoly t1 = g[k + 2] * g[k] * g[k] * g[k];
            IntPoly t2 = g[k - 1] * g[k + 1] * g[k + 1] * g[k + 1];
            g[n] = (k % 2 == 0) ? t1 * F2 - t2 : t1 - t2 * F2;
        } else {
            int k = n / 2;
            IntPoly inner = g[k + 2] * g[k - 1] * g[k - 1] - g[k - 2] * g[k + 1] * g[k + 1];
            g[n] = divide_exact_int(g[k] * inner, 2);
        }
    }
    return g;
}

Int int_from_rat(const Rat& q, const char* what) {
    if (boost::multiprecision::denominator(q) != 1)
        throw input_error(std::string("expected integer ") + what);
    return boost::multiprecision::numerator(q);
}

}  // namespace

IntPoly division_polynomial(const WeierstrassCurve& E, int m) {
    if (m < 1)
        throw input_error("division polynomial index must be positive");
    Int A = int_from_rat(E.A(), "coefficient A");
    Int B = int_from_rat(E.B(), "coefficient B");
    return division_poly_table(A, B, m)[m];
}

bool is_torsion(const WeierstrassCurve& E, const CurvePoint& P) {
    if (!P.is_rational())
        throw input_error("is_torsion expects a rational point");
    if (P.infinity)
        return true;

    // Lutz-Nagell rejection on an integral short model: torsion points are
    // integral there with y = 0 or y^2 | 4A^3 + 27B^2. Keeps the multiple
    // loop below away from points with large coordinates.
    ModelTransform T = to_integral_short_any(E);
    CurvePoint Ps = transform_point(T, P);
    const Rat& xs = Ps.x.rational();
    const Rat& ys = Ps.y.rational();
    if (denominator(xs) != 1 || denominator(ys) != 1)
        return false;
    Int y = numerator(ys);
    if (y != 0) {
        WeierstrassCurve Es = E.transformed(T);
        Int A = numerator(Es.a4()), B = numerator(Es.a6());
        Int D = 4 * A * A * A + 27 * B * B;
        if (D % (y * y) != 0)
            return false;
    }

    CurvePoint Q = P;
    for (int m = 1; m <= 12; ++m) {
        if (Q.infinity)
            return true;
        Q = add(E, Q, P);
    }
    return false;
}

namespace {

// All positive y with y^2 | n (n != 0).
std::vector<Int> square_divisor_roots(const Int& n) {
    std::vector<Int> roots{1};
    for (const auto& [p, e] : factorize(abs(n))) {
        long half = e / 2;
        if (half == 0)
            continue;
        std::vector<Int> grown;
        for (const Int& r : roots) {
            Int pk = 1;
            for (long i = 0; i <= half; ++i) {
                grown.push_back(r * pk);
                pk *= p;
            }
        }
        roots = std::move(grown);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

// Integer roots of x^3 + Ax + c.
std::vector<Int> integer_cubic_roots(const Int& A, const Int& c) {
    std::vector<Int> roots;
    auto test = [&](const Int& x) {
        if (x * x * x + A * x + c == 0)
            roots.push_back(x);
    };
    if (c == 0) {
        test(0);
        Int r;
        if (A < 0 && is_perfect_square(-A, &r)) {
            test(r);
            test(-r);
        }
    } else {
        std::vector<Int> divs{1};
        for (const auto& [p, e] : factorize(abs(c))) {
            std::vector<Int> grown;
            for (const Int& d : divs) {
                Int pk = 1;
                for (long i = 0; i <= e; ++i) {
                    grown.push_back(d * pk);
                    pk *= p;
                }
            }
            divs = std::move(grown);
        }
        for (const Int& d : divs) {
            test(d);
            test(-d);
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

}  // namespace

std::vector<CurvePoint> rational_torsion(const WeierstrassCurve& E) {
    ModelTransform T = to_integral_short_any(E);
    WeierstrassCurve Es = E.transformed(T);
    Int A = int_from_rat(Es.A(), "A");
    Int B = int_from_rat(Es.B(), "B");
    Int D4 = 4 * A * A * A + 27 * B * B;

    std::vector<CurvePoint> found{CurvePoint::at_infinity()};
    ModelTransform Tinv = T.inverse();
    auto consider = [&](const Int& x, const Int& y) {
        CurvePoint P = CurvePoint::affine(QuadElt(Rat(x)), QuadElt(Rat(y)));
        if (!on_curve(Es, P) || !is_torsion(Es, P))
            return;
        CurvePoint back = transform_point(Tinv, P);
        if (std::find(found.begin(), found.end(), back) == found.end())
            found.push_back(back);
    };

    for (const Int& x : integer_cubic_roots(A, B))
        consider(x, 0);
    for (const Int& y : square_divisor_roots(D4)) {
        for (const Int& x : integer_cubic_roots(A, B - y * y)) {
            consider(x, y);
            consider(x, -y);
        }
    }
    return found;
}

bool certify_non_torsion_x(const WeierstrassCurve& E, const RatPoly& minpoly_x, int mmax) {
    if (!E.is_short() || !E.is_integral())
        throw input_error("non-torsion certificate requires an integral short model");
    Int A = int_from_rat(E.A(), "A");
    Int B = int_from_rat(E.B(), "B");
    RatPoly mp = minpoly_x.monic();
    if (mp.degree() < 1)
        throw input_error("minimal polynomial must be nonconstant");
    IntPoly F({B, A, 0, 1});
    if (rem_mod_small(F, mp).is_zero())
        return false;
    auto g = division_poly_table(A, B, mmax);
    for (int m = 3; m <= mmax; ++m) {
        if (rem_mod_small(g[m], mp).is_zero())
            return false;
    }
    return true;
}

WeierstrassCurve twist(const WeierstrassCurve& E, const Rat& gamma) {
    if (!E.is_short())
        throw input_error("twist requires a short model");
    if (gamma == 0)
        throw input_error("twist parameter must be nonzero");
    return WeierstrassCurve::short_form(gamma * gamma * E.A(), gamma * gamma * gamma * E.B());
}

Rat twist_x(const Rat& x, const Rat& gamma) { return gamma * x; }

std::vector<CurvePoint> rational_point_search(const WeierstrassCurve& E, double hmax) {
    ModelTransform T = to_integral_short_any(E);
    WeierstrassCurve Es = E.transformed(T);
    Int A = int_from_rat(Es.A(), "A");
    Int B = int_from_rat(Es.B(), "B");
    ModelTransform Tinv = T.inverse();

    long nmax = static_cast<long>(std::exp(hmax)) + 1;
    long dmax = static_cast<long>(std::exp(hmax / 2)) + 1;
    std::vector<CurvePoint> out;
    for (long d = 1; d <= dmax; ++d) {
        Int d2 = Int(d) * d, d4 = d2 * d2, d6 = d4 * d2, d3 = d2 * d;
        for (long n = -nmax; n <= nmax; ++n) {
            if (boost::multiprecision::gcd(Int(n), Int(d)) != 1)
                continue;
            Int num = Int(n) * n * n + A * n * d4 + B * d6;
            if (num < 0)
                continue;
            Int r;
            if (!is_perfect_square(num, &r))
                continue;
            Rat x = Rat(n) / d2;
            Rat y = Rat(r) / d3;
            CurvePoint P = CurvePoint::affine(QuadElt(x), QuadElt(y));
            out.push_back(transform_point(Tinv, P));
            if (r != 0)
                out.push_back(transform_point(Tinv, negate(Es, P)));
        }
    }
    return out;
}

}  // namespace heightlab
