#include "heightlab/ramify.hpp"

#include "heightlab/numeric.hpp"

#include <utility>

namespace heightlab {

const char* ram_verdict_name(RamVerdict v) {
    switch (v) {
        case RamVerdict::Unramified: return "unramified";
        case RamVerdict::Ramified: return "ramified";
        default: return "inconclusive";
    }
}

RamCert quadratic_ramification(const Int& D, const Int& p) {
    if (p < 2 || !is_probable_prime(p))
        throw input_error("quadratic_ramification: p must be prime");
    if (D == 0)
        throw input_error("quadratic_ramification: D must be nonzero");
    Int s = squarefree_part(D).first;
    if (s == 1)
        throw input_error("quadratic_ramification: D is a square, not a quadratic field");
    RamCert cert;
    cert.p = p;
    cert.subject = "Q(sqrt(" + s.str() + "))";
    bool ramified;
    if (p == 2) {
        Int r = s % 4;
        if (r < 0) r += 4;
        ramified = (r != 1);
    } else {
        ramified = (s % p == 0);
    }
    cert.verdict = ramified ? RamVerdict::Ramified : RamVerdict::Unramified;
    cert.index = ramified ? 2 : 1;
    return cert;
}

RamCert unramified_certificate(const IntPoly& g, const Int& p) {
    if (p < 2 || !is_probable_prime(p))
        throw input_error("unramified_certificate: p must be prime");
    if (g.degree() < 1)
        throw input_error("unramified_certificate: polynomial must be nonconstant");
    RamCert cert;
    cert.p = p;
    cert.subject = "roots of " + g.str();
    if (p >= (Int(1) << 62)) return cert;

    // p-primitive scaling: clear the common power of p from the coefficients
    // so that reduction mod p keeps the polynomial nonzero.
    long vmin = -1;
    for (const Int& c : g.coeffs()) {
        if (c == 0) continue;
        long v = strip_p(c, p).second;
        if (vmin < 0 || v < vmin) vmin = v;
        if (vmin == 0) break;
    }
    std::vector<Int> scaled = g.coeffs();
    if (vmin > 0) {
        Int pk = 1;
        for (long i = 0; i < vmin; ++i) pk *= p;
        for (Int& c : scaled) c /= pk;
    }
    IntPoly gp(std::move(scaled));
    PolyModP reduced(gp, p);
    if (reduced.is_squarefree_same_degree(gp)) {
        cert.verdict = RamVerdict::Unramified;
        cert.index = 1;
    }
    return cert;
}

namespace {

RamCert trivial_field_cert(const Int& p) {
    RamCert cert;
    cert.p = p;
    cert.verdict = RamVerdict::Unramified;
    cert.index = 1;
    cert.subject = "Q";
    return cert;
}

Int int_coeff(const Rat& x, const char* name) {
    if (denominator(x) != 1)
        throw input_error(std::string("construct_unramified_point: ") + name +
                          " must be integral");
    return numerator(x);
}

/// y^2 = s with rational s > 0 or < 0: fill the y slot of the result.
/// Returns false when s = 0 (a two-torsion candidate, caller skips it).
bool attach_y_from_square(UnramifiedPoint& out, const Rat& s, const Int& p) {
    if (s == 0) return false;
    Int num = numerator(s), den = denominator(s);
    auto [sn, tn] = squarefree_part(num);
    auto [sd, td] = squarefree_part(den);
    Int D = sn * sd;  // y = (tn / (td * sd)) sqrt(D) up to the square class
    if (D == 1) {
        // s = (tn / td)^2 is a square in Q
        Rat t(tn, td);
        out.y_rational = true;
        out.y = t;
        Int tn2 = numerator(t), td2 = denominator(t);
        out.y_minpoly = IntPoly({-tn2, td2});
        out.y_cert = trivial_field_cert(p);
        return true;
    }
    out.y_rational = false;
    // minimal polynomial of y: den * Y^2 - num, kept primitive by the caller's data
    out.y_minpoly = IntPoly({-num, Int(0), den});
    out.y_cert = quadratic_ramification(D, p);
    return true;
}

}  // namespace

UnramifiedPoint construct_unramified_point(const WeierstrassCurve& E, const Int& p,
                                           long n_cap) {
    if (!E.is_short() || !E.is_integral())
        throw input_error("construct_unramified_point: integral short model required");
    if (p < 2 || !is_probable_prime(p))
        throw input_error("construct_unramified_point: p must be prime");
    Int A = int_coeff(E.A(), "A");
    Int B = int_coeff(E.B(), "B");
    Valuation vA = ord_p(A, p);
    Valuation vB = ord_p(B, p);

    auto rational_x_candidate = [&](long n, const Rat& xv) -> std::pair<bool, UnramifiedPoint> {
        UnramifiedPoint out;
        out.p = p;
        out.n = n;
        out.x_rational = true;
        out.x = xv;
        Int xn = numerator(xv), xd = denominator(xv);
        out.x_minpoly = IntPoly({-xn, xd});
        out.x_cert = trivial_field_cert(p);
        Rat s = xv * xv * xv + E.A() * xv + E.B();
        if (!attach_y_from_square(out, s, p)) return {false, out};
        RatPoly mp(std::vector<Rat>{-xv, Rat(1)});
        out.non_torsion_certified = certify_non_torsion_x(E, mp, 30);
        bool ok = out.non_torsion_certified && out.y_cert.verdict == RamVerdict::Unramified;
        return {ok, out};
    };

    for (long n = 1; n <= n_cap; ++n) {
        if (p != 2) {
            if (!vB.infinite && vB.v == 0) {
                // x_n = n p, the cubic value is a p-adic unit
                auto [ok, out] = rational_x_candidate(n, Rat(Int(n) * p));
                if (ok) return out;
                continue;
            }
            if (!vA.infinite && vA.v == 0) {
                // x_n = n p + sqrt(A)
                Int root;
                if (is_perfect_square(A, &root)) {
                    auto [ok, out] = rational_x_candidate(n, Rat(Int(n) * p + root));
                    if (ok) return out;
                    continue;
                }
                UnramifiedPoint out;
                out.p = p;
                out.n = n;
                out.x_rational = false;
                Int np = Int(n) * p;
                Int c0 = np * np - A, c1 = -2 * np;
                out.x_minpoly = IntPoly({c0, c1, Int(1)});
                auto [sq, tq] = squarefree_part(A);
                out.x_cert = quadratic_ramification(sq, p);
                QuadElt xq(Rat(np), Rat(tq), sq);
                QuadElt eta = xq * xq * xq + QuadElt(Rat(A)) * xq + QuadElt(Rat(B));
                if (eta.is_zero()) continue;
                if (eta.is_rational()) {
                    if (!attach_y_from_square(out, eta.rational(), p)) continue;
                } else {
                    // y^2 = eta in Q(sqrt(A)): minpoly Y^4 - tr(eta) Y^2 + N(eta)
                    Rat tr = eta.trace(), nm = eta.norm();
                    if (denominator(tr) != 1 || denominator(nm) != 1)
                        throw precision_error("unexpected denominators in quartic trace form");
                    Int q0 = numerator(nm), q2 = -numerator(tr);
                    out.y_minpoly = IntPoly({q0, Int(0), q2, Int(0), Int(1)});
                    out.y_cert = unramified_certificate(out.y_minpoly, p);
                }
                out.non_torsion_certified =
                    certify_non_torsion_x(E, RatPoly(out.x_minpoly), 30);
                if (out.non_torsion_certified &&
                    out.x_cert.verdict == RamVerdict::Unramified &&
                    out.y_cert.verdict == RamVerdict::Unramified)
                    return out;
                continue;
            }
            // x_n = n p + 1, the cubic value is = 1 mod p
            auto [ok, out] = rational_x_candidate(n, Rat(Int(n) * p + 1));
            if (ok) return out;
            continue;
        }

        // p = 2: pick the parity of y making x^3 + A x + (B - y^2) have odd
        // discriminant, then x is a root of that cubic.
        Int yv = (!vB.infinite && vB.v == 0) ? Int(2 * n) : Int(2 * n + 1);
        Int cst = B - yv * yv;
        IntPoly f({cst, A, Int(0), Int(1)});
        Int disc = -4 * A * A * A - 27 * cst * cst;
        if (disc == 0) continue;

        // rational roots of the monic cubic are integer divisors of the constant term
        bool had_rational_root = false;
        if (cst == 0) {
            had_rational_root = true;  // x = 0 is a root
        } else {
            std::vector<Int> divs{1};
            for (auto& [q, e] : factorize(cst)) {
                std::vector<Int> next;
                Int qk = 1;
                for (int i = 0; i <= e; ++i) {
                    for (const Int& d : divs) next.push_back(d * qk);
                    qk *= q;
                }
                divs = std::move(next);
            }
            for (const Int& d : divs) {
                Int neg = -d;
                if (f.eval(d) == 0 || f.eval(neg) == 0) {
                    had_rational_root = true;
                    break;
                }
            }
        }
        if (had_rational_root) continue;  // keep the genuinely cubic branch

        UnramifiedPoint out;
        out.p = p;
        out.n = n;
        out.x_rational = false;
        out.x_minpoly = f;
        out.x_cert = unramified_certificate(f, p);
        out.y_rational = true;
        out.y = Rat(yv);
        out.y_minpoly = IntPoly({-yv, Int(1)});
        out.y_cert = trivial_field_cert(p);
        out.non_torsion_certified = certify_non_torsion_x(E, RatPoly(f), 30);
        if (out.non_torsion_certified && out.x_cert.verdict == RamVerdict::Unramified)
            return out;
    }
    throw precision_error("construct_unramified_point: no certified point within the n cap");
}

}  // namespace heightlab
