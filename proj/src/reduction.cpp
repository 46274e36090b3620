#include "heightlab/reduction.hpp"

#include "heightlab/numeric.hpp"

#include <algorithm>

namespace heightlab {

std::string reduction_type_name(ReductionType t) {
    switch (t) {
        case ReductionType::Good: return "good";
        case ReductionType::MultiplicativeSplit: return "multiplicative_split";
        case ReductionType::MultiplicativeNonsplit: return "multiplicative_nonsplit";
        case ReductionType::Additive: return "additive";
    }
    return "?";
}

namespace {

Int mod_pos(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0)
        r += m;
    return r;
}

long ord_or_large(const Int& n, const Int& p) {
    return n == 0 ? 1'000'000'000L : ord_p(n, p).v;
}

Int int_coeff(const Rat& q) {
    if (boost::multiprecision::denominator(q) != 1)
        throw input_error("expected an integral model");
    return boost::multiprecision::numerator(q);
}

}  // namespace

bool kraus_conditions(const Int& c4, const Int& c6) {
    if (c6 != 0 && ord_p(c6, 3).v == 2)
        return false;
    if (mod_pos(c6, 4) == 3)
        return true;
    Int c6m = mod_pos(c6, 32);
    return mod_pos(c4, 16) == 0 && (c6m == 0 || c6m == 8);
}

WeierstrassCurve curve_from_c4c6(const Int& c4, const Int& c6) {
    Int base = mod_pos(-c6, 12);
    if (base > 6)
        base -= 12;  // b2 in (-6, 6] gives the standard reduced model
    for (Int shift : {Int(0), Int(-12), Int(12), Int(-24), Int(24)}) {
        Int b2 = base + shift;
        Int b4num = b2 * b2 - c4;
        if (b4num % 24 != 0)
            continue;
        Int b4 = b4num / 24;
        Int b6num = -b2 * b2 * b2 + 36 * b2 * b4 - c6;
        if (b6num % 216 != 0)
            continue;
        Int b6 = b6num / 216;
        Int a1 = mod_pos(b2, 2);
        if ((b2 - a1) % 4 != 0)
            continue;
        Int a2 = (b2 - a1) / 4;
        Int a3 = mod_pos(b6, 2);
        if ((b6 - a3) % 4 != 0)
            continue;
        Int a6 = (b6 - a3) / 4;
        if ((b4 - a1 * a3) % 2 != 0)
            continue;
        Int a4 = (b4 - a1 * a3) / 2;
        WeierstrassCurve E{Rat(a1), Rat(a2), Rat(a3), Rat(a4), Rat(a6)};
        if (E.c4() == c4 && E.c6() == c6)
            return E;
    }
    throw std::logic_error("no integral model found for the given invariants");
}

namespace {

ModelTransform integralizing_transform(const WeierstrassCurve& E) {
    Int v = 1;
    for (const Rat* a : {&E.a1(), &E.a2(), &E.a3(), &E.a4(), &E.a6()})
        v = boost::multiprecision::lcm(v, boost::multiprecision::denominator(*a));
    return ModelTransform{Rat(1) / v, 0, 0, 0};
}

// Transform carrying E onto target, given the scaling factor u; translation
// parts are solved from the coefficient relations and then verified.
ModelTransform solve_transform(const WeierstrassCurve& E, const WeierstrassCurve& target,
                               const Rat& u) {
    Rat s = (u * target.a1() - E.a1()) / 2;
    Rat r = (u * u * target.a2() - E.a2() + s * E.a1() + s * s) / 3;
    Rat t = (u * u * u * target.a3() - E.a3() - r * E.a1()) / 2;
    ModelTransform T{u, r, s, t};
    if (!(E.transformed(T) == target))
        throw std::logic_error("model transform reconstruction failed");
    return T;
}

bool legendre_is_square(const Int& a, const Int& p) {
    Int r = mod_pos(a, p);
    if (r == 0)
        throw std::logic_error("Legendre test on a residue divisible by p");
    return boost::multiprecision::powm(r, (p - 1) / 2, p) == 1;
}

struct CountResult {
    Int count;
    bool has_singular = false;
};

CountResult count_points(const WeierstrassCurve& E, const Int& p_big) {
    if (p_big > 100000)
        throw input_error("point counting limited to p <= 10^5");
    long p = static_cast<long>(p_big);
    auto red = [&](const Rat& q) {
        return static_cast<long>(mod_pos(int_coeff(q), p_big));
    };
    long a1 = red(E.a1()), a2 = red(E.a2()), a3 = red(E.a3()), a4 = red(E.a4()),
         a6 = red(E.a6());
    auto mul = [&](long a, long b) { return (a * b) % p; };
    auto normp = [&](long a) { return ((a % p) + p) % p; };

    CountResult res;
    Int count = 1;
    if (p == 2) {
        for (long x = 0; x < 2; ++x) {
            for (long y = 0; y < 2; ++y) {
                long f = normp(y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x -
                               a6);
                if (f != 0)
                    continue;
                long fx = normp(a1 * y - 3 * x * x - 2 * a2 * x - a4);
                long fy = normp(2 * y + a1 * x + a3);
                if (fx == 0 && fy == 0)
                    res.has_singular = true;
                else
                    ++count;
            }
        }
        res.count = count;
        return res;
    }

    std::vector<char> is_sq(p, 0);
    for (long r = 0; r < p; ++r)
        is_sq[mul(r, r)] = 1;
    long inv2 = (p + 1) / 2;
    for (long x = 0; x < p; ++x) {
        long x2 = mul(x, x);
        long rhs = normp(mul(x2, x) + mul(a2, x2) + mul(a4, x) + a6);
        long lin = normp(a1 * x + a3);
        long D = normp(mul(lin, lin) + 4 * rhs);
        if (D == 0) {
            long y0 = mul(normp(-lin), inv2);
            long fx = normp(a1 * y0 - 3 * x2 - 2 * a2 * x - a4);
            if (fx == 0)
                res.has_singular = true;
            else
                ++count;
        } else if (is_sq[D]) {
            count += 2;
        }
    }
    res.count = count;
    return res;
}

}  // namespace

Int nonsingular_point_count(const WeierstrassCurve& E_integral, const Int& p) {
    return count_points(E_integral, p).count;
}

ReductionType classify_by_point_count(const WeierstrassCurve& E_minimal, const Int& p) {
    CountResult res = count_points(E_minimal, p);
    if (!res.has_singular) {
        Int dev = res.count - p - 1;
        if (dev * dev <= 4 * p)
            return ReductionType::Good;
        throw std::logic_error("smooth reduction violating the Hasse bound");
    }
    if (res.count == p)
        return ReductionType::Additive;
    if (res.count == p - 1)
        return ReductionType::MultiplicativeSplit;
    if (res.count == p + 1)
        return ReductionType::MultiplicativeNonsplit;
    throw std::logic_error("singular reduction with impossible point count");
}

LocalReduction local_reduction(const WeierstrassCurve& E, const Int& p) {
    if (p < 2 || !is_probable_prime(p))
        throw input_error("local reduction requires a prime");
    ModelTransform T0 = integralizing_transform(E);
    WeierstrassCurve M0 = E.transformed(T0);
    Int c4 = int_coeff(M0.c4()), c6 = int_coeff(M0.c6()), disc = int_coeff(M0.disc());

    long kmax = ord_p(disc, p).v / 12;
    kmax = std::min(kmax, ord_or_large(c4, p) / 4);
    kmax = std::min(kmax, ord_or_large(c6, p) / 6);

    std::vector<Int> repairs;
    if (p == 2)
        repairs = {Int(1), Int(3)};
    else if (p == 3)
        repairs = {Int(1), Int(2)};
    else
        repairs = {Int(1), Int(2), Int(3), Int(6)};

    for (long k = kmax; k >= 0; --k) {
        Int pk = pow(p, static_cast<unsigned>(k));
        Int p4k = pk * pk * pk * pk;
        Int c4k = c4 / p4k, c6k = c6 / (p4k * pk * pk);
        for (const Int& w : repairs) {
            Int w2 = w * w, w3 = w2 * w;
            Int c4w = c4k * w2 * w2, c6w = c6k * w3 * w3;
            if (!kraus_conditions(c4w, c6w))
                continue;
            WeierstrassCurve M = curve_from_c4c6(c4w, c6w);
            Rat U = T0.u * Rat(pk) / Rat(w);
            LocalReduction out(p, solve_transform(E, M, U), M);
            Int dm = int_coeff(out.minimal.disc());
            out.ord_disc_min = ord_p(dm, p).v;
            Int c4m = int_coeff(out.minimal.c4());
            long ord_c4m = ord_or_large(c4m, p);
            out.potentially_multiplicative = 3 * ord_c4m < out.ord_disc_min;
            if (out.ord_disc_min == 0) {
                out.type = ReductionType::Good;
                out.smooth_multiplier = 1;
            } else if (ord_c4m == 0) {
                bool split;
                if (p <= 10000) {
                    Int cnt = nonsingular_point_count(out.minimal, p);
                    if (cnt == p - 1)
                        split = true;
                    else if (cnt == p + 1)
                        split = false;
                    else
                        throw std::logic_error("multiplicative reduction with bad count");
                } else {
                    split = legendre_is_square(-c6w, p);
                }
                out.type = split ? ReductionType::MultiplicativeSplit
                                 : ReductionType::MultiplicativeNonsplit;
                out.component_index = out.ord_disc_min;
                out.smooth_multiplier =
                    split ? out.component_index
                          : (out.component_index % 2 == 0 ? 2 : 1);
            } else {
                out.type = ReductionType::Additive;
                out.smooth_multiplier = 12;
            }
            return out;
        }
    }
    throw std::logic_error("no admissible minimal model scaling found");
}

GlobalMinimalModel global_minimal_model(const WeierstrassCurve& E) {
    ModelTransform T0 = integralizing_transform(E);
    WeierstrassCurve M0 = E.transformed(T0);
    Int c4 = int_coeff(M0.c4()), c6 = int_coeff(M0.c6()), disc = int_coeff(M0.disc());

    std::vector<std::pair<Int, long>> ks;
    for (const auto& [q, e] : factorize(abs(disc))) {
        long k = e / 12;
        k = std::min(k, ord_or_large(c4, q) / 4);
        k = std::min(k, ord_or_large(c6, q) / 6);
        ks.emplace_back(q, k);
    }
    auto rebuild = [&](Int& c4g, Int& c6g) {
        c4g = c4;
        c6g = c6;
        for (const auto& [q, k] : ks) {
            Int qk = pow(q, static_cast<unsigned>(k));
            Int q2k = qk * qk;
            c4g /= q2k * q2k;
            c6g /= q2k * q2k * q2k;
        }
    };
    Int c4g, c6g;
    rebuild(c4g, c6g);
    auto lower_at = [&](const Int& q) {
        for (auto& [qq, k] : ks)
            if (qq == q && k > 0) {
                --k;
                return true;
            }
        return false;
    };
    while (c6g != 0 && ord_p(c6g, 3).v == 2) {
        if (!lower_at(3))
            throw std::logic_error("minimal model search failed at 3");
        rebuild(c4g, c6g);
    }
    while (!kraus_conditions(c4g, c6g)) {
        if (!lower_at(2))
            throw std::logic_error("minimal model search failed at 2");
        rebuild(c4g, c6g);
    }

    GlobalMinimalModel out{ModelTransform{}, curve_from_c4c6(c4g, c6g), {}};
    Int utop = 1;
    for (const auto& [q, k] : ks)
        utop *= pow(q, static_cast<unsigned>(k));
    out.to_minimal = solve_transform(E, out.minimal, T0.u * Rat(utop));
    out.disc_factorization = factorize(abs(int_coeff(out.minimal.disc())));
    return out;
}

bool reduces_to_smooth_point(const WeierstrassCurve& E, const CurvePoint& P, const Int& p) {
    if (!E.is_integral())
        throw input_error("smoothness test requires an integral model");
    if (P.infinity)
        return true;
    if (!P.is_rational())
        throw input_error("smoothness test expects a rational point");
    Rat x = P.x.rational(), y = P.y.rational();
    long vdx = ord_p(boost::multiprecision::denominator(x), p).v;
    if (vdx > 0)
        return true;  // reduces to the point at infinity
    auto redq = [&](const Rat& q) {
        Int den = boost::multiprecision::denominator(q);
        Int inv = boost::multiprecision::powm(mod_pos(den, p), p - 2, p);
        return mod_pos(mod_pos(boost::multiprecision::numerator(q), p) * inv, p);
    };
    Int xb = redq(x), yb = redq(y);
    Int a1 = int_coeff(E.a1()), a2 = int_coeff(E.a2()), a3 = int_coeff(E.a3()),
        a4 = int_coeff(E.a4());
    Int fx = mod_pos(a1 * yb - 3 * xb * xb - 2 * a2 * xb - a4, p);
    Int fy = mod_pos(2 * yb + a1 * xb + a3, p);
    return !(fx == 0 && fy == 0);
}

Int smooth_multiplier_for_point(const WeierstrassCurve& E, const CurvePoint& P,
                                const std::vector<LocalReduction>& bad) {
    Int m = 1;
    for (const LocalReduction& lr : bad) {
        if (lr.type == ReductionType::Good)
            continue;
        CurvePoint Pm = transform_point(lr.to_minimal, P);
        std::vector<Int> candidates;
        if (lr.type == ReductionType::Additive) {
            candidates = {Int(1), Int(2), Int(3), Int(4), Int(6), Int(12)};
        } else {
            Int N = lr.component_index;
            for (Int d = 1; d <= N; ++d)
                if (N % d == 0)
                    candidates.push_back(d);
        }
        bool done = false;
        for (const Int& c : candidates) {
            if (reduces_to_smooth_point(lr.minimal, scalar_mul(lr.minimal, c, Pm), lr.p)) {
                m = boost::multiprecision::lcm(m, c);
                done = true;
                break;
            }
        }
        if (!done)
            throw std::logic_error("no component-killing multiple found");
    }
    return m;
}

}  // namespace heightlab
