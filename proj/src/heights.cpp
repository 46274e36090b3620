#include "heightlab/heights.hpp"

#include "heightlab/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace heightlab {

namespace {

Int int_coeff(const Rat& q) {
    if (boost::multiprecision::denominator(q) != 1)
        throw input_error("expected an integral model");
    return boost::multiprecision::numerator(q);
}

struct PrecisionGuard {
    int saved;
    PrecisionGuard() : saved(working_precision_bits()) {}
    ~PrecisionGuard() { set_working_precision_bits(saved); }
};

// ------------------------------------------------ exact linear algebra

std::vector<Rat> solve_linear(std::vector<std::vector<Rat>> A, std::vector<Rat> rhs) {
    size_t n = A.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && A[piv][col] == 0)
            ++piv;
        if (piv == n)
            throw std::logic_error("singular linear system");
        std::swap(A[piv], A[col]);
        std::swap(rhs[piv], rhs[col]);
        for (size_t row = 0; row < n; ++row) {
            if (row == col || A[row][col] == 0)
                continue;
            Rat f = A[row][col] / A[col][col];
            for (size_t k = col; k < n; ++k)
                A[row][k] -= f * A[col][k];
            rhs[row] -= f * rhs[col];
        }
    }
    std::vector<Rat> out(n);
    for (size_t i = 0; i < n; ++i)
        out[i] = rhs[i] / A[i][i];
    return out;
}

// Extended Euclid over Q[x]: returns (g, u, v) with u a + v b = g.
struct ExtGcd {
    RatPoly g, u, v;
};

void divmod(const RatPoly& a, const RatPoly& b, RatPoly& q, RatPoly& r) {
    if (b.is_zero())
        throw input_error("polynomial division by zero");
    std::vector<Rat> rc(static_cast<size_t>(std::max(a.degree(), 0)) + 1);
    for (int i = 0; i <= a.degree(); ++i)
        rc[i] = a[i];
    int db = b.degree();
    std::vector<Rat> qc(a.degree() >= db ? a.degree() - db + 1 : 0, Rat(0));
    for (int i = a.degree(); i >= db; --i) {
        Rat f = rc[i] / b[db];
        if (f == 0)
            continue;
        qc[i - db] = f;
        for (int k = 0; k <= db; ++k)
            rc[i - db + k] -= f * b[k];
    }
    q = RatPoly(qc);
    r = RatPoly(rc);
}

ExtGcd ext_gcd(const RatPoly& a, const RatPoly& b) {
    RatPoly r0 = a, r1 = b;
    RatPoly u0({Rat(1)}), u1, v0, v1({Rat(1)});
    while (!r1.is_zero()) {
        RatPoly q, r;
        divmod(r0, r1, q, r);
        RatPoly u2 = u0 - q * u1, v2 = v0 - q * v1;
        r0 = r1; r1 = r;
        u0 = u1; u1 = u2;
        v0 = v1; v1 = v2;
    }
    return {r0, u0, v0};
}

Rat one_norm_at_two(const RatPoly& f) {
    Rat s = 0, pw = 1;
    for (int i = 0; i <= f.degree(); ++i) {
        s += abs(f[i]) * pw;
        pw *= 2;
    }
    return s;
}

}  // namespace

DuplicationBound duplication_bound(const WeierstrassCurve& E) {
    Int b2 = int_coeff(E.b2()), b4 = int_coeff(E.b4()), b6 = int_coeff(E.b6()),
        b8 = int_coeff(E.b8());
    // F, G homogeneous quartics in (n, d); coefficient i belongs to n^(4-i) d^i.
    std::vector<Int> f = {Int(1), Int(0), -b4, -2 * b6, -b8};
    std::vector<Int> g = {Int(0), Int(4), b2, 2 * b4, b6};

    std::vector<std::vector<Rat>> M(8, std::vector<Rat>(8, Rat(0)));
    for (int k = 0; k < 8; ++k) {
        for (int j = 0; j < 4; ++j) {
            int i = k - j;
            if (i >= 0 && i <= 4) {
                M[k][j] = Rat(f[i]);
                M[k][4 + j] = Rat(g[i]);
            }
        }
    }
    std::vector<Rat> rhs_d(8, Rat(0)), rhs_n(8, Rat(0));
    rhs_d[7] = 1;  // cofactors producing d^7
    rhs_n[0] = 1;  // cofactors producing n^7
    auto sol_d = solve_linear(M, rhs_d);
    auto sol_n = solve_linear(M, rhs_n);

    Rat norm_d = 0, norm_n = 0;
    Int den_d = 1, den_n = 1;
    for (int j = 0; j < 8; ++j) {
        norm_d += abs(sol_d[j]);
        norm_n += abs(sol_n[j]);
        den_d = boost::multiprecision::lcm(den_d, boost::multiprecision::denominator(sol_d[j]));
        den_n = boost::multiprecision::lcm(den_n, boost::multiprecision::denominator(sol_n[j]));
    }
    Int cap = boost::multiprecision::lcm(den_d, den_n);

    Int c1 = 0, c2 = 0;
    for (auto& v : f)
        c1 += abs(v);
    for (auto& v : g)
        c2 += abs(v);

    DuplicationBound out{RealApprox(0.0), RealApprox(0.0), RealApprox(0.0), cap, Rat(0)};
    out.log_upper = log(RealApprox(Rat(std::max(c1, c2))));
    Rat worst = std::max(norm_d, norm_n);
    out.cofactor_norm = worst;
    out.log_lower = log(RealApprox(worst)) + log(RealApprox(Rat(cap)));
    double cu = std::max(out.log_upper.upper().convert_to<double>(),
                         out.log_lower.upper().convert_to<double>());
    out.c = RealApprox(cu);
    return out;
}

// ---------------------------------------------------- archimedean series

namespace {

struct ChartData {
    RealApprox b2, b4, b6, b8;
    Rat floor_z;  // certified lower bound for the selected |Z|
    Rat ceil_z;   // upper bound for |z| and |z +- w| at |t| <= 2
};

ChartData make_chart(const Rat& b2, const Rat& b4, const Rat& b6, const Rat& b8) {
    ChartData c{RealApprox(b2), RealApprox(b4), RealApprox(b6), RealApprox(b8), 0, 0};
    RatPoly w({Rat(0), Rat(4), b2, 2 * b4, b6});
    RatPoly z({Rat(1), Rat(0), -b4, -2 * b6, -b8});
    ExtGcd e = ext_gcd(w, z);
    if (e.g.degree() != 0)
        throw std::logic_error("duplication charts share a root");
    Rat lead = e.g[0];
    Rat bound = one_norm_at_two(e.u) / abs(lead) + one_norm_at_two(e.v) / abs(lead);
    c.floor_z = Rat(1) / (2 * bound);  // max(|z|,|z+-w|) >= 1/(2 bound) for |t| <= 2
    Rat zmax = 1 + abs(b4) * 4 + abs(b6) * 16 + abs(b8) * 16;
    Rat wmax = 8 + abs(b2) * 4 + abs(b4) * 16 + abs(b6) * 16;
    c.ceil_z = zmax + wmax;
    return c;
}

RealApprox eval_w(const ChartData& c, const RealApprox& t) {
    return t * (RealApprox(4.0) + t * (c.b2 + t * (RealApprox(2.0) * c.b4 + t * c.b6)));
}

RealApprox eval_z(const ChartData& c, const RealApprox& t) {
    return RealApprox(1.0) -
           t * t * (c.b4 + t * (RealApprox(2.0) * c.b6 + t * c.b8));
}

RealApprox tate_series_attempt(const WeierstrassCurve& E, const Rat& x0, double eps) {
    ChartData A = make_chart(E.b2(), E.b4(), E.b6(), E.b8());
    ChartData B = make_chart(E.b2() - 12, E.b4() - E.b2() + 6, E.b6() - 2 * E.b4() + E.b2() - 4,
                             E.b8() - 3 * E.b6() + 3 * E.b4() - E.b2() + 3);

    auto log_gap = [](const Rat& lo, const Rat& hi) {
        double l = -log(RealApprox(lo)).lower().convert_to<double>();
        double h = log(RealApprox(hi)).upper().convert_to<double>();
        return std::max({l, h, 1.0});
    };
    double L = std::max(log_gap(A.floor_z / 2, A.ceil_z), log_gap(B.floor_z / 2, B.ceil_z));
    int K = static_cast<int>(std::ceil(std::log(L / (3 * eps)) / std::log(4.0))) + 1;
    K = std::clamp(K, 3, 64);

    bool in_A = abs(x0) * 2 >= 1;
    Rat anchor = in_A ? Rat(abs(x0)) : Rat(abs(x0 + 1));
    RealApprox v0 = log_rat(anchor) * RealApprox(0.5);
    RealApprox m(in_A ? Rat(1) / x0 : Rat(1) / (x0 + 1));

    RealApprox acc = v0;
    Rat scale(1, 4);
    for (int k = 0; k < K; ++k) {
        const ChartData& c = in_A ? A : B;
        RealApprox w = eval_w(c, m);
        RealApprox z = eval_z(c, m);
        RealApprox alt = in_A ? z + w : z - w;
        // Greedy pick of the larger branch keeps |Z| away from zero.
        RealApprox Z = z;
        bool to_A = in_A;
        if (abs(alt.value()) > abs(z.value())) {
            Z = alt;
            to_A = !in_A;
        }
        RealApprox la = abs(Z);
        if (!(la - RealApprox(c.floor_z / 4)).certainly_positive())
            throw precision_error("archimedean series lost the branch separation");
        acc += log(la) * RealApprox(scale) * RealApprox(0.5);
        m = w / Z;
        in_A = to_A;
        scale /= 4;
    }
    double tail = L * std::pow(4.0, -K) / 6;
    return RealApprox(acc.value(), acc.error() + tail);
}

}  // namespace

RealApprox tate_series(const WeierstrassCurve& E, const CurvePoint& P, double eps) {
    if (P.infinity)
        throw input_error("archimedean local height of the point at infinity");
    if (!P.is_rational())
        throw input_error("archimedean series expects a rational point");
    PrecisionGuard guard;
    for (int attempt = 0; attempt < 4; ++attempt) {
        try {
            RealApprox r = tate_series_attempt(E, P.x.rational(), eps);
            if (r.error() <= eps)
                return r;
        } catch (const precision_error&) {
            if (attempt == 3)
                throw;
        }
        set_working_precision_bits(working_precision_bits() * 2);
    }
    throw precision_error("archimedean local height did not converge");
}

RealApprox local_height_archimedean(const WeierstrassCurve& E, const CurvePoint& P,
                                    double eps) {
    RealApprox s = tate_series(E, P, eps / 2);
    return s - log_rat(abs(E.disc())) * RealApprox(Rat(1, 12));
}

RealApprox local_height_nonarchimedean(const WeierstrassCurve& E, const CurvePoint& P,
                                       const Int& p) {
    if (P.infinity)
        throw input_error("local height of the point at infinity");
    LocalReduction lr = local_reduction(E, p);
    CurvePoint Pm = transform_point(lr.to_minimal, P);
    if (!Pm.is_rational())
        throw input_error("non-archimedean local height expects a rational point");
    if (!reduces_to_smooth_point(lr.minimal, Pm, p))
        throw input_error("point lies outside the identity component at " + p.str());
    Valuation vx = ord_p(Pm.x.rational(), p);
    long neg = (!vx.infinite && vx.v < 0) ? -vx.v : 0;
    Rat factor = Rat(neg, 2) + Rat(lr.ord_disc_min, 12);
    return log(RealApprox(Rat(p))) * RealApprox(factor);
}

// ------------------------------------------------------- global heights

namespace {

struct MinimalContext {
    GlobalMinimalModel gm;
    CurvePoint Pm;
    std::vector<LocalReduction> bad;
};

MinimalContext minimal_context(const WeierstrassCurve& E, const CurvePoint& P) {
    MinimalContext ctx{global_minimal_model(E), CurvePoint::at_infinity(), {}};
    ctx.Pm = transform_point(ctx.gm.to_minimal, P);
    for (const auto& [p, e] : ctx.gm.disc_factorization) {
        ctx.bad.push_back(local_reduction(ctx.gm.minimal, p));
        (void)e;
    }
    return ctx;
}

RealApprox decomposed_on_minimal(const MinimalContext& ctx, double eps) {
    Int L = smooth_multiplier_for_point(ctx.gm.minimal, ctx.Pm, ctx.bad);
    CurvePoint Q = scalar_mul(ctx.gm.minimal, L, ctx.Pm);
    if (Q.infinity)
        throw std::logic_error("smooth multiple of a non-torsion point vanished");
    Rat inv_l2 = Rat(1) / Rat(L * L);
    // The series error shrinks by 1/L^2 afterwards, so eps/2 is ample.
    RealApprox series = tate_series(ctx.gm.minimal, Q, eps / 2);
    Int den = boost::multiprecision::denominator(Q.x.rational());
    RealApprox h = series + log(RealApprox(Rat(den))) * RealApprox(0.5);
    return h * RealApprox(inv_l2);
}

}  // namespace

RealApprox canonical_height_decomposed(const WeierstrassCurve& E, const CurvePoint& P,
                                       double eps) {
    if (P.infinity || is_torsion(E, P))
        return RealApprox::exact(Float(0));
    return decomposed_on_minimal(minimal_context(E, P), eps);
}

RealApprox canonical_height(const WeierstrassCurve& E, const CurvePoint& P,
                            const HeightOptions& opt) {
    if (P.infinity || is_torsion(E, P))
        return RealApprox::exact(Float(0));
    MinimalContext ctx = minimal_context(E, P);
    DuplicationBound db = duplication_bound(ctx.gm.minimal);

    double c = db.c.upper().convert_to<double>();
    int n = static_cast<int>(std::ceil(std::log(std::max(c, 1.0) / (6 * opt.eps)) /
                                       std::log(4.0)));
    n = std::clamp(n, 1, 40);

    Rat x = ctx.Pm.x.rational();
    Int num = boost::multiprecision::numerator(x);
    Int den = boost::multiprecision::denominator(x);
    Int an = abs(num) + 1, ad = den + 1;
    double bits0 = static_cast<double>(std::max(msb(an), msb(ad))) + 2;
    if (bits0 * std::pow(4.0, n) + 4 * c * n > static_cast<double>(opt.max_bits))
        return decomposed_on_minimal(ctx, opt.eps);

    Int b2 = int_coeff(ctx.gm.minimal.b2()), b4 = int_coeff(ctx.gm.minimal.b4()),
        b6 = int_coeff(ctx.gm.minimal.b6()), b8 = int_coeff(ctx.gm.minimal.b8());
    for (int k = 0; k < n; ++k) {
        Int n2 = num * num, d2 = den * den;
        Int nd = num * den;
        Int F = n2 * n2 - b4 * n2 * d2 - 2 * b6 * nd * d2 - b8 * d2 * d2;
        Int G = 4 * n2 * nd + b2 * n2 * d2 + 2 * b4 * nd * d2 + b6 * d2 * d2;
        Int g = boost::multiprecision::gcd(F, G);
        if (g == 0)
            throw std::logic_error("duplication hit the point at infinity");
        if (db.gcd_cap % g != 0)
            throw std::logic_error("duplication cancellation exceeded its certified cap");
        num = F / g;
        den = G / g;
        if (den < 0) {
            den = -den;
            num = -num;
        }
        Int width = abs(num) + 1;
        if (msb(width) > static_cast<unsigned>(opt.max_bits))
            return decomposed_on_minimal(ctx, opt.eps);
    }
    Int mag = abs(num);
    if (den > mag)
        mag = den;
    RealApprox h = log(RealApprox(Rat(mag)));
    Rat scale = Rat(1, 2) / Rat(Int(1) << (2 * n));
    RealApprox out = h * RealApprox(scale);
    double tail = c / (6 * std::pow(4.0, n));
    return RealApprox(out.value(), out.error() + tail);
}

RealApprox height_pairing(const WeierstrassCurve& E, const CurvePoint& P, const CurvePoint& Q,
                          const HeightOptions& opt) {
    HeightOptions tight = opt;
    tight.eps = opt.eps / 4;
    RealApprox hs = canonical_height(E, add(E, P, Q), tight);
    RealApprox hp = canonical_height(E, P, tight);
    RealApprox hq = canonical_height(E, Q, tight);
    return (hs - hp - hq) * RealApprox(0.5);
}

HeightBreakdown canonical_height_breakdown(const WeierstrassCurve& E, const CurvePoint& P,
                                           double eps) {
    MinimalContext ctx = minimal_context(E, P);
    HeightBreakdown out(canonical_height(E, P, HeightOptions{eps, 1500000}),
                        ctx.gm.minimal);
    if (P.infinity || is_torsion(E, P))
        return out;

    Int L = smooth_multiplier_for_point(ctx.gm.minimal, ctx.Pm, ctx.bad);
    out.smooth_multiple = L;
    CurvePoint Q = scalar_mul(ctx.gm.minimal, L, ctx.Pm);
    out.terms.push_back({Int(0), local_height_archimedean(ctx.gm.minimal, Q, eps)});
    std::vector<Int> primes;
    for (const auto& [p, e] : ctx.gm.disc_factorization) {
        primes.push_back(p);
        (void)e;
    }
    for (const auto& [p, e] :
         factorize(boost::multiprecision::denominator(Q.x.rational()))) {
        if (std::find(primes.begin(), primes.end(), p) == primes.end())
            primes.push_back(p);
        (void)e;
    }
    std::sort(primes.begin(), primes.end());
    for (const Int& p : primes)
        out.terms.push_back({p, local_height_nonarchimedean(ctx.gm.minimal, Q, p)});
    return out;
}

}  // namespace heightlab
