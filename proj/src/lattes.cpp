#include "heightlab/lattes.hpp"

#include "heightlab/numeric.hpp"

#include <map>
#include <utility>

namespace heightlab {

namespace {

using boost::multiprecision::gcd;
using boost::multiprecision::msb;
using boost::multiprecision::pow;

struct PrecisionGuard {
    int saved;
    PrecisionGuard() : saved(working_precision_bits()) {}
    ~PrecisionGuard() { set_working_precision_bits(saved); }
};

RealApprox interval_max(const RealApprox& a, const RealApprox& b) {
    RealApprox two(2.0);
    return (a + b + abs(a - b)) / two;
}

/// One exact step of the homogeneous quartic pair, reduced by the gcd.
/// State convention: gcd(n, d) = 1 and d > 0, or (1, 0) for infinity.
struct PairState {
    Int n, d;
    bool operator<(const PairState& o) const {
        return n < o.n || (n == o.n && d < o.d);
    }
};

PairState lattes_step_exact(const Int& A, const Int& B, const Int& cap, const PairState& s) {
    const Int &n = s.n, &d = s.d;
    Int n2 = n * n, d2 = d * d;
    Int F = n2 * n2 - 2 * A * n2 * d2 - 8 * B * n * d * d2 + A * A * d2 * d2;
    Int G = 4 * n2 * n * d + 4 * A * n * d * d2 + 4 * B * d2 * d2;
    if (G == 0) return {Int(1), Int(0)};
    Int g = gcd(F, G);
    if (g < 0) g = -g;
    if (cap % g != 0)
        throw std::logic_error("lattes step: cancellation exceeded the certified cap");
    F /= g;
    G /= g;
    if (G < 0) {
        F = -F;
        G = -G;
    }
    return {F, G};
}

PairState make_state(const Rat& t) {
    Int n = numerator(t), d = denominator(t);
    return {n, d};
}

}  // namespace

LattesMap::LattesMap(const Rat& A, const Rat& B)
    : A0_(A),
      B0_(B),
      scale_(1),
      Ai_(0),
      Bi_(0),
      curve_(WeierstrassCurve::short_form(A, B)),
      bound_{RealApprox(0.0), RealApprox(0.0), RealApprox(0.0), Int(1), Rat(0)} {
    Int v = 1;
    Int da = denominator(A), db = denominator(B);
    std::map<Int, long> prime_exp;
    if (da > 1)
        for (auto& [q, e] : factorize(da)) {
            long need = (e + 3) / 4;
            if (prime_exp[q] < need) prime_exp[q] = need;
        }
    if (db > 1)
        for (auto& [q, e] : factorize(db)) {
            long need = (e + 5) / 6;
            if (prime_exp[q] < need) prime_exp[q] = need;
        }
    for (auto& [q, e] : prime_exp)
        v *= pow(q, static_cast<unsigned>(e));
    Rat v2 = Rat(v) * v;
    scale_ = v2;
    Rat As = A * v2 * v2, Bs = B * v2 * v2 * v2;
    if (denominator(As) != 1 || denominator(Bs) != 1)
        throw std::logic_error("lattes map: integralization failed");
    Ai_ = numerator(As);
    Bi_ = numerator(Bs);
    curve_ = WeierstrassCurve::short_form(Rat(Ai_), Rat(Bi_));
    bound_ = duplication_bound(curve_);
}

std::optional<Rat> LattesMap::apply(const Rat& t) const {
    Rat ts = t * scale_;
    PairState s = make_state(ts);
    PairState next = lattes_step_exact(Ai_, Bi_, bound_.gcd_cap, s);
    if (next.d == 0) return std::nullopt;
    return Rat(next.n, next.d) / scale_;
}

LattesOrbit classify_orbit(const LattesMap& f, const Rat& t, long max_steps) {
    LattesOrbit out;
    const Int& A = f.A_int();
    const Int& B = f.B_int();
    const Int& cap = f.bound().gcd_cap;
    // preperiodic orbits never exceed h = c/3; demand one unit of clearance
    double threshold = f.bound().c.upper().convert_to<double>() / 3.0 + 1.0;
    const double log2v = 0.6931471805599453;

    PairState s = make_state(t * f.scale());
    std::map<PairState, long> seen;
    for (long k = 0; k <= max_steps; ++k) {
        if (s.d == 0) {
            out.preperiodic = true;
            out.hits_infinity = true;
            out.preperiod = k;
            out.period = 1;
            return out;
        }
        auto it = seen.find(s);
        if (it != seen.end()) {
            out.preperiodic = true;
            out.preperiod = it->second;
            out.period = k - it->second;
            return out;
        }
        Int mag = abs(s.n);
        if (s.d > mag) mag = s.d;
        if (mag > 1 && static_cast<double>(msb(mag)) * log2v > threshold) {
            out.preperiodic = false;
            return out;
        }
        seen.emplace(s, k);
        out.points.push_back(Rat(s.n, s.d) / f.scale());
        s = lattes_step_exact(A, B, cap, s);
    }
    throw precision_error("classify_orbit: no decision within the step cap");
}

bool is_preperiodic(const LattesMap& f, const Rat& t) {
    return classify_orbit(f, t).preperiodic;
}

namespace {

/// Archimedean Green term: sum_{k<K} 4^{-(k+1)} log max(|F|, |G|) along the
/// normalized real iteration. Throws precision_error if an interval degrades.
RealApprox green_archimedean(const Int& A, const Int& B, const Rat& t, int K) {
    RealApprox a(Rat(numerator(t)));
    RealApprox b(Rat(denominator(t)));
    RealApprox m0 = interval_max(abs(a), abs(b));
    if (!m0.certainly_positive()) throw precision_error("zero start in green iteration");
    a /= m0;
    b /= m0;
    RealApprox Ar((Rat(A))), Br((Rat(B)));
    RealApprox acc(0.0);
    Int p4 = 1;
    for (int k = 0; k < K; ++k) {
        RealApprox a2 = a * a, b2 = b * b;
        RealApprox F = a2 * a2 - RealApprox(2.0) * Ar * a2 * b2 -
                       RealApprox(8.0) * Br * a * b * b2 + Ar * Ar * b2 * b2;
        RealApprox G = RealApprox(4.0) * a2 * a * b + RealApprox(4.0) * Ar * a * b * b2 +
                       RealApprox(4.0) * Br * b2 * b2;
        RealApprox M = interval_max(abs(F), abs(G));
        if (!M.certainly_positive())
            throw precision_error("green iteration lost the normalization floor");
        p4 *= 4;
        acc += log(M) * RealApprox(Rat(1, p4));
        a = F / M;
        b = G / M;
    }
    return acc;
}

/// Exact 4^{-(k+1)}-weighted sum of v_q(gcd_k) along the orbit, by residue
/// tracking mod q^E. Unit factors never change future valuations of the
/// homogeneous pair, so only powers of q are divided out.
Rat green_padic_correction(const Int& A, const Int& B, const Rat& t, const Int& q,
                           long eq, int K) {
    long E0 = eq * (K + 1) + 1;
    Int mod = pow(q, static_cast<unsigned>(E0));
    auto reduce = [](const Int& x, const Int& m) {
        Int r = x % m;
        if (r < 0) r += m;
        return r;
    };
    Int n = reduce(numerator(t), mod), d = reduce(denominator(t), mod);
    long R = E0;
    Rat corr = 0;
    Int p4 = 1;
    for (int k = 0; k < K; ++k) {
        if (R <= eq) throw std::logic_error("green padic: precision budget exhausted");
        Int n2 = (n * n) % mod, d2 = (d * d) % mod;
        Int F = reduce(n2 * n2 - 2 * A * n2 * d2 - 8 * B * ((n * d) % mod) * d2 +
                           A * A * d2 * d2,
                       mod);
        Int G = reduce(4 * ((n2 * n) % mod) * d + 4 * A * n * ((d * d2) % mod) +
                           4 * B * d2 * d2,
                       mod);
        long vF = (F == 0) ? R : strip_p(F, q).second;
        long vG = (G == 0) ? R : strip_p(G, q).second;
        long v = std::min(vF, vG);
        if (v > eq)
            throw std::logic_error("green padic: observed cancellation beyond the cap");
        p4 *= 4;
        if (v > 0) {
            corr += Rat(v, p4);
            Int qv = pow(q, static_cast<unsigned>(v));
            R -= v;
            mod /= qv;
            F /= qv;
            G /= qv;
        }
        n = reduce(F, mod);
        d = reduce(G, mod);
    }
    return corr;
}

}  // namespace

RealApprox lattes_height(const LattesMap& f, const Rat& t, double eps) {
    if (eps <= 0) throw input_error("lattes_height: eps must be positive");
    LattesOrbit orbit = classify_orbit(f, t);
    if (orbit.preperiodic) return RealApprox::exact(Float(0));

    Rat ts = t * f.scale();
    const DuplicationBound& db = f.bound();
    double Lr = std::max(db.log_upper.upper().convert_to<double>(),
                         log(RealApprox(db.cofactor_norm)).upper().convert_to<double>());
    double Lc = log_int(db.gcd_cap).upper().convert_to<double>();
    double budget = std::max(1.0, Lr + Lc);
    int K = 2;
    while (K < 64 && budget / (3.0 * std::pow(4.0, K)) > eps / 2) ++K;
    double tail = budget / (3.0 * std::pow(4.0, K)) * 1.0000001;

    PrecisionGuard guard;
    for (int attempt = 0;; ++attempt) {
        try {
            RealApprox total = weil_height_rational(ts);
            total += green_archimedean(f.A_int(), f.B_int(), ts, K);
            for (auto& [q, eq] : factorize(db.gcd_cap)) {
                Rat corr = green_padic_correction(f.A_int(), f.B_int(), ts, q, eq, K);
                if (corr != 0) total -= RealApprox(corr) * log_int(q);
            }
            RealApprox out(total.value(), total.error() + tail);
            if (out.error() > eps && attempt < 3) throw precision_error("interval too wide");
            return out;
        } catch (const precision_error&) {
            if (attempt >= 3) throw;
            set_working_precision_bits(working_precision_bits() * 2);
        }
    }
}

PreimagePoly preimage_polynomial(const LattesMap& f, const Rat& beta) {
    const Rat &A = f.A(), &B = f.B();
    RatPoly F0(std::vector<Rat>{A * A, -8 * B, -2 * A, Rat(0), Rat(1)});
    RatPoly G0(std::vector<Rat>{4 * B, 4 * A, Rat(0), Rat(4)});
    RatPoly P = F0 - G0 * beta;
    IntPoly poly = P.to_int_primitive();
    bool separable = true;
    for (auto& part : squarefree_decompose(poly))
        if (part.mult > 1) separable = false;
    return {poly, separable};
}

SmallHeightSequence small_height_sequence(const Int& p, int levels, double eps) {
    if (p < 3 || p % 2 == 0 || !is_probable_prime(p))
        throw input_error("small_height_sequence: p must be an odd prime");
    if (levels < 1 || levels > 6)
        throw input_error("small_height_sequence: levels must be in 1..6");

    SmallHeightSequence out{p, Rat(-p), RealApprox(0.0), Rat(1, 4), {}};
    LattesMap f(Rat(-2 * p * p), Rat(0));
    out.base_height = lattes_height(f, out.alpha0, eps);
    if (!out.base_height.certainly_positive())
        throw precision_error("small_height_sequence: seed height not separated from zero");

    // xi-coordinates: alpha = p xi, and the conjugated map for y^2 = x^3 - 2x
    // has N/D iteration N' = N^4 + 4 N^2 D^2 + 4 D^4, D' = 4 N^3 D - 8 N D^3.
    IntPoly N({Int(0), Int(1)});
    IntPoly D({Int(1)});
    Int four(4), eight(8);
    for (int k = 1; k <= levels; ++k) {
        IntPoly N2 = N * N, D2 = D * D;
        IntPoly Nn = N2 * N2 + N2 * D2 * four + D2 * D2 * four;
        IntPoly Dn = N2 * N * D * four - N * (D2 * D) * eight;
        N = Nn;
        D = Dn;
        SmallHeightLevel lvl;
        lvl.level = k;
        lvl.xi_poly = N + D;
        if (lvl.xi_poly.leading() != 1 || lvl.xi_poly.degree() != (1 << (2 * k)))
            throw std::logic_error("small_height_sequence: level polynomial malformed");
        lvl.alpha_poly = lvl.xi_poly.unscale_arg_clear(p);
        lvl.cert = unramified_certificate(lvl.xi_poly, p);
        Int p4 = pow(Int(4), static_cast<unsigned>(k));
        lvl.height = out.base_height * RealApprox(Rat(1, p4));
        out.levels.push_back(std::move(lvl));
    }
    return out;
}

}  // namespace heightlab
