#include "heightlab/bounds.hpp"

#include <cmath>
#include <functional>

namespace heightlab {

namespace {

using boost::multiprecision::pow;

struct PrecisionGuard {
    int saved;
    PrecisionGuard() : saved(working_precision_bits()) {}
    ~PrecisionGuard() { set_working_precision_bits(saved); }
};

void validate(const BoundInput& in) {
    if (in.p < 2) throw input_error("bound input: p must be >= 2");
    if (in.d < 1) throw input_error("bound input: d must be >= 1");
    if (in.e < 1 || in.e > 64) throw input_error("bound input: e must be in 1..64");
}

Int factorial(long e) {
    Int out = 1;
    for (long i = 2; i <= e; ++i) out *= i;
    return out;
}

/// ceil of a certainly-non-integer interval, escalating precision on straddle.
long ceil_certain(const std::function<RealApprox()>& eval) {
    PrecisionGuard guard;
    for (int attempt = 0; attempt < 5; ++attempt) {
        RealApprox x = eval();
        Float cl = ceil(x.lower()), cu = ceil(x.upper());
        if (cl == cu) return cl.convert_to<long>();
        set_working_precision_bits(working_precision_bits() * 2);
    }
    throw precision_error("ceil_certain: interval keeps straddling an integer");
}

RealApprox inner_count_expr(const BoundInput& in) {
    RealApprox logp = log_int(in.p);
    RealApprox d((double)in.d);
    RealApprox six_d_over_logp = RealApprox(6.0) * d / logp;
    return RealApprox(10.0) * d / logp *
           (log(six_d_over_logp) + in.hj / RealApprox(6.0) + RealApprox(Rat(32, 5)));
}

std::string rat_str(const Rat& r) {
    Int n = numerator(r), d = denominator(r);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

}  // namespace

BoundInput bound_input_from_curve(const WeierstrassCurve& E, const Int& p, long d, long e) {
    auto lr = local_reduction(E, p);
    if (lr.type != ReductionType::MultiplicativeSplit &&
        lr.type != ReductionType::MultiplicativeNonsplit)
        throw input_error("bound input: reduction at p is not multiplicative");
    BoundInput in;
    in.p = p;
    in.d = d;
    in.e = e;
    in.ordv_jinv = lr.component_index;
    in.hj = weil_height_rational(E.j());
    return in;
}

long multiplicity_count(const BoundInput& in) {
    validate(in);
    long c = ceil_certain([&] { return inner_count_expr(in); });
    if (c < 1) throw std::logic_error("multiplicity count must be positive");
    return c;
}

RealApprox multiplicity_threshold(const BoundInput& in) {
    validate(in);
    RealApprox logp = log_int(in.p);
    RealApprox a = logp / RealApprox(6.0 * in.d);
    RealApprox b = in.hj / RealApprox(6.0) + RealApprox(Rat(32, 5));
    return positivity_threshold(a, b).root;
}

RealApprox split_height_floor(const BoundInput& in, const Int& multiplier) {
    validate(in);
    if (in.ordv_jinv < 1)
        throw input_error("split floor needs ord_v(1/j) >= 1 (multiplicative place)");
    long c = multiplicity_count(in);
    RealApprox logp = log_int(in.p);
    RealApprox num = logp / RealApprox(2.0 * in.d) * RealApprox((double)c) -
                     RealApprox(3.0) * log(RealApprox(Rat(2)));
    Int cc(c);
    Int poly = 8 * cc * cc * cc - 2 * cc;
    Int mN = multiplier * in.ordv_jinv;
    Int den = poly * mN * mN;
    return num / RealApprox(Rat(den));
}

LowerBoundResult bound_elliptic_split(const BoundInput& in) {
    validate(in);
    Int efact = factorial(in.e);
    LowerBoundResult out;
    out.count = multiplicity_count(in);
    out.height_floor = split_height_floor(in, efact);
    Int X = efact * out.count * in.ordv_jinv;
    Rat cap = Rat(X * X * X, 3) + Rat(X * X, 2);
    out.torsion_cap = RealApprox(cap);
    out.trace = {{"count", std::to_string(out.count)},
                 {"e_factorial", efact.str()},
                 {"X", X.str()},
                 {"torsion_cap", rat_str(cap)},
                 {"height_floor", out.height_floor.str(18)}};
    return out;
}

LowerBoundResult bound_lattes_split(const BoundInput& in) {
    LowerBoundResult base = bound_elliptic_split(in);
    LowerBoundResult out;
    out.count = base.count;
    out.height_floor = base.height_floor * RealApprox(0.5);
    Int efact = factorial(in.e);
    Int X = efact * out.count * in.ordv_jinv;
    Rat cap = Rat(4 * X * X * X, 3) + Rat(X * X);
    Rat proof_line = Rat(4 * X * X * X, 3) + Rat(X) + 2;
    out.torsion_cap = RealApprox(cap);
    out.trace = {{"count", std::to_string(out.count)},
                 {"X", X.str()},
                 {"preperiodic_cap", rat_str(cap)},
                 {"preperiodic_cap_counting_line", rat_str(proof_line)},
                 {"height_floor", out.height_floor.str(18)}};
    return out;
}

LowerBoundResult bound_extension_split(const BoundInput& in, long k_degree,
                                       long e_extension) {
    if (k_degree < 1 || e_extension < 1)
        throw input_error("extension data must be positive");
    BoundInput ext = in;
    ext.d = in.d * k_degree;
    ext.ordv_jinv = in.ordv_jinv * e_extension;
    LowerBoundResult out = bound_elliptic_split(ext);
    out.trace.emplace_back("extension_degree", std::to_string(k_degree));
    out.trace.emplace_back("extension_ramification", std::to_string(e_extension));
    return out;
}

LowerBoundResult bound_galois_stable(const BoundInput& in) {
    validate(in);
    LowerBoundResult out;
    out.count = multiplicity_count(in);
    out.height_floor = split_height_floor(in, Int(in.e));
    Int X = Int(out.count) * in.ordv_jinv * in.e;
    Rat cap = Rat(X * X);
    out.torsion_cap = RealApprox(cap);
    out.trace = {{"count", std::to_string(out.count)},
                 {"e", std::to_string(in.e)},
                 {"torsion_cap", rat_str(cap)},
                 {"height_floor", out.height_floor.str(18)}};
    return out;
}

LowerBoundResult bound_additive_unramified(const BoundInput& in) {
    validate(in);
    if (in.e != 1)
        throw input_error("additive floor holds for unramified places only (e = 1)");
    LowerBoundResult out;
    out.count = multiplicity_count(in);
    long c2 = out.count + 2;
    RealApprox logp = log_int(in.p);
    RealApprox num = logp / RealApprox(2.0 * in.d) * RealApprox((double)c2) -
                     RealApprox(3.0) * log(RealApprox(Rat(2)));
    Int cc(c2);
    Int den = (8 * cc * cc * cc - 2 * cc) * 144;
    out.height_floor = num / RealApprox(Rat(den));
    Int capb = 12 * Int(out.count) + 24;
    Rat cap = Rat(capb * capb);
    out.torsion_cap = RealApprox(cap);
    out.trace = {{"count", std::to_string(out.count)},
                 {"count_plus_2", std::to_string(c2)},
                 {"multiplier_squared", "144"},
                 {"torsion_cap", rat_str(cap)},
                 {"height_floor", out.height_floor.str(18)}};
    return out;
}

RealApprox bound_totally_real(const RealApprox& hj) {
    RealApprox base = hj + RealApprox(10.0);
    RealApprox p5 = base * base;
    p5 = p5 * p5 * base;
    return RealApprox(1.0) / (RealApprox(108.0) * p5);
}

Int preperiodic_tower_cap(const Int& p, long e, long f, long nu) {
    if (p < 2 || e < 1 || f < 1 || nu < 0)
        throw input_error("tower cap: need p >= 2, e, f >= 1, nu >= 0");
    Int p3f = pow(p, static_cast<unsigned>(3 * f));
    Int hasse = p3f * p3f + 1 + 2 * p3f;
    Int wild = Int(72) * e * nu;
    return hasse > wild ? hasse : wild;
}

LowerBoundResult bound_preperiodic_tower(const PreperBoundInput& in) {
    Int M = preperiodic_tower_cap(in.p, in.e, in.f, in.nu);
    RealApprox logp = log_int(in.p);
    RealApprox eM = RealApprox(Rat(Int(6) * in.e * M));
    RealApprox logsum = log(eM) + logp / RealApprox(3.0 * in.e) +
                        in.hj / RealApprox(6.0) + RealApprox(Rat(32, 5));
    RealApprox ratio = logp / eM;
    LowerBoundResult out;
    out.height_floor =
        RealApprox(Rat(25, 256)) * ratio * ratio * ratio / (logsum * logsum);
    RealApprox cap = RealApprox(Rat(Int(24) * in.e * M, 5)) / logp * logsum + RealApprox(2.0);
    out.torsion_cap = cap;
    out.trace = {{"M", M.str()},
                 {"log_sum", logsum.str(18)},
                 {"preperiodic_cap", cap.str(18)},
                 {"height_floor", out.height_floor.str(18)}};
    return out;
}

RealApprox best_scan_bound(const BoundInput& in) {
    validate(in);
    if (in.ordv_jinv < 1)
        throw input_error("scan bound needs ord_v(1/j) >= 1 (multiplicative place)");
    long c = multiplicity_count(in);
    long smax = 4 * c;
    if (smax > 200000) smax = 200000;
    RealApprox logp = log_int(in.p);
    Int efact = factorial(in.e);
    Int mN = efact * in.ordv_jinv;
    RealApprox offset = in.hj * RealApprox(0.5) + RealApprox(Rat(96, 5));
    RealApprox best = RealApprox(-1e308);
    for (long s = 2; s <= smax; ++s) {
        RealApprox num = logp * RealApprox(Rat(s, 2 * in.d)) - offset -
                         RealApprox(3.0) * log(RealApprox(Rat(s)));
        Int ss(s);
        Int den = (ss * ss * ss - ss) * mN * mN;
        RealApprox val = num / RealApprox(Rat(den));
        if (val.value() > best.value()) best = val;
    }
    return best;
}

SplitDegree split_degree(const WeierstrassCurve& E, const Int& p) {
    auto lr = local_reduction(E, p);
    if (lr.type == ReductionType::MultiplicativeSplit) return {1, 1};
    if (lr.type == ReductionType::MultiplicativeNonsplit) return {2, 1};
    if (lr.type != ReductionType::Additive || !lr.potentially_multiplicative)
        throw input_error("split_degree: reduction is potentially good at p");

    auto T = to_integral_short_any(E);
    auto Es = E.transformed(T);
    // quadratic twists covering the square classes at p; a twist with odd
    // valuation turns the additive reduction multiplicative, and twisting a
    // multiplicative curve by a unit class toggles split vs nonsplit.
    std::vector<Rat> gammas;
    for (long m : {1L, -1L, 2L, -2L, 3L, -3L, 5L, -5L, 6L, -6L, 7L, -7L, 10L, -10L,
                   11L, -11L, 13L, -13L, 17L, -17L, 19L, -19L, 23L, -23L, 29L, -29L,
                   31L, -31L, 37L, -37L, 41L, -41L, 43L, -43L}) {
        gammas.push_back(Rat(Int(m) * p));
        if (m != 1) gammas.push_back(Rat(m));
    }
    bool saw_nonsplit = false;
    for (const Rat& g : gammas) {
        auto Et = twist(Es, g);
        auto lt = local_reduction(Et, p);
        if (lt.type == ReductionType::MultiplicativeSplit) return {2, 2};
        if (lt.type == ReductionType::MultiplicativeNonsplit) saw_nonsplit = true;
    }
    if (saw_nonsplit) return {4, 2};
    return {48, 2};
}

}  // namespace heightlab
