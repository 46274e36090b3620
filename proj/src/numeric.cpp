#include "heightlab/numeric.hpp"

#include <gmp.h>

#include <cmath>
#include <complex>

namespace heightlab {

// ------------------------------------------------------------- valuations

Valuation ord_p(const Int& x, const Int& p) {
    if (p < 2) throw input_error("ord_p: p must be >= 2");
    if (x == 0) return Valuation::infinity();
    return Valuation::of(strip_p(x, p).second);
}

Valuation ord_p(const Rat& x, const Int& p) {
    if (p < 2) throw input_error("ord_p: p must be >= 2");
    if (x == 0) return Valuation::infinity();
    long vn = strip_p(numerator(x), p).second;
    long vd = strip_p(denominator(x), p).second;
    return Valuation::of(vn - vd);
}

std::pair<Int, long> strip_p(const Int& x, const Int& p) {
    if (x == 0) throw input_error("strip_p: x must be nonzero");
    Int out;
    mp_bitcnt_t n = mpz_remove(out.backend().data(), x.backend().data(), p.backend().data());
    return {out, static_cast<long>(n)};
}

// -------------------------------------------------------------- Lambert W

namespace {

Float g_mid(const Float& x, const Float& y) { return x * exp(x) - y; }

RealApprox g_interval(const Float& x, const RealApprox& y) {
    RealApprox xr = RealApprox::exact(x);
    return xr * exp(xr) - y;
}

// Root known to an interval [lo, hi] whose endpoint signs are certain for
// every value of y inside its error bound.
RealApprox certify_bracket(Float x, const RealApprox& y) {
    double step = std::max(std::fabs(x.convert_to<double>()), 1.0) *
                  std::ldexp(1.0, -(working_precision_bits() - 16));
    for (int tries = 0; tries < 60; ++tries) {
        RealApprox glo = g_interval(x - step, y);
        RealApprox ghi = g_interval(x + step, y);
        bool opposite = (glo.certainly_negative() && ghi.certainly_positive()) ||
                        (glo.certainly_positive() && ghi.certainly_negative());
        if (opposite) return RealApprox(x, step * (1 + 1e-12));
        step *= 8;
        if (step > 0.5) break;
    }
    throw precision_error("lambert_w: could not certify the root bracket");
}

}  // namespace

RealApprox lambert_w(int branch, const RealApprox& y) {
    if (branch != 0 && branch != -1) throw input_error("lambert_w: branch must be 0 or -1");
    Float m1e = -exp(Float(-1));
    Float delta_lo = y.lower() - m1e;
    Float delta_up = y.upper() - m1e;
    if (delta_up < 0) {
        if (delta_up.convert_to<double>() < -1e-10)
            throw domain_error("lambert_w: y below -1/e");
        delta_up = 0;
    }
    if (branch == -1 && !(y.upper() < 0)) throw domain_error("lambert_w branch -1: y must be < 0");

    // Branch point neighborhood: double root of x e^x - y, no sign change.
    double du = delta_up.convert_to<double>();
    if (du <= 1e-12) {
        double bound = 1.2 * std::sqrt(2 * std::exp(1.0) * std::max(du, 0.0)) + 1e-280;
        return RealApprox(Float(-1), bound);
    }

    Float lo, hi;
    bool increasing;
    if (branch == 0) {
        increasing = true;  // g' = e^x (1+x) > 0 for x > -1
        if (y.value() >= 0) {
            lo = 0;
            hi = 1;
            while (g_mid(hi, y.value()) <= 0) hi *= 2;
        } else {
            lo = -1;
            hi = 0;
        }
    } else {
        increasing = false;  // decreasing for x < -1
        hi = -1;
        Float B = 2;
        while (g_mid(-B, y.value()) <= 0) {
            B *= 2;
            if (B > Float(16777216)) throw precision_error("lambert_w: bracket search diverged");
        }
        lo = -B;
    }

    // Safeguarded Newton within [lo, hi].
    Float x = (lo + hi) / 2;
    Float tol = ldexp(Float(1), -(working_precision_bits() - 10));
    for (int it = 0; it < 200; ++it) {
        Float g = g_mid(x, y.value());
        bool gpos = g > 0;
        if (gpos == increasing)
            hi = x;
        else
            lo = x;
        Float dg = exp(x) * (1 + x);
        Float nx;
        if (dg != 0) {
            nx = x - g / dg;
            if (!(nx > lo && nx < hi)) nx = (lo + hi) / 2;
        } else {
            nx = (lo + hi) / 2;
        }
        Float step = abs(nx - x);
        x = nx;
        if (step < tol * std::max(1.0, std::fabs(x.convert_to<double>())) && hi - lo < Float(0.5))
            break;
    }
    return certify_bracket(x, y);
}

PositivityThreshold positivity_threshold(const RealApprox& a, const RealApprox& b) {
    if (!a.certainly_positive()) throw input_error("positivity_threshold: a must be > 0");
    // Domain: -a e^{-b} > -1/e, i.e. b > 1 + log a; lambert_w rejects the rest.
    RealApprox arg = -(a * exp(-b));
    RealApprox w = lambert_w(-1, arg);
    PositivityThreshold out;
    out.root = -(w / a);
    out.lower = (RealApprox(1.0) / a).lower().convert_to<double>();
    out.upper = (RealApprox(8.0) / (RealApprox(5.0) * a)) * (b - log(a));
    return out;
}

// ------------------------------------------------------- complex root work

namespace {

struct CF {
    Float re, im;
    CF operator+(const CF& o) const { return {re + o.re, im + o.im}; }
    CF operator-(const CF& o) const { return {re - o.re, im - o.im}; }
    CF operator*(const CF& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    CF operator/(const CF& o) const {
        Float d = o.re * o.re + o.im * o.im;
        return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
    }
    Float abs2() const { return re * re + im * im; }
};

CF eval_poly(const IntPoly& f, const CF& z) {
    CF acc{Float(0), Float(0)};
    for (int i = f.degree(); i >= 0; --i) {
        acc = acc * z;
        acc.re += Float(f[i]);
    }
    return acc;
}

std::vector<std::complex<double>> durand_kerner_double(const IntPoly& f) {
    int n = f.degree();
    std::vector<double> c(n + 1);
    double lead = f[n].convert_to<double>();
    bool ok = std::isfinite(lead) && lead != 0;
    for (int i = 0; i <= n && ok; ++i) {
        c[i] = (Rat(f[i]) / Rat(f[n])).convert_to<double>();
        if (!std::isfinite(c[i])) ok = false;
    }
    if (!ok) return {};
    double radius = 1;
    for (int i = 0; i < n; ++i) radius = std::max(radius, 2 * std::pow(std::fabs(c[i]), 1.0 / (n - i)));
    std::vector<std::complex<double>> z(n);
    for (int k = 0; k < n; ++k)
        z[k] = std::polar(radius * (0.5 + 0.5 * (k + 1.0) / n), 2 * M_PI * k / n + 0.7);
    auto peval = [&](std::complex<double> w) {
        std::complex<double> acc = 1;  // monic
        for (int i = n - 1; i >= 0; --i) acc = acc * w + c[i];
        return acc;
    };
    for (int it = 0; it < 600; ++it) {
        double worst = 0;
        for (int k = 0; k < n; ++k) {
            std::complex<double> denom = 1;
            for (int j = 0; j < n; ++j)
                if (j != k) denom *= (z[k] - z[j]);
            if (denom == std::complex<double>(0, 0)) denom = 1e-30;
            std::complex<double> step = peval(z[k]) / denom;
            z[k] -= step;
            worst = std::max(worst, std::abs(step));
        }
        if (worst < 1e-13) break;
    }
    return z;
}

struct RootSet {
    std::vector<CF> z;
    std::vector<double> radius;
    bool certified = false;
};

// Newton-refine and certify simple-root enclosures for a squarefree poly.
RootSet refine_and_certify(const IntPoly& f, double target_radius) {
    int n = f.degree();
    IntPoly fd = f.derivative();
    RootSet rs;
    auto seeds = durand_kerner_double(f);
    if (static_cast<int>(seeds.size()) != n) return rs;
    rs.z.reserve(n);
    for (auto& s : seeds) rs.z.push_back({Float(s.real()), Float(s.imag())});
    rs.radius.assign(n, 0);
    for (int k = 0; k < n; ++k) {
        for (int it = 0; it < 64; ++it) {
            CF fv = eval_poly(f, rs.z[k]);
            CF dv = eval_poly(fd, rs.z[k]);
            if (dv.abs2() == 0) break;
            CF step = fv / dv;
            rs.z[k] = rs.z[k] - step;
            Float d2 = eval_poly(fd, rs.z[k]).abs2();
            if (d2 == 0) {
                rs.radius[k] = 1e300;  // derivative collapsed; certification will reject
                break;
            }
            double rad = n * sqrt((eval_poly(f, rs.z[k]).abs2() / d2)).convert_to<double>();
            rs.radius[k] = rad * (1 + 1e-10) + 1e-250;
            if (rs.radius[k] < target_radius / 4) break;
        }
    }
    // pairwise disjoint disks => exactly one root per disk
    for (int i = 0; i < n; ++i) {
        if (!(rs.radius[i] < target_radius)) return rs;
        for (int j = i + 1; j < n; ++j) {
            double dist = sqrt((rs.z[i] - rs.z[j]).abs2()).convert_to<double>();
            if (!(dist > 2 * (rs.radius[i] + rs.radius[j]))) return rs;
        }
    }
    rs.certified = true;
    return rs;
}

}  // namespace

std::vector<ComplexApprox> complex_roots(const IntPoly& f, double eps) {
    if (f.is_zero() || f.degree() < 1) throw input_error("complex_roots: degree >= 1 required");
    std::vector<ComplexApprox> out;
    for (const auto& fac : squarefree_decompose(f)) {
        const IntPoly& g = fac.poly;
        if (g.degree() == 0) continue;
        std::vector<ComplexApprox> roots;
        if (g.degree() == 1) {
            Rat r = Rat(-g[0]) / Rat(g[1]);
            RealApprox ra(r);
            roots.push_back({ra.value(), Float(0), ra.error() + 1e-250});
        } else {
            int save_prec = working_precision_bits();
            RootSet rs;
            for (int bits = save_prec; bits <= 8 * save_prec; bits *= 2) {
                set_working_precision_bits(bits);
                rs = refine_and_certify(g, eps);
                if (rs.certified) break;
            }
            set_working_precision_bits(save_prec);
            if (!rs.certified)
                throw precision_error("complex_roots: root certification failed");
            for (size_t k = 0; k < rs.z.size(); ++k)
                roots.push_back({rs.z[k].re, rs.z[k].im, rs.radius[k]});
        }
        for (int m = 0; m < fac.mult; ++m)
            for (const auto& r : roots) out.push_back(r);
    }
    return out;
}

RealApprox height_from_minpoly(const IntPoly& f, double eps) {
    if (f.is_zero() || f.degree() < 1)
        throw input_error("height_from_minpoly: degree >= 1 required");
    int n = f.degree();
    double root_eps = eps * n / (4.0 * (n + 1));
    auto roots = complex_roots(f, root_eps);
    Int lead_abs = boost::multiprecision::abs(f.leading());
    RealApprox acc = log(RealApprox(lead_abs));
    for (const auto& r : roots) {
        Float a = sqrt(r.re * r.re + r.im * r.im);
        double av = a.convert_to<double>();
        if (av + r.radius <= 1.0) continue;  // log+ = 0 certainly
        Float lo = a - Float(r.radius);
        if (lo < 1) lo = 1;
        Float hi = a + Float(r.radius);
        Float mid = log(a < 1 ? Float(1) : a);
        double err = (log(hi) - log(lo)).convert_to<double>() * (1 + 1e-12) + 1e-250;
        acc += RealApprox(mid, err);
    }
    return acc / RealApprox(static_cast<double>(n));
}

}  // namespace heightlab
