#include "heightlab/real.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace heightlab {

namespace {
int g_precision_bits = 128;

int digits10_for_bits(int bits) { return static_cast<int>(bits * 0.30103) + 4; }

// One-op relative rounding slack at the working precision, taken with margin.
double rounding_eps() { return std::ldexp(1.0, -(g_precision_bits - 3)); }
}  // namespace

int working_precision_bits() { return g_precision_bits; }

void set_working_precision_bits(int bits) {
    if (bits < 64) throw input_error("working precision must be at least 64 bits");
    g_precision_bits = bits;
    Float::default_precision(digits10_for_bits(bits));
}

namespace {
struct PrecisionInit {
    PrecisionInit() { Float::default_precision(digits10_for_bits(g_precision_bits)); }
} g_precision_init;
}  // namespace

void RealApprox::bump() {
    double mag = std::fabs(value_.convert_to<double>());
    if (!std::isfinite(mag)) mag = 1e300;
    err_ = err_ * (1 + 4e-16) + mag * rounding_eps() + 1e-290;
}

RealApprox::RealApprox(const Rat& v) : err_(0) {
    value_ = Float(numerator(v)) / Float(denominator(v));
    bump();
}

RealApprox RealApprox::operator+(const RealApprox& o) const {
    RealApprox r(value_ + o.value_, err_ + o.err_);
    r.bump();
    return r;
}

RealApprox RealApprox::operator-(const RealApprox& o) const {
    RealApprox r(value_ - o.value_, err_ + o.err_);
    r.bump();
    return r;
}

RealApprox RealApprox::operator*(const RealApprox& o) const {
    double a = std::fabs(value_.convert_to<double>());
    double b = std::fabs(o.value_.convert_to<double>());
    RealApprox r(value_ * o.value_, a * o.err_ + b * err_ + err_ * o.err_);
    r.bump();
    return r;
}

RealApprox RealApprox::operator/(const RealApprox& o) const {
    double b = std::fabs(o.value_.convert_to<double>());
    if (!(b > o.err_)) throw precision_error("division by an interval containing zero");
    Float q = value_ / o.value_;
    double qa = std::fabs(q.convert_to<double>());
    RealApprox r(std::move(q), (err_ + qa * o.err_) / (b - o.err_));
    r.bump();
    return r;
}

bool RealApprox::agrees_with(const RealApprox& o, double tol) const {
    Float d = value_ - o.value_;
    return boost::multiprecision::abs(d).convert_to<double>() <= tol + err_ + o.err_;
}

std::string RealApprox::str(int digits) const {
    std::ostringstream os;
    os.precision(digits);
    os << value_;
    return os.str();
}

RealApprox abs(const RealApprox& x) {
    RealApprox r(boost::multiprecision::abs(x.value_), x.err_);
    return r;
}

RealApprox log(const RealApprox& x) {
    Float lo = x.lower();
    if (!(lo > 0)) throw precision_error("log of an interval reaching zero");
    Float mid = log(x.value_);
    Float hw = log(x.upper()) - log(lo);
    RealApprox r(std::move(mid), std::fabs(hw.convert_to<double>()) * (1 + 1e-14));
    r.bump();
    return r;
}

RealApprox exp(const RealApprox& x) {
    Float mid = exp(x.value_);
    Float hw = exp(x.upper()) - exp(x.lower());
    RealApprox r(std::move(mid), std::fabs(hw.convert_to<double>()) * (1 + 1e-14));
    r.bump();
    return r;
}

RealApprox sqrt(const RealApprox& x) {
    Float lo = x.lower();
    if (lo < 0) {
        if (x.value_ + x.err_ < 0) throw domain_error("sqrt of a negative interval");
        lo = 0;
    }
    Float mid = sqrt(boost::multiprecision::max(x.value_, Float(0)));
    Float hw = sqrt(x.upper()) - sqrt(lo);
    RealApprox r(std::move(mid), std::fabs(hw.convert_to<double>()) * (1 + 1e-14));
    r.bump();
    return r;
}

RealApprox pow_int(const RealApprox& x, long n) {
    if (n == 0) return RealApprox(1.0);
    bool inv = n < 0;
    unsigned long e = inv ? -static_cast<unsigned long>(n) : n;
    RealApprox acc(1.0), base = x;
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    if (inv) return RealApprox(1.0) / acc;
    return acc;
}

RealApprox weil_height_rational(const Rat& x) {
    Int n = boost::multiprecision::abs(numerator(x));
    Int d = denominator(x);
    Int m = n > d ? n : d;
    if (m == 0) m = 1;
    return log(RealApprox(m));
}

RealApprox log_rat(const Rat& x) {
    if (x <= 0) throw domain_error("log_rat requires a positive rational");
    return log(RealApprox(x));
}

RealApprox log_int(const Int& p) {
    if (p <= 0) throw domain_error("log_int requires a positive integer");
    return log(RealApprox(p));
}

}  // namespace heightlab
