#include "heightlab/poly.hpp"

#include <sstream>

namespace heightlab {

// ---------------------------------------------------------------- IntPoly

void IntPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

IntPoly IntPoly::constant(Int v) {
    IntPoly f;
    if (v != 0) f.c_.push_back(std::move(v));
    return f;
}

IntPoly IntPoly::monomial(Int v, int deg) {
    IntPoly f;
    if (v != 0) {
        f.c_.assign(deg + 1, Int(0));
        f.c_[deg] = std::move(v);
    }
    return f;
}

const Int& IntPoly::leading() const {
    if (c_.empty()) throw input_error("leading coefficient of zero polynomial");
    return c_.back();
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
    std::vector<Int> r(std::max(c_.size(), o.c_.size()), Int(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return IntPoly(std::move(r));
}

IntPoly IntPoly::operator-(const IntPoly& o) const {
    std::vector<Int> r(std::max(c_.size(), o.c_.size()), Int(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
    return IntPoly(std::move(r));
}

IntPoly IntPoly::operator*(const IntPoly& o) const {
    if (c_.empty() || o.c_.empty()) return IntPoly();
    std::vector<Int> r(c_.size() + o.c_.size() - 1, Int(0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return IntPoly(std::move(r));
}

IntPoly IntPoly::operator*(const Int& k) const {
    if (k == 0) return IntPoly();
    std::vector<Int> r = c_;
    for (auto& v : r) v *= k;
    return IntPoly(std::move(r));
}

IntPoly IntPoly::derivative() const {
    if (c_.size() <= 1) return IntPoly();
    std::vector<Int> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * Int(i);
    return IntPoly(std::move(r));
}

Int IntPoly::content() const {
    Int g = 0;
    for (const auto& v : c_) g = boost::multiprecision::gcd(g, v);
    return boost::multiprecision::abs(g);
}

IntPoly IntPoly::primitive_part() const {
    Int g = content();
    if (g == 0 || g == 1) return *this;
    std::vector<Int> r = c_;
    for (auto& v : r) v /= g;
    return IntPoly(std::move(r));
}

Int IntPoly::eval(const Int& x) const {
    Int acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Rat IntPoly::eval(const Rat& x) const {
    Rat acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

RealApprox IntPoly::eval(const RealApprox& x) const {
    RealApprox acc(0.0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + RealApprox(*it);
    return acc;
}

IntPoly IntPoly::scale_arg(const Rat& k) const {
    // x -> k x, then clear denominators and content.
    std::vector<Rat> r(c_.size());
    Rat kp = 1;
    for (size_t i = 0; i < c_.size(); ++i) {
        r[i] = Rat(c_[i]) * kp;
        kp *= k;
    }
    return RatPoly(std::move(r)).to_int_primitive();
}

IntPoly IntPoly::unscale_arg_clear(const Int& k) const {
    if (k == 0) throw input_error("unscale_arg_clear: zero scale");
    // x -> x / k cleared by k^deg: coefficient i gets k^(deg - i).
    int d = degree();
    std::vector<Int> r(c_.size());
    Int kp = 1;
    for (int i = d; i >= 0; --i) {
        r[i] = c_[i] * kp;
        kp *= k;
    }
    return IntPoly(std::move(r)).primitive_part();
}

RealApprox IntPoly::log_coeff_sum() const {
    Int s = 0;
    for (const auto& v : c_) s += boost::multiprecision::abs(v);
    if (s == 0) s = 1;
    return log(RealApprox(s));
}

std::string IntPoly::str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        if (c_[i] == 0) continue;
        if (!first) os << (c_[i] > 0 ? " + " : " - ");
        else if (c_[i] < 0) os << "-";
        Int a = boost::multiprecision::abs(c_[i]);
        first = false;
        if (a != 1 || i == 0) os << a;
        if (i > 0) os << "x";
        if (i > 1) os << "^" << i;
    }
    return os.str();
}

// ---------------------------------------------------------------- PolyModP

namespace {
unsigned long long mulmod(unsigned long long a, unsigned long long b, unsigned long long p) {
    return static_cast<unsigned long long>((static_cast<unsigned __int128>(a) * b) % p);
}

unsigned long long powmod(unsigned long long a, unsigned long long e, unsigned long long p) {
    unsigned long long r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

unsigned long long invmod(unsigned long long a, unsigned long long p) {
    return powmod(a % p, p - 2, p);  // p prime
}
}  // namespace

PolyModP::PolyModP(const IntPoly& f, const Int& p) {
    if (p < 2 || p >= (Int(1) << 62)) throw input_error("PolyModP: prime out of range");
    p_ = p.convert_to<unsigned long long>();
    c_.reserve(f.coeffs().size());
    for (const auto& v : f.coeffs()) {
        Int r = v % p;
        if (r < 0) r += p;
        c_.push_back(r.convert_to<unsigned long long>());
    }
    trim();
}

PolyModP::PolyModP(std::vector<unsigned long long> coeffs, unsigned long long p)
    : c_(std::move(coeffs)), p_(p) {
    for (auto& v : c_) v %= p_;
    trim();
}

void PolyModP::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

void PolyModP::make_monic() {
    if (c_.empty()) return;
    unsigned long long inv = invmod(c_.back(), p_);
    for (auto& v : c_) v = mulmod(v, inv, p_);
}

PolyModP PolyModP::derivative() const {
    if (c_.size() <= 1) return PolyModP({}, p_);
    std::vector<unsigned long long> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = mulmod(c_[i], i % p_, p_);
    return PolyModP(std::move(r), p_);
}

PolyModP PolyModP::rem(PolyModP a, const PolyModP& b) {
    if (b.is_zero()) throw input_error("PolyModP::rem by zero");
    unsigned long long p = a.p_;
    unsigned long long lead_inv = invmod(b.c_.back(), p);
    while (!a.is_zero() && a.degree() >= b.degree()) {
        unsigned long long q = mulmod(a.c_.back(), lead_inv, p);
        int shift = a.degree() - b.degree();
        for (int i = 0; i <= b.degree(); ++i) {
            unsigned long long sub = mulmod(q, b.c_[i], p);
            unsigned long long& t = a.c_[i + shift];
            t = (t + p - sub) % p;
        }
        a.trim();
    }
    return a;
}

PolyModP PolyModP::gcd(PolyModP a, PolyModP b) {
    while (!b.is_zero()) {
        PolyModP r = rem(std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    a.make_monic();
    return a;
}

bool PolyModP::is_squarefree_same_degree(const IntPoly& f) const {
    if (f.is_zero()) return false;
    if (degree() != f.degree()) return false;
    PolyModP d = derivative();
    if (d.is_zero()) return false;
    PolyModP g = gcd(*this, d);
    return g.degree() == 0;
}

// ---------------------------------------------------------------- RatPoly

void RatPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

RatPoly::RatPoly(const IntPoly& f) {
    c_.reserve(f.coeffs().size());
    for (const auto& v : f.coeffs()) c_.emplace_back(v);
    trim();
}

RatPoly RatPoly::operator+(const RatPoly& o) const {
    std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return RatPoly(std::move(r));
}

RatPoly RatPoly::operator-(const RatPoly& o) const {
    std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
    return RatPoly(std::move(r));
}

RatPoly RatPoly::operator*(const RatPoly& o) const {
    if (c_.empty() || o.c_.empty()) return RatPoly();
    std::vector<Rat> r(c_.size() + o.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return RatPoly(std::move(r));
}

RatPoly RatPoly::operator*(const Rat& k) const {
    std::vector<Rat> r = c_;
    for (auto& v : r) v *= k;
    return RatPoly(std::move(r));
}

Rat RatPoly::eval(const Rat& x) const {
    Rat acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

RatPoly RatPoly::derivative() const {
    if (c_.size() <= 1) return RatPoly();
    std::vector<Rat> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * Rat(i);
    return RatPoly(std::move(r));
}

RatPoly RatPoly::monic() const {
    if (c_.empty()) return *this;
    Rat inv = Rat(1) / c_.back();
    return *this * inv;
}

RatPoly RatPoly::rem(const RatPoly& a0, const RatPoly& b) {
    if (b.is_zero()) throw input_error("RatPoly::rem by zero");
    RatPoly a = a0;
    while (!a.is_zero() && a.degree() >= b.degree()) {
        Rat q = a.c_.back() / b.c_.back();
        int shift = a.degree() - b.degree();
        for (int i = 0; i <= b.degree(); ++i) a.c_[i + shift] -= q * b.c_[i];
        a.trim();
    }
    return a;
}

RatPoly RatPoly::gcd(RatPoly a, RatPoly b) {
    while (!b.is_zero()) {
        RatPoly r = rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

IntPoly RatPoly::to_int_primitive() const {
    Int lcm = 1;
    for (const auto& v : c_) lcm = boost::multiprecision::lcm(lcm, denominator(v));
    std::vector<Int> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) {
        Rat scaled = c_[i] * lcm;
        r[i] = numerator(scaled);
    }
    return IntPoly(std::move(r)).primitive_part();
}

RatPoly rem_mod_small(const IntPoly& f, const RatPoly& m_monic) {
    int dm = m_monic.degree();
    if (dm <= 0) return RatPoly();
    // Horner from the top: acc = acc * x + c_i, reducing every step.
    std::vector<Rat> acc;
    for (int i = f.degree(); i >= 0; --i) {
        // multiply by x
        acc.insert(acc.begin(), Rat(0));
        if (static_cast<int>(acc.size()) > dm) {
            Rat top = acc.back();
            acc.pop_back();
            for (int j = 0; j < dm; ++j) acc[j] -= top * m_monic[j];
        }
        if (acc.empty()) acc.push_back(Rat(0));
        acc[0] += f[i];
    }
    return RatPoly(std::move(acc));
}

std::vector<SquarefreeFactor> squarefree_decompose(const IntPoly& f) {
    std::vector<SquarefreeFactor> out;
    if (f.is_zero() || f.degree() == 0) return out;
    RatPoly a(f);
    RatPoly g = RatPoly::gcd(a, a.derivative());
    if (g.degree() == 0) {
        out.push_back({f.primitive_part(), 1});
        return out;
    }
    // Yun: w = f / g carries each distinct factor once.
    auto divide_exact = [](const RatPoly& num, const RatPoly& den) {
        // exact division via synthetic long division
        std::vector<Rat> q(num.degree() - den.degree() + 1, Rat(0));
        RatPoly r = num;
        while (!r.is_zero() && r.degree() >= den.degree()) {
            Rat c = r[r.degree()] / den[den.degree()];
            int shift = r.degree() - den.degree();
            q[shift] = c;
            std::vector<Rat> sub(shift + den.degree() + 1, Rat(0));
            for (int i = 0; i <= den.degree(); ++i) sub[i + shift] = c * den[i];
            r = r - RatPoly(std::move(sub));
        }
        return RatPoly(std::move(q));
    };
    RatPoly w = divide_exact(a, g);
    RatPoly y = divide_exact(a.derivative(), g);
    RatPoly z = y - w.derivative();
    int i = 1;
    while (!z.is_zero()) {
        RatPoly gi = RatPoly::gcd(w, z);
        if (gi.degree() > 0) out.push_back({gi.to_int_primitive(), i});
        w = divide_exact(w, gi);
        y = divide_exact(z, gi);
        z = y - w.derivative();
        ++i;
    }
    if (w.degree() > 0) out.push_back({w.to_int_primitive(), i});
    return out;
}

}  // namespace heightlab
