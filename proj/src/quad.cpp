#include "heightlab/quad.hpp"

#include <gmp.h>

#include <map>
#include <sstream>

namespace heightlab {

QuadElt::QuadElt(Rat a, Rat b, Int d) : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)) {
    if (d_ == 0) throw input_error("QuadElt: D must be nonzero");
    if (d_ == 1) {
        a_ += b_;
        b_ = 0;
    } else if (b_ == 0) {
        d_ = 1;
    }
}

const Rat& QuadElt::rational() const {
    if (!is_rational()) throw input_error("QuadElt: not a rational value");
    return a_;
}

bool QuadElt::operator==(const QuadElt& o) const {
    if (a_ != o.a_ || b_ != o.b_) return false;
    if (b_ == 0) return true;
    return d_ == o.d_;
}

Int QuadElt::common_d(const QuadElt& x, const QuadElt& y) {
    if (x.b_ == 0) return y.b_ == 0 ? Int(1) : y.d_;
    if (y.b_ == 0) return x.d_;
    if (x.d_ != y.d_) throw input_error("QuadElt: mixing distinct quadratic fields");
    return x.d_;
}

QuadElt QuadElt::operator+(const QuadElt& o) const {
    Int d = common_d(*this, o);
    return QuadElt(a_ + o.a_, b_ + o.b_, d);
}

QuadElt QuadElt::operator-(const QuadElt& o) const {
    Int d = common_d(*this, o);
    return QuadElt(a_ - o.a_, b_ - o.b_, d);
}

QuadElt QuadElt::operator*(const QuadElt& o) const {
    Int d = common_d(*this, o);
    return QuadElt(a_ * o.a_ + Rat(d) * b_ * o.b_, a_ * o.b_ + b_ * o.a_, d);
}

QuadElt QuadElt::operator/(const QuadElt& o) const {
    if (o.is_zero()) throw input_error("QuadElt: division by zero");
    Int d = common_d(*this, o);
    Rat n = o.norm();
    QuadElt num = *this * o.conj();
    return QuadElt(num.a_ / n, num.b_ / n, d);
}

std::vector<Rat> QuadElt::min_poly() const {
    if (is_rational()) return {-a_, Rat(1)};
    return {norm(), -trace(), Rat(1)};
}

RealApprox QuadElt::embed() const {
    if (b_ == 0) return RealApprox(a_);
    if (d_ < 0) throw domain_error("QuadElt::embed: D must be positive for a real embedding");
    return RealApprox(a_) + RealApprox(b_) * sqrt(RealApprox(d_));
}

std::string QuadElt::str() const {
    std::ostringstream os;
    if (b_ == 0) {
        os << a_;
    } else {
        os << a_ << (b_ > 0 ? " + " : " - ") << boost::multiprecision::abs(b_) << "*sqrt("
           << d_ << ")";
    }
    return os.str();
}

// ------------------------------------------------------------ integer work

bool is_perfect_square(const Int& n, Int* root) {
    if (n < 0) return false;
    Int r = sqrt(n);
    if (r * r != n) return false;
    if (root) *root = r;
    return true;
}

bool is_probable_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.backend().data(), 32) != 0;
}

namespace {

Int pollard_rho(const Int& n) {
    // Brent's cycle variant; n odd composite, not a prime power of interest.
    for (Int c = 1; c < 64; ++c) {
        Int x = 2, y = 2, d = 1;
        Int ys = y;
        long power = 1, lam = 1;
        while (d == 1) {
            if (power == lam) {
                x = y;
                power *= 2;
                lam = 0;
            }
            y = (y * y + c) % n;
            ++lam;
            Int diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            d = boost::multiprecision::gcd(diff, n);
        }
        if (d != 1 && d != n) return d;
    }
    throw precision_error("factorize: Pollard rho gave up");
}

void factor_rec(Int n, std::map<Int, int>& out) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        ++out[n];
        return;
    }
    Int d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

std::vector<std::pair<Int, int>> factorize(const Int& n0) {
    Int n = boost::multiprecision::abs(n0);
    if (n == 0) throw input_error("factorize: n must be nonzero");
    std::map<Int, int> acc;
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L, 43L, 47L}) {
        while (n % p == 0) {
            ++acc[Int(p)];
            n /= p;
        }
    }
    Int q = 53;
    while (q * q <= n && q < 100000) {
        while (n % q == 0) {
            ++acc[q];
            n /= q;
        }
        q += 2;
    }
    if (n > 1) factor_rec(n, acc);
    return {acc.begin(), acc.end()};
}

std::pair<Int, Int> squarefree_part(const Int& n) {
    if (n == 0) throw input_error("squarefree_part: n must be nonzero");
    Int s = n < 0 ? -1 : 1;
    Int t = 1;
    for (const auto& [p, e] : factorize(n)) {
        if (e % 2) s *= p;
        for (int i = 0; i < e / 2; ++i) t *= p;
    }
    return {s, t};
}

}  // namespace heightlab
