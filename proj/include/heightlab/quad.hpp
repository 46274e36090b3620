#pragma once

#include "heightlab/real.hpp"

namespace heightlab {

/// Element a + b sqrt(D) of Q(sqrt(D)), D a squarefree integer != 0.
/// D == 1 is the sentinel for plain rationals (b folded into a).
class QuadElt {
  public:
    QuadElt() : a_(0), b_(0), d_(1) {}
    QuadElt(Rat a) : a_(std::move(a)), b_(0), d_(1) {}
    QuadElt(Int a) : a_(std::move(a)), b_(0), d_(1) {}
    QuadElt(long a) : a_(a), b_(0), d_(1) {}
    QuadElt(Rat a, Rat b, Int d);

    const Rat& a() const { return a_; }
    const Rat& b() const { return b_; }
    const Int& d() const { return d_; }
    bool is_rational() const { return b_ == 0; }
    /// Requires is_rational().
    const Rat& rational() const;

    bool operator==(const QuadElt& o) const;
    bool operator!=(const QuadElt& o) const { return !(*this == o); }
    bool is_zero() const { return a_ == 0 && b_ == 0; }

    QuadElt operator-() const { return QuadElt(-a_, -b_, d_); }
    QuadElt operator+(const QuadElt& o) const;
    QuadElt operator-(const QuadElt& o) const;
    QuadElt operator*(const QuadElt& o) const;
    QuadElt operator/(const QuadElt& o) const;

    QuadElt conj() const { return QuadElt(a_, -b_, d_); }
    Rat norm() const { return a_ * a_ - Rat(d_) * b_ * b_; }
    Rat trace() const { return 2 * a_; }

    /// Minimal polynomial over Q: x - a (rational) or x^2 - 2a x + norm.
    std::vector<Rat> min_poly() const;

    /// Real embedding with +sqrt(D); requires D > 0.
    RealApprox embed() const;

    std::string str() const;

  private:
    static Int common_d(const QuadElt& x, const QuadElt& y);
    Rat a_, b_;
    Int d_;
};

/// Squarefree part decomposition: n = s * t^2 with s squarefree (sign kept on s).
/// Requires a successful factorization of n (trial division + Pollard rho).
std::pair<Int, Int> squarefree_part(const Int& n);

/// Factor |n| into primes (ascending, with multiplicity). Throws precision_error
/// if a cofactor resists factoring within the effort bound.
std::vector<std::pair<Int, int>> factorize(const Int& n);

/// Deterministic Miller-Rabin for 64-bit-ish operands, BPSW beyond.
bool is_probable_prime(const Int& n);

/// Exact integer square root test.
bool is_perfect_square(const Int& n, Int* root = nullptr);

}  // namespace heightlab
