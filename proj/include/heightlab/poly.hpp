#pragma once

#include "heightlab/real.hpp"

#include <vector>

namespace heightlab {

/// Dense univariate polynomial over Z, coefficients lowest degree first.
/// The zero polynomial is represented by an empty coefficient vector.
class IntPoly {
  public:
    IntPoly() = default;
    explicit IntPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }
    static IntPoly constant(Int v);
    static IntPoly monomial(Int v, int deg);

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const Int& operator[](int i) const { return c_[i]; }
    const std::vector<Int>& coeffs() const { return c_; }
    const Int& leading() const;

    IntPoly operator+(const IntPoly& o) const;
    IntPoly operator-(const IntPoly& o) const;
    IntPoly operator*(const IntPoly& o) const;
    IntPoly operator*(const Int& k) const;
    bool operator==(const IntPoly& o) const { return c_ == o.c_; }

    IntPoly derivative() const;
    /// gcd of |coefficients|; 0 for the zero polynomial.
    Int content() const;
    IntPoly primitive_part() const;

    Int eval(const Int& x) const;
    Rat eval(const Rat& x) const;
    RealApprox eval(const RealApprox& x) const;

    /// Substitute x -> k * x.
    IntPoly scale_arg(const Rat& k) const;
    /// Substitute x -> x / k and clear denominators (k integer, nonzero).
    IntPoly unscale_arg_clear(const Int& k) const;

    /// log(sum |coefficients|), a cheap naive height of the polynomial.
    RealApprox log_coeff_sum() const;

    std::string str() const;

  private:
    void trim();
    std::vector<Int> c_;
};

/// Polynomial over F_p, p an odd prime or 2, p < 2^62.
class PolyModP {
  public:
    PolyModP(const IntPoly& f, const Int& p);
    PolyModP(std::vector<unsigned long long> coeffs, unsigned long long p);

    unsigned long long p() const { return p_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<unsigned long long>& coeffs() const { return c_; }

    PolyModP derivative() const;
    static PolyModP gcd(PolyModP a, PolyModP b);
    /// deg f preserved mod p and gcd(f, f') = 1 in F_p[x].
    bool is_squarefree_same_degree(const IntPoly& f) const;

  private:
    void trim();
    void make_monic();
    static PolyModP rem(PolyModP a, const PolyModP& b);

    std::vector<unsigned long long> c_;
    unsigned long long p_ = 2;
};

/// Polynomial over Q: thin helpers used for gcd certificates and curve work.
class RatPoly {
  public:
    RatPoly() = default;
    explicit RatPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
    RatPoly(const IntPoly& f);

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const Rat& operator[](int i) const { return c_[i]; }

    RatPoly operator+(const RatPoly& o) const;
    RatPoly operator-(const RatPoly& o) const;
    RatPoly operator*(const RatPoly& o) const;
    RatPoly operator*(const Rat& k) const;

    Rat eval(const Rat& x) const;
    RatPoly derivative() const;
    RatPoly monic() const;
    static RatPoly rem(const RatPoly& a, const RatPoly& b);
    static RatPoly gcd(RatPoly a, RatPoly b);
    /// Clear denominators and content.
    IntPoly to_int_primitive() const;

  private:
    void trim();
    std::vector<Rat> c_;
};

/// Reduce f modulo a small monic rational polynomial m by Horner steps;
/// avoids coefficient blowup when deg f is large and deg m is tiny.
RatPoly rem_mod_small(const IntPoly& f, const RatPoly& m_monic);

/// Yun squarefree decomposition: f = lead * prod_i out[i].poly^(out[i].mult),
/// the polys primitive, pairwise coprime, squarefree.
struct SquarefreeFactor {
    IntPoly poly;
    int mult;
};
std::vector<SquarefreeFactor> squarefree_decompose(const IntPoly& f);

}  // namespace heightlab
