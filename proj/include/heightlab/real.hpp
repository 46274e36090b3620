#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <stdexcept>
#include <string>

namespace heightlab {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;
using Float = boost::multiprecision::mpfr_float;

struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Working mantissa size for newly created Float values. Default 128 bits.
int working_precision_bits();
void set_working_precision_bits(int bits);

/// A real number known to lie in [value - err, value + err].
/// All arithmetic propagates the bound conservatively and accounts for
/// MPFR rounding of the midpoint at the current working precision.
class RealApprox {
  public:
    RealApprox() : value_(0), err_(0) {}
    RealApprox(double v) : value_(v), err_(0) {}
    RealApprox(const Int& v) : value_(v), err_(0) { bump(); }
    RealApprox(const Rat& v);
    RealApprox(Float v, double err) : value_(std::move(v)), err_(err) {}

    static RealApprox exact(Float v) { return RealApprox(std::move(v), 0.0); }

    const Float& value() const { return value_; }
    double error() const { return err_; }
    Float lower() const { return value_ - err_; }
    Float upper() const { return value_ + err_; }

    RealApprox operator-() const { return RealApprox(-value_, err_); }
    RealApprox operator+(const RealApprox& o) const;
    RealApprox operator-(const RealApprox& o) const;
    RealApprox operator*(const RealApprox& o) const;
    RealApprox operator/(const RealApprox& o) const;
    RealApprox& operator+=(const RealApprox& o) { return *this = *this + o; }
    RealApprox& operator-=(const RealApprox& o) { return *this = *this - o; }
    RealApprox& operator*=(const RealApprox& o) { return *this = *this * o; }
    RealApprox& operator/=(const RealApprox& o) { return *this = *this / o; }

    bool certainly_positive() const { return value_ - err_ > 0; }
    bool certainly_negative() const { return value_ + err_ < 0; }
    bool certainly_less(const RealApprox& o) const { return upper() < o.lower(); }
    /// |this - o| <= tol with certainty margin from both error bounds.
    bool agrees_with(const RealApprox& o, double tol) const;

    double to_double() const { return value_.convert_to<double>(); }
    std::string str(int digits = 20) const;

  private:
    void bump();  // absorb one rounding of the midpoint into err_
    friend RealApprox abs(const RealApprox& x);
    friend RealApprox log(const RealApprox& x);
    friend RealApprox exp(const RealApprox& x);
    friend RealApprox sqrt(const RealApprox& x);

    Float value_;
    double err_;
};

RealApprox abs(const RealApprox& x);
RealApprox log(const RealApprox& x);
RealApprox exp(const RealApprox& x);
RealApprox sqrt(const RealApprox& x);
RealApprox pow_int(const RealApprox& x, long n);

/// log max(|num|, den) of a rational in lowest terms.
RealApprox weil_height_rational(const Rat& x);

/// log of a positive rational, exact input.
RealApprox log_rat(const Rat& x);

/// log p for a prime (or any positive integer) p.
RealApprox log_int(const Int& p);

}  // namespace heightlab
