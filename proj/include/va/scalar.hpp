#ifndef VA_SCALAR_HPP
#define VA_SCALAR_HPP

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <string>

namespace va {

using Rational = mpq_class;

std::string rational_to_string(const Rational& q);
Rational rational_from_string(const std::string& s);

long floor_to_long(const Rational& q);
long ceil_to_long(const Rational& q);

// Exact Gaussian rational a + bi. All arithmetic is in lowest terms with
// positive denominators (mpq_class canonicalizes).
class Scalar {
public:
    Scalar() : re_(0), im_(0) {}
    Scalar(long n) : re_(n), im_(0) {}
    Scalar(Rational re) : re_(std::move(re)), im_(0) {}
    Scalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}
    static Scalar i() { return Scalar(Rational(0), Rational(1)); }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_one() const { return re_ == 1 && im_ == 0; }
    bool is_real() const { return im_ == 0; }

    Scalar operator-() const { return Scalar(-re_, -im_); }
    Scalar conj() const { return Scalar(re_, -im_); }
    Rational norm() const { return re_ * re_ + im_ * im_; }

    Scalar& operator+=(const Scalar& o) { re_ += o.re_; im_ += o.im_; return *this; }
    Scalar& operator-=(const Scalar& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
    Scalar& operator*=(const Scalar& o) {
        Rational r = re_ * o.re_ - im_ * o.im_;
        im_ = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        return *this;
    }
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    // Total order for canonical sorting only (not a field order).
    friend bool operator<(const Scalar& a, const Scalar& b) {
        int c = cmp(a.re_, b.re_);
        if (c != 0) return c < 0;
        return cmp(a.im_, b.im_) < 0;
    }

    Scalar inv() const;
    Scalar pow(long n) const;

    std::string str() const;

private:
    Rational re_, im_;
};

// Exponent of a formal variable: complex rational. Ordering and windows use
// the real part first; equality needs both parts.
class Exponent {
public:
    Exponent() : re_(0), im_(0) {}
    Exponent(long n) : re_(n), im_(0) {}
    Exponent(Rational re) : re_(std::move(re)), im_(0) {}
    Exponent(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_integer() const { return im_ == 0 && re_.get_den() == 1; }
    // Integer value; only valid when is_integer().
    long as_long() const { return re_.get_num().get_si(); }

    Scalar as_scalar() const { return Scalar(re_, im_); }

    Exponent operator-() const { return Exponent(-re_, -im_); }
    Exponent& operator+=(const Exponent& o) { re_ += o.re_; im_ += o.im_; return *this; }
    Exponent& operator-=(const Exponent& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
    friend Exponent operator+(Exponent a, const Exponent& b) { return a += b; }
    friend Exponent operator-(Exponent a, const Exponent& b) { return a -= b; }
    friend bool operator==(const Exponent& a, const Exponent& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const Exponent& a, const Exponent& b) { return !(a == b); }
    friend bool operator<(const Exponent& a, const Exponent& b) {
        int c = cmp(a.re_, b.re_);
        if (c != 0) return c < 0;
        return cmp(a.im_, b.im_) < 0;
    }

    std::string str() const;

private:
    Rational re_, im_;
};

// Generalized binomial coefficient C(lambda, n) for complex rational lambda
// and n >= 0, via the falling-factorial recurrence. C(lambda, n) = 0 for n < 0.
Scalar binomial(const Exponent& lambda, long n);

// C(n, k) for integer n (possibly negative), k >= 0.
Scalar binomial(long n, long k);

// (-1)^n as a Scalar.
inline Scalar sign_pow(long n) { return (n % 2 == 0) ? Scalar(1) : Scalar(-1); }

} // namespace va

#endif
