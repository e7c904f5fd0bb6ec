#include "va/scalar.hpp"

#include "va/error.hpp"

#include <map>
#include <mutex>
#include <vector>

namespace va {

std::string rational_to_string(const Rational& q) {
    return q.get_str();
}

Rational rational_from_string(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0)
        throw SchemaError("bad rational literal '" + s + "'");
    q.canonicalize();
    return q;
}

long floor_to_long(const Rational& q) {
    mpz_class z;
    mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return z.get_si();
}

long ceil_to_long(const Rational& q) {
    mpz_class z;
    mpz_cdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return z.get_si();
}

Scalar& Scalar::operator/=(const Scalar& o) {
    if (o.is_zero()) throw Error("division by zero scalar");
    Rational n = o.norm();
    Rational r = (re_ * o.re_ + im_ * o.im_) / n;
    im_ = (im_ * o.re_ - re_ * o.im_) / n;
    re_ = std::move(r);
    return *this;
}

Scalar Scalar::inv() const {
    return Scalar(1) / *this;
}

Scalar Scalar::pow(long n) const {
    if (n == 0) return Scalar(1);
    Scalar base = n < 0 ? inv() : *this;
    unsigned long e = n < 0 ? -static_cast<unsigned long>(n) : n;
    Scalar acc(1);
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

std::string Scalar::str() const {
    if (im_ == 0) return rational_to_string(re_);
    std::string im_part;
    if (im_ == 1) im_part = "i";
    else if (im_ == -1) im_part = "-i";
    else im_part = rational_to_string(im_) + "i";
    if (re_ == 0) return im_part;
    if (cmp(im_, 0) > 0) return rational_to_string(re_) + "+" + im_part;
    return rational_to_string(re_) + im_part;
}

std::string Exponent::str() const {
    return Scalar(re_, im_).str();
}

Scalar binomial(const Exponent& lambda, long n) {
    if (n < 0) return Scalar(0);
    Scalar acc(1);
    Scalar lam = lambda.as_scalar();
    for (long k = 0; k < n; ++k) {
        acc *= (lam - Scalar(k));
        acc /= Scalar(k + 1);
    }
    return acc;
}

Scalar binomial(long n, long k) {
    return binomial(Exponent(n), k);
}

} // namespace va
