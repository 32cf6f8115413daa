#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace intlab {

// Exact rational number backed by GMP. Always canonical: denominator > 0,
// gcd(|num|, den) = 1. Every arithmetic result is re-canonicalized, so
// equality is structural.
class Rat {
public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
    Rat(long n, long d) : v_(n, d) { v_.canonicalize(); }
    explicit Rat(const mpq_class& v) : v_(v) { v_.canonicalize(); }
    explicit Rat(const std::string& text) : v_(text) { v_.canonicalize(); }

    static Rat from_mpz(const mpz_class& n) { return Rat(mpq_class(n)); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    int sign() const { return sgn(v_); }

    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }
    bool is_integer() const { return v_.get_den() == 1; }

    double to_double() const { return v_.get_d(); }
    std::string str() const { return v_.get_str(); }

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o);

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

    friend Rat abs(const Rat& a) { return Rat(mpq_class(abs(a.v_))); }

    // n choose k as an exact rational (integer-valued).
    static Rat binomial(unsigned long n, unsigned long k);

private:
    mpq_class v_;
};

}  // namespace intlab
