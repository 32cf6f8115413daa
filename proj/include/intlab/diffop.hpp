#pragma once

#include <string>
#include <vector>

#include "intlab/rat.hpp"

namespace intlab::diffop {

// Dense univariate polynomial in x over the exact rationals.
class PolyQ {
public:
    PolyQ() = default;
    explicit PolyQ(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
    static PolyQ constant(const Rat& r);
    static PolyQ x();
    static PolyQ monomial(const Rat& coeff, int degree);

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    const Rat& coeff(int k) const;
    const std::vector<Rat>& coeffs() const { return c_; }
    Rat leading() const;

    PolyQ operator-() const;
    friend PolyQ operator+(const PolyQ& a, const PolyQ& b);
    friend PolyQ operator-(const PolyQ& a, const PolyQ& b);
    friend PolyQ operator*(const PolyQ& a, const PolyQ& b);
    friend PolyQ operator*(const Rat& s, const PolyQ& p);
    friend bool operator==(const PolyQ&, const PolyQ&) = default;

    PolyQ derivative() const;
    // Quotient and remainder; divisor must be nonzero.
    static std::pair<PolyQ, PolyQ> divmod(const PolyQ& a, const PolyQ& b);
    static PolyQ gcd(PolyQ a, PolyQ b);  // monic

    Rat eval(const Rat& x) const;
    double eval(double x) const;
    std::string str(const std::string& var = "x") const;

private:
    void trim();
    std::vector<Rat> c_;  // c_[k] multiplies x^k; no trailing zeros
};

// Reduced rational function num/den, denominator monic and nonzero.
class RationalFn {
public:
    RationalFn() : num_(), den_(PolyQ::constant(Rat(1))) {}
    RationalFn(PolyQ num, PolyQ den);
    static RationalFn from_poly(PolyQ p) { return RationalFn(std::move(p), PolyQ::constant(Rat(1))); }
    static RationalFn constant(const Rat& r) { return from_poly(PolyQ::constant(r)); }

    const PolyQ& num() const { return num_; }
    const PolyQ& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }
    // Requires a constant denominator = 1 after reduction.
    PolyQ as_polynomial() const;

    RationalFn operator-() const;
    friend RationalFn operator+(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator-(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator*(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator/(const RationalFn& a, const RationalFn& b);
    friend bool operator==(const RationalFn&, const RationalFn&) = default;

    RationalFn derivative() const;
    double eval(double x) const;
    std::string str() const;

private:
    PolyQ num_;
    PolyQ den_;
};

// Linear ordinary differential operator sum_k c_k(x) d^k/dx^k with exact
// rational-function coefficients. The zero operator has no coefficients.
class LinearDiffOp {
public:
    LinearDiffOp() = default;
    explicit LinearDiffOp(std::vector<RationalFn> coeffs) : c_(std::move(coeffs)) { trim(); }

    static LinearDiffOp identity();                      // multiplication by 1
    static LinearDiffOp derivative(int order = 1);       // d^order
    static LinearDiffOp mul_by(const RationalFn& a);     // order-0 operator
    static LinearDiffOp mul_by(const PolyQ& a) { return mul_by(RationalFn::from_poly(a)); }

    bool is_zero() const { return c_.empty(); }
    int order() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    const RationalFn& coeff(int k) const;
    const std::vector<RationalFn>& coeffs() const { return c_; }

    friend LinearDiffOp operator+(const LinearDiffOp& a, const LinearDiffOp& b);
    friend LinearDiffOp operator-(const LinearDiffOp& a, const LinearDiffOp& b);
    friend bool operator==(const LinearDiffOp&, const LinearDiffOp&) = default;

    std::string str() const;

    // Parses "c_k(x)*dk + ..." syntax, e.g. "(x^2)*d2 + x*d1 + 1".
    static LinearDiffOp parse(const std::string& text);

private:
    void trim();
    std::vector<RationalFn> c_;
};

// Operator composition via the Leibniz expansion of d^j (m_k(x) d^k).
LinearDiffOp compose(const LinearDiffOp& L, const LinearDiffOp& M);

// compose(L,M) - compose(M,L).
LinearDiffOp commutator(const LinearDiffOp& L, const LinearDiffOp& M);

// For operators sum a_k x^k d^k, the substitution x = e^s turns x^k d^k into
// the falling factorial θ(θ-1)...(θ-k+1) of θ = d/ds. Returns the resulting
// constant-coefficient operator in θ.
LinearDiffOp euler_substitute(const LinearDiffOp& L);

// Apply to a polynomial: sum c_k p^(k).
RationalFn apply_op(const LinearDiffOp& L, const PolyQ& p);

}  // namespace intlab::diffop
