#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "intlab/rat.hpp"

namespace intlab::jet {

// A jet coordinate: x, t, y^(k) or u_k. Totally ordered as
// x < t < y < y1 < y2 < ... < u0 < u1 < ...
struct JetCoord {
    enum class Kind : std::uint8_t { x = 0, t = 1, y = 2, u = 3 };

    Kind kind = Kind::x;
    std::uint32_t index = 0;  // derivative order; unused for x and t

    static JetCoord X() { return {Kind::x, 0}; }
    static JetCoord T() { return {Kind::t, 0}; }
    static JetCoord Y(std::uint32_t k) { return {Kind::y, k}; }
    static JetCoord U(std::uint32_t k) { return {Kind::u, k}; }

    auto operator<=>(const JetCoord&) const = default;

    std::string name() const;
    // Accepts "x", "t", "y", "y3", "u0", "u12", ...
    static std::optional<JetCoord> parse_name(const std::string& s);
};

// Sparse exponent vector, sorted by coordinate, all exponents >= 1.
struct Monomial {
    std::vector<std::pair<JetCoord, std::uint32_t>> factors;

    std::uint64_t total_degree() const;
    std::uint32_t exponent(JetCoord c) const;
    bool operator==(const Monomial&) const = default;
    // Graded-lexicographic order; gives polynomials a canonical term order.
    bool operator<(const Monomial& o) const;
};

// Exact multivariate polynomial over jet coordinates with rational
// coefficients. Canonical form: no zero coefficients stored.
class JetPolynomial {
public:
    JetPolynomial() = default;

    static JetPolynomial constant(const Rat& c);
    static JetPolynomial coordinate(JetCoord c);
    static JetPolynomial parse(const std::string& text);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rat constant_value() const;  // requires is_constant()

    const std::map<Monomial, Rat>& terms() const { return terms_; }
    std::set<JetCoord> coordinates() const;
    // Largest k such that u_k appears; -1 when no u coordinate appears.
    int max_u_order() const;

    JetPolynomial operator-() const;
    JetPolynomial& operator+=(const JetPolynomial& o);
    JetPolynomial& operator-=(const JetPolynomial& o);
    friend JetPolynomial operator+(JetPolynomial a, const JetPolynomial& b) { return a += b; }
    friend JetPolynomial operator-(JetPolynomial a, const JetPolynomial& b) { return a -= b; }
    friend JetPolynomial operator*(const JetPolynomial& a, const JetPolynomial& b);
    JetPolynomial& operator*=(const JetPolynomial& o) { return *this = *this * o; }
    friend JetPolynomial operator*(const Rat& c, const JetPolynomial& p);
    friend bool operator==(const JetPolynomial&, const JetPolynomial&) = default;

    JetPolynomial pow(std::uint32_t e) const;

    // Partial derivative with respect to one jet coordinate.
    JetPolynomial derivative(JetCoord c) const;

    // Total x-derivative on the u-jet: u_k -> u_{k+1} acting as a derivation.
    // The polynomial must involve only u coordinates.
    JetPolynomial total_derivative_x() const;

    // Exact division; nullopt when the divisor does not divide exactly.
    static std::optional<JetPolynomial> try_divide(const JetPolynomial& num,
                                                   const JetPolynomial& den);

    double eval(const std::function<double(JetCoord)>& point) const;

    std::string str() const;

private:
    void add_term(const Monomial& m, const Rat& c);
    std::map<Monomial, Rat> terms_;
};

// Vector field on jet space: coordinate -> component polynomial.
using JetVectorField = std::map<JetCoord, JetPolynomial>;

// Directional derivative sum_i f_i dF/dy_i. Every coordinate of F must be a
// key of L.
JetPolynomial apply_field(const JetVectorField& L, const JetPolynomial& F);

// Component-wise [f,g]_i = f(g_i) - g(f_i); fields must share their domain.
JetVectorField lie_bracket(const JetVectorField& f, const JetVectorField& g);

bool is_zero_field(const JetVectorField& f);

// [K, DxK, Dx^2 K, ..., Dx^depth K].
std::vector<JetPolynomial> prolong(const JetPolynomial& K, int depth);

// The evolutionary flow of u_t = K truncated to the u_0..u_depth jet:
// u_j -> Dx^j K.
JetVectorField prolonged_field(const JetPolynomial& K, int depth);

std::string field_str(const JetVectorField& f);

}  // namespace intlab::jet
