#include "intlab/diffop.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "intlab/errors.hpp"

namespace intlab::diffop {

namespace {
const Rat kZero(0);
}

PolyQ PolyQ::constant(const Rat& r) { return PolyQ(std::vector<Rat>{r}); }

PolyQ PolyQ::x() { return PolyQ(std::vector<Rat>{Rat(0), Rat(1)}); }

PolyQ PolyQ::monomial(const Rat& coeff, int degree) {
    std::vector<Rat> c(degree + 1, Rat(0));
    c[degree] = coeff;
    return PolyQ(std::move(c));
}

void PolyQ::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

const Rat& PolyQ::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return kZero;
    return c_[k];
}

Rat PolyQ::leading() const { return c_.empty() ? Rat(0) : c_.back(); }

PolyQ PolyQ::operator-() const {
    std::vector<Rat> out(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) out[i] = -c_[i];
    return PolyQ(std::move(out));
}

PolyQ operator+(const PolyQ& a, const PolyQ& b) {
    std::vector<Rat> out(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) out[i] += b.c_[i];
    return PolyQ(std::move(out));
}

PolyQ operator-(const PolyQ& a, const PolyQ& b) { return a + (-b); }

PolyQ operator*(const PolyQ& a, const PolyQ& b) {
    if (a.is_zero() || b.is_zero()) return PolyQ();
    std::vector<Rat> out(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return PolyQ(std::move(out));
}

PolyQ operator*(const Rat& s, const PolyQ& p) {
    std::vector<Rat> out(p.c_.size());
    for (size_t i = 0; i < p.c_.size(); ++i) out[i] = s * p.c_[i];
    return PolyQ(std::move(out));
}

PolyQ PolyQ::derivative() const {
    if (c_.size() <= 1) return PolyQ();
    std::vector<Rat> out(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) out[i - 1] = Rat(static_cast<long>(i)) * c_[i];
    return PolyQ(std::move(out));
}

std::pair<PolyQ, PolyQ> PolyQ::divmod(const PolyQ& a, const PolyQ& b) {
    if (b.is_zero()) throw ContractError("diffop", "divmod", "polynomial division by zero");
    PolyQ rem = a;
    std::vector<Rat> q(std::max(0, a.degree() - b.degree() + 1), Rat(0));
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
        const int shift = rem.degree() - b.degree();
        const Rat factor = rem.leading() / b.leading();
        q[shift] += factor;
        rem = rem - PolyQ::monomial(factor, shift) * b;
    }
    return {PolyQ(std::move(q)), rem};
}

PolyQ PolyQ::gcd(PolyQ a, PolyQ b) {
    while (!b.is_zero()) {
        PolyQ r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return (Rat(1) / a.leading()) * a;  // monic
}

Rat PolyQ::eval(const Rat& x) const {
    Rat acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double PolyQ::eval(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->to_double();
    return acc;
}

std::string PolyQ::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        Rat a = coeff(k);
        if (a.is_zero()) continue;
        if (first) {
            if (a.sign() < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a.sign() < 0 ? " - " : " + ");
            if (a.sign() < 0) a = -a;
        }
        first = false;
        if (k == 0) {
            os << a.str();
        } else {
            if (!a.is_one()) os << a.str() << "*";
            os << var;
            if (k > 1) os << "^" << k;
        }
    }
    return os.str();
}

RationalFn::RationalFn(PolyQ num, PolyQ den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero())
        throw ContractError("diffop", "rationalfn", "denominator is identically zero");
    if (num_.is_zero()) {
        den_ = PolyQ::constant(Rat(1));
        return;
    }
    const PolyQ g = PolyQ::gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = PolyQ::divmod(num_, g).first;
        den_ = PolyQ::divmod(den_, g).first;
    }
    const Rat lead = den_.leading();
    if (!lead.is_one()) {
        const Rat inv = Rat(1) / lead;
        num_ = inv * num_;
        den_ = inv * den_;
    }
}

PolyQ RationalFn::as_polynomial() const {
    if (!is_polynomial())
        throw ContractError("diffop", "as_polynomial", "rational function has a true denominator");
    return (Rat(1) / den_.coeff(0)) * num_;
}

RationalFn RationalFn::operator-() const { return RationalFn(-num_, den_); }

RationalFn operator+(const RationalFn& a, const RationalFn& b) {
    return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFn operator-(const RationalFn& a, const RationalFn& b) { return a + (-b); }

RationalFn operator*(const RationalFn& a, const RationalFn& b) {
    return RationalFn(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFn operator/(const RationalFn& a, const RationalFn& b) {
    if (b.is_zero()) throw ContractError("diffop", "divide", "division by the zero function");
    return RationalFn(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFn RationalFn::derivative() const {
    return RationalFn(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

double RationalFn::eval(double x) const { return num_.eval(x) / den_.eval(x); }

std::string RationalFn::str() const {
    if (is_polynomial()) return as_polynomial().str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

LinearDiffOp LinearDiffOp::identity() {
    return LinearDiffOp({RationalFn::constant(Rat(1))});
}

LinearDiffOp LinearDiffOp::derivative(int order) {
    if (order < 0) throw ConfigError("diffop", "derivative", "order must be >= 0");
    std::vector<RationalFn> c(order + 1, RationalFn());
    c[order] = RationalFn::constant(Rat(1));
    return LinearDiffOp(std::move(c));
}

LinearDiffOp LinearDiffOp::mul_by(const RationalFn& a) { return LinearDiffOp({a}); }

void LinearDiffOp::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

const RationalFn& LinearDiffOp::coeff(int k) const {
    static const RationalFn zero;
    if (k < 0 || k >= static_cast<int>(c_.size())) return zero;
    return c_[k];
}

LinearDiffOp operator+(const LinearDiffOp& a, const LinearDiffOp& b) {
    std::vector<RationalFn> out(std::max(a.c_.size(), b.c_.size()));
    for (size_t i = 0; i < out.size(); ++i) {
        if (i < a.c_.size()) out[i] = out[i] + a.c_[i];
        if (i < b.c_.size()) out[i] = out[i] + b.c_[i];
    }
    return LinearDiffOp(std::move(out));
}

LinearDiffOp operator-(const LinearDiffOp& a, const LinearDiffOp& b) {
    std::vector<RationalFn> out(std::max(a.c_.size(), b.c_.size()));
    for (size_t i = 0; i < out.size(); ++i) {
        if (i < a.c_.size()) out[i] = out[i] + a.c_[i];
        if (i < b.c_.size()) out[i] = out[i] - b.c_[i];
    }
    return LinearDiffOp(std::move(out));
}

std::string LinearDiffOp::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = order(); k >= 0; --k) {
        if (coeff(k).is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << coeff(k).str() << ")";
        if (k > 0) os << "*d" << k;
    }
    return os.str();
}

LinearDiffOp compose(const LinearDiffOp& L, const LinearDiffOp& M) {
    if (L.is_zero() || M.is_zero()) return LinearDiffOp();
    std::vector<RationalFn> h(L.order() + M.order() + 1, RationalFn());
    for (int j = 0; j <= L.order(); ++j) {
        const RationalFn& cj = L.coeff(j);
        if (cj.is_zero()) continue;
        for (int k = 0; k <= M.order(); ++k) {
            if (M.coeff(k).is_zero()) continue;
            // d^j (m_k d^k) = sum_i C(j,i) m_k^(i) d^{j-i+k}
            RationalFn der = M.coeff(k);
            for (int i = 0; i <= j; ++i) {
                h[j - i + k] =
                    h[j - i + k] + RationalFn::constant(Rat::binomial(j, i)) * cj * der;
                if (i < j) der = der.derivative();
            }
        }
    }
    return LinearDiffOp(std::move(h));
}

LinearDiffOp commutator(const LinearDiffOp& L, const LinearDiffOp& M) {
    return compose(L, M) - compose(M, L);
}

LinearDiffOp euler_substitute(const LinearDiffOp& L) {
    // Every coefficient of d^k must be a_k x^k with constant a_k.
    PolyQ result;  // polynomial in θ
    for (int k = 0; k <= L.order(); ++k) {
        const RationalFn& c = L.coeff(k);
        if (c.is_zero()) continue;
        if (!c.is_polynomial())
            throw ContractError("diffop", "euler_substitute",
                                "coefficient of d" + std::to_string(k) +
                                    " is not polynomial; operator is not in Euler form");
        const PolyQ p = c.as_polynomial();
        Rat ak(0);
        for (int d = 0; d <= p.degree(); ++d) {
            if (d == k) {
                ak = p.coeff(d);
            } else if (!p.coeff(d).is_zero()) {
                throw ContractError("diffop", "euler_substitute",
                                    "coefficient of d" + std::to_string(k) +
                                        " is not a constant multiple of x^" + std::to_string(k));
            }
        }
        // a_k * θ(θ-1)...(θ-k+1)
        PolyQ falling = PolyQ::constant(Rat(1));
        for (int i = 0; i < k; ++i)
            falling = falling * PolyQ({Rat(-i), Rat(1)});
        result = result + ak * falling;
    }
    std::vector<RationalFn> coeffs;
    for (int d = 0; d <= result.degree(); ++d)
        coeffs.push_back(RationalFn::constant(result.coeff(d)));
    return LinearDiffOp(std::move(coeffs));
}

RationalFn apply_op(const LinearDiffOp& L, const PolyQ& p) {
    RationalFn acc;
    PolyQ der = p;
    for (int k = 0; k <= L.order(); ++k) {
        if (!L.coeff(k).is_zero())
            acc = acc + L.coeff(k) * RationalFn::from_poly(der);
        der = der.derivative();
    }
    return acc;
}

// Parses sums of products over {integers, x, dk}; the d-symbols commute
// formally in the text form, which always denotes sum_k c_k(x) d^k.
namespace {

class OpParser {
public:
    explicit OpParser(const std::string& s) : s_(s) {}

    LinearDiffOp run() {
        LinearDiffOp acc = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return acc;
    }

private:
    [[noreturn]] void fail(const std::string& why) {
        throw ConfigError("diffop", "parse",
                          "operator syntax error at position " + std::to_string(pos_) + ": " +
                              why + " in \"" + s_ + "\"");
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    LinearDiffOp expr() {
        LinearDiffOp acc;
        bool neg = eat('-');
        acc = term();
        if (neg) acc = LinearDiffOp() - acc;
        while (true) {
            if (eat('+')) {
                acc = acc + term();
            } else if (eat('-')) {
                acc = acc - term();
            } else {
                return acc;
            }
        }
    }

    // product of factors; each factor is either scalar (rational function of
    // x) or a pure d-power. The product assembles c(x)*d^k.
    LinearDiffOp term() {
        PolyQ coeff = PolyQ::constant(Rat(1));
        Rat scale(1);
        int dpow = 0;
        parse_factor(coeff, scale, dpow);
        while (true) {
            if (eat('*')) {
                parse_factor(coeff, scale, dpow);
            } else if (eat('/')) {
                PolyQ c2 = PolyQ::constant(Rat(1));
                Rat s2(1);
                int d2 = 0;
                parse_factor(c2, s2, d2);
                if (d2 != 0 || c2.degree() > 0) fail("division only by constants");
                if (c2.coeff(0).is_zero() || s2.is_zero()) fail("division by zero");
                scale /= s2 * c2.coeff(0);
            } else {
                break;
            }
        }
        std::vector<RationalFn> c(dpow + 1, RationalFn());
        c[dpow] = RationalFn::from_poly(scale * coeff);
        return LinearDiffOp(std::move(c));
    }

    void parse_factor(PolyQ& coeff, Rat& scale, int& dpow) {
        skip_ws();
        if (eat('(')) {
            // parenthesized polynomial expression in x
            PolyQ p = poly_expr();
            if (!eat(')')) fail("expected ')'");
            apply_pow(p);
            coeff = coeff * p;
            return;
        }
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Rat v(static_cast<long>(integer()));
            // integer^exponent
            if (eat('^')) {
                const unsigned e = integer();
                Rat r(1);
                for (unsigned i = 0; i < e; ++i) r *= v;
                v = r;
            }
            scale *= v;
            return;
        }
        if (c == 'x') {
            ++pos_;
            PolyQ p = PolyQ::x();
            apply_pow(p);
            coeff = coeff * p;
            return;
        }
        if (c == 'd') {
            ++pos_;
            const unsigned k = integer();
            int rep = 1;
            if (eat('^')) rep = static_cast<int>(integer());
            dpow += static_cast<int>(k) * rep;
            return;
        }
        fail("expected a factor");
    }

    void apply_pow(PolyQ& p) {
        if (eat('^')) {
            const unsigned e = integer();
            PolyQ r = PolyQ::constant(Rat(1));
            for (unsigned i = 0; i < e; ++i) r = r * p;
            p = r;
        }
    }

    // polynomial in x only (inside parentheses)
    PolyQ poly_expr() {
        PolyQ acc;
        bool neg = eat('-');
        acc = poly_term();
        if (neg) acc = -acc;
        while (true) {
            if (eat('+')) {
                acc = acc + poly_term();
            } else if (eat('-')) {
                acc = acc - poly_term();
            } else {
                return acc;
            }
        }
    }

    PolyQ poly_term() {
        PolyQ acc = poly_factor();
        while (true) {
            if (eat('*')) {
                acc = acc * poly_factor();
            } else if (eat('/')) {
                PolyQ d = poly_factor();
                if (d.degree() != 0) fail("division only by constants");
                acc = (Rat(1) / d.coeff(0)) * acc;
            } else {
                return acc;
            }
        }
    }

    PolyQ poly_factor() {
        skip_ws();
        if (eat('(')) {
            PolyQ inner = poly_expr();
            if (!eat(')')) fail("expected ')'");
            apply_pow(inner);
            return inner;
        }
        if (eat('-')) return -poly_factor();
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            PolyQ p = PolyQ::constant(Rat(static_cast<long>(integer())));
            apply_pow(p);
            return p;
        }
        if (c == 'x') {
            ++pos_;
            PolyQ p = PolyQ::x();
            apply_pow(p);
            return p;
        }
        fail("expected a polynomial factor");
    }

    unsigned integer() {
        skip_ws();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
            fail("expected an integer");
        unsigned long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + static_cast<unsigned long>(s_[pos_] - '0');
            if (v > 1'000'000'000UL) fail("integer literal too large");
            ++pos_;
        }
        return static_cast<unsigned>(v);
    }

    const std::string& s_;
    size_t pos_ = 0;
};

}  // namespace

LinearDiffOp LinearDiffOp::parse(const std::string& text) { return OpParser(text).run(); }

}  // namespace intlab::diffop
