#include "intlab/exprjet.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "intlab/errors.hpp"

namespace intlab::jet {

namespace {

constexpr std::uint64_t kMaxExponent = std::numeric_limits<std::uint32_t>::max();

std::uint32_t checked_exp_add(std::uint32_t a, std::uint32_t b) {
    const std::uint64_t s = static_cast<std::uint64_t>(a) + b;
    if (s > kMaxExponent)
        throw ContractError("exprjet", "multiply", "monomial exponent overflow (cap 2^32)");
    return static_cast<std::uint32_t>(s);
}

}  // namespace

std::string JetCoord::name() const {
    switch (kind) {
        case Kind::x: return "x";
        case Kind::t: return "t";
        case Kind::y: return index == 0 ? "y" : "y" + std::to_string(index);
        case Kind::u: return "u" + std::to_string(index);
    }
    return "?";
}

std::optional<JetCoord> JetCoord::parse_name(const std::string& s) {
    if (s.empty()) return std::nullopt;
    if (s == "x") return X();
    if (s == "t") return T();
    const char head = s[0];
    if (head != 'y' && head != 'u') return std::nullopt;
    if (s.size() == 1) return head == 'y' ? std::optional<JetCoord>(Y(0)) : std::nullopt;
    std::uint32_t k = 0;
    for (size_t i = 1; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
        k = k * 10 + static_cast<std::uint32_t>(s[i] - '0');
        if (k > 1'000'000) return std::nullopt;
    }
    return head == 'y' ? Y(k) : U(k);
}

std::uint64_t Monomial::total_degree() const {
    std::uint64_t d = 0;
    for (const auto& [c, e] : factors) d += e;
    return d;
}

std::uint32_t Monomial::exponent(JetCoord c) const {
    for (const auto& [cc, e] : factors)
        if (cc == c) return e;
    return 0;
}

bool Monomial::operator<(const Monomial& o) const {
    const auto da = total_degree(), db = o.total_degree();
    if (da != db) return da < db;
    return factors < o.factors;
}

JetPolynomial JetPolynomial::constant(const Rat& c) {
    JetPolynomial p;
    if (!c.is_zero()) p.terms_.emplace(Monomial{}, c);
    return p;
}

JetPolynomial JetPolynomial::coordinate(JetCoord c) {
    JetPolynomial p;
    p.terms_.emplace(Monomial{{{c, 1}}}, Rat(1));
    return p;
}

bool JetPolynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.factors.empty());
}

Rat JetPolynomial::constant_value() const {
    if (terms_.empty()) return Rat(0);
    if (!is_constant())
        throw ContractError("exprjet", "constant_value", "polynomial is not constant");
    return terms_.begin()->second;
}

std::set<JetCoord> JetPolynomial::coordinates() const {
    std::set<JetCoord> out;
    for (const auto& [m, c] : terms_)
        for (const auto& [coord, e] : m.factors) out.insert(coord);
    return out;
}

int JetPolynomial::max_u_order() const {
    int best = -1;
    for (const auto& [m, c] : terms_)
        for (const auto& [coord, e] : m.factors)
            if (coord.kind == JetCoord::Kind::u) best = std::max(best, static_cast<int>(coord.index));
    return best;
}

void JetPolynomial::add_term(const Monomial& m, const Rat& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

JetPolynomial JetPolynomial::operator-() const {
    JetPolynomial out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

JetPolynomial& JetPolynomial::operator+=(const JetPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

JetPolynomial& JetPolynomial::operator-=(const JetPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

JetPolynomial operator*(const JetPolynomial& a, const JetPolynomial& b) {
    JetPolynomial out;
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            // merge sorted factor lists, adding exponents
            Monomial m;
            auto ia = ma.factors.begin();
            auto ib = mb.factors.begin();
            while (ia != ma.factors.end() || ib != mb.factors.end()) {
                if (ib == mb.factors.end() || (ia != ma.factors.end() && ia->first < ib->first)) {
                    m.factors.push_back(*ia++);
                } else if (ia == ma.factors.end() || ib->first < ia->first) {
                    m.factors.push_back(*ib++);
                } else {
                    m.factors.emplace_back(ia->first, checked_exp_add(ia->second, ib->second));
                    ++ia;
                    ++ib;
                }
            }
            out.add_term(m, ca * cb);
        }
    }
    return out;
}

JetPolynomial operator*(const Rat& c, const JetPolynomial& p) {
    JetPolynomial out;
    if (c.is_zero()) return out;
    for (const auto& [m, pc] : p.terms_) out.terms_.emplace(m, c * pc);
    return out;
}

JetPolynomial JetPolynomial::pow(std::uint32_t e) const {
    JetPolynomial out = constant(Rat(1));
    for (std::uint32_t i = 0; i < e; ++i) out *= *this;
    return out;
}

JetPolynomial JetPolynomial::derivative(JetCoord c) const {
    JetPolynomial out;
    for (const auto& [m, coef] : terms_) {
        const std::uint32_t e = m.exponent(c);
        if (e == 0) continue;
        Monomial dm;
        for (const auto& [coord, ex] : m.factors) {
            if (coord == c) {
                if (ex > 1) dm.factors.emplace_back(coord, ex - 1);
            } else {
                dm.factors.emplace_back(coord, ex);
            }
        }
        out.add_term(dm, coef * Rat(static_cast<long>(e)));
    }
    return out;
}

JetPolynomial JetPolynomial::total_derivative_x() const {
    for (const JetCoord c : coordinates())
        if (c.kind != JetCoord::Kind::u)
            throw ContractError("exprjet", "total_derivative_x",
                                "total x-derivative is defined on u-jet polynomials; found " +
                                    c.name());
    JetPolynomial out;
    for (const JetCoord c : coordinates())
        out += derivative(c) * coordinate(JetCoord::U(c.index + 1));
    return out;
}

std::optional<JetPolynomial> JetPolynomial::try_divide(const JetPolynomial& num,
                                                       const JetPolynomial& den) {
    if (den.is_zero()) return std::nullopt;
    JetPolynomial rem = num;
    JetPolynomial quot;
    const auto& dlead = *den.terms_.rbegin();
    while (!rem.is_zero()) {
        const auto& rlead = *rem.terms_.rbegin();
        // leading monomial of rem must be divisible by leading monomial of den
        Monomial q;
        bool divisible = true;
        {
            auto id = dlead.first.factors.begin();
            for (const auto& [coord, e] : rlead.first.factors) {
                std::uint32_t de = 0;
                if (id != dlead.first.factors.end() && id->first == coord) {
                    de = id->second;
                    ++id;
                }
                if (e < de) {
                    divisible = false;
                    break;
                }
                if (e > de) q.factors.emplace_back(coord, e - de);
            }
            if (id != dlead.first.factors.end()) divisible = false;
        }
        if (!divisible) return std::nullopt;
        JetPolynomial qterm;
        qterm.terms_.emplace(q, rlead.second / dlead.second);
        quot += qterm;
        rem -= qterm * den;
    }
    return quot;
}

double JetPolynomial::eval(const std::function<double(JetCoord)>& point) const {
    double acc = 0.0;
    for (const auto& [m, c] : terms_) {
        double term = c.to_double();
        for (const auto& [coord, e] : m.factors) term *= std::pow(point(coord), e);
        acc += term;
    }
    return acc;
}

std::string JetPolynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // print highest-order terms first
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Rat a = c;
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
        const bool bare = m.factors.empty();
        if (!a.is_one() || bare) os << a.str();
        bool need_star = !a.is_one() || bare;
        for (const auto& [coord, e] : m.factors) {
            if (need_star) os << "*";
            os << coord.name();
            if (e > 1) os << "^" << e;
            need_star = true;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Parser for the plain-text polynomial syntax, e.g. "2*u0*u1 + 1/3*u2".
// expr   := ['-'] term (('+'|'-') term)*
// term   := factor (('*'|'/') factor)*      (divisor must be constant)
// factor := atom ['^' integer]
// atom   := integer | coordinate | '(' expr ')'
// ---------------------------------------------------------------------------
namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    JetPolynomial run() {
        JetPolynomial p = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& why) {
        throw ConfigError("exprjet", "parse",
                          "polynomial syntax error at position " + std::to_string(pos_) + ": " +
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

    JetPolynomial expr() {
        JetPolynomial acc;
        bool neg = eat('-');
        acc = term();
        if (neg) acc = -acc;
        while (true) {
            if (eat('+')) {
                acc += term();
            } else if (eat('-')) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    JetPolynomial term() {
        JetPolynomial acc = factor();
        while (true) {
            if (eat('*')) {
                acc *= factor();
            } else if (eat('/')) {
                JetPolynomial d = factor();
                if (!d.is_constant() || d.is_zero()) fail("division only by nonzero constants");
                acc = (Rat(1) / d.constant_value()) * acc;
            } else {
                return acc;
            }
        }
    }

    JetPolynomial factor() {
        JetPolynomial base = atom();
        if (eat('^')) {
            const std::uint32_t e = integer();
            return base.pow(e);
        }
        return base;
    }

    JetPolynomial atom() {
        skip_ws();
        if (eat('(')) {
            JetPolynomial inner = expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (eat('-')) return -atom();
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)))
            return JetPolynomial::constant(Rat(static_cast<long>(integer())));
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string name;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])))) {
                name += s_[pos_++];
            }
            const auto coord = JetCoord::parse_name(name);
            if (!coord) fail("unknown coordinate \"" + name + "\"");
            return JetPolynomial::coordinate(*coord);
        }
        fail("expected a number, coordinate or '('");
    }

    std::uint32_t integer() {
        skip_ws();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
            fail("expected an integer");
        std::uint64_t v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + static_cast<std::uint64_t>(s_[pos_] - '0');
            if (v > kMaxExponent) fail("integer literal too large");
            ++pos_;
        }
        return static_cast<std::uint32_t>(v);
    }

    const std::string& s_;
    size_t pos_ = 0;
};

}  // namespace

JetPolynomial JetPolynomial::parse(const std::string& text) { return Parser(text).run(); }

JetPolynomial apply_field(const JetVectorField& L, const JetPolynomial& F) {
    for (const JetCoord c : F.coordinates())
        if (!L.contains(c))
            throw DomainError("exprjet", "apply_field",
                              "coordinate " + c.name() + " is not in the field's domain");
    JetPolynomial out;
    for (const auto& [coord, component] : L) out += component * F.derivative(coord);
    return out;
}

JetVectorField lie_bracket(const JetVectorField& f, const JetVectorField& g) {
    if (f.size() != g.size())
        throw DomainError("exprjet", "lie_bracket", "fields have different coordinate domains");
    for (const auto& [c, comp] : f)
        if (!g.contains(c))
            throw DomainError("exprjet", "lie_bracket",
                              "fields have different coordinate domains (" + c.name() + ")");
    JetVectorField out;
    for (const auto& [c, gc] : g) out[c] = apply_field(f, gc) - apply_field(g, f.at(c));
    return out;
}

bool is_zero_field(const JetVectorField& f) {
    for (const auto& [c, comp] : f)
        if (!comp.is_zero()) return false;
    return true;
}

std::vector<JetPolynomial> prolong(const JetPolynomial& K, int depth) {
    if (depth < 0) throw ConfigError("exprjet", "prolong", "depth must be >= 0");
    std::vector<JetPolynomial> out;
    out.reserve(depth + 1);
    out.push_back(K);
    for (int j = 1; j <= depth; ++j) out.push_back(out.back().total_derivative_x());
    return out;
}

JetVectorField prolonged_field(const JetPolynomial& K, int depth) {
    const std::vector<JetPolynomial> chain = prolong(K, depth);
    JetVectorField out;
    for (int j = 0; j <= depth; ++j) out[JetCoord::U(j)] = chain[j];
    return out;
}

std::string field_str(const JetVectorField& f) {
    std::ostringstream os;
    os << "(";
    bool first = true;
    for (const auto& [c, comp] : f) {
        if (!first) os << ", ";
        first = false;
        os << c.name() << ": " << comp.str();
    }
    os << ")";
    return os.str();
}

}  // namespace intlab::jet
