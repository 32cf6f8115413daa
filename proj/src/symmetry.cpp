#include "intlab/symmetry.hpp"

#include <cmath>

#include "intlab/errors.hpp"

namespace intlab::symmetry {

DynamicalSystem DynamicalSystem::canonical(const JetPolynomial& F, int order) {
    if (order < 1) throw ConfigError("symmetry", "canonical", "order must be >= 1");
    DynamicalSystem sys;
    sys.coords.push_back(JetCoord::X());
    for (int k = 0; k < order; ++k) sys.coords.push_back(JetCoord::Y(k));
    sys.field[JetCoord::X()] = JetPolynomial::constant(Rat(1));
    for (int k = 0; k + 1 < order; ++k)
        sys.field[JetCoord::Y(k)] = JetPolynomial::coordinate(JetCoord::Y(k + 1));
    sys.field[JetCoord::Y(order - 1)] = F;
    sys.validate();
    return sys;
}

void DynamicalSystem::validate() const {
    if (coords.empty()) throw ConfigError("symmetry", "system", "no coordinates declared");
    if (field.size() != coords.size())
        throw ConfigError("symmetry", "system", "field must have one component per coordinate");
    for (const auto& c : coords)
        if (!field.contains(c))
            throw ConfigError("symmetry", "system", "missing component for " + c.name());
    for (const auto& [c, comp] : field)
        for (const auto& used : comp.coordinates())
            if (!field.contains(used))
                throw ConfigError("symmetry", "system",
                                  "component uses undeclared coordinate " + used.name());
}

bool DynamicalSystem::is_canonical() const {
    if (coords.empty() || coords.front() != JetCoord::X()) return false;
    const auto it = field.find(JetCoord::X());
    return it != field.end() && it->second == JetPolynomial::constant(Rat(1));
}

numerics::OdeRhs DynamicalSystem::rhs() const {
    const std::vector<JetCoord> order = coords;
    const JetVectorField f = field;
    return [order, f](double, std::span<const double> y, std::span<double> dy) {
        auto point = [&](JetCoord c) {
            for (size_t i = 0; i < order.size(); ++i)
                if (order[i] == c) return y[i];
            return 0.0;
        };
        for (size_t i = 0; i < order.size(); ++i) dy[i] = f.at(order[i]).eval(point);
    };
}

CLVerdict is_conservation_law(const DynamicalSystem& sys, const JetPolynomial& F) {
    CLVerdict v;
    v.residual = jet::apply_field(sys.field, F);
    v.conserved = v.residual.is_zero();
    return v;
}

namespace {

// g == c * f for a rational constant c?
bool is_constant_multiple(const JetVectorField& g, const JetVectorField& f) {
    // locate a nonzero component of f to fix the constant
    const JetPolynomial* fref = nullptr;
    const JetPolynomial* gref = nullptr;
    for (const auto& [c, comp] : f) {
        if (!comp.is_zero()) {
            fref = &comp;
            gref = &g.at(c);
            break;
        }
    }
    if (fref == nullptr) return jet::is_zero_field(g);
    Rat k(0);
    if (!gref->is_zero()) {
        const auto q = JetPolynomial::try_divide(*gref, *fref);
        if (!q || !q->is_constant()) return false;
        k = q->constant_value();
    }
    for (const auto& [c, comp] : f)
        if (!(g.at(c) - k * comp).is_zero()) return false;
    return true;
}

}  // namespace

SymmetryVerdict is_symmetry(const DynamicalSystem& sys, const SymmetryCandidate& cand) {
    for (const auto& [c, comp] : cand.field)
        if (!sys.field.contains(c))
            throw DomainError("symmetry", "is_symmetry",
                              "candidate component for undeclared coordinate " + c.name());
    if (cand.field.size() != sys.field.size())
        throw DomainError("symmetry", "is_symmetry",
                          "candidate must declare all system coordinates");
    SymmetryVerdict v;
    v.bracket = jet::lie_bracket(sys.field, cand.field);
    v.symmetry = jet::is_zero_field(v.bracket);
    v.trivial = v.symmetry && is_constant_multiple(cand.field, sys.field);
    return v;
}

SymmetryCandidate scale_symmetry(const DynamicalSystem& sys, const SymmetryCandidate& cand,
                                 const JetPolynomial& F) {
    if (!is_conservation_law(sys, F).conserved)
        throw ContractError("symmetry", "scale_symmetry", "F is not a first integral");
    if (!is_symmetry(sys, cand).symmetry)
        throw ContractError("symmetry", "scale_symmetry", "candidate is not a symmetry");
    SymmetryCandidate out;
    out.label = cand.label.empty() ? "scaled" : "(" + F.str() + ")*" + cand.label;
    for (const auto& [c, comp] : cand.field) out.field[c] = F * comp;
    if (!is_symmetry(sys, out).symmetry)
        throw ContractError("symmetry", "scale_symmetry",
                            "postcondition violated: scaled field does not commute");
    return out;
}

LeadingComponentReport leading_component_check(const DynamicalSystem& sys,
                                               const SymmetryCandidate& cand) {
    if (!sys.is_canonical())
        throw ContractError("symmetry", "leading_component_check",
                            "system is not in canonical form (leading component must be 1)");
    LeadingComponentReport rep;
    const JetPolynomial& g0 = cand.field.at(sys.coords.front());
    if (g0.is_zero()) return rep;  // check is vacuous
    rep.applicable = true;
    rep.conserved = is_conservation_law(sys, g0).conserved;
    // try the normalization g / g0
    JetVectorField normalized;
    bool ok = true;
    for (const auto& [c, comp] : cand.field) {
        const auto q = JetPolynomial::try_divide(comp, g0);
        if (!q) {
            ok = false;
            break;
        }
        normalized[c] = *q;
    }
    if (ok) rep.normalized = std::move(normalized);
    return rep;
}

int pde_min_depth(const JetPolynomial& K_f, const JetPolynomial& K_g) {
    return std::max(K_f.max_u_order(), 0) + std::max(K_g.max_u_order(), 0) + 1;
}

JetPolynomial pde_symmetry_bracket(const JetPolynomial& K_f, const JetPolynomial& K_g,
                                   int depth) {
    const int need = pde_min_depth(K_f, K_g);
    if (depth < need)
        throw ContractError("symmetry", "pde_symmetry_bracket",
                            "jet depth " + std::to_string(depth) +
                                " too small; minimum depth is " + std::to_string(need));
    const JetVectorField pf = jet::prolonged_field(K_f, depth);
    const JetVectorField pg = jet::prolonged_field(K_g, depth);
    return jet::apply_field(pf, K_g) - jet::apply_field(pg, K_f);
}

bool pde_symmetry_check(const JetPolynomial& K_f, const JetPolynomial& K_g, int depth) {
    return pde_symmetry_bracket(K_f, K_g, depth).is_zero();
}

bool pde_symmetry_check(const JetPolynomial& K_f, const JetPolynomial& K_g) {
    return pde_symmetry_check(K_f, K_g, pde_min_depth(K_f, K_g));
}

double cl_drift(const numerics::OdeRhs& rhs, const NumericCL& cl, std::vector<double> y0,
                double T, const numerics::IntegratorConfig& config) {
    const double f0 = cl.eval(y0);
    if (!std::isfinite(f0))
        throw DomainError("symmetry", "cl_drift",
                          "first integral '" + cl.label + "' not finite at the initial state");
    double drift = 0.0;
    numerics::integrate(rhs, y0, 0.0, T, config,
                        [&](double t, std::span<const double> y) {
                            const double f = cl.eval(y);
                            if (!std::isfinite(f))
                                throw DomainError(
                                    "symmetry", "cl_drift",
                                    "first integral '" + cl.label +
                                        "' left its domain at t=" + std::to_string(t));
                            drift = std::max(drift, std::abs(f - f0));
                        });
    return drift;
}

double cl_drift(const DynamicalSystem& sys, const NumericCL& cl, std::vector<double> y0,
                double T, const numerics::IntegratorConfig& config) {
    if (y0.size() != sys.coords.size())
        throw ConfigError("symmetry", "cl_drift", "initial state size mismatch");
    return cl_drift(sys.rhs(), cl, std::move(y0), T, config);
}

}  // namespace intlab::symmetry
