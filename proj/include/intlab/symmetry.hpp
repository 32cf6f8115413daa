#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "intlab/exprjet.hpp"
#include "intlab/numerics.hpp"

namespace intlab::symmetry {

using jet::JetCoord;
using jet::JetPolynomial;
using jet::JetVectorField;

// A polynomial first-order flow d/dt y_i = f_i(y) over declared coordinates.
struct DynamicalSystem {
    std::vector<JetCoord> coords;
    JetVectorField field;

    // Canonical form of y^(n) = F(x, y, ..., y^(n-1)) over (x, y, ..., y^(n-1)):
    // components (1, y1, ..., y_{n-1}, F).
    static DynamicalSystem canonical(const JetPolynomial& F, int order);

    void validate() const;
    bool is_canonical() const;  // first coordinate x with unit component
    numerics::OdeRhs rhs() const;
};

struct SymmetryCandidate {
    JetVectorField field;
    std::string label;
};

struct CLVerdict {
    bool conserved = false;
    JetPolynomial residual;  // the directional derivative, zero iff conserved
};

// F is a first integral iff the flow derivative vanishes identically.
CLVerdict is_conservation_law(const DynamicalSystem& sys, const JetPolynomial& F);

struct SymmetryVerdict {
    bool symmetry = false;
    bool trivial = false;  // candidate is a constant multiple of the flow
    JetVectorField bracket;
};

SymmetryVerdict is_symmetry(const DynamicalSystem& sys, const SymmetryCandidate& cand);

// Multiplies a symmetry by a first integral; the product commutes with the
// flow again. Preconditions are enforced, and the result is re-verified.
SymmetryCandidate scale_symmetry(const DynamicalSystem& sys, const SymmetryCandidate& cand,
                                 const JetPolynomial& F);

struct LeadingComponentReport {
    bool applicable = false;  // false when the leading component vanishes
    bool conserved = false;
    std::optional<JetVectorField> normalized;  // cand / g0 when exactly divisible
};

// For a canonical system, the leading component of any symmetry is itself a
// first integral; when it is nonzero the candidate may be normalized by it.
LeadingComponentReport leading_component_check(const DynamicalSystem& sys,
                                               const SymmetryCandidate& cand);

// Evolutionary flows u_t = K_f and u_tau = K_g on the u-jet. The commutation
// bracket lives in coordinates of order at most ord(K_f) + ord(K_g), so the
// truncation depth must exceed that bound.
int pde_min_depth(const JetPolynomial& K_f, const JetPolynomial& K_g);
JetPolynomial pde_symmetry_bracket(const JetPolynomial& K_f, const JetPolynomial& K_g,
                                   int depth);
bool pde_symmetry_check(const JetPolynomial& K_f, const JetPolynomial& K_g, int depth);
bool pde_symmetry_check(const JetPolynomial& K_f, const JetPolynomial& K_g);  // depth = minimum

// Numeric first-integral evaluator along trajectories.
struct NumericCL {
    std::function<double(std::span<const double>)> eval;
    std::string label;
};

// Max |F(y(t)) - F(y(0))| along the integrated trajectory. A non-finite F
// evaluation raises a DomainError carrying the time stamp.
double cl_drift(const numerics::OdeRhs& rhs, const NumericCL& cl, std::vector<double> y0,
                double T, const numerics::IntegratorConfig& config);
double cl_drift(const DynamicalSystem& sys, const NumericCL& cl, std::vector<double> y0,
                double T, const numerics::IntegratorConfig& config);

}  // namespace intlab::symmetry
