#pragma once

#include <functional>
#include <string>
#include <vector>

#include "intlab/diffop.hpp"

namespace intlab::wronskian {

// A kernel candidate: evaluator(x, k) returns the k-th derivative at x.
struct BasisFunction {
    std::function<double(double x, int k)> eval;
    std::string label;
};

// Wraps a value-only callable with finite-difference derivatives (accuracy 8).
// Analytic derivative bundles are preferred; this is the explicit fallback.
BasisFunction fd_basis(const std::function<double(double)>& f, const std::string& label,
                       double h = 1e-3);

// Named catalog for CLI use: 1, x, x2, x3, sin, cos, sqrt, exp (e^{c x}).
BasisFunction catalog(const std::string& name, double param = 1.0);

struct KernelSpec {
    std::vector<BasisFunction> basis;  // m <= 6 functions
    double x_lo = 0.0;
    double x_hi = 1.0;
    int samples = 64;  // >= 16

    // Checks shape and that the Wronskian is bounded away from zero at every
    // sample point (relative to the Hadamard scale of the derivative matrix).
    void validate() const;
};

// Determinant of the m x m derivative matrix (rows: derivative order 0..m-1).
double wronskian_det(const std::vector<BasisFunction>& basis, double x);

// Monic operator sampled on the kernel window: psi^(m) + sum_k c_k(x) psi^(k).
struct SampledOperator {
    int order = 0;
    double x_lo = 0.0;
    double x_hi = 0.0;
    std::vector<double> xs;
    std::vector<std::vector<double>> coeff;  // coeff[k][j] = c_k(xs[j]), k < order
};

SampledOperator operator_from_kernel(const KernelSpec& spec);

// Max residual |psi^(m) + sum c_k psi^(k)| over the operator's samples
// restricted to [lo, hi] (must lie inside the construction window).
double membership_test(const SampledOperator& op, const BasisFunction& psi, double lo,
                       double hi);

// A differential form with arbitrary coefficient callables c_k(x), k = 0..m,
// for residual comparison against externally printed equations.
struct ReferenceForm {
    std::vector<std::function<double(double)>> coeff;
};

double form_residual(const ReferenceForm& form, const BasisFunction& psi, double lo, double hi,
                     int samples);

// Exact bordered-determinant construction for polynomial bases; returns the
// monic coefficients (c_0, ..., c_{m-1}) as rational functions.
std::vector<diffop::RationalFn> operator_from_polynomial_kernel(
    const std::vector<diffop::PolyQ>& basis);

}  // namespace intlab::wronskian
