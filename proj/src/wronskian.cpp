#include "intlab/wronskian.hpp"

#include <algorithm>
#include <cmath>

#include "intlab/errors.hpp"
#include "intlab/numerics.hpp"

namespace intlab::wronskian {

namespace {

constexpr int kMaxOrder = 6;

// Gaussian elimination with partial pivoting; returns the determinant and,
// when rhs is non-null, overwrites it with the solution.
double lu_solve(std::vector<std::vector<double>> a, std::vector<double>* rhs) {
    const int n = static_cast<int>(a.size());
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            if (rhs) std::swap((*rhs)[piv], (*rhs)[col]);
            det = -det;
        }
        const double p = a[col][col];
        if (p == 0.0) return 0.0;
        det *= p;
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r][col] / p;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            if (rhs) (*rhs)[r] -= f * (*rhs)[col];
        }
    }
    if (rhs) {
        for (int r = n - 1; r >= 0; --r) {
            double acc = (*rhs)[r];
            for (int c = r + 1; c < n; ++c) acc -= a[r][c] * (*rhs)[c];
            (*rhs)[r] = acc / a[r][r];
        }
    }
    return det;
}

// Derivative matrix rows 0..m-1 at x, plus its Hadamard-type scale.
std::vector<std::vector<double>> derivative_matrix(const std::vector<BasisFunction>& basis,
                                                   double x, int rows) {
    const int m = static_cast<int>(basis.size());
    std::vector<std::vector<double>> a(rows, std::vector<double>(m));
    for (int r = 0; r < rows; ++r) {
        for (int i = 0; i < m; ++i) {
            const double v = basis[i].eval(x, r);
            if (!std::isfinite(v))
                throw NumericalError("wronskian", "evaluate",
                                     "basis '" + basis[i].label + "' derivative " +
                                         std::to_string(r) + " not finite at x=" +
                                         std::to_string(x));
            a[r][i] = v;
        }
    }
    return a;
}

double hadamard_scale(const std::vector<std::vector<double>>& a) {
    double scale = 1.0;
    for (const auto& row : a) {
        double mx = 0.0;
        for (double v : row) mx = std::max(mx, std::abs(v));
        scale *= std::max(mx, 1e-30);
    }
    return scale;
}

}  // namespace

BasisFunction fd_basis(const std::function<double(double)>& f, const std::string& label,
                       double h) {
    return BasisFunction{
        [f, h](double x, int k) {
            if (k == 0) return f(x);
            return numerics::fd_derivative_at(f, x, k, 8, h);
        },
        label};
}

BasisFunction catalog(const std::string& name, double param) {
    if (name == "1")
        return {[](double, int k) { return k == 0 ? 1.0 : 0.0; }, "1"};
    if (name == "x")
        return {[](double x, int k) { return k == 0 ? x : (k == 1 ? 1.0 : 0.0); }, "x"};
    if (name == "x2")
        return {[](double x, int k) {
                    if (k == 0) return x * x;
                    if (k == 1) return 2.0 * x;
                    return k == 2 ? 2.0 : 0.0;
                },
                "x2"};
    if (name == "x3")
        return {[](double x, int k) {
                    if (k == 0) return x * x * x;
                    if (k == 1) return 3.0 * x * x;
                    if (k == 2) return 6.0 * x;
                    return k == 3 ? 6.0 : 0.0;
                },
                "x3"};
    if (name == "sin")
        return {[](double x, int k) {
                    switch (k % 4) {
                        case 0: return std::sin(x);
                        case 1: return std::cos(x);
                        case 2: return -std::sin(x);
                        default: return -std::cos(x);
                    }
                },
                "sin"};
    if (name == "cos")
        return {[](double x, int k) {
                    switch (k % 4) {
                        case 0: return std::cos(x);
                        case 1: return -std::sin(x);
                        case 2: return -std::cos(x);
                        default: return std::sin(x);
                    }
                },
                "cos"};
    if (name == "sqrt")
        return {[](double x, int k) {
                    // d^k/dx^k x^{1/2} = (1/2)(1/2-1)...(1/2-k+1) x^{1/2-k}
                    double c = 1.0, e = 0.5;
                    for (int i = 0; i < k; ++i) {
                        c *= e;
                        e -= 1.0;
                    }
                    return c * std::pow(x, e);
                },
                "sqrt"};
    if (name == "exp")
        return {[param](double x, int k) { return std::pow(param, k) * std::exp(param * x); },
                "exp"};
    throw ConfigError("wronskian", "catalog", "unknown basis function '" + name + "'");
}

void KernelSpec::validate() const {
    const int m = static_cast<int>(basis.size());
    if (m < 1 || m > kMaxOrder)
        throw ConfigError("wronskian", "kernel_spec",
                          "basis size must be between 1 and " + std::to_string(kMaxOrder));
    if (samples < 16) throw ConfigError("wronskian", "kernel_spec", "need at least 16 samples");
    if (!(x_hi > x_lo)) throw ConfigError("wronskian", "kernel_spec", "empty window");
    const double step = (x_hi - x_lo) / (samples - 1);
    for (int j = 0; j < samples; ++j) {
        const double x = x_lo + j * step;
        const auto a = derivative_matrix(basis, x, m);
        const double det = lu_solve(a, nullptr);
        if (std::abs(det) <= 1e-12 * hadamard_scale(a))
            throw DegeneracyError("wronskian", "kernel_spec",
                                  "near-degenerate kernel: Wronskian vanishes at x=" +
                                      std::to_string(x));
    }
}

double wronskian_det(const std::vector<BasisFunction>& basis, double x) {
    return lu_solve(derivative_matrix(basis, x, static_cast<int>(basis.size())), nullptr);
}

SampledOperator operator_from_kernel(const KernelSpec& spec) {
    spec.validate();
    const int m = static_cast<int>(spec.basis.size());
    SampledOperator op;
    op.order = m;
    op.x_lo = spec.x_lo;
    op.x_hi = spec.x_hi;
    op.coeff.assign(m, {});
    const double step = (spec.x_hi - spec.x_lo) / (spec.samples - 1);
    for (int j = 0; j < spec.samples; ++j) {
        const double x = spec.x_lo + j * step;
        op.xs.push_back(x);
        // Solve sum_{k<m} c_k phi_i^(k) = -phi_i^(m) for all basis members.
        const auto a = derivative_matrix(spec.basis, x, m + 1);
        std::vector<std::vector<double>> sys(m, std::vector<double>(m));
        std::vector<double> rhs(m);
        double scale = 0.0;
        for (int i = 0; i < m; ++i) {
            for (int k = 0; k < m; ++k) sys[i][k] = a[k][i];
            rhs[i] = -a[m][i];
            scale = std::max(scale, std::abs(a[m][i]));
        }
        lu_solve(sys, &rhs);
        // construction residual per basis member
        for (int i = 0; i < m; ++i) {
            double res = a[m][i];
            for (int k = 0; k < m; ++k) res += rhs[k] * a[k][i];
            if (std::abs(res) > 1e-8 * std::max(scale, 1.0))
                throw AccuracyError("wronskian", "operator_from_kernel",
                                    "construction residual " + std::to_string(res) +
                                        " for basis '" + spec.basis[i].label + "' at x=" +
                                        std::to_string(x));
        }
        for (int k = 0; k < m; ++k) op.coeff[k].push_back(rhs[k]);
    }
    return op;
}

double membership_test(const SampledOperator& op, const BasisFunction& psi, double lo,
                       double hi) {
    if (lo < op.x_lo - 1e-12 || hi > op.x_hi + 1e-12)
        throw DomainError("wronskian", "membership_test",
                          "test window exceeds the construction window");
    double worst = 0.0;
    for (size_t j = 0; j < op.xs.size(); ++j) {
        const double x = op.xs[j];
        if (x < lo || x > hi) continue;
        double res = psi.eval(x, op.order);
        for (int k = 0; k < op.order; ++k) res += op.coeff[k][j] * psi.eval(x, k);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

double form_residual(const ReferenceForm& form, const BasisFunction& psi, double lo, double hi,
                     int samples) {
    if (samples < 2) throw ConfigError("wronskian", "form_residual", "need at least 2 samples");
    double worst = 0.0;
    const double step = (hi - lo) / (samples - 1);
    for (int j = 0; j < samples; ++j) {
        const double x = lo + j * step;
        double res = 0.0;
        for (size_t k = 0; k < form.coeff.size(); ++k)
            res += form.coeff[k](x) * psi.eval(x, static_cast<int>(k));
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

std::vector<diffop::RationalFn> operator_from_polynomial_kernel(
    const std::vector<diffop::PolyQ>& basis) {
    using diffop::PolyQ;
    using diffop::RationalFn;
    const int m = static_cast<int>(basis.size());
    if (m < 1 || m > kMaxOrder)
        throw ConfigError("wronskian", "operator_from_polynomial_kernel",
                          "basis size must be between 1 and " + std::to_string(kMaxOrder));
    // rows r = 0..m of the derivative matrix, columns = basis members
    std::vector<std::vector<PolyQ>> rows(m + 1, std::vector<PolyQ>(m));
    for (int i = 0; i < m; ++i) {
        PolyQ d = basis[i];
        for (int r = 0; r <= m; ++r) {
            rows[r][i] = d;
            d = d.derivative();
        }
    }
    // Laplace-expansion determinant of a polynomial matrix.
    std::function<PolyQ(const std::vector<std::vector<PolyQ>>&)> det =
        [&](const std::vector<std::vector<PolyQ>>& a) -> PolyQ {
        const int n = static_cast<int>(a.size());
        if (n == 1) return a[0][0];
        PolyQ acc;
        for (int c = 0; c < n; ++c) {
            if (a[0][c].is_zero()) continue;
            std::vector<std::vector<PolyQ>> minor(n - 1, std::vector<PolyQ>(n - 1));
            for (int r = 1; r < n; ++r) {
                int cc = 0;
                for (int k = 0; k < n; ++k) {
                    if (k == c) continue;
                    minor[r - 1][cc++] = a[r][k];
                }
            }
            const PolyQ term = a[0][c] * det(minor);
            acc = (c % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
    };
    // D_r = det of the matrix with row r removed; c_k = (-1)^{m+k} D_k / D_m.
    std::vector<PolyQ> minors(m + 1);
    for (int r = 0; r <= m; ++r) {
        std::vector<std::vector<PolyQ>> sub;
        sub.reserve(m);
        for (int rr = 0; rr <= m; ++rr)
            if (rr != r) sub.push_back(rows[rr]);
        minors[r] = det(sub);
    }
    if (minors[m].is_zero())
        throw DegeneracyError("wronskian", "operator_from_polynomial_kernel",
                              "basis is linearly dependent (Wronskian is the zero polynomial)");
    std::vector<RationalFn> coeffs(m);
    for (int k = 0; k < m; ++k) {
        RationalFn c(minors[k], minors[m]);
        if ((m + k) % 2 != 0) c = -c;
        coeffs[k] = c;
    }
    return coeffs;
}

}  // namespace intlab::wronskian
