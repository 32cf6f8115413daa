#pragma once

#include <functional>
#include <vector>

#include "intlab/numerics.hpp"

namespace intlab::transforms {

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

// --- quadrature reduction of y'' = f(y) --------------------------------------

// Table of the reduction x(y) = x_anchor + sign * ∫ dy / sqrt(2(F(y)+E)) with
// its monotone inverse. F must be an antiderivative of f; the radicand
// 2(F+E) must be positive strictly inside [y_lo, y_hi] (integrable 1/sqrt
// turning points at the endpoints are allowed).
class QuadratureTable {
public:
    QuadratureTable(Fn1 F, double E, double y_lo, double y_hi, int sign, double x_anchor,
                    int nodes, double tol);

    double x_at(double y) const;
    double y_at(double x) const;
    double x_min() const;
    double x_max() const;
    const std::vector<double>& node_y() const { return ys_; }
    const std::vector<double>& node_x() const { return xs_; }

private:
    double speed(double y) const;  // 1 / sqrt(2(F+E))
    Fn1 F_;
    double E_;
    int sign_;
    double tol_;
    std::vector<double> ys_, xs_;
};

QuadratureTable quadrature_reduce(const Fn1& f, const Fn1& F, double y_lo, double y_hi,
                                  double E, int sign, double x_anchor, int nodes = 256,
                                  double tol = 1e-10);

// --- hodograph solution of u_t = 2 u u_x -------------------------------------

// Initial-data profile x = phi(u) with a strictly monotone phi.
struct MonotoneProfile {
    Fn1 phi;
    Fn1 dphi;
    double u_lo = 0.0;
    double u_hi = 1.0;

    // Sampled monotonicity check; returns the direction (+1 or -1).
    int validate(int samples = 1024) const;
};

// First gradient catastrophe: min phi'(u)/2 for increasing profiles,
// +infinity otherwise.
double breaking_time(const MonotoneProfile& profile, int samples = 1024);

struct HodographPoint {
    double u = 0.0;
    double residual = 0.0;  // |phi(u) - 2 t u - x|
};

// Solves phi(u) - 2 t u - x = 0. Exactly one root is demanded: several roots
// raise ShockFormedError (with every bracketed root), none raise DomainError.
HodographPoint hodograph_solve(const MonotoneProfile& profile, double x, double t);

// --- Thomas equation ----------------------------------------------------------

struct ThomasParams {
    double alpha = 0.0;
    double beta = 0.0;
    double k1 = 0.0;
    double k2() const { return -(k1 + alpha); }
};

// psi -> theta = e^psi; theta -> psi = log theta (theta must stay positive;
// evaluations at nonpositive theta raise PositivityError).
Fn2 thomas_linearize(const Fn2& psi);
Fn2 thomas_delinearize(const Fn2& theta);

// Interior max residual of psi_xy + alpha psi_x + beta psi_y + psi_x psi_y
// on an n x n grid over [x0,x1] x [y0,y1] with central stencils.
double thomas_residual(const Fn2& psi, double alpha, double beta, double x0, double x1,
                       double y0, double y1, int n, int accuracy);
// Same for the linear equation theta_xy + alpha theta_x + beta theta_y.
double thomas_linear_residual(const Fn2& theta, double alpha, double beta, double x0, double x1,
                              double y0, double y1, int n, int accuracy);

// General solution phi(x,y) = fhat(y) + e^{k2 y} h(x) of the beta = 0 case;
// beta != 0 is rejected as unsupported.
Fn2 thomas_general_solution(const ThomasParams& params, const Fn1& fhat, const Fn1& h);

// Residual of phi_xy + (k1 + alpha) phi_x.
double thomas_reduced_residual(const Fn2& phi, const ThomasParams& params, double x0, double x1,
                               double y0, double y1, int n, int accuracy);

// --- Cole-Hopf pair -----------------------------------------------------------

// u = w_x / w for a strictly positive periodic field (spectral derivative).
numerics::SampledField cole_hopf(const numerics::SampledField& w);

// w = exp(∫ u dx) normalized to w = 1 at the leftmost grid point. u must have
// zero mean (periodicity of w); the offending mean is reported otherwise.
numerics::SampledField inverse_cole_hopf(const numerics::SampledField& u,
                                         double mean_tol = 1e-10);

// --- viscosity scaling for u_t = 2 u u_x + eps u_xx ---------------------------

// Solution map sending viscosity-eps solutions to unit-viscosity ones:
//   utilde(x, t~) = u(x, t~/eps) / eps.
// Space is untouched; amplitude divides by eps and time dilates by eps.
struct BurgersScaling {
    double eps = 1.0;

    double map_amplitude(double u) const { return u / eps; }
    double map_time(double t) const { return eps * t; }
    BurgersScaling inverse() const { return BurgersScaling{1.0 / eps}; }
    BurgersScaling compose(const BurgersScaling& inner) const {
        return BurgersScaling{eps * inner.eps};
    }
};

BurgersScaling scale_burgers(double eps);  // eps = 0 is rejected

// --- reduction of u_t = phi(u) u_x to v_t = v v_x ------------------------------

// v(x,t) = phi(u(x,t)).
Fn2 reduce_to_inviscid(const Fn1& phi, const Fn2& u);

// Interior max residual of v_t - v v_x for a space-time callable.
double inviscid_residual(const Fn2& v, double x0, double x1, double t0, double t1, int n,
                         int accuracy);

}  // namespace intlab::transforms
