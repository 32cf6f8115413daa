#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "intlab/numerics.hpp"

namespace intlab::spectral {

using numerics::cplx;
using numerics::SampledField;

// --- periodic heat flow --------------------------------------------------------

// Spectral propagator: mode k decays by exp(-kappa^2 nu t). Exact for
// band-limited initial data; t < 0 is rejected as ill-posed.
SampledField heat_solve(const SampledField& u0, double t, double diffusivity = 1.0);

// --- Burgers u_t = 2 u u_x + eps u_xx -------------------------------------------

// Linearizing pipeline: u0 -> w0 = exp(∫u0/eps) -> heat flow with diffusivity
// eps -> u = eps w_x / w. Requires real zero-mean u0.
SampledField burgers_solve(const SampledField& u0, double t, double eps = 1.0);

// Largest fixed RK4 step that keeps the stiffest mode stable.
double burgers_stable_dt(const numerics::Grid1D& grid, double eps);

// Independent oracle: fixed-step RK4 in physical space with spectral
// derivatives.
SampledField burgers_direct(const SampledField& u0, double t, double eps, double dt);

// Trigonometric interpolation of a solver snapshot at arbitrary x.
std::function<double(double)> periodic_interpolant(const SampledField& field);

// --- dispersion analysis ---------------------------------------------------------

// P(d/dt, d/dx) = sum coeff * dt^{a} dx^{b} (space_dims = 1), or exponent
// tuples over several space variables.
struct DispersionSpec {
    struct Term {
        int dt_order = 0;
        std::vector<int> dx_orders;  // one entry per space dimension
        double coeff = 0.0;
    };
    std::vector<Term> terms;
    int space_dims = 1;

    void validate() const;  // needs space_dims >= 1 and a term with dt_order >= 1
    int omega_degree() const;
};

// Parses one-dimensional forms such as "ut - uxxx" or "utt - 4*uxx".
DispersionSpec parse_dispersion(const std::string& text);

struct DispersionResult {
    std::vector<double> ks;
    // branches[b][i] = omega_b(ks[i]), matched by continuity in k
    std::vector<std::vector<cplx>> branches;
    // second derivative of Re(omega) per branch at interior samples
    std::vector<std::vector<double>> omega_dd;
    std::vector<double> max_abs_omega_dd;  // per branch
    bool dispersive = false;
    bool crossing_warning = false;
};

// Samples omega branches over [k_lo, k_hi] via companion-matrix eigenvalues
// and classifies: dispersive iff some branch keeps |omega''| > tol on a run
// of consecutive samples.
DispersionResult dispersion_relation(const DispersionSpec& spec, double k_lo, double k_hi,
                                     int samples, double tol = 1e-6);

// Two space dimensions: det of the FD Hessian of the branch through omega_ref
// at (k1, k2).
double dispersion_hessian_det(const DispersionSpec& spec, double k1, double k2, cplx omega_ref,
                              double h = 1e-3);

// --- closed-form residual checker -------------------------------------------------

struct PDETerms {
    double x = 0.0;
    double t = 0.0;
    cplx u;
    std::vector<cplx> dx;  // dx[k-1] = k-th spatial derivative
};

struct PDESpec {
    int max_order = 1;
    bool i_ut = false;  // true: i u_t = rhs(u); false: u_t = rhs(u)
    std::function<cplx(const PDETerms&)> rhs;
    std::string label;
};

PDESpec kdv_spec();                // u_t = 6 u u_x + u_xxx
PDESpec nls_spec(int sign);        // i u_t = u_xx + sign |u|^2 u
PDESpec heat_spec();               // u_t = u_xx
PDESpec burgers_spec(double eps);  // u_t = 2 u u_x + eps u_xx

using Candidate = std::function<cplx(double x, double t)>;

// Max |lhs - rhs| over an n x n space-time grid, all derivatives replaced by
// central stencils of the given accuracy with spacing h.
double pde_residual(const PDESpec& spec, const Candidate& cand, double x0, double x1, double t0,
                    double t1, int n, int accuracy, double h);

// Residuals under stencil-spacing halving; ratios expose the declared order.
std::vector<double> pde_residual_convergence(const PDESpec& spec, const Candidate& cand,
                                             double x0, double x1, double t0, double t1, int n,
                                             int accuracy, double h, int levels);

// --- Jost function from its Volterra integral equation ----------------------------

struct JostProblem {
    std::function<double(double)> potential;  // vanishes outside [x_l, x_r]
    double x_l = -1.0;
    double x_r = 1.0;
    double k = 1.0;     // real spectral parameter, nonzero
    double pad = 2.0;   // grid extends to [x_l - pad, x_r + pad]
    int n = 8001;       // grid points

    void validate() const;
};

// Kernel conventions: the integral-equation kernel as printed with a real
// exponent, (1 - e^{2k(x-x')})/(2k), or the oscillatory variant with 2ik.
// The two produce different solutions; each has a matching ODE oracle.
enum class JostConvention { printed_real, oscillatory };

struct JostSolution {
    std::vector<double> xs;
    std::vector<cplx> phi;
    double contraction_bound = 0.0;  // ||u||_1 * sup|kernel|
    int sweeps = 0;
    std::vector<double> sweep_gaps;  // sup-norm gaps between Neumann iterates
};

JostSolution jost_solve(const JostProblem& prob, JostConvention conv = JostConvention::printed_real);

// Backward RK4 integration of the equivalent ODE with phi = 1, phi' = 0 on
// the right: phi'' = 2k phi' + u phi (printed_real) or phi'' = 2ik phi' + u phi
// (oscillatory). Returns phi on the problem grid.
std::vector<cplx> jost_ode_oracle(const JostProblem& prob, JostConvention conv);

}  // namespace intlab::spectral
