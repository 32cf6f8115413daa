#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace intlab::numerics {

using cplx = std::complex<double>;

// Uniform periodic grid on [a, b): x_j = a + j*h, h = (b-a)/n, b excluded.
struct Grid1D {
    int n = 0;
    double a = 0.0;
    double b = 0.0;

    Grid1D() = default;
    Grid1D(int n_, double a_, double b_);

    double h() const { return (b - a) / n; }
    double length() const { return b - a; }
    double x(int j) const { return a + j * h(); }
    bool operator==(const Grid1D&) const = default;
};

// Complex samples on a periodic grid.
struct SampledField {
    Grid1D grid;
    std::vector<cplx> values;

    SampledField() = default;
    SampledField(Grid1D g, std::vector<cplx> v);
    static SampledField from_function(const Grid1D& g, const std::function<cplx(double)>& f);

    double max_abs() const;
};

// Spectral coefficients indexed by integer wavenumber k in {-n/2, ..., n/2-1}.
// Stored in FFT-natural order (0, 1, ..., n/2-1, -n/2, ..., -1).
struct SpectralField {
    Grid1D grid;
    std::vector<cplx> coeff;

    cplx& at(int k);
    const cplx& at(int k) const;
    int kmin() const { return -grid.n / 2; }
    int kmax() const { return grid.n / 2 - 1; }
    // Physical wavenumber of mode k on this grid's period.
    double wavenumber(int k) const;
    // Evaluate the trigonometric interpolant at an arbitrary point (exact for
    // band-limited data).
    cplx eval(double x) const;
};

// Forward transform with 1/n normalization: coeff(k) = (1/n) sum_j v_j e^{-2πi jk/n}.
// n must be even; power-of-two sizes take the fast path.
SpectralField dft(const SampledField& field);
SampledField idft(const SpectralField& spec);

// Spectral differentiation; the Nyquist mode -n/2 is zeroed.
SampledField spectral_derivative(const SampledField& field, int order);

// Antiderivative with zero mean fixed to value 0 at the leftmost grid point.
// Requires the k=0 coefficient magnitude below mean_tol (periodicity).
SampledField spectral_antiderivative(const SampledField& field, double mean_tol = 1e-10);

// Central finite-difference stencil weights for derivative `order` with the
// given even accuracy, on offsets -r..r (Fornberg's recurrence).
std::vector<double> central_stencil(int order, int accuracy);

// Periodic central-difference derivative of declared accuracy in {2,4,6,8}.
SampledField fd_derivative(const SampledField& field, int order, int accuracy);

// Derivative of a callable at a point from a symmetric stencil of spacing h.
double fd_derivative_at(const std::function<double(double)>& f, double x, int order,
                        int accuracy, double h);
cplx fd_derivative_at(const std::function<cplx(double)>& f, double x, int order, int accuracy,
                      double h);

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

struct IntegratorConfig {
    double dt = 1e-3;
    enum class Method { rk4_fixed, rkf45_adaptive } method = Method::rk4_fixed;
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    long max_steps = 50'000'000;

    void validate() const;
};

// One classical RK4 step. Throws SingularityError on non-finite rhs values.
std::vector<double> rk4_step(const OdeRhs& rhs, std::span<const double> state, double t,
                             double dt);

// Integrate from t0 to t1, invoking observe(t, state) after every accepted
// step (and once at t0). Fixed RK4 or adaptive RKF45 with PI step control
// per config.
void integrate(const OdeRhs& rhs, std::vector<double>& state, double t0, double t1,
               const IntegratorConfig& config,
               const std::function<void(double, std::span<const double>)>& observe = {});

// Adaptive Simpson quadrature. Endpoint values that are not finite are
// treated as 0 and resolved by subdivision (integrable 1/sqrt endpoints).
double quadrature(const std::function<double(double)>& f, double a, double b, double tol);

// Safeguarded Newton within a bracket [lo, hi] with f(lo), f(hi) of opposite
// sign; falls back to bisection whenever the Newton step leaves the bracket.
double solve_bracketed(const std::function<double(double)>& f,
                       const std::function<double(double)>& df, double lo, double hi,
                       double tol, int max_iter = 200);

}  // namespace intlab::numerics
