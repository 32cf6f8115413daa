#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "intlab/numerics.hpp"

namespace intlab::threebody {

using cplx = std::complex<double>;

// Pair force density as a function of the squared separation s = |z|^2.
// Convention: f(s) < 0 pulls bodies together (attractive), f(s) > 0 pushes
// them apart. F is an antiderivative of f (checked numerically).
struct ForceLaw {
    std::function<double(double)> f;
    std::function<double(double)> F;
    std::string label;

    void validate() const;

    static ForceLaw power(double coeff, double exponent);  // f(s) = coeff s^exponent
    static ForceLaw newton_like(double coeff = -1.0);      // f(s) = coeff / s^{3/2}
    static ForceLaw poincare(double sigma);                // f(s) = sigma / s^2
};

struct ThreeBodyState {
    std::array<cplx, 3> z{};
    std::array<cplx, 3> v{};
    double t = 0.0;

    void enforce_com_gauge();
    void require_com_gauge(double tol = 1e-12) const;
};

// Pairwise accelerations z_j'' = sum_k (z_j - z_k) f(|z_j - z_k|^2); a
// pairwise distance below 1e-8 raises SingularityError with time and pair.
std::array<cplx, 3> accelerations(const ThreeBodyState& s, const ForceLaw& law);

double min_pair_distance(const ThreeBodyState& s);
double inertia(const ThreeBodyState& s);  // Z = sum |z_jk|^2

struct MonitorReport {
    cplx com_velocity;
    double energy = 0.0;            // sum |v_j|^2 - sum F(|z_jk|^2)
    double angular_momentum = 0.0;  // Im sum v_j conj(z_j)
    double inertia = 0.0;
    double lagrange_jacobi_residual = 0.0;  // FD-gradient check of the virial identity
};

MonitorReport monitors(const ThreeBodyState& s, const ForceLaw& law);

// Half the second time derivative of Z, evaluated from the dynamics:
//   (1/2) Z'' = sum_pairs |v_j - v_k|^2 + 3 sum_pairs f_jk |z_jk|^2.
double inertia_convexity_expression(const ThreeBodyState& s, const ForceLaw& law);

void integrate(ThreeBodyState& s, const ForceLaw& law, double T,
               const numerics::IntegratorConfig& config,
               const std::function<void(const ThreeBodyState&)>& observe = {});

struct ConvexityAudit {
    double min_value = 0.0;
    bool strictly_positive = false;
};

// Tracks the convexity expression along a trajectory of a repulsive law;
// refuses laws that turn nonpositive on the visited range.
ConvexityAudit repulsion_convexity_audit(ThreeBodyState s, const ForceLaw& law, double T,
                                         const numerics::IntegratorConfig& config);

struct LagrangeOrbit {
    ThreeBodyState initial;
    double omega = 0.0;
    double period = 0.0;
};

// Equilateral relative equilibrium of side `side`: bodies on a circle of
// radius side/sqrt(3), angular speed omega^2 = -3 f(side^2). Requires an
// attractive law.
LagrangeOrbit lagrange_orbit(const ForceLaw& law, double side);

struct DistanceReport {
    double max_mutual_spread = 0.0;     // max over t of max_ij |d_i - d_j|
    double max_deviation_from = 0.0;    // max over t of |d_i - side|
};

DistanceReport track_distances(ThreeBodyState s, const ForceLaw& law, double T,
                               const numerics::IntegratorConfig& config, double side);

// Rigid-rotation initial data v_j = i lambda z_j with lambda chosen to zero
// the energy (needs sigma < 0). Leaves dZ/dt = 0 as well.
ThreeBodyState rotational_zero_energy_data(const std::array<cplx, 3>& positions, double sigma);

struct InertiaStudy {
    double energy = 0.0;
    double inertia_drift = 0.0;    // max |Z(t) - Z(0)|
    double curvature = 0.0;        // measured d^2Z/dt^2 (constant = 6 E for sigma/s^2)
    bool conserved = false;
};

// For f(s) = sigma/s^2 the virial identity gives Z'' = 6E exactly: Z is
// conserved on E = 0 (with dZ/dt(0) = 0) and grows as 3Et^2 otherwise.
InertiaStudy poincare_inertia_study(ThreeBodyState s, double sigma, double T,
                                    const numerics::IntegratorConfig& config);

// --- collinear inverse-square gas (one-dimensional reduction) ---------------------

// x_i'' = -dU/dx_i with U = sum_{i<j} (x_i - x_j)^{-2}, i.e. repulsive
// accelerations sum_{j != i} 2 (x_i - x_j)^{-3}.
std::vector<double> calogero_accelerations(std::span<const double> x);

struct CalogeroRun {
    std::vector<double> x_final;
    std::vector<double> v_final;
    double energy_drift = 0.0;
    double momentum_drift = 0.0;
    bool ordering_preserved = true;
};

CalogeroRun calogero_run(std::vector<double> x0, std::vector<double> v0, double T,
                         const numerics::IntegratorConfig& config);

double calogero_energy(std::span<const double> x, std::span<const double> v);

// --- symmetric two-body reduction ---------------------------------------------------

struct SymmetricReduction {
    double max_center_drift = 0.0;  // max |z_1(t)|
    double max_reduced_gap = 0.0;   // max |z_2(t) - reduced-orbit z(t)|
    std::vector<double> ts;
    std::vector<cplx> z2;
};

// Data with z1 = v1 = 0, z3 = -z2, v3 = -v2 keeps the first body pinned at
// the origin; the outer pair obeys z'' = z (f(|z|^2) + 2 f(4|z|^2)). Both
// facts are verified against the full integration.
SymmetricReduction two_body_reduce(cplx z2, cplx v2, const ForceLaw& law, double T,
                                   const numerics::IntegratorConfig& config);

}  // namespace intlab::threebody
