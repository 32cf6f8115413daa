#pragma once

#include <array>
#include <string>

#include "intlab/numerics.hpp"

namespace intlab::resonance {

// --- Jacobi elliptic functions (descending Landen / AGM) -------------------------

struct JacobiTriple {
    double sn = 0.0;
    double cn = 1.0;
    double dn = 1.0;
};

// Parameter convention: m is the parameter (m = k^2), m in [0, 1).
JacobiTriple jacobi(double u, double m);
double elliptic_K(double m);
// Principal inverse of sn on [-K, K] for s in [-1, 1].
double inverse_sn(double s, double m);

// --- resonant triad ---------------------------------------------------------------

// da_i/dt = c_i a_j a_k. Planetary mode derives c_i from the wave constants
// (n2-n3)/n1 and cyclic; generic mode takes the couplings directly.
class TriadSystem {
public:
    enum class Mode { planetary, generic };

    static TriadSystem planetary(double n1, double n2, double n3);
    static TriadSystem generic(double c1, double c2, double c3);

    Mode mode() const { return mode_; }
    const std::array<double, 3>& wave_numbers() const { return n_; }
    const std::array<double, 3>& couplings() const { return c_; }

    std::array<double, 3> rhs(const std::array<double, 3>& a) const;

    // Planetary mode: energy and enstrophy. Generic mode: the two quadratic
    // combinations a1^2/c1 - a2^2/c2 and a2^2/c2 - a3^2/c3.
    std::array<double, 2> invariants(const std::array<double, 3>& a) const;

    numerics::OdeRhs ode() const;

private:
    Mode mode_ = Mode::generic;
    std::array<double, 3> n_{};
    std::array<double, 3> c_{};
};

// --- closed-form elliptic solution -------------------------------------------------

struct EllipticParams {
    double b_cn = 0.0;  // amplitude of the cn component
    double b_dn = 0.0;
    double b_sn = 0.0;
    double t0 = 1.0;      // time scale
    double lambda = 0.0;  // phase: slot argument is t/t0 - lambda
    double m = 0.0;       // modulus parameter
    // assignment[s] = original component index living in slot s (cn, dn, sn)
    std::array<int, 3> assignment{0, 1, 2};
};

class ClosedForm {
public:
    ClosedForm(EllipticParams params);

    const EllipticParams& params() const { return p_; }
    std::array<double, 3> eval(double t) const;  // original component order
    double period() const;                       // 4 K(m) t0

private:
    EllipticParams p_;
};

// Derives the elliptic parameters from the two quadratic invariants plus the
// derivative matching conditions, then fixes the phase at t = 0. Degenerate
// strata (separatrix, equilibria) are refused with the failing inequality.
ClosedForm closed_form(const TriadSystem& sys, const std::array<double, 3>& a0);

// --- resonant quartet ---------------------------------------------------------------

class QuartetSystem {
public:
    explicit QuartetSystem(const std::array<double, 4>& couplings);

    const std::array<double, 4>& couplings() const { return c_; }
    std::array<double, 4> rhs(const std::array<double, 4>& a) const;
    // Manley-Rowe-type differences A_i^2/c_i - A_{i+1}^2/c_{i+1}, i = 1..3.
    std::array<double, 3> invariants(const std::array<double, 4>& a) const;
    numerics::OdeRhs ode() const;

private:
    std::array<double, 4> c_{};
};

}  // namespace intlab::resonance
