#include "intlab/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "intlab/errors.hpp"

namespace intlab::resonance {

namespace {
constexpr double kDegenerate = 1e-10;
}

JacobiTriple jacobi(double u, double m) {
    if (!(m >= 0.0) || !(m < 1.0))
        throw DomainError("resonance", "jacobi", "modulus parameter must lie in [0, 1)");
    if (m < 1e-15) return {std::sin(u), std::cos(u), 1.0};

    // descending Landen (AGM) scale chain
    std::array<double, 32> a{}, c{};
    a[0] = 1.0;
    c[0] = std::sqrt(m);
    double b = std::sqrt(1.0 - m);
    int nlev = 0;
    while (std::abs(c[nlev]) > 1e-16 * a[nlev] && nlev + 1 < 32) {
        const double an = 0.5 * (a[nlev] + b);
        const double cn1 = 0.5 * (a[nlev] - b);
        b = std::sqrt(a[nlev] * b);
        ++nlev;
        a[nlev] = an;
        c[nlev] = cn1;
    }
    double phi = std::ldexp(1.0, nlev) * a[nlev] * u;
    double phi_prev = phi;  // phi_{n} before the last backward step
    for (int n = nlev; n >= 1; --n) {
        const double s = std::clamp(c[n] / a[n] * std::sin(phi), -1.0, 1.0);
        const double next = 0.5 * (phi + std::asin(s));
        phi_prev = phi;
        phi = next;
    }
    JacobiTriple out;
    out.sn = std::sin(phi);
    out.cn = std::cos(phi);
    const double denom = std::cos(phi_prev - phi);
    out.dn = (std::abs(denom) < 1e-14) ? std::sqrt(1.0 - m * out.sn * out.sn)
                                       : out.cn / denom;
    return out;
}

double elliptic_K(double m) {
    if (!(m >= 0.0) || !(m < 1.0))
        throw DomainError("resonance", "elliptic_K", "modulus parameter must lie in [0, 1)");
    double a = 1.0, b = std::sqrt(1.0 - m);
    // AGM converges quadratically; the cap guards against 1-ulp oscillation
    for (int it = 0; it < 64 && std::abs(a - b) > 4e-16 * a; ++it) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return std::numbers::pi / (2.0 * a);
}

double inverse_sn(double s, double m) {
    if (!(s >= -1.0 && s <= 1.0))
        throw DomainError("resonance", "inverse_sn", "argument must lie in [-1, 1]");
    const double K = elliptic_K(m);
    if (s == 1.0) return K;
    if (s == -1.0) return -K;
    return numerics::solve_bracketed(
        [&](double t) { return jacobi(t, m).sn - s; },
        [&](double t) {
            const auto j = jacobi(t, m);
            return j.cn * j.dn;
        },
        -K, K, 1e-14);
}

// --- triad ---------------------------------------------------------------------

TriadSystem TriadSystem::planetary(double n1, double n2, double n3) {
    if (!(n1 > 0.0 && n2 > 0.0 && n3 > 0.0))
        throw ConfigError("resonance", "triad", "planetary constants must be positive");
    TriadSystem sys;
    sys.mode_ = Mode::planetary;
    sys.n_ = {n1, n2, n3};
    sys.c_ = {(n2 - n3) / n1, (n3 - n1) / n2, (n1 - n2) / n3};
    return sys;
}

TriadSystem TriadSystem::generic(double c1, double c2, double c3) {
    if (c1 == 0.0 || c2 == 0.0 || c3 == 0.0)
        throw ConfigError("resonance", "triad", "generic couplings must be nonzero");
    TriadSystem sys;
    sys.mode_ = Mode::generic;
    sys.c_ = {c1, c2, c3};
    return sys;
}

std::array<double, 3> TriadSystem::rhs(const std::array<double, 3>& a) const {
    return {c_[0] * a[1] * a[2], c_[1] * a[0] * a[2], c_[2] * a[0] * a[1]};
}

std::array<double, 2> TriadSystem::invariants(const std::array<double, 3>& a) const {
    if (mode_ == Mode::planetary) {
        const double energy = n_[0] * a[0] * a[0] + n_[1] * a[1] * a[1] + n_[2] * a[2] * a[2];
        const double enstrophy = n_[0] * n_[0] * a[0] * a[0] + n_[1] * n_[1] * a[1] * a[1] +
                                 n_[2] * n_[2] * a[2] * a[2];
        return {energy, enstrophy};
    }
    return {a[0] * a[0] / c_[0] - a[1] * a[1] / c_[1],
            a[1] * a[1] / c_[1] - a[2] * a[2] / c_[2]};
}

numerics::OdeRhs TriadSystem::ode() const {
    const std::array<double, 3> c = c_;
    return [c](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = c[0] * y[1] * y[2];
        dy[1] = c[1] * y[0] * y[2];
        dy[2] = c[2] * y[0] * y[1];
    };
}

// --- closed form ------------------------------------------------------------------

ClosedForm::ClosedForm(EllipticParams params) : p_(params) {}

std::array<double, 3> ClosedForm::eval(double t) const {
    const double tau = t / p_.t0 - p_.lambda;
    const auto j = jacobi(tau, p_.m);
    std::array<double, 3> out{};
    out[p_.assignment[0]] = p_.b_cn * j.cn;
    out[p_.assignment[1]] = p_.b_dn * j.dn;
    out[p_.assignment[2]] = p_.b_sn * j.sn;
    return out;
}

double ClosedForm::period() const { return 4.0 * elliptic_K(p_.m) * p_.t0; }

namespace {

struct SlotData {
    std::array<int, 3> idx;   // original indices in (cn, dn, sn) slots
    std::array<double, 3> A;  // initial amplitudes in slot order
    std::array<double, 3> C;  // couplings in slot order
    std::array<double, 3> R;  // initial rates in slot order
};

// Substituting (b1 cn, b2 dn, b3 sn)(t/t0 - lambda) into the slot equations
// A1' = C1 A2 A3, A2' = C2 A1 A3, A3' = C3 A1 A2 forces
//   b1 = -C1 b2 b3 t0,  m b2 = -C2 b1 b3 t0,  b3 = C3 b1 b2 t0,
// and matching the two quadratic invariants of the data pins the squares:
//   b3^2 = A3^2 - (C3/C1) A1^2,   t0^2 = 1 / (C1 (C2 A3^2 - C3 A2^2)),
//   b1^2 = -(C1/C3) b3^2,         b2^2 = -1 / (C1 C3 t0^2),  m = C1 C2 b3^2 t0^2.
std::optional<EllipticParams> try_assignment(const SlotData& s, std::string& why) {
    const double beta_sn = s.A[2] * s.A[2] - (s.C[2] / s.C[0]) * s.A[0] * s.A[0];
    if (!(beta_sn > kDegenerate)) {
        why = "sn amplitude squared " + std::to_string(beta_sn) + " <= 0";
        return std::nullopt;
    }
    const double denom = s.C[0] * (s.C[1] * s.A[2] * s.A[2] - s.C[2] * s.A[1] * s.A[1]);
    if (!(denom > kDegenerate)) {
        why = "time-scale denominator " + std::to_string(denom) + " <= 0";
        return std::nullopt;
    }
    const double t0_sq = 1.0 / denom;
    const double beta_cn = -(s.C[0] / s.C[2]) * beta_sn;
    if (!(beta_cn > kDegenerate)) {
        why = "cn amplitude squared " + std::to_string(beta_cn) + " <= 0";
        return std::nullopt;
    }
    const double beta_dn = -1.0 / (s.C[0] * s.C[2] * t0_sq);
    if (!(beta_dn > kDegenerate)) {
        why = "dn amplitude squared " + std::to_string(beta_dn) + " <= 0";
        return std::nullopt;
    }
    const double m = s.C[0] * s.C[1] * beta_sn * t0_sq;
    if (!(m >= 0.0)) {
        why = "modulus " + std::to_string(m) + " < 0";
        return std::nullopt;
    }
    if (m >= 1.0 - kDegenerate) {
        why = "modulus " + std::to_string(m) + " within 1e-10 of the separatrix";
        return std::nullopt;
    }

    EllipticParams p;
    p.t0 = std::sqrt(t0_sq);
    p.m = m;
    // dn never vanishes, so its sign is pinned by the data
    if (s.A[1] == 0.0) {
        why = "dn-slot amplitude vanishes at t = 0";
        return std::nullopt;
    }
    p.b_dn = std::copysign(std::sqrt(beta_dn), s.A[1]);
    // m b2 = -C2 b1 b3 t0 fixes sign(b1 b3)
    const double sign_b1b3 = -((m * p.b_dn) / (s.C[1] * p.t0) > 0 ? 1.0 : -1.0);

    const double scale =
        std::max({1.0, std::abs(s.A[0]), std::abs(s.A[1]), std::abs(s.A[2])});
    const double rate_scale =
        std::max({1.0, std::abs(s.R[0]), std::abs(s.R[1]), std::abs(s.R[2])});
    const double K = elliptic_K(m);
    for (double s1 : {1.0, -1.0}) {
        const double b_cn = s1 * std::sqrt(beta_cn);
        const double b_sn = sign_b1b3 * s1 * std::sqrt(beta_sn);
        const double z = s.A[2] / b_sn;
        if (!(z >= -1.0 && z <= 1.0)) continue;
        const double tau_a = inverse_sn(z, m);
        for (double tau0 : {tau_a, 2.0 * K - tau_a}) {
            const auto j = jacobi(tau0, m);
            const double e_cn = std::abs(b_cn * j.cn - s.A[0]);
            const double e_dn = std::abs(p.b_dn * j.dn - s.A[1]);
            const double e_sn = std::abs(b_sn * j.sn - s.A[2]);
            if (e_cn + e_dn + e_sn >= 1e-9 * scale) continue;
            // the flow direction must match too, not only the values
            const double r_cn = -b_cn * j.sn * j.dn / p.t0;
            const double r_dn = -m * p.b_dn * j.sn * j.cn / p.t0;
            const double r_sn = b_sn * j.cn * j.dn / p.t0;
            if (std::abs(r_cn - s.R[0]) + std::abs(r_dn - s.R[1]) +
                    std::abs(r_sn - s.R[2]) >=
                1e-8 * rate_scale)
                continue;
            p.b_cn = b_cn;
            p.b_sn = b_sn;
            p.lambda = -tau0;
            p.assignment = s.idx;
            return p;
        }
    }
    why = "no phase matches the initial data (sign-inconsistent stratum)";
    return std::nullopt;
}

}  // namespace

ClosedForm closed_form(const TriadSystem& sys, const std::array<double, 3>& a0) {
    const auto& c = sys.couplings();
    // Assignment preference: the component smallest in magnitude at t = 0
    // takes the sn slot (sn is the vanishing slot); remaining orders are
    // tried by increasing magnitude mismatch.
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return std::abs(a0[i]) < std::abs(a0[j]); });
    std::vector<std::array<int, 3>> candidates;  // (cn, dn, sn) index triples
    candidates.push_back({order[1], order[2], order[0]});
    candidates.push_back({order[2], order[1], order[0]});
    // fall-back assignments with other components in the sn slot
    candidates.push_back({order[0], order[2], order[1]});
    candidates.push_back({order[2], order[0], order[1]});
    candidates.push_back({order[0], order[1], order[2]});
    candidates.push_back({order[1], order[0], order[2]});

    const auto rates = sys.rhs(a0);
    std::string first_reason;
    for (const auto& idx : candidates) {
        SlotData s;
        s.idx = idx;
        for (int slot = 0; slot < 3; ++slot) {
            s.A[slot] = a0[idx[slot]];
            s.C[slot] = c[idx[slot]];
            s.R[slot] = rates[idx[slot]];
        }
        std::string why;
        if (auto p = try_assignment(s, why)) {
            ClosedForm cf(*p);
            // postcondition: the triple reproduces both invariants of the data
            const auto ref = sys.invariants(a0);
            for (double t : {0.0, 0.37 * cf.period(), 0.81 * cf.period()}) {
                const auto inv = sys.invariants(cf.eval(t));
                const double scale = std::max({1.0, std::abs(ref[0]), std::abs(ref[1])});
                if (std::abs(inv[0] - ref[0]) > 1e-10 * scale ||
                    std::abs(inv[1] - ref[1]) > 1e-10 * scale)
                    throw NumericalError("resonance", "closed_form",
                                         "constructed solution violates the invariants");
            }
            return cf;
        }
        if (first_reason.empty()) first_reason = why;
    }
    throw DegeneracyError("resonance", "closed_form",
                          "no elliptic parameterization fits this data: " + first_reason);
}

// --- quartet ----------------------------------------------------------------------

QuartetSystem::QuartetSystem(const std::array<double, 4>& couplings) : c_(couplings) {
    for (double c : c_)
        if (c == 0.0)
            throw ConfigError("resonance", "quartet", "couplings must be nonzero");
}

std::array<double, 4> QuartetSystem::rhs(const std::array<double, 4>& a) const {
    return {c_[0] * a[1] * a[2] * a[3], c_[1] * a[0] * a[2] * a[3],
            c_[2] * a[0] * a[1] * a[3], c_[3] * a[0] * a[1] * a[2]};
}

std::array<double, 3> QuartetSystem::invariants(const std::array<double, 4>& a) const {
    const auto q = [&](int i) { return a[i] * a[i] / c_[i]; };
    return {q(0) - q(1), q(1) - q(2), q(2) - q(3)};
}

numerics::OdeRhs QuartetSystem::ode() const {
    const std::array<double, 4> c = c_;
    return [c](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = c[0] * y[1] * y[2] * y[3];
        dy[1] = c[1] * y[0] * y[2] * y[3];
        dy[2] = c[2] * y[0] * y[1] * y[3];
        dy[3] = c[3] * y[0] * y[1] * y[2];
    };
}

}  // namespace intlab::resonance
