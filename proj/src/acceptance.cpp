#include "intlab/acceptance.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "intlab/cli.hpp"
#include "intlab/diffop.hpp"
#include "intlab/errors.hpp"
#include "intlab/exprjet.hpp"
#include "intlab/numerics.hpp"
#include "intlab/resonance.hpp"
#include "intlab/spectral.hpp"
#include "intlab/symmetry.hpp"
#include "intlab/threebody.hpp"
#include "intlab/transforms.hpp"
#include "intlab/wronskian.hpp"

namespace intlab::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        ok = ok && cond;
        if (!cond) detail << "[FAILED " << what << "] ";
    }
    template <typename T>
    void note(const std::string& key, T value) {
        detail << key << "=" << value << " ";
    }
};

CriterionResult finish(const std::string& name, Check& c, Clock::time_point start) {
    CriterionResult r;
    r.name = name;
    r.passed = c.ok;
    r.detail = c.detail.str();
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return r;
}

// ---- C1/C2: exact operator algebra ------------------------------------------------

diffop::PolyQ random_poly(std::mt19937_64& rng, int maxdeg) {
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> deg(0, maxdeg);
    std::vector<Rat> c(deg(rng) + 1, Rat(0));
    for (auto& r : c) r = Rat(num(rng));
    return diffop::PolyQ(std::move(c));
}

diffop::LinearDiffOp random_op(std::mt19937_64& rng, int maxorder, int maxdeg) {
    std::uniform_int_distribution<int> ord(0, maxorder);
    std::vector<diffop::RationalFn> c(ord(rng) + 1);
    for (auto& f : c) f = diffop::RationalFn::from_poly(random_poly(rng, maxdeg));
    return diffop::LinearDiffOp(std::move(c));
}

CriterionResult c01_operator_algebra(Level, std::uint64_t seed) {
    const auto start = Clock::now();
    Check c;
    std::mt19937_64 rng(seed + 1);
    const auto d2 = diffop::LinearDiffOp::derivative(2);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_poly(rng, 5);
        const auto got = diffop::compose(d2, diffop::LinearDiffOp::mul_by(a));
        const bool match =
            got.coeff(0) == diffop::RationalFn::from_poly(a.derivative().derivative()) &&
            got.coeff(1) == diffop::RationalFn::from_poly(Rat(2) * a.derivative()) &&
            got.coeff(2) == diffop::RationalFn::from_poly(a);
        c.require(match, "second-derivative composition trial " + std::to_string(trial));
        if (!match) break;
    }
    for (int trial = 0; trial < 20; ++trial) {
        const auto A = random_op(rng, 3, 3), B = random_op(rng, 3, 3), C = random_op(rng, 3, 3);
        const bool assoc = compose(compose(A, B), C) == compose(A, compose(B, C));
        c.require(assoc, "associativity trial " + std::to_string(trial));
        if (!assoc) break;
    }
    c.note("trials", 70);
    return finish("operator algebra: Leibniz composition + associativity", c, start);
}

CriterionResult c02_commutator_derivation(Level, std::uint64_t seed) {
    const auto start = Clock::now();
    Check c;
    std::mt19937_64 rng(seed + 2);
    const auto d1 = diffop::LinearDiffOp::derivative(1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_poly(rng, 4);
        const auto b = random_poly(rng, 4);
        const auto A = compose(diffop::LinearDiffOp::mul_by(a), d1);
        const auto B = compose(diffop::LinearDiffOp::mul_by(b), d1);
        const auto comm = commutator(A, B);
        c.require(comm.coeff(0).is_zero() && comm.order() <= 1,
                  "first-order commutator trial " + std::to_string(trial));
        if (!c.ok) break;
    }
    c.note("trials", 50);
    return finish("commutator of first-order operators is a derivation", c, start);
}

// ---- C3: kernel-to-operator construction -------------------------------------------

CriterionResult c03_wronskian(Level, std::uint64_t) {
    const auto start = Clock::now();
    Check c;
    using wronskian::catalog;

    wronskian::KernelSpec affine{{catalog("1"), catalog("x")}, -1.0, 1.0, 33};
    const auto op1 = wronskian::operator_from_kernel(affine);
    double worst = 0.0;
    for (size_t j = 0; j < op1.xs.size(); ++j)
        worst = std::max({worst, std::abs(op1.coeff[0][j]), std::abs(op1.coeff[1][j])});
    c.require(worst < 1e-14, "affine kernel gives the bare second derivative");
    c.note("affine_coeff_max", worst);

    wronskian::KernelSpec mono{{catalog("x"), catalog("x2")}, 1.0, 2.0, 41};
    const auto op2 = wronskian::operator_from_kernel(mono);
    double gap = 0.0;
    for (size_t j = 0; j < op2.xs.size(); ++j) {
        const double x = op2.xs[j];
        gap = std::max({gap, std::abs(op2.coeff[1][j] + 2.0 / x),
                        std::abs(op2.coeff[0][j] - 2.0 / (x * x))});
    }
    c.require(gap < 1e-10, "monomial kernel matches the hand-derived coefficients");
    c.note("monomial_gap", gap);

    wronskian::KernelSpec mixed{{catalog("sin"), catalog("sqrt")}, 0.5, 1.4, 64};
    const auto op3 = wronskian::operator_from_kernel(mixed);
    const double rs = wronskian::membership_test(op3, catalog("sin"), 0.5, 1.4);
    const double rq = wronskian::membership_test(op3, catalog("sqrt"), 0.5, 1.4);
    c.require(rs < 1e-8 && rq < 1e-8, "constructed operator annihilates sin and sqrt");
    c.note("sin_residual", rs);
    c.note("sqrt_residual", rq);

    // comparison against the reference printed form for this kernel
    const wronskian::ReferenceForm printed{{
        [](double x) { return -1.0 / (2.0 * x) - 0.75 / (x * x); },
        [](double x) { return std::tan(x); },
        [](double x) { return 1.0 - 0.5 * std::tan(x); },
    }};
    const double ps = wronskian::form_residual(printed, catalog("sin"), 0.5, 1.4, 64);
    const double pq = wronskian::form_residual(printed, catalog("sqrt"), 0.5, 1.4, 64);
    const bool printed_matches = ps < 1e-8 && pq < 1e-8;
    c.note("reference_form_sin_residual", ps);
    c.note("reference_form_sqrt_residual", pq);
    c.note("reference_form_verdict", printed_matches ? "match" : "documented-discrepancy");
    return finish("kernel-to-operator construction (+ reference-form comparison)", c, start);
}

// ---- C4: symmetry / first-integral suite --------------------------------------------

CriterionResult c04_symmetry_suite(Level, std::uint64_t seed) {
    const auto start = Clock::now();
    Check c;
    using jet::JetCoord;
    using jet::JetPolynomial;
    const auto P = [](const std::string& s) { return JetPolynomial::parse(s); };
    const auto sys = symmetry::DynamicalSystem::canonical(P("1"), 2);

    c.require(symmetry::is_conservation_law(sys, P("y1 - x")).conserved, "first integral 1");
    c.require(
        symmetry::is_conservation_law(sys, P("y + 1/2*x^2 - x*y1")).conserved,
        "first integral 2");

    symmetry::SymmetryCandidate shift, homog;
    shift.field[JetCoord::X()] = P("1");
    shift.field[JetCoord::Y(0)] = P("0");
    shift.field[JetCoord::Y(1)] = P("0");
    homog.field[JetCoord::X()] = P("0");
    homog.field[JetCoord::Y(0)] = P("x");
    homog.field[JetCoord::Y(1)] = P("1");
    c.require(symmetry::is_symmetry(sys, shift).symmetry, "shift symmetry");
    c.require(symmetry::is_symmetry(sys, homog).symmetry, "homogeneous symmetry");

    // scaled symmetries on random valid triples
    std::mt19937_64 rng(seed + 4);
    std::uniform_int_distribution<int> coef(-3, 3);
    const JetPolynomial c1 = P("y1 - x");
    const JetPolynomial c2 = P("y + 1/2*x^2 - x*y1");
    auto random_integral = [&]() {
        JetPolynomial F = JetPolynomial::constant(Rat(coef(rng)));
        F += Rat(coef(rng)) * c1;
        F += Rat(coef(rng)) * c2;
        F += Rat(coef(rng)) * c1 * c2;
        return F;
    };
    int done = 0;
    for (int trial = 0; trial < 200 && done < 20; ++trial) {
        const JetPolynomial F = random_integral();
        const JetPolynomial Q = random_integral();
        if (F.is_zero()) continue;
        symmetry::SymmetryCandidate g;
        for (const auto& [coord, comp] : sys.field) g.field[coord] = Q * comp;
        g.field[JetCoord::X()] += JetPolynomial::constant(Rat(coef(rng)));
        const Rat b(coef(rng));
        g.field[JetCoord::Y(0)] += b * P("x");
        g.field[JetCoord::Y(1)] += JetPolynomial::constant(b);
        if (!symmetry::is_symmetry(sys, g).symmetry) continue;
        const auto scaled = symmetry::scale_symmetry(sys, g, F);
        c.require(symmetry::is_symmetry(sys, scaled).symmetry,
                  "scaled symmetry trial " + std::to_string(done));
        ++done;
    }
    c.require(done == 20, "20 random scaled-symmetry triples");
    c.note("triples", done);

    // evolutionary symmetries of the quasilinear flow
    const JetPolynomial Kf = P("2*u0*u1");
    for (const char* kg : {"u1", "u0*u1", "u0^2*u1", "u0^3*u1"})
        c.require(symmetry::pde_symmetry_check(Kf, P(kg)),
                  std::string("evolutionary symmetry ") + kg);
    c.require(!symmetry::pde_symmetry_check(Kf, P("u2")), "diffusion negative control");
    return finish("first-integral and symmetry verdicts (exact)", c, start);
}

// ---- C5: profile inversion -----------------------------------------------------------

CriterionResult c05_hodograph(Level, std::uint64_t) {
    const auto start = Clock::now();
    Check c;
    const transforms::MonotoneProfile linear{[](double u) { return u; },
                                             [](double) { return 1.0; }, -3.0, 3.0};
    const double tstar = transforms::breaking_time(linear);
    c.require(std::abs(tstar - 0.5) < 1e-6, "breaking time 1/2");
    c.note("breaking_time", tstar);

    double gap = 0.0;
    for (double t : {0.05, 0.1, 0.15}) {
        for (double x : {-0.5, -0.2, 0.1, 0.4}) {
            const auto pt = transforms::hodograph_solve(linear, x, t);
            gap = std::max(gap, std::abs(pt.u - x / (1.0 - 2.0 * t)));
        }
    }
    c.require(gap < 1e-12, "closed form x/(1-2t)");
    c.note("closed_form_gap", gap);

    // residual of the solved field in the quasilinear equation (stencil in
    // both variables, solver treated as a black box)
    const spectral::Candidate cand = [&](double x, double t) {
        return spectral::cplx(transforms::hodograph_solve(linear, x, t).u);
    };
    spectral::PDESpec quasi;
    quasi.max_order = 1;
    quasi.i_ut = false;
    quasi.label = "u_t = 2 u u_x";
    quasi.rhs = [](const spectral::PDETerms& d) { return 2.0 * d.u * d.dx[0]; };
    const double res = spectral::pde_residual(quasi, cand, -0.5, 0.5, 0.05, 0.15, 6, 8, 4e-3);
    c.require(res < 1e-10, "quasilinear residual below 1e-10");
    c.note("pde_residual", res);
    return finish("profile inversion: closed form, residual, breaking time", c, start);
}

// ---- C6: Burgers pipeline --------------------------------------------------------------

CriterionResult c06_burgers(Level level, std::uint64_t) {
    const auto start = Clock::now();
    Check c;
    const int n = level == Level::fast ? 128 : 256;
    const numerics::Grid1D grid(n, 0.0, 2.0 * std::numbers::pi);
    const auto u0 = numerics::SampledField::from_function(
        grid, [](double x) { return spectral::cplx(0.5 * std::sin(x)); });
    const double t = 0.5;
    const auto pipeline = spectral::burgers_solve(u0, t);
    const auto direct =
        spectral::burgers_direct(u0, t, 1.0, spectral::burgers_stable_dt(grid, 1.0));
    double gap = 0.0;
    for (int j = 0; j < n; ++j)
        gap = std::max(gap, std::abs(pipeline.values[j] - direct.values[j]));
    c.require(gap < 1e-5, "pipeline vs direct integration");
    c.note("solver_gap", gap);

    auto mean = [&](const numerics::SampledField& f) {
        spectral::cplx acc(0.0);
        for (const auto& z : f.values) acc += z;
        return std::abs(acc) / f.grid.n;
    };
    const double mass = std::abs(mean(pipeline) - mean(u0));
    c.require(mass < 1e-10, "mass drift");
    c.note("mass_drift", mass);

    const auto chained = spectral::heat_solve(spectral::heat_solve(u0, 0.3), 0.4);
    const auto oneshot = spectral::heat_solve(u0, 0.7);
    double semi = 0.0;
    for (int j = 0; j < n; ++j)
        semi = std::max(semi, std::abs(chained.values[j] - oneshot.values[j]));
    c.require(semi < 1e-12, "heat semigroup");
    c.note("semigroup_gap", semi);
    return finish("linearizing pipeline vs direct integration", c, start);
}

// ---- C7: dispersion classification ------------------------------------------------------

CriterionResult c07_dispersion(Level, std::uint64_t) {
    const auto start = Clock::now();
    Check c;
    const auto kdv = spectral::dispersion_relation(spectral::parse_dispersion("ut - uxxx"),
                                                   0.5, 2.0, 64);
    c.require(kdv.dispersive, "third-derivative flow is dispersive");
    double wdd_err = 0.0;
    for (size_t i = 1; i + 1 < kdv.ks.size(); ++i)
        wdd_err = std::max(wdd_err, std::abs(kdv.omega_dd[0][i] - 6.0 * kdv.ks[i]));
    c.require(wdd_err < 1e-6, "omega'' = 6k measured");
    c.note("omega_dd_error", wdd_err);

    const auto adv =
        spectral::dispersion_relation(spectral::parse_dispersion("ut - 3*ux"), 0.5, 2.0, 64);
    c.require(!adv.dispersive, "advection is non-dispersive");
    double adv_dd = 0.0;
    for (size_t i = 1; i + 1 < adv.ks.size(); ++i)
        adv_dd = std::max(adv_dd, std::abs(adv.omega_dd[0][i]));
    c.require(adv_dd < 1e-6, "advection omega'' = 0");

    const auto wave =
        spectral::dispersion_relation(spectral::parse_dispersion("utt - uxx"), 0.5, 2.0, 64);
    c.require(!wave.dispersive, "wave equation is non-dispersive");
    c.require(wave.branches.size() == 2, "two branches");
    double wave_dd = 0.0;
    for (size_t b = 0; b < wave.branches.size(); ++b)
        for (size_t i = 1; i + 1 < wave.ks.size(); ++i)
            wave_dd = std::max(wave_dd, std::abs(wave.omega_dd[b][i]));
    c.require(wave_dd < 1e-6, "wave omega'' = 0 on both branches");
    c.note("wave_omega_dd", wave_dd);
    return finish("dispersion classification", c, start);
}

// ---- C8: closed-form residual convergence ------------------------------------------------

CriterionResult c08_residual_convergence(Level level, std::uint64_t) {
    const auto start = Clock::now();
    Check c;
    const int pts = level == Level::fast ? 8 : 12;
    const double kappa = 1.0;
    const spectral::Candidate soliton = [kappa](double x, double t) {
        const double arg = kappa * (x + 4.0 * kappa * kappa * t);
        const double s = 1.0 / std::cosh(arg);
        return spectral::cplx(2.0 * kappa * kappa * s * s);
    };
    const auto kdv = spectral::pde_residual_convergence(spectral::kdv_spec(), soliton, -2.0,
                                                        2.0, 0.0, 0.1, pts, 4, 0.08, 3);
    c.require(kdv[0] / kdv[1] >= 12.0 && kdv[1] / kdv[2] >= 12.0,
              "kdv soliton Richardson ratios");
    c.note("kdv_ratio1", kdv[0] / kdv[1]);
    c.note("kdv_ratio2", kdv[1] / kdv[2]);

    const double eta = 1.0;
    const spectral::Candidate envelope = [eta](double x, double t) {
        const double env = std::sqrt(2.0) * eta / std::cosh(eta * x);
        return env * std::exp(spectral::cplx(0.0, -eta * eta * t));
    };
    const auto nls = spectral::pde_residual_convergence(spectral::nls_spec(+1), envelope, -2.0,
                                                        2.0, 0.0, 0.5, pts, 4, 0.05, 3);
    c.require(nls[0] / nls[1] >= 12.0 && nls[1] / nls[2] >= 12.0,
              "focusing envelope Richardson ratios");
    c.note("nls_ratio1", nls[0] / nls[1]);
    c.note("nls_ratio2", nls[1] / nls[2]);

    const double wrong =
        spectral::pde_residual(spectral::nls_spec(-1), envelope, -2.0, 2.0, 0.0, 0.5, 8, 4, 0.05);
    c.require(wrong > 0.5, "defocusing sign rejected");
    return finish("soliton residual convergence at declared order", c, start);
}

// ---- C9: Volterra solution of the scattering factor ---------------------------------------

CriterionResult c09_jost(Level, std::uint64_t) {
    const auto start = Clock::now();
    Check c;
    spectral::JostProblem zero;
    zero.potential = [](double) { return 0.0; };
    zero.n = 501;
    const auto triv = spectral::jost_solve(zero);
    double dev = 0.0;
    for (const auto& v : triv.phi) dev = std::max(dev, std::abs(v - spectral::cplx(1.0)));
    c.require(dev == 0.0, "zero potential gives phi = 1 exactly");

    spectral::JostProblem well;
    well.potential = [](double x) {
        if (x < -1.0 || x > 1.0) return 0.0;
        if (x == -1.0 || x == 1.0) return -0.05;
        return -0.1;
    };
    well.n = 12001;
    const auto sol = spectral::jost_solve(well);
    c.require(sol.sweeps <= 30, "under 30 sweeps");
    c.note("sweeps", sol.sweeps);
    c.require(sol.sweep_gaps.back() < 1e-12, "gap tolerance reached");

    bool geometric = sol.contraction_bound < 1.0;
    for (size_t m = 1; m + 1 < sol.sweep_gaps.size(); ++m)
        geometric = geometric &&
                    sol.sweep_gaps[m + 1] <= sol.contraction_bound * sol.sweep_gaps[m] * 1.05 +
                                                 1e-15;
    c.require(geometric, "Neumann iterates contract geometrically");
    c.note("contraction_bound", sol.contraction_bound);

    const auto oracle = spectral::jost_ode_oracle(well, spectral::JostConvention::printed_real);
    double gap = 0.0;
    for (size_t i = 0; i < sol.phi.size(); ++i)
        gap = std::max(gap, std::abs(sol.phi[i] - oracle[i]));
    c.require(gap < 1e-8, "integral equation matches the ODE oracle");
    c.note("oracle_gap", gap);
    return finish("Volterra scattering factor vs ODE oracle", c, start);
}

// ---- C10: triad -----------------------------------------------------------------------------

CriterionResult c10_triad(Level level, std::uint64_t seed) {
    const auto start = Clock::now();
    Check c;
    const auto planetary = resonance::TriadSystem::planetary(1.0, 2.0, 3.0);
    const auto inv = planetary.invariants({1.0, 1.0, 1.0});
    c.require(inv[0] == 6.0 && inv[1] == 14.0, "energy 6, enstrophy 14");

    const double T = level == Level::fast ? 5.0 : 20.0;
    std::vector<double> y{1.0, 1.0, 1.0};
    numerics::IntegratorConfig cfg;
    cfg.dt = 1e-3;
    double drift = 0.0;
    numerics::integrate(planetary.ode(), y, 0.0, T, cfg,
                        [&](double, std::span<const double> s) {
                            const auto iv = planetary.invariants({s[0], s[1], s[2]});
                            drift = std::max({drift, std::abs(iv[0] - 6.0),
                                              std::abs(iv[1] - 14.0)});
                        });
    c.require(drift < 1e-9, "invariant drift over the run");
    c.note("drift", drift);

    // closed form vs integration for 20 seeded generic data sets
    std::mt19937_64 rng(seed + 10);
    std::uniform_real_distribution<double> amp(0.2, 1.0);
    std::uniform_int_distribution<int> flip(0, 1);
    const auto gen = resonance::TriadSystem::generic(1.0, 1.0, -1.0);
    int done = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 400 && done < 20; ++trial) {
        const std::array<double, 3> a0{amp(rng) * (flip(rng) ? 1 : -1),
                                       amp(rng) * (flip(rng) ? 1 : -1),
                                       amp(rng) * (flip(rng) ? 1 : -1)};
        std::optional<resonance::ClosedForm> cf;
        try {
            cf.emplace(resonance::closed_form(gen, a0));
        } catch (const DegeneracyError&) {
            continue;
        }
        if (cf->period() > 40.0) continue;
        ++done;
        std::vector<double> yy(a0.begin(), a0.end());
        numerics::integrate(gen.ode(), yy, 0.0, cf->period(), cfg,
                            [&](double t, std::span<const double> s) {
                                const auto v = cf->eval(t);
                                worst = std::max({worst, std::abs(v[0] - s[0]),
                                                  std::abs(v[1] - s[1]),
                                                  std::abs(v[2] - s[2])});
                            });
    }
    c.require(done == 20, "20 generic data sets parameterized");
    c.require(worst < 1e-6, "closed form tracks the integration over one period");
    c.note("closed_form_gap", worst);

    std::mt19937_64 jr(seed + 11);
    std::uniform_real_distribution<double> uu(-8.0, 8.0), um(0.0, 0.97);
    double ident = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double m = um(jr);
        const auto j = resonance::jacobi(uu(jr), m);
        ident = std::max({ident, std::abs(j.sn * j.sn + j.cn * j.cn - 1.0),
                          std::abs(j.dn * j.dn + m * j.sn * j.sn - 1.0)});
    }
    c.require(ident < 1e-12, "elliptic identities");
    c.note("identity_defect", ident);
    return finish("triad invariants, closed form, elliptic identities", c, start);
}

// ---- C11: quartet ----------------------------------------------------------------------------

CriterionResult c11_quartet(Level, std::uint64_t) {
    const auto start = Clock::now();
    Check c;
    const resonance::QuartetSystem sys({0.7, -1.3, 2.0, 1.1});
    const std::array<double, 4> a0{0.9, 0.4, -0.6, 0.8};
    const auto ref = sys.invariants(a0);
    std::vector<double> y(a0.begin(), a0.end());
    numerics::IntegratorConfig cfg;
    cfg.dt = 1e-3;
    double drift = 0.0;
    numerics::integrate(sys.ode(), y, 0.0, 5.0, cfg,
                        [&](double, std::span<const double> s) {
                            const auto iv = sys.invariants({s[0], s[1], s[2], s[3]});
                            for (int i = 0; i < 3; ++i)
                                drift = std::max(drift, std::abs(iv[i] - ref[i]));
                        });
    c.require(drift < 1e-9, "three quadratic invariants");
    c.note("drift", drift);
    return finish("quartet invariant drift", c, start);
}

// ---- C12: three-body suite ---------------------------------------------------------------------

CriterionResult c12_threebody(Level level, std::uint64_t seed) {
    const auto start = Clock::now();
    Check c;
    using namespace threebody;
    const double T = level == Level::fast ? 5.0 : 10.0;
    numerics::IntegratorConfig cfg;
    cfg.method = numerics::IntegratorConfig::Method::rkf45_adaptive;
    cfg.abs_tol = cfg.rel_tol = 1e-10;
    cfg.dt = 1e-2;

    std::mt19937_64 rng(seed + 12);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto random_state = [&]() {
        ThreeBodyState s;
        do {
            for (int j = 0; j < 3; ++j) {
                s.z[j] = cplx(u(rng), u(rng));
                s.v[j] = cplx(u(rng), u(rng));
            }
            s.enforce_com_gauge();
        } while (min_pair_distance(s) < 0.3);
        return s;
    };

    const auto law = ForceLaw::poincare(1.0);
    {
        ThreeBodyState s = random_state();
        const auto ref = monitors(s, law);
        double e = 0.0, am = 0.0, com = 0.0;
        integrate(s, law, T, cfg, [&](const ThreeBodyState& st) {
            const auto m = monitors(st, law);
            e = std::max(e, std::abs(m.energy - ref.energy));
            am = std::max(am, std::abs(m.angular_momentum - ref.angular_momentum));
            com = std::max(com, std::abs(m.com_velocity));
        });
        c.require(e < 1e-8 && am < 1e-8 && com < 1e-12, "monitor drifts");
        c.note("energy_drift", e);
        c.note("angmom_drift", am);
    }
    {
        double lj = 0.0;
        for (int trial = 0; trial < 100; ++trial)
            lj = std::max(lj, monitors(random_state(), law).lagrange_jacobi_residual);
        c.require(lj < 1e-8, "virial contraction identity at 100 states");
        c.note("virial_residual", lj);
    }
    {
        const auto audit = repulsion_convexity_audit(random_state(), law, T, cfg);
        c.require(audit.strictly_positive, "convexity expression positive");
        c.note("convexity_min", audit.min_value);
    }
    {
        const auto nlaw = ForceLaw::newton_like(-1.0);
        const auto orbit = lagrange_orbit(nlaw, 1.0);
        const auto rep = track_distances(orbit.initial, nlaw, orbit.period, cfg, 1.0);
        c.require(rep.max_mutual_spread < 1e-6 && rep.max_deviation_from < 1e-6,
                  "equidistant orbit distance spread");
        c.note("spread", rep.max_mutual_spread);
    }
    {
        const std::array<cplx, 3> pos{cplx(1.1, 0.1), cplx(-0.55, 0.95), cplx(-0.55, -1.05)};
        const auto s0 = rotational_zero_energy_data(pos, -1.0);
        const auto cold = poincare_inertia_study(s0, -1.0, 5.0, cfg);
        c.require(cold.conserved && cold.inertia_drift < 1e-6, "inertia conserved at E = 0");
        c.note("inertia_drift", cold.inertia_drift);

        ThreeBodyState hot = s0;
        for (auto& vj : hot.v) vj *= 1.3;
        const double e_hot = monitors(hot, ForceLaw::poincare(-1.0)).energy;
        const auto grow = poincare_inertia_study(hot, -1.0, 5.0, cfg);
        c.require(!grow.conserved && grow.curvature > 0.0 &&
                      std::abs(grow.curvature - 6.0 * e_hot) < 1e-5 * std::max(1.0, 6.0 * e_hot),
                  "convex inertia growth at E > 0");
        c.note("curvature", grow.curvature);
    }
    {
        numerics::IntegratorConfig tight = cfg;
        tight.abs_tol = tight.rel_tol = 1e-12;
        const auto run = calogero_run({-1000.0, 0.0, 1000.0}, {1.0, 0.0, -1.0}, 2200.0, tight);
        std::vector<double> vin{-1.0, 0.0, 1.0}, vout = run.v_final;
        std::sort(vout.begin(), vout.end());
        double perm = 0.0;
        for (size_t i = 0; i < 3; ++i) perm = std::max(perm, std::abs(vout[i] - vin[i]));
        c.require(run.ordering_preserved && perm < 1e-5,
                  "scattering permutes the asymptotic velocities");
        c.note("permutation_gap", perm);
    }
    return finish("three-body conservation suite", c, start);
}

}  // namespace

std::vector<CriterionResult> run_criteria(Level level, std::uint64_t seed) {
    std::vector<CriterionResult> out;
    out.push_back(c01_operator_algebra(level, seed));
    out.push_back(c02_commutator_derivation(level, seed));
    out.push_back(c03_wronskian(level, seed));
    out.push_back(c04_symmetry_suite(level, seed));
    out.push_back(c05_hodograph(level, seed));
    out.push_back(c06_burgers(level, seed));
    out.push_back(c07_dispersion(level, seed));
    out.push_back(c08_residual_convergence(level, seed));
    out.push_back(c09_jost(level, seed));
    out.push_back(c10_triad(level, seed));
    out.push_back(c11_quartet(level, seed));
    out.push_back(c12_threebody(level, seed));
    return out;
}

CriterionResult determinism_check(std::uint64_t seed) {
    const auto start = Clock::now();
    Check c;
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "intlab-determinism";
    std::error_code ec;
    fs::remove_all(base, ec);
    const fs::path d1 = base / "run1", d2 = base / "run2";
    for (const auto& d : {d1, d2}) {
        cli::RunConfig rc;
        rc.subcommand = "triad";
        rc.params = {{"n", "1,2,3"}, {"a0", "1,1,1"}, {"t", "2"}, {"dt", "0.001"}};
        rc.out_dir = d;
        rc.seed = seed;
        cli::dispatch(rc);
    }
    for (const auto& name : {"triad.csv", "triad.json"}) {
        std::ifstream f1(d1 / name, std::ios::binary), f2(d2 / name, std::ios::binary);
        std::stringstream s1, s2;
        s1 << f1.rdbuf();
        s2 << f2.rdbuf();
        c.require(f1.good() && f2.good() && s1.str() == s2.str() && !s1.str().empty(),
                  std::string(name) + " byte-identical");
    }
    fs::remove_all(base, ec);
    return finish("seeded runs are byte-identical", c, start);
}

}  // namespace intlab::acceptance
