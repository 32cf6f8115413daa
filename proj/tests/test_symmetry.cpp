#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "intlab/diffop.hpp"
#include "intlab/errors.hpp"
#include "intlab/symmetry.hpp"

using namespace intlab;
using namespace intlab::symmetry;
using jet::JetPolynomial;
using jet::JetVectorField;

namespace {

JetPolynomial P(const std::string& s) { return JetPolynomial::parse(s); }

// flow of y'' = 1 over (x, y, y')
DynamicalSystem parabolic_flow() { return DynamicalSystem::canonical(P("1"), 2); }

SymmetryCandidate cand(const std::string& cx, const std::string& cy, const std::string& cy1,
                       const std::string& label = "") {
    SymmetryCandidate c;
    c.field[jet::JetCoord::X()] = P(cx);
    c.field[jet::JetCoord::Y(0)] = P(cy);
    c.field[jet::JetCoord::Y(1)] = P(cy1);
    c.label = label;
    return c;
}

}  // namespace

TEST_CASE("first integrals of y'' = 1") {
    const auto sys = parabolic_flow();
    CHECK(is_conservation_law(sys, P("y1 - x")).conserved);
    CHECK(is_conservation_law(sys, P("(y1 - x)^2 - 2*(y + 1/2*x^2 - x*y1)")).conserved);
    // the combination above collapses to y1^2 - 2y
    CHECK(P("(y1 - x)^2 - 2*(y + 1/2*x^2 - x*y1)") == P("y1^2 - 2*y"));

    const auto bad = is_conservation_law(sys, P("y"));
    CHECK(!bad.conserved);
    CHECK(bad.residual == P("y1"));
}

TEST_CASE("symmetries of y'' = 1") {
    const auto sys = parabolic_flow();

    const auto shift = is_symmetry(sys, cand("1", "0", "0"));
    CHECK(shift.symmetry);
    CHECK(!shift.trivial);

    const auto homog = is_symmetry(sys, cand("0", "x", "1"));
    CHECK(homog.symmetry);
    CHECK(!homog.trivial);

    // the compatibility system behind that verdict: L(g1) = L(g3) = 0, L(g2) = g3
    CHECK(jet::apply_field(sys.field, P("0")).is_zero());
    CHECK(jet::apply_field(sys.field, P("1")).is_zero());
    CHECK(jet::apply_field(sys.field, P("x")) == P("1"));

    const auto prop = is_symmetry(sys, cand("5", "5*y1", "5"));
    CHECK(prop.symmetry);
    CHECK(prop.trivial);

    const auto no = is_symmetry(sys, cand("0", "y", "0"));
    CHECK(!no.symmetry);
}

TEST_CASE("scaling a symmetry by a first integral") {
    const auto sys = parabolic_flow();

    // F = 1 leaves the candidate unchanged
    const auto same = scale_symmetry(sys, cand("1", "0", "0"), P("1"));
    CHECK(same.field.at(jet::JetCoord::X()) == P("1"));

    const auto s1 = scale_symmetry(sys, cand("1", "0", "0", "shift"), P("y1 - x"));
    CHECK(s1.field.at(jet::JetCoord::X()) == P("y1 - x"));
    CHECK(is_symmetry(sys, s1).symmetry);
    CHECK(!is_symmetry(sys, s1).trivial);

    const auto s2 = scale_symmetry(sys, cand("0", "x", "1"), P("y1 - x"));
    CHECK(s2.field.at(jet::JetCoord::Y(0)) == P("x*y1 - x^2"));
    CHECK(s2.field.at(jet::JetCoord::Y(1)) == P("y1 - x"));
    CHECK(is_symmetry(sys, s2).symmetry);

    CHECK_THROWS_AS(scale_symmetry(sys, cand("1", "0", "0"), P("y")), ContractError);
    CHECK_THROWS_AS(scale_symmetry(sys, cand("0", "y", "0"), P("y1 - x")), ContractError);
}

TEST_CASE("scaled symmetries on random valid triples") {
    const auto sys = parabolic_flow();
    const JetPolynomial c1 = P("y1 - x");
    const JetPolynomial c2 = P("y + 1/2*x^2 - x*y1");
    std::mt19937 rng(5150);
    std::uniform_int_distribution<int> coef(-3, 3);
    auto random_integral = [&]() {
        JetPolynomial F = JetPolynomial::constant(Rat(coef(rng)));
        F += Rat(coef(rng)) * c1;
        F += Rat(coef(rng)) * c2;
        F += Rat(coef(rng)) * c1 * c2;
        F += Rat(coef(rng)) * c2 * c2;
        return F;
    };
    int checked = 0;
    for (int trial = 0; trial < 40 && checked < 20; ++trial) {
        const JetPolynomial F = random_integral();
        const JetPolynomial Q = random_integral();
        if (F.is_zero()) continue;
        REQUIRE(is_conservation_law(sys, F).conserved);
        // symmetry = Q * flow + constants * known generators
        SymmetryCandidate g;
        for (const auto& [c, comp] : sys.field) g.field[c] = Q * comp;
        g.field[jet::JetCoord::X()] += JetPolynomial::constant(Rat(coef(rng)));
        const Rat b(coef(rng));
        g.field[jet::JetCoord::Y(0)] += b * P("x");
        g.field[jet::JetCoord::Y(1)] += JetPolynomial::constant(b);
        if (!is_symmetry(sys, g).symmetry) continue;  // Q must be an integral too
        const auto scaled = scale_symmetry(sys, g, F);
        CHECK(is_symmetry(sys, scaled).symmetry);
        ++checked;
    }
    CHECK(checked == 20);
}

TEST_CASE("leading component of a canonical symmetry") {
    const auto sys = parabolic_flow();

    const auto r1 = leading_component_check(sys, cand("1", "0", "0"));
    CHECK(r1.applicable);
    CHECK(r1.conserved);

    const auto r2 = leading_component_check(sys, cand("0", "x", "1"));
    CHECK(!r2.applicable);  // vanishing leading component: check vacuous

    const auto r3 = leading_component_check(sys, cand("y1 - x", "0", "0"));
    CHECK(r3.applicable);
    CHECK(r3.conserved);
    REQUIRE(r3.normalized.has_value());
    CHECK(r3.normalized->at(jet::JetCoord::X()) == P("1"));
    CHECK(r3.normalized->at(jet::JetCoord::Y(0)).is_zero());
}

TEST_CASE("pde symmetry checks for the quasilinear shock flow") {
    const JetPolynomial Kf = P("2*u0*u1");
    CHECK(pde_symmetry_check(Kf, P("u1")));            // translation flow
    CHECK(pde_symmetry_check(Kf, P("u0*u1")));         // phi(u) = u
    CHECK(pde_symmetry_check(Kf, P("u0^2*u1")));       // phi(u) = u^2
    CHECK(pde_symmetry_check(Kf, P("u0^3*u1")));       // phi(u) = u^3

    // diffusion is not a symmetry of the inviscid flow
    CHECK(!pde_symmetry_check(Kf, P("u2")));
    CHECK(pde_symmetry_bracket(Kf, P("u2"), pde_min_depth(Kf, P("u2"))) == P("4*u1*u2"));

    // depth stability: increasing depth never flips a verdict
    for (const auto& kg : {P("u1"), P("u0*u1"), P("u0^2*u1"), P("u2"), P("u1^2")}) {
        const int d = pde_min_depth(Kf, kg);
        CHECK(pde_symmetry_check(Kf, kg, d) == pde_symmetry_check(Kf, kg, d + 2));
    }

    CHECK_THROWS_AS(pde_symmetry_bracket(Kf, P("u2"), 1), ContractError);
}

TEST_CASE("one-dimensional reductions admit only proportional symmetries") {
    // for a' = f(a), [f d, g d] = 0 iff f g' - g f' = 0, forcing g = c f
    using diffop::PolyQ;
    std::mt19937 rng(11121);
    std::uniform_int_distribution<int> coef(-3, 3);
    auto rand_poly = [&]() {
        std::vector<Rat> c(4);
        for (auto& r : c) r = Rat(coef(rng));
        return PolyQ(std::move(c));
    };
    for (int trial = 0; trial < 25; ++trial) {
        const PolyQ f = rand_poly();
        if (f.is_zero()) continue;
        const Rat c(coef(rng));
        const PolyQ g = c * f;
        CHECK((f * g.derivative() - g * f.derivative()).is_zero());

        const PolyQ h = rand_poly();
        const PolyQ bracket = f * h.derivative() - h * f.derivative();
        if (bracket.is_zero() && !h.is_zero()) {
            // commuting flows must be proportional: h/f is a constant
            const auto [q, r] = PolyQ::divmod(h, f);
            CHECK(r.is_zero());
            CHECK(q.degree() == 0);
        }
    }
    // explicit non-example: f = a^2, g = a^3 do not commute
    const PolyQ f({Rat(0), Rat(0), Rat(1)});
    const PolyQ g({Rat(0), Rat(0), Rat(0), Rat(1)});
    CHECK(!(f * g.derivative() - g * f.derivative()).is_zero());
}

TEST_CASE("numeric first-integral drift along trajectories") {
    numerics::IntegratorConfig cfg;
    cfg.dt = 1e-3;

    // harmonic oscillator, energy y^2 + y'^2
    const numerics::OdeRhs harmonic = [](double, std::span<const double> y,
                                         std::span<double> dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    const NumericCL energy{[](std::span<const double> y) { return y[0] * y[0] + y[1] * y[1]; },
                           "energy"};
    CHECK(cl_drift(harmonic, energy, {1.0, 0.0}, 10.0, cfg) < 1e-9);

    // y'' - 3y' + 2y = 0 with the logarithmic integral log(y' - y) - 2x
    const auto sys = DynamicalSystem::canonical(P("3*y1 - 2*y"), 2);
    const NumericCL log_cl{
        [](std::span<const double> s) { return std::log(s[2] - s[1]) - 2.0 * s[0]; },
        "log(y'-y) - 2x"};
    CHECK(cl_drift(sys, log_cl, {0.0, 1.0, 2.0}, 5.0, cfg) < 1e-8);

    // arcsine-form integral of y'' = 1 with data keeping both arguments safe
    const auto par = parabolic_flow();
    const NumericCL arcsine{[](std::span<const double> s) {
                                const double c1 = s[2] - s[0];
                                const double c2 = s[1] + 0.5 * s[0] * s[0] - s[0] * s[2];
                                return std::asin(c1) / std::pow(c2, 0.93);
                            },
                            "arcsine"};
    CHECK(cl_drift(par, arcsine, {0.0, 2.0, 0.5}, 10.0, cfg) < 1e-7);
}

TEST_CASE("cl_drift reports domain exits with a time stamp") {
    const numerics::OdeRhs drift_right = [](double, std::span<const double>,
                                            std::span<double> dy) { dy[0] = 1.0; };
    const NumericCL asin_cl{[](std::span<const double> y) { return std::asin(y[0]); },
                            "asin(y)"};
    numerics::IntegratorConfig cfg;
    cfg.dt = 1e-3;
    CHECK_THROWS_AS(cl_drift(drift_right, asin_cl, {0.9}, 1.0, cfg), DomainError);
}

TEST_CASE("drift scales at integrator order") {
    const numerics::OdeRhs harmonic = [](double, std::span<const double> y,
                                         std::span<double> dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    const NumericCL energy{[](std::span<const double> y) { return y[0] * y[0] + y[1] * y[1]; },
                           "energy"};
    numerics::IntegratorConfig coarse, fine;
    coarse.dt = 1e-2;
    fine.dt = 5e-3;
    const double d1 = cl_drift(harmonic, energy, {1.0, 0.0}, 10.0, coarse);
    const double d2 = cl_drift(harmonic, energy, {1.0, 0.0}, 10.0, fine);
    CHECK(d1 / d2 >= 14.0);
}
