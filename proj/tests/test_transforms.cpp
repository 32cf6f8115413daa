#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "intlab/errors.hpp"
#include "intlab/transforms.hpp"

using namespace intlab;
using namespace intlab::transforms;
using numerics::cplx;
using numerics::Grid1D;
using numerics::SampledField;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("quadrature reduction of y'' = 2y^3 recovers y = 1/x") {
    // F = y^4/2, E = 0, decreasing branch through (x,y) = (1,1)
    const auto table = quadrature_reduce([](double y) { return 2.0 * y * y * y; },
                                         [](double y) { return 0.5 * y * y * y * y; }, 0.5, 2.0,
                                         0.0, -1, 0.0);
    const double shift = 1.0 - table.x_at(1.0);
    for (double x : {0.55, 0.8, 1.0, 1.33, 1.9}) {
        const double y = table.y_at(x - shift);
        CHECK(y == doctest::Approx(1.0 / x).epsilon(1e-6));
    }
}

TEST_CASE("quadrature reduction of the oscillator gives the quarter period") {
    // y'' = -y, F = -y^2/2, E = 1/2: x(1) - x(0) = asin(1) = pi/2
    const auto table = quadrature_reduce([](double y) { return -y; },
                                         [](double y) { return -0.5 * y * y; }, 0.0, 1.0, 0.5,
                                         +1, 0.0);
    CHECK(table.x_at(1.0) - table.x_at(0.0) == doctest::Approx(kPi / 2.0).epsilon(1e-6));
}

TEST_CASE("zero force with E = 1/2 gives unit slope") {
    const auto table = quadrature_reduce([](double) { return 0.0; },
                                         [](double) { return 0.0; }, -1.0, 1.0, 0.5, +1, 0.0);
    for (double x : {0.1, 0.5, 1.3}) CHECK(table.y_at(x) == doctest::Approx(x - 1.0).epsilon(1e-8));
    CHECK(table.x_at(0.5) == doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("turning points and wrong antiderivatives are rejected") {
    CHECK_THROWS_AS(quadrature_reduce([](double y) { return -y; },
                                      [](double y) { return -0.5 * y * y; }, 0.0, 2.0, 0.5, +1,
                                      0.0),
                    DomainError);
    CHECK_THROWS_AS(quadrature_reduce([](double y) { return y; },
                                      [](double y) { return -0.5 * y * y; }, 0.0, 1.0, 0.5, +1,
                                      0.0),
                    ContractError);
}

TEST_CASE("hodograph solution of the linear profile") {
    const MonotoneProfile linear{[](double u) { return u; }, [](double) { return 1.0; }, -3.0,
                                 3.0};
    CHECK(breaking_time(linear) == doctest::Approx(0.5).epsilon(1e-9));
    for (double t : {0.0, 0.2, 0.4}) {
        for (double x : {-0.5, 0.0, 0.55}) {
            const auto pt = hodograph_solve(linear, x, t);
            CHECK(pt.u == doctest::Approx(x / (1.0 - 2.0 * t)).epsilon(1e-12));
            CHECK(pt.residual < 1e-12);
        }
    }
}

TEST_CASE("hodograph at t = 0 inverts the profile") {
    const MonotoneProfile cubic{[](double u) { return u * u * u + u; },
                                [](double u) { return 3.0 * u * u + 1.0; }, -2.0, 2.0};
    CHECK(hodograph_solve(cubic, 0.0, 0.0).u == doctest::Approx(0.0).epsilon(1e-12));
    for (double u0 : {-1.5, -0.4, 0.0, 0.8, 1.9}) {
        const double x = u0 * u0 * u0 + u0;
        CHECK(hodograph_solve(cubic, x, 0.0).u == doctest::Approx(u0).epsilon(1e-10));
    }
}

TEST_CASE("hodograph reports shocks and unreachable points") {
    const MonotoneProfile cubic{[](double u) { return u * u * u + u; },
                                [](double u) { return 3.0 * u * u + 1.0; }, -2.0, 2.0};
    CHECK(breaking_time(cubic) == doctest::Approx(0.5).epsilon(1e-9));
    try {
        hodograph_solve(cubic, 0.0, 1.0);  // u^3 - u = 0 has three roots
        FAIL("expected ShockFormedError");
    } catch (const ShockFormedError& e) {
        REQUIRE(e.roots().size() == 3);
        CHECK(e.roots()[0] == doctest::Approx(-1.0).epsilon(1e-9));
        CHECK(e.roots()[1] == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(e.roots()[2] == doctest::Approx(1.0).epsilon(1e-9));
    }

    const MonotoneProfile narrow{[](double u) { return u; }, [](double) { return 1.0; }, -1.0,
                                 1.0};
    CHECK_THROWS_AS(hodograph_solve(narrow, 10.0, 0.0), DomainError);
}

TEST_CASE("decreasing profiles never break") {
    const MonotoneProfile dec{[](double u) { return -u * u * u - u; },
                              [](double u) { return -3.0 * u * u - 1.0; }, -2.0, 2.0};
    CHECK(std::isinf(breaking_time(dec)));
    const auto pt = hodograph_solve(dec, 0.3, 5.0);
    CHECK(pt.residual < 1e-12);
}

TEST_CASE("thomas linearization round trip") {
    const Fn2 psi = [](double x, double y) { return 0.3 * std::sin(2.0 * x) * std::cos(y); };
    const Fn2 back = thomas_delinearize(thomas_linearize(psi));
    for (double x : {0.0, 0.4, 1.1}) {
        for (double y : {-0.3, 0.2, 0.9}) {
            CHECK(back(x, y) == doctest::Approx(psi(x, y)).epsilon(1e-14));
        }
    }
    const Fn2 sometimes_negative = [](double x, double) { return x; };
    const Fn2 bad = thomas_delinearize(sometimes_negative);
    CHECK_THROWS_AS(bad(-0.5, 0.0), PositivityError);
}

TEST_CASE("log of the linear solution solves the nonlinear Thomas equation") {
    // theta = fhat(y) + e^{k2 y} h(x) solves theta_xy + alpha theta_x = 0 for
    // alpha = -k2; psi = log theta then solves the Thomas equation.
    const double k2 = 1.0;
    const double alpha = -k2;
    const Fn2 theta = [k2](double x, double y) {
        return 2.0 + 0.3 * std::cos(y) + std::exp(k2 * y) * (1.0 + 0.5 * std::sin(x));
    };
    CHECK(thomas_linear_residual(theta, alpha, 0.0, 0.0, 1.0, 0.0, 1.0, 96, 8) < 1e-8);
    const Fn2 psi = thomas_delinearize(theta);
    CHECK(thomas_residual(psi, alpha, 0.0, 0.0, 1.0, 0.0, 1.0, 128, 8) < 1e-6);
    // negative control: wrong alpha leaves an O(1) residual
    CHECK(thomas_residual(psi, alpha + 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 64, 8) > 1e-3);
}

TEST_CASE("thomas general solution in the beta = 0 family") {
    ThomasParams p;
    p.alpha = -1.5;
    p.k1 = 0.5;  // k2 = -(k1 + alpha) = 1
    CHECK(p.k2() == doctest::Approx(1.0));

    const Fn2 phi = thomas_general_solution(p, [](double) { return 0.0; },
                                            [](double x) { return std::sin(x); });
    CHECK(thomas_reduced_residual(phi, p, 0.0, 1.0, 0.0, 1.0, 128, 8) < 1e-6);

    // h = 0 collapses to a function of y only
    const Fn2 fy = thomas_general_solution(p, [](double y) { return 1.0 + y * y; },
                                           [](double) { return 0.0; });
    CHECK(thomas_reduced_residual(fy, p, 0.0, 1.0, 0.0, 1.0, 64, 6) < 1e-12);

    // degenerate k2 = 0: additively separable solution
    ThomasParams sep;
    sep.alpha = 2.0;
    sep.k1 = -2.0;
    const Fn2 add = thomas_general_solution(sep, [](double y) { return std::cos(y); },
                                            [](double x) { return std::sin(x); });
    CHECK(thomas_reduced_residual(add, sep, 0.0, 1.0, 0.0, 1.0, 96, 8) < 1e-6);

    ThomasParams bad;
    bad.beta = 0.5;
    CHECK_THROWS_AS(thomas_general_solution(bad, [](double) { return 0.0; },
                                            [](double) { return 0.0; }),
                    ConfigError);
}

TEST_CASE("thomas residual refines at the stencil order") {
    // For the exact solution the measured residual is pure stencil
    // truncation error, so halving the grid divides it by 2^accuracy.
    const double k2 = 1.0;
    const Fn2 theta = [k2](double x, double y) {
        return 2.0 + 0.3 * std::cos(y) + std::exp(k2 * y) * (1.0 + 0.5 * std::sin(x));
    };
    const Fn2 psi = thomas_delinearize(theta);
    const double r1 = thomas_residual(psi, -k2, 0.0, 0.0, 1.0, 0.0, 1.0, 24, 2);
    const double r2 = thomas_residual(psi, -k2, 0.0, 0.0, 1.0, 0.0, 1.0, 47, 2);
    // n=24 -> n=47 doubles the resolution of the interior spacing
    const double order = std::log2(r1 / r2);
    CHECK(order == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("cole-hopf forward map") {
    const Grid1D g(128, 0.0, 2.0 * kPi);
    const auto flat = SampledField::from_function(g, [](double) { return cplx(3.7); });
    const auto u0 = cole_hopf(flat);
    for (const auto& z : u0.values) CHECK(std::abs(z) < 1e-14);

    const auto w = SampledField::from_function(g, [](double x) { return cplx(2.0 + std::cos(x)); });
    const auto u = cole_hopf(w);
    for (int j = 0; j < g.n; ++j) {
        const double x = g.x(j);
        CHECK(u.values[j].real() ==
              doctest::Approx(-std::sin(x) / (2.0 + std::cos(x))).epsilon(1e-12));
    }

    const auto signchange =
        SampledField::from_function(g, [](double x) { return cplx(std::cos(x)); });
    CHECK_THROWS_AS(cole_hopf(signchange), PositivityError);
}

TEST_CASE("cole-hopf round trip and gauge") {
    const Grid1D g(128, 0.0, 2.0 * kPi);
    const auto u = SampledField::from_function(g, [](double x) { return cplx(0.3 * std::sin(x)); });
    const auto w = inverse_cole_hopf(u);
    CHECK(w.values[0].real() == doctest::Approx(1.0).epsilon(1e-13));
    for (const auto& z : w.values) CHECK(z.real() > 0.0);
    const auto back = cole_hopf(w);
    for (int j = 0; j < g.n; ++j)
        CHECK(std::abs(back.values[j] - u.values[j]) < 1e-10);

    const auto biased =
        SampledField::from_function(g, [](double x) { return cplx(1.0 + std::sin(x)); });
    CHECK_THROWS_AS(inverse_cole_hopf(biased), DomainError);
}

TEST_CASE("viscosity scaling algebra") {
    CHECK_THROWS_AS(scale_burgers(0.0), ConfigError);
    const auto id = scale_burgers(1.0);
    CHECK(id.map_amplitude(0.7) == 0.7);
    CHECK(id.map_time(2.0) == 2.0);

    const auto s = scale_burgers(2.0);
    const auto identity = s.compose(s.inverse());
    CHECK(identity.eps == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.map_time(3.0) == doctest::Approx(6.0));
    CHECK(s.map_amplitude(3.0) == doctest::Approx(1.5));
}

TEST_CASE("reduction of u_t = phi(u) u_x to the inviscid flow") {
    // phi(u) = 2u with the hodograph solution u = x/(1-2t): v = 2u solves
    // v_t = v v_x
    const Fn2 u = [](double x, double t) { return x / (1.0 - 2.0 * t); };
    const Fn2 v = reduce_to_inviscid([](double s) { return 2.0 * s; }, u);
    CHECK(inviscid_residual(v, -0.5, 0.5, 0.05, 0.2, 64, 6) < 1e-6);

    // identity transform
    const Fn2 w = reduce_to_inviscid([](double s) { return s; }, u);
    CHECK(w(0.3, 0.1) == u(0.3, 0.1));

    // constant phi: advected profile, v is constant so both sides vanish
    const Fn2 adv = [](double x, double t) { return std::sin(x + 3.0 * t); };
    const Fn2 vc = reduce_to_inviscid([](double) { return 3.0; }, adv);
    CHECK(inviscid_residual(vc, -1.0, 1.0, 0.0, 0.5, 32, 4) < 1e-12);
}
