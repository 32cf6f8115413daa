#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "intlab/errors.hpp"
#include "intlab/threebody.hpp"

using namespace intlab;
using namespace intlab::threebody;

namespace {

numerics::IntegratorConfig tight_adaptive() {
    numerics::IntegratorConfig cfg;
    cfg.method = numerics::IntegratorConfig::Method::rkf45_adaptive;
    cfg.abs_tol = 1e-10;
    cfg.rel_tol = 1e-10;
    cfg.dt = 1e-2;
    return cfg;
}

ThreeBodyState random_state(std::mt19937& rng, double spread = 1.0) {
    std::uniform_real_distribution<double> u(-spread, spread);
    ThreeBodyState s;
    for (int j = 0; j < 3; ++j) {
        s.z[j] = cplx(u(rng), u(rng));
        s.v[j] = cplx(u(rng), u(rng));
    }
    s.enforce_com_gauge();
    if (min_pair_distance(s) < 0.3) return random_state(rng, spread);
    return s;
}

}  // namespace

TEST_CASE("force law validation") {
    CHECK_NOTHROW(ForceLaw::poincare(1.0).validate());
    CHECK_NOTHROW(ForceLaw::newton_like(-2.0).validate());
    ForceLaw broken = ForceLaw::poincare(1.0);
    broken.F = [](double s) { return s; };
    CHECK_THROWS_AS(broken.validate(), ContractError);
}

TEST_CASE("acceleration symmetries") {
    // symmetric collinear state: the middle body feels nothing
    ThreeBodyState s;
    s.z = {cplx(0.0), cplx(1.5), cplx(-1.5)};
    const auto law = ForceLaw::poincare(1.0);
    const auto acc = accelerations(s, law);
    CHECK(std::abs(acc[0]) == 0.0);

    // equilateral, repulsive: accelerations point radially outward
    const double R = 1.0;
    ThreeBodyState eq;
    for (int j = 0; j < 3; ++j) {
        const double phase = 2.0 * std::numbers::pi * j / 3.0;
        eq.z[j] = R * cplx(std::cos(phase), std::sin(phase));
    }
    const auto out = accelerations(eq, law);
    for (int j = 0; j < 3; ++j) {
        const cplx ratio = out[j] / eq.z[j];
        CHECK(ratio.real() > 0.0);
        CHECK(std::abs(ratio.imag()) < 1e-14);
    }
}

TEST_CASE("total force cancels exactly") {
    std::mt19937 rng(7101);
    const auto laws = {ForceLaw::poincare(1.0), ForceLaw::poincare(-0.7),
                       ForceLaw::newton_like(-1.0), ForceLaw::power(0.3, 1.0)};
    for (int trial = 0; trial < 30; ++trial) {
        const auto s = random_state(rng);
        for (const auto& law : laws) {
            const auto acc = accelerations(s, law);
            double scale = 1e-30;
            for (const auto& a : acc) scale = std::max(scale, std::abs(a));
            CHECK(std::abs(acc[0] + acc[1] + acc[2]) < 1e-15 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("collision guard") {
    ThreeBodyState s;
    s.z = {cplx(0.0), cplx(1e-9), cplx(1.0)};
    try {
        accelerations(s, ForceLaw::poincare(1.0));
        FAIL("expected SingularityError");
    } catch (const SingularityError& e) {
        CHECK(std::string(e.what()).find("1,2") != std::string::npos);
    }
}

TEST_CASE("monitors at a resting equilateral state") {
    const double side = 1.3;
    const auto law = ForceLaw::poincare(-1.0);
    ThreeBodyState s;
    const double R = side / std::sqrt(3.0);
    for (int j = 0; j < 3; ++j) {
        const double phase = 2.0 * std::numbers::pi * j / 3.0;
        s.z[j] = R * cplx(std::cos(phase), std::sin(phase));
    }
    s.enforce_com_gauge();
    const auto rep = monitors(s, law);
    CHECK(rep.energy == doctest::Approx(-3.0 * law.F(side * side)).epsilon(1e-12));
    CHECK(std::abs(rep.angular_momentum) < 1e-14);
    CHECK(std::abs(rep.com_velocity) == 0.0);
    CHECK(rep.inertia == doctest::Approx(3.0 * side * side).epsilon(1e-12));
}

TEST_CASE("virial contraction identity at random states") {
    std::mt19937 rng(515001);
    const auto law = ForceLaw::poincare(1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_state(rng);
        CHECK(monitors(s, law).lagrange_jacobi_residual < 1e-8);
    }
}

TEST_CASE("conserved quantities drift within adaptive tolerance") {
    std::mt19937 rng(2024);
    const auto law = ForceLaw::poincare(1.0);  // repulsive: smooth scattering
    ThreeBodyState s = random_state(rng);
    const auto ref = monitors(s, law);
    double e_drift = 0.0, am_drift = 0.0, com_max = 0.0;
    integrate(s, law, 10.0, tight_adaptive(), [&](const ThreeBodyState& st) {
        const auto m = monitors(st, law);
        e_drift = std::max(e_drift, std::abs(m.energy - ref.energy));
        am_drift = std::max(am_drift, std::abs(m.angular_momentum - ref.angular_momentum));
        com_max = std::max(com_max, std::abs(m.com_velocity));
    });
    CHECK(e_drift < 1e-8);
    CHECK(am_drift < 1e-8);
    CHECK(com_max < 1e-12);
}

TEST_CASE("drift scales at integrator order under step halving") {
    std::mt19937 rng(515);
    const auto law = ForceLaw::poincare(-0.5);
    const ThreeBodyState s0 = rotational_zero_energy_data(
        {cplx(1.0, 0.2), cplx(-0.6, 0.7), cplx(-0.4, -0.9)}, -0.5);
    auto drift_at = [&](double dt) {
        numerics::IntegratorConfig cfg;
        cfg.dt = dt;
        ThreeBodyState s = s0;
        const double e0 = monitors(s, law).energy;
        double worst = 0.0;
        integrate(s, law, 3.0, cfg, [&](const ThreeBodyState& st) {
            worst = std::max(worst, std::abs(monitors(st, law).energy - e0));
        });
        return worst;
    };
    const double d1 = drift_at(1e-2);
    const double d2 = drift_at(5e-3);
    CHECK(d1 / d2 >= 14.0);
}

TEST_CASE("convexity audit of repulsive motion") {
    std::mt19937 rng(31337);
    const auto law = ForceLaw::poincare(1.0);
    const auto audit = repulsion_convexity_audit(random_state(rng), law, 10.0, tight_adaptive());
    CHECK(audit.strictly_positive);
    CHECK(audit.min_value > 0.0);

    // resting state: the expression reduces to the force sum, still positive
    ThreeBodyState rest;
    rest.z = {cplx(1.0), cplx(-0.5, 0.8), cplx(-0.5, -0.8)};
    rest.enforce_com_gauge();
    CHECK(inertia_convexity_expression(rest, law) > 0.0);

    // attractive law: audit refuses
    CHECK_THROWS_AS(
        repulsion_convexity_audit(random_state(rng), ForceLaw::poincare(-1.0), 1.0,
                                  tight_adaptive()),
        ContractError);
}

TEST_CASE("convexity expression equals the second derivative of Z") {
    const auto law = ForceLaw::poincare(1.0);
    std::mt19937 rng(4242);
    ThreeBodyState s = random_state(rng);
    numerics::IntegratorConfig cfg;
    cfg.dt = 1e-3;
    std::vector<double> zs, exprs;
    integrate(s, law, 0.2, cfg, [&](const ThreeBodyState& st) {
        zs.push_back(inertia(st));
        exprs.push_back(inertia_convexity_expression(st, law));
    });
    // central second difference of the sampled Z against 2x the expression
    for (size_t i = 50; i + 50 < zs.size(); i += 37) {
        const double fd = (zs[i + 1] - 2.0 * zs[i] + zs[i - 1]) / (1e-3 * 1e-3);
        CHECK(fd == doctest::Approx(2.0 * exprs[i]).epsilon(1e-5));
    }
}

TEST_CASE("lagrange equidistant orbit") {
    const auto law = ForceLaw::newton_like(-1.0);
    const auto orbit = lagrange_orbit(law, 1.0);
    CHECK(orbit.omega == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

    const auto rep =
        track_distances(orbit.initial, law, orbit.period, tight_adaptive(), 1.0);
    CHECK(rep.max_mutual_spread < 1e-6);
    CHECK(rep.max_deviation_from < 1e-6);

    // same initial state under a stronger law: the triangle breathes
    const auto perturbed = ForceLaw::power(-1.3, -1.5);
    const auto bad = track_distances(orbit.initial, perturbed, orbit.period, tight_adaptive(),
                                     1.0);
    CHECK(bad.max_deviation_from > 1e-3);

    CHECK_THROWS_AS(lagrange_orbit(ForceLaw::poincare(1.0), 1.0), DomainError);
}

TEST_CASE("poincare case: inertia conservation is tied to zero energy") {
    // scalene zero-energy rotational data (mildly perturbed triangle stays
    // clear of collisions over the run)
    const std::array<cplx, 3> pos{cplx(1.1, 0.1), cplx(-0.55, 0.95), cplx(-0.55, -1.05)};
    const double sigma = -1.0;
    const auto s0 = rotational_zero_energy_data(pos, sigma);
    const auto law = ForceLaw::poincare(sigma);
    CHECK(std::abs(monitors(s0, law).energy) < 1e-12);

    auto study = poincare_inertia_study(s0, sigma, 5.0, tight_adaptive());
    CHECK(study.conserved);
    CHECK(study.inertia_drift < 1e-6);

    // doubling the geometry and rescaling the rotation keeps the bound
    std::array<cplx, 3> pos2;
    for (int j = 0; j < 3; ++j) pos2[j] = 2.0 * pos[j];
    const auto s2 = rotational_zero_energy_data(pos2, sigma);
    const auto study2 = poincare_inertia_study(s2, sigma, 5.0, tight_adaptive());
    CHECK(study2.conserved);
    CHECK(study2.inertia_drift < 1e-6);

    // nonzero energy: Z grows convexly with curvature 6E
    ThreeBodyState hot = s0;
    for (auto& vj : hot.v) vj *= 1.3;
    const double e_hot = monitors(hot, law).energy;
    CHECK(e_hot > 0.0);
    const auto grow = poincare_inertia_study(hot, sigma, 5.0, tight_adaptive());
    CHECK(!grow.conserved);
    CHECK(grow.curvature == doctest::Approx(6.0 * e_hot).epsilon(1e-6));
}

TEST_CASE("collinear gas: symmetric two-particle scattering") {
    numerics::IntegratorConfig cfg = tight_adaptive();
    const auto run = calogero_run({-1.0, 1.0}, {0.0, 0.0}, 10.0, cfg);
    CHECK(run.momentum_drift < 1e-12);
    CHECK(run.energy_drift < 1e-9);
    CHECK(run.ordering_preserved);
    // repulsion pushes them apart symmetrically
    CHECK(run.x_final[0] == doctest::Approx(-run.x_final[1]).epsilon(1e-10));
    CHECK(run.v_final[0] < 0.0);
    CHECK(run.v_final[1] > 0.0);
}

TEST_CASE("collinear gas: three-particle scattering permutes the velocities") {
    numerics::IntegratorConfig cfg = tight_adaptive();
    cfg.abs_tol = cfg.rel_tol = 1e-12;  // long run: keep the accumulated drift tiny
    const std::vector<double> x0{-1000.0, 0.0, 1000.0};
    const std::vector<double> v0{1.0, 0.0, -1.0};
    const auto run = calogero_run(x0, v0, 2200.0, cfg);
    CHECK(run.energy_drift < 1e-9);
    CHECK(run.momentum_drift < 1e-10);
    CHECK(run.ordering_preserved);

    // asymptotic outgoing speeds are a permutation of the incoming ones
    std::vector<double> vin = v0, vout = run.v_final;
    std::sort(vin.begin(), vin.end());
    std::sort(vout.begin(), vout.end());
    for (size_t i = 0; i < vin.size(); ++i)
        CHECK(vout[i] == doctest::Approx(vin[i]).epsilon(1e-5));

    CHECK_THROWS_AS(calogero_run({1.0, -1.0}, {0.0, 0.0}, 1.0, cfg), ConfigError);
}

TEST_CASE("symmetric data reduces to a central-force problem") {
    const auto law = ForceLaw::newton_like(-1.0);
    // circular orbit of the reduced problem: omega^2 = -(f(R^2) + 2 f(4R^2))
    const double R = 1.0;
    const double mu = -(law.f(R * R) + 2.0 * law.f(4.0 * R * R));
    REQUIRE(mu > 0.0);
    const cplx z2(R, 0.0);
    const cplx v2(0.0, std::sqrt(mu) * R);
    numerics::IntegratorConfig cfg;
    cfg.dt = 1e-3;
    const auto rep = two_body_reduce(z2, v2, law, 10.0, cfg);
    CHECK(rep.max_center_drift < 1e-10);
    CHECK(rep.max_reduced_gap < 1e-8);
    // circularity: |z2| stays within 1e-6 of R
    double worst = 0.0;
    for (const auto& z : rep.z2) worst = std::max(worst, std::abs(std::abs(z) - R));
    CHECK(worst < 1e-6);
}

TEST_CASE("mirrored symmetric data gives the mirrored trajectory") {
    const auto law = ForceLaw::newton_like(-1.0);
    numerics::IntegratorConfig cfg;
    cfg.dt = 1e-3;
    const cplx z2(1.0, 0.3), v2(-0.2, 0.9);
    const auto a = two_body_reduce(z2, v2, law, 3.0, cfg);
    const auto b = two_body_reduce(-z2, -v2, law, 3.0, cfg);
    REQUIRE(a.z2.size() == b.z2.size());
    for (size_t i = 0; i < a.z2.size(); i += 100)
        CHECK(std::abs(a.z2[i] + b.z2[i]) < 1e-12);
}
