#include "intlab/threebody.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "intlab/errors.hpp"

namespace intlab::threebody {

namespace {

constexpr double kCollision = 1e-8;

const std::array<std::pair<int, int>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};

std::array<double, 12> pack(const ThreeBodyState& s) {
    std::array<double, 12> y{};
    for (int j = 0; j < 3; ++j) {
        y[2 * j] = s.z[j].real();
        y[2 * j + 1] = s.z[j].imag();
        y[6 + 2 * j] = s.v[j].real();
        y[6 + 2 * j + 1] = s.v[j].imag();
    }
    return y;
}

ThreeBodyState unpack(std::span<const double> y, double t) {
    ThreeBodyState s;
    for (int j = 0; j < 3; ++j) {
        s.z[j] = cplx(y[2 * j], y[2 * j + 1]);
        s.v[j] = cplx(y[6 + 2 * j], y[6 + 2 * j + 1]);
    }
    s.t = t;
    return s;
}

}  // namespace

void ForceLaw::validate() const {
    if (!f || !F) throw ConfigError("threebody", "force_law", "f and F must both be set");
    for (double s : {0.31, 0.77, 1.9, 4.6}) {
        const double h = 1e-5 * s;
        const double fd = (F(s + h) - F(s - h)) / (2.0 * h);
        const double scale = std::max({1.0, std::abs(fd), std::abs(f(s))});
        if (std::abs(fd - f(s)) > 1e-6 * scale)
            throw ContractError("threebody", "force_law",
                                "F' != f near s=" + std::to_string(s) + " for " + label);
    }
}

ForceLaw ForceLaw::power(double coeff, double exponent) {
    if (coeff == 0.0) throw ConfigError("threebody", "force_law", "zero force coefficient");
    ForceLaw law;
    law.label = "power(" + std::to_string(coeff) + ", " + std::to_string(exponent) + ")";
    law.f = [coeff, exponent](double s) { return coeff * std::pow(s, exponent); };
    if (std::abs(exponent + 1.0) < 1e-12) {
        law.F = [coeff](double s) { return coeff * std::log(s); };
    } else {
        law.F = [coeff, exponent](double s) {
            return coeff * std::pow(s, exponent + 1.0) / (exponent + 1.0);
        };
    }
    return law;
}

ForceLaw ForceLaw::newton_like(double coeff) { return power(coeff, -1.5); }

ForceLaw ForceLaw::poincare(double sigma) { return power(sigma, -2.0); }

void ThreeBodyState::enforce_com_gauge() {
    const cplx zc = (z[0] + z[1] + z[2]) / 3.0;
    const cplx vc = (v[0] + v[1] + v[2]) / 3.0;
    for (int j = 0; j < 3; ++j) {
        z[j] -= zc;
        v[j] -= vc;
    }
}

void ThreeBodyState::require_com_gauge(double tol) const {
    const double scale = std::max({1.0, std::abs(z[0]), std::abs(z[1]), std::abs(z[2])});
    if (std::abs(z[0] + z[1] + z[2]) > tol * scale ||
        std::abs(v[0] + v[1] + v[2]) > tol * scale)
        throw ContractError("threebody", "state",
                            "state is not in the center-of-mass gauge");
}

double min_pair_distance(const ThreeBodyState& s) {
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : kPairs) dmin = std::min(dmin, std::abs(s.z[a] - s.z[b]));
    return dmin;
}

double inertia(const ThreeBodyState& s) {
    double acc = 0.0;
    for (const auto& [a, b] : kPairs) acc += std::norm(s.z[a] - s.z[b]);
    return acc;
}

std::array<cplx, 3> accelerations(const ThreeBodyState& s, const ForceLaw& law) {
    for (const auto& [a, b] : kPairs) {
        const double d = std::abs(s.z[a] - s.z[b]);
        if (d < kCollision)
            throw SingularityError("threebody", "accelerations",
                                   "bodies " + std::to_string(a + 1) + "," +
                                       std::to_string(b + 1) + " within collision threshold at t=" +
                                       std::to_string(s.t),
                                   s.t);
    }
    std::array<cplx, 3> acc{};
    for (const auto& [a, b] : kPairs) {
        const cplx zab = s.z[a] - s.z[b];
        const double fab = law.f(std::norm(zab));
        acc[a] += zab * fab;
        acc[b] -= zab * fab;
    }
    return acc;
}

MonitorReport monitors(const ThreeBodyState& s, const ForceLaw& law) {
    MonitorReport rep;
    rep.com_velocity = s.v[0] + s.v[1] + s.v[2];
    double kinetic = 0.0, potential = 0.0;
    for (int j = 0; j < 3; ++j) kinetic += std::norm(s.v[j]);
    for (const auto& [a, b] : kPairs) potential += law.F(std::norm(s.z[a] - s.z[b]));
    rep.energy = kinetic - potential;
    double am = 0.0;
    for (int j = 0; j < 3; ++j) am += std::imag(s.v[j] * std::conj(s.z[j]));
    rep.angular_momentum = am;
    rep.inertia = inertia(s);

    // virial contraction sum r_j . grad_j U versus 2 sum f |z_jk|^2, with the
    // gradient taken by finite differences on U(positions)
    auto potential_at = [&](const std::array<cplx, 3>& zs) {
        double u = 0.0;
        for (const auto& [a, b] : kPairs) u += law.F(std::norm(zs[a] - zs[b]));
        return u;
    };
    double contraction = 0.0;
    const double h = 1e-6 * std::max(1.0, std::sqrt(rep.inertia));
    for (int j = 0; j < 3; ++j) {
        for (int comp = 0; comp < 2; ++comp) {
            auto zp = s.z, zm = s.z;
            const cplx dz = comp == 0 ? cplx(h, 0.0) : cplx(0.0, h);
            zp[j] += dz;
            zm[j] -= dz;
            const double grad = (potential_at(zp) - potential_at(zm)) / (2.0 * h);
            contraction += (comp == 0 ? s.z[j].real() : s.z[j].imag()) * grad;
        }
    }
    double twist = 0.0;
    for (const auto& [a, b] : kPairs) {
        const double sq = std::norm(s.z[a] - s.z[b]);
        twist += law.f(sq) * sq;
    }
    rep.lagrange_jacobi_residual = std::abs(contraction - 2.0 * twist);
    return rep;
}

double inertia_convexity_expression(const ThreeBodyState& s, const ForceLaw& law) {
    double acc = 0.0;
    for (const auto& [a, b] : kPairs) {
        acc += std::norm(s.v[a] - s.v[b]);
        const double sq = std::norm(s.z[a] - s.z[b]);
        acc += 3.0 * law.f(sq) * sq;
    }
    return acc;
}

void integrate(ThreeBodyState& s, const ForceLaw& law, double T,
               const numerics::IntegratorConfig& config,
               const std::function<void(const ThreeBodyState&)>& observe) {
    law.validate();
    const double t0 = s.t;
    const std::array<double, 12> packed = pack(s);
    std::vector<double> y(packed.begin(), packed.end());
    const numerics::OdeRhs rhs = [&law](double t, std::span<const double> yy,
                                        std::span<double> dy) {
        const ThreeBodyState st = unpack(yy, t);
        const auto acc = accelerations(st, law);
        for (int j = 0; j < 3; ++j) {
            dy[2 * j] = st.v[j].real();
            dy[2 * j + 1] = st.v[j].imag();
            dy[6 + 2 * j] = acc[j].real();
            dy[6 + 2 * j + 1] = acc[j].imag();
        }
    };
    numerics::integrate(rhs, y, t0, t0 + T, config,
                        [&](double t, std::span<const double> yy) {
                            if (observe) observe(unpack(yy, t));
                        });
    s = unpack(y, t0 + T);
}

ConvexityAudit repulsion_convexity_audit(ThreeBodyState s, const ForceLaw& law, double T,
                                         const numerics::IntegratorConfig& config) {
    ConvexityAudit audit;
    audit.min_value = std::numeric_limits<double>::infinity();
    integrate(s, law, T, config, [&](const ThreeBodyState& st) {
        for (const auto& [a, b] : kPairs) {
            const double sq = std::norm(st.z[a] - st.z[b]);
            if (!(law.f(sq) > 0.0))
                throw ContractError("threebody", "repulsion_convexity_audit",
                                    "force law is not repulsive at s=" + std::to_string(sq));
        }
        audit.min_value = std::min(audit.min_value, inertia_convexity_expression(st, law));
    });
    audit.strictly_positive = audit.min_value > 0.0;
    return audit;
}

LagrangeOrbit lagrange_orbit(const ForceLaw& law, double side) {
    if (!(side > 0)) throw ConfigError("threebody", "lagrange_orbit", "side must be positive");
    law.validate();
    const double fs = law.f(side * side);
    if (!(fs < 0.0))
        throw DomainError("threebody", "lagrange_orbit",
                          "no circular equilateral orbit for a non-attractive law (f(s^2) = " +
                              std::to_string(fs) + ")");
    LagrangeOrbit orbit;
    orbit.omega = std::sqrt(-3.0 * fs);
    orbit.period = 2.0 * std::numbers::pi / orbit.omega;
    const double R = side / std::sqrt(3.0);
    for (int j = 0; j < 3; ++j) {
        const double phase = 2.0 * std::numbers::pi * j / 3.0;
        orbit.initial.z[j] = R * cplx(std::cos(phase), std::sin(phase));
        orbit.initial.v[j] = cplx(0.0, orbit.omega) * orbit.initial.z[j];
    }
    orbit.initial.enforce_com_gauge();  // exact cancellation of rounding residue
    return orbit;
}

DistanceReport track_distances(ThreeBodyState s, const ForceLaw& law, double T,
                               const numerics::IntegratorConfig& config, double side) {
    DistanceReport rep;
    integrate(s, law, T, config, [&](const ThreeBodyState& st) {
        std::array<double, 3> d{};
        int i = 0;
        for (const auto& [a, b] : kPairs) d[i++] = std::abs(st.z[a] - st.z[b]);
        const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
        rep.max_mutual_spread = std::max(rep.max_mutual_spread, *hi - *lo);
        for (double di : d)
            rep.max_deviation_from = std::max(rep.max_deviation_from, std::abs(di - side));
    });
    return rep;
}

ThreeBodyState rotational_zero_energy_data(const std::array<cplx, 3>& positions, double sigma) {
    if (!(sigma < 0.0))
        throw ConfigError("threebody", "rotational_zero_energy_data",
                          "zero-energy rigid rotation needs an attractive law (sigma < 0)");
    ThreeBodyState s;
    s.z = positions;
    s.enforce_com_gauge();
    double inertia_about_com = 0.0;
    for (int j = 0; j < 3; ++j) inertia_about_com += std::norm(s.z[j]);
    const ForceLaw law = ForceLaw::poincare(sigma);
    double potential = 0.0;
    for (const auto& [a, b] : kPairs) potential += law.F(std::norm(s.z[a] - s.z[b]));
    if (!(potential > 0.0) || inertia_about_com == 0.0)
        throw DomainError("threebody", "rotational_zero_energy_data",
                          "cannot rescale velocities to zero energy for this geometry");
    const double lambda = std::sqrt(potential / inertia_about_com);
    for (int j = 0; j < 3; ++j) s.v[j] = cplx(0.0, lambda) * s.z[j];
    return s;
}

InertiaStudy poincare_inertia_study(ThreeBodyState s, double sigma, double T,
                                    const numerics::IntegratorConfig& config) {
    s.require_com_gauge();
    const ForceLaw law = ForceLaw::poincare(sigma);
    InertiaStudy study;
    study.energy = monitors(s, law).energy;
    const double z0 = inertia(s);
    std::vector<double> ts, zs;
    integrate(s, law, T, config, [&](const ThreeBodyState& st) {
        study.inertia_drift = std::max(study.inertia_drift, std::abs(inertia(st) - z0));
        ts.push_back(st.t);
        zs.push_back(inertia(st));
    });
    // measured curvature from the endpoints (Z is exactly quadratic in t for
    // this homogeneity): Z(T) = Z(0) + Z'(0) T + 3 E T^2
    if (ts.size() >= 3) {
        const double t1 = ts[ts.size() / 2], t2 = ts.back();
        const double z1 = zs[ts.size() / 2], z2 = zs.back();
        // solve for the quadratic coefficient with Z'(0) eliminated
        const double q = (z2 - z0) / t2 - (z1 - z0) / t1;
        study.curvature = 2.0 * q / (t2 - t1);
    }
    study.conserved = study.inertia_drift < 1e-6 * std::max(1.0, z0);
    return study;
}

std::vector<double> calogero_accelerations(std::span<const double> x) {
    const size_t n = x.size();
    for (size_t i = 0; i + 1 < n; ++i)
        if (!(x[i] < x[i + 1]))
            throw SingularityError("threebody", "calogero",
                                   "ordering violated between particles " + std::to_string(i + 1) +
                                       " and " + std::to_string(i + 2),
                                   0.0);
    std::vector<double> a(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = x[i] - x[j];
            if (std::abs(d) < kCollision)
                throw SingularityError("threebody", "calogero", "particles collide", 0.0);
            a[i] += 2.0 / (d * d * d);
        }
    }
    return a;
}

double calogero_energy(std::span<const double> x, std::span<const double> v) {
    double e = 0.0;
    for (double vi : v) e += 0.5 * vi * vi;
    for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = i + 1; j < x.size(); ++j)
            e += 1.0 / ((x[i] - x[j]) * (x[i] - x[j]));
    return e;
}

CalogeroRun calogero_run(std::vector<double> x0, std::vector<double> v0, double T,
                         const numerics::IntegratorConfig& config) {
    const size_t n = x0.size();
    if (n < 2 || v0.size() != n)
        throw ConfigError("threebody", "calogero_run", "need matching x0/v0 with n >= 2");
    for (size_t i = 0; i + 1 < n; ++i)
        if (!(x0[i] < x0[i + 1]))
            throw ConfigError("threebody", "calogero_run", "particles must be strictly ordered");

    const double e0 = calogero_energy(x0, v0);
    double p0 = 0.0;
    for (double vi : v0) p0 += vi;

    std::vector<double> y;
    y.insert(y.end(), x0.begin(), x0.end());
    y.insert(y.end(), v0.begin(), v0.end());
    CalogeroRun run;
    const numerics::OdeRhs rhs = [n](double, std::span<const double> yy, std::span<double> dy) {
        const auto acc = calogero_accelerations(yy.subspan(0, n));
        for (size_t i = 0; i < n; ++i) {
            dy[i] = yy[n + i];
            dy[n + i] = acc[i];
        }
    };
    numerics::integrate(rhs, y, 0.0, T, config, [&](double, std::span<const double> yy) {
        const auto xs = yy.subspan(0, n);
        const auto vs = yy.subspan(n, n);
        run.energy_drift = std::max(run.energy_drift, std::abs(calogero_energy(xs, vs) - e0));
        double p = 0.0;
        for (double vi : vs) p += vi;
        run.momentum_drift = std::max(run.momentum_drift, std::abs(p - p0));
        for (size_t i = 0; i + 1 < n; ++i)
            if (!(xs[i] < xs[i + 1])) run.ordering_preserved = false;
    });
    run.x_final.assign(y.begin(), y.begin() + n);
    run.v_final.assign(y.begin() + n, y.end());
    return run;
}

SymmetricReduction two_body_reduce(cplx z2, cplx v2, const ForceLaw& law, double T,
                                   const numerics::IntegratorConfig& config) {
    if (std::abs(z2) < kCollision)
        throw ConfigError("threebody", "two_body_reduce", "outer bodies start in collision");
    ThreeBodyState s;
    s.z = {cplx(0.0), z2, -z2};
    s.v = {cplx(0.0), v2, -v2};

    // fixed steps keep the full and reduced runs on identical time points
    numerics::IntegratorConfig fixed = config;
    fixed.method = numerics::IntegratorConfig::Method::rk4_fixed;

    SymmetricReduction rep;
    integrate(s, law, T, fixed, [&](const ThreeBodyState& st) {
        rep.max_center_drift = std::max(rep.max_center_drift, std::abs(st.z[0]));
        rep.ts.push_back(st.t);
        rep.z2.push_back(st.z[1]);
    });

    // reduced central-force orbit: z'' = z (f(|z|^2) + 2 f(4 |z|^2))
    std::vector<double> y{z2.real(), z2.imag(), v2.real(), v2.imag()};
    const numerics::OdeRhs reduced = [&law](double, std::span<const double> yy,
                                            std::span<double> dy) {
        const cplx z(yy[0], yy[1]);
        const double sq = std::norm(z);
        const cplx acc = z * (law.f(sq) + 2.0 * law.f(4.0 * sq));
        dy[0] = yy[2];
        dy[1] = yy[3];
        dy[2] = acc.real();
        dy[3] = acc.imag();
    };
    size_t idx = 0;
    numerics::integrate(reduced, y, 0.0, T, fixed, [&](double t, std::span<const double> yy) {
        if (idx < rep.ts.size() && std::abs(rep.ts[idx] - t) < 1e-12) {
            rep.max_reduced_gap = std::max(rep.max_reduced_gap,
                                           std::abs(rep.z2[idx] - cplx(yy[0], yy[1])));
            ++idx;
        }
    });
    return rep;
}

}  // namespace intlab::threebody
