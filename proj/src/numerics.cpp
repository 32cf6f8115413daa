#include "intlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "intlab/errors.hpp"

namespace intlab::numerics {

namespace {

constexpr double kPi = std::numbers::pi;

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT, sign = -1 forward / +1 inverse (no scaling).
void fft_pow2(std::vector<cplx>& a, int sign) {
    const int n = static_cast<int>(a.size());
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * kPi / len;
        const cplx wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            cplx w(1.0);
            for (int j = 0; j < len / 2; ++j) {
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// O(n^2) fallback for even non-power-of-two sizes.
std::vector<cplx> dft_naive(const std::vector<cplx>& v, int sign) {
    const int n = static_cast<int>(v.size());
    std::vector<cplx> out(n);
    for (int k = 0; k < n; ++k) {
        cplx acc(0.0);
        for (int j = 0; j < n; ++j) {
            const double ang = sign * 2.0 * kPi * static_cast<double>(j) * k / n;
            acc += v[j] * cplx(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

}  // namespace

Grid1D::Grid1D(int n_, double a_, double b_) : n(n_), a(a_), b(b_) {
    if (n < 8) throw ConfigError("numerics", "grid", "grid needs n >= 8 points");
    if (!(b > a)) throw ConfigError("numerics", "grid", "grid needs b > a");
}

SampledField::SampledField(Grid1D g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.n)
        throw ConfigError("numerics", "field", "value count does not match grid size");
}

SampledField SampledField::from_function(const Grid1D& g, const std::function<cplx(double)>& f) {
    std::vector<cplx> v(g.n);
    for (int j = 0; j < g.n; ++j) v[j] = f(g.x(j));
    return SampledField(g, std::move(v));
}

double SampledField::max_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

cplx& SpectralField::at(int k) {
    const int n = grid.n;
    return coeff[(k % n + n) % n];
}

const cplx& SpectralField::at(int k) const {
    const int n = grid.n;
    return coeff[(k % n + n) % n];
}

double SpectralField::wavenumber(int k) const { return 2.0 * kPi * k / grid.length(); }

cplx SpectralField::eval(double x) const {
    cplx acc(0.0);
    for (int k = kmin(); k <= kmax(); ++k) {
        const double phase = wavenumber(k) * (x - grid.a);
        acc += at(k) * cplx(std::cos(phase), std::sin(phase));
    }
    return acc;
}

SpectralField dft(const SampledField& field) {
    const int n = field.grid.n;
    if (n % 2 != 0) throw ConfigError("numerics", "dft", "dft requires even n");
    std::vector<cplx> c = field.values;
    if (is_pow2(n)) {
        fft_pow2(c, -1);
    } else {
        c = dft_naive(c, -1);
    }
    const double scale = 1.0 / n;
    for (auto& z : c) z *= scale;
    return SpectralField{field.grid, std::move(c)};
}

SampledField idft(const SpectralField& spec) {
    const int n = spec.grid.n;
    std::vector<cplx> v = spec.coeff;
    if (is_pow2(n)) {
        fft_pow2(v, +1);
    } else {
        v = dft_naive(v, +1);
    }
    return SampledField(spec.grid, std::move(v));
}

SampledField spectral_derivative(const SampledField& field, int order) {
    if (order < 1) throw ConfigError("numerics", "spectral_derivative", "order must be >= 1");
    SpectralField s = dft(field);
    const int n = s.grid.n;
    for (int k = -n / 2; k < n / 2; ++k) {
        if (k == -n / 2) {
            s.at(k) = 0.0;  // Nyquist mode dropped when differentiating
            continue;
        }
        const cplx ik(0.0, s.wavenumber(k));
        s.at(k) *= std::pow(ik, order);
    }
    return idft(s);
}

SampledField spectral_antiderivative(const SampledField& field, double mean_tol) {
    SpectralField s = dft(field);
    const double mean = std::abs(s.at(0));
    if (mean > mean_tol)
        throw DomainError("numerics", "spectral_antiderivative",
                          "field has nonzero mean " + std::to_string(mean) +
                              "; periodic antiderivative does not exist");
    const int n = s.grid.n;
    s.at(0) = 0.0;
    for (int k = -n / 2; k < n / 2; ++k) {
        if (k == 0) continue;
        if (k == -n / 2) {
            s.at(k) = 0.0;
            continue;
        }
        s.at(k) /= cplx(0.0, s.wavenumber(k));
    }
    SampledField v = idft(s);
    const cplx v0 = v.values[0];
    for (auto& z : v.values) z -= v0;
    return v;
}

std::vector<double> central_stencil(int order, int accuracy) {
    if (order < 1) throw ConfigError("numerics", "stencil", "derivative order must be >= 1");
    if (accuracy < 2 || accuracy % 2 != 0)
        throw ConfigError("numerics", "stencil", "accuracy must be even and >= 2");
    // Smallest symmetric node set -r..r delivering exactly the requested order.
    const int r = (order + 1) / 2 + accuracy / 2 - 1;
    const int nn = 2 * r + 1;
    // Fornberg weights for derivative `order` at x=0 on nodes -r..r.
    const int m = order;
    std::vector<std::vector<double>> w(m + 1, std::vector<double>(nn, 0.0));
    std::vector<double> x(nn);
    for (int i = 0; i < nn; ++i) x[i] = i - r;
    double c1 = 1.0;
    w[0][0] = 1.0;
    for (int i = 1; i < nn; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    w[k][i] = c1 * (k * w[k - 1][i - 1] - x[i - 1] * w[k][i - 1]) / c2;
                w[0][i] = -c1 * x[i - 1] * w[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k)
                w[k][j] = (x[i] * w[k][j] - k * w[k - 1][j]) / c3;
            w[0][j] = x[i] * w[0][j] / c3;
        }
        c1 = c2;
    }
    std::vector<double> out = w[m];
    // enforce the exact zero row sum (derivatives annihilate constants)
    double s = 0.0;
    for (int i = 0; i < nn; ++i)
        if (i != r) s += out[i];
    out[r] = -s;
    return out;
}

SampledField fd_derivative(const SampledField& field, int order, int accuracy) {
    if (accuracy != 2 && accuracy != 4 && accuracy != 6 && accuracy != 8)
        throw ConfigError("numerics", "fd_derivative", "accuracy must be one of 2,4,6,8");
    const std::vector<double> w = central_stencil(order, accuracy);
    const int r = (static_cast<int>(w.size()) - 1) / 2;
    const int n = field.grid.n;
    if (2 * r + 1 > n)
        throw ConfigError("numerics", "fd_derivative", "stencil wider than the grid");
    const double hk = std::pow(field.grid.h(), order);
    std::vector<cplx> out(n);
    for (int j = 0; j < n; ++j) {
        // Zero-sum weights allow differencing against the center value, so a
        // constant field yields exactly zero.
        cplx acc(0.0);
        for (int s = -r; s <= r; ++s) {
            if (s == 0) continue;
            const int idx = ((j + s) % n + n) % n;
            acc += w[s + r] * (field.values[idx] - field.values[j]);
        }
        out[j] = acc / hk;
    }
    return SampledField(field.grid, std::move(out));
}

double fd_derivative_at(const std::function<double(double)>& f, double x, int order,
                        int accuracy, double h) {
    const std::vector<double> w = central_stencil(order, accuracy);
    const int r = (static_cast<int>(w.size()) - 1) / 2;
    double acc = 0.0;
    for (int s = -r; s <= r; ++s) acc += w[s + r] * f(x + s * h);
    return acc / std::pow(h, order);
}

cplx fd_derivative_at(const std::function<cplx(double)>& f, double x, int order, int accuracy,
                      double h) {
    const std::vector<double> w = central_stencil(order, accuracy);
    const int r = (static_cast<int>(w.size()) - 1) / 2;
    cplx acc(0.0);
    for (int s = -r; s <= r; ++s) acc += w[s + r] * f(x + s * h);
    return acc / std::pow(h, order);
}

void IntegratorConfig::validate() const {
    if (!(dt > 0)) throw ConfigError("numerics", "integrate", "dt must be positive");
    if (!(abs_tol > 0) || !(rel_tol > 0))
        throw ConfigError("numerics", "integrate", "tolerances must be positive");
    if (max_steps <= 0) throw ConfigError("numerics", "integrate", "max_steps must be positive");
}

namespace {

void eval_rhs(const OdeRhs& rhs, double t, std::span<const double> y, std::vector<double>& dy) {
    rhs(t, y, dy);
    if (!all_finite(dy))
        throw SingularityError("numerics", "integrate", "non-finite rhs evaluation at t=" +
                                                            std::to_string(t),
                               t);
}

}  // namespace

std::vector<double> rk4_step(const OdeRhs& rhs, std::span<const double> state, double t,
                             double dt) {
    const size_t n = state.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n), out(n);
    eval_rhs(rhs, t, state, k1);
    for (size_t i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * dt * k1[i];
    eval_rhs(rhs, t + 0.5 * dt, tmp, k2);
    for (size_t i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * dt * k2[i];
    eval_rhs(rhs, t + 0.5 * dt, tmp, k3);
    for (size_t i = 0; i < n; ++i) tmp[i] = state[i] + dt * k3[i];
    eval_rhs(rhs, t + dt, tmp, k4);
    for (size_t i = 0; i < n; ++i)
        out[i] = state[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

namespace {

// Fehlberg 4(5) tableau.
constexpr double B21 = 1.0 / 4.0;
constexpr double B31 = 3.0 / 32.0, B32 = 9.0 / 32.0;
constexpr double B41 = 1932.0 / 2197.0, B42 = -7200.0 / 2197.0, B43 = 7296.0 / 2197.0;
constexpr double B51 = 439.0 / 216.0, B52 = -8.0, B53 = 3680.0 / 513.0, B54 = -845.0 / 4104.0;
constexpr double B61 = -8.0 / 27.0, B62 = 2.0, B63 = -3544.0 / 2565.0, B64 = 1859.0 / 4104.0,
                 B65 = -11.0 / 40.0;
constexpr double C1 = 25.0 / 216.0, C3 = 1408.0 / 2565.0, C4 = 2197.0 / 4104.0, C5 = -1.0 / 5.0;
constexpr double D1 = 16.0 / 135.0, D3 = 6656.0 / 12825.0, D4 = 28561.0 / 56430.0,
                 D5 = -9.0 / 50.0, D6 = 2.0 / 55.0;

void integrate_rkf45(const OdeRhs& rhs, std::vector<double>& y, double t0, double t1,
                     const IntegratorConfig& cfg,
                     const std::function<void(double, std::span<const double>)>& observe) {
    const size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), tmp(n), y5(n), y4(n);
    double t = t0;
    double h = std::min(cfg.dt, t1 - t0);
    double prev_err = 1.0;
    long steps = 0;
    if (observe) observe(t, y);
    while (t < t1) {
        if (++steps > cfg.max_steps)
            throw AccuracyError("numerics", "integrate",
                                "adaptive integrator exceeded max_steps at t=" + std::to_string(t));
        h = std::min(h, t1 - t);
        eval_rhs(rhs, t, y, k1);
        for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * B21 * k1[i];
        eval_rhs(rhs, t + h / 4.0, tmp, k2);
        for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (B31 * k1[i] + B32 * k2[i]);
        eval_rhs(rhs, t + 3.0 * h / 8.0, tmp, k3);
        for (size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (B41 * k1[i] + B42 * k2[i] + B43 * k3[i]);
        eval_rhs(rhs, t + 12.0 * h / 13.0, tmp, k4);
        for (size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (B51 * k1[i] + B52 * k2[i] + B53 * k3[i] + B54 * k4[i]);
        eval_rhs(rhs, t + h, tmp, k5);
        for (size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (B61 * k1[i] + B62 * k2[i] + B63 * k3[i] + B64 * k4[i] +
                                 B65 * k5[i]);
        eval_rhs(rhs, t + h / 2.0, tmp, k6);

        double err = 0.0;
        for (size_t i = 0; i < n; ++i) {
            y4[i] = y[i] + h * (C1 * k1[i] + C3 * k3[i] + C4 * k4[i] + C5 * k5[i]);
            y5[i] = y[i] + h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]);
            const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(y5[i] - y4[i]) / scale);
        }
        if (err <= 1.0) {
            t += h;
            y = y5;
            if (observe) observe(t, y);
            prev_err = std::max(err, 1e-16);
        }
        // PI step controller on the 5th-order pair.
        const double safety = 0.9;
        double factor = safety * std::pow(std::max(err, 1e-16), -0.7 / 5.0) *
                        std::pow(prev_err, 0.4 / 5.0);
        factor = std::clamp(factor, 0.2, 5.0);
        h *= factor;
        if (!(h > 0) || !std::isfinite(h))
            throw AccuracyError("numerics", "integrate", "step size collapsed");
    }
}

}  // namespace

void integrate(const OdeRhs& rhs, std::vector<double>& state, double t0, double t1,
               const IntegratorConfig& config,
               const std::function<void(double, std::span<const double>)>& observe) {
    config.validate();
    if (t1 < t0) throw ConfigError("numerics", "integrate", "t1 must be >= t0");
    if (t1 == t0) {
        if (observe) observe(t0, state);
        return;
    }
    if (config.method == IntegratorConfig::Method::rkf45_adaptive) {
        integrate_rkf45(rhs, state, t0, t1, config, observe);
        return;
    }
    const long nsteps = std::max(1L, std::lround((t1 - t0) / config.dt));
    if (nsteps > config.max_steps)
        throw ConfigError("numerics", "integrate", "fixed-step count exceeds max_steps");
    const double dt = (t1 - t0) / nsteps;
    double t = t0;
    if (observe) observe(t, state);
    for (long s = 0; s < nsteps; ++s) {
        state = rk4_step(rhs, state, t, dt);
        t = t0 + (s + 1) * dt;
        if (observe) observe(t, state);
    }
}

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

// tol halves per level but is floored near machine precision of the whole
// integral: below that, subdivision cannot improve the estimate.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, double tol_floor,
                        int depth, int max_depth, bool& budget_ok) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(fa, flm, fm, a, m);
    const double right = simpson(fm, frm, fb, m, b);
    const double delta = left + right - whole;
    const double accept = 15.0 * std::max(tol, tol_floor);
    if (std::abs(delta) <= accept && depth > 0)
        return left + right + delta / 15.0;
    if (depth >= max_depth) {
        budget_ok = budget_ok && std::abs(delta) <= accept;
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, tol_floor, depth + 1,
                            max_depth, budget_ok) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, tol_floor, depth + 1,
                            max_depth, budget_ok);
}

double simpson_driver(const std::function<double(double)>& f, double lo, double hi, double tol,
                      bool& budget_ok) {
    const double flo = f(lo), fhi = f(hi), fm = f(0.5 * (lo + hi));
    if (!std::isfinite(flo) || !std::isfinite(fhi) || !std::isfinite(fm))
        throw DomainError("numerics", "quadrature", "integrand not finite inside the interval");
    const double whole = simpson(flo, fm, fhi, lo, hi);
    const double tol_floor = 1e-15 * (1.0 + std::abs(whole));
    return adaptive_simpson(f, lo, hi, flo, fm, fhi, whole, tol, tol_floor, 0, 52, budget_ok);
}

}  // namespace

double quadrature(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(tol > 0)) throw ConfigError("numerics", "quadrature", "tolerance must be positive");
    if (a == b) return 0.0;
    const double sign = (b >= a) ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    // Singular endpoints (up to order 1/sqrt) are removed by substituting
    // y = lo + s^2 resp. y = hi - s^2, which maps dy -> 2 s ds.
    const bool sing_lo = !std::isfinite(f(lo));
    const bool sing_hi = !std::isfinite(f(hi));
    bool budget_ok = true;
    double result = 0.0;
    const double mid = (sing_lo && sing_hi) ? 0.5 * (lo + hi) : hi;
    // Evaluations closer to the endpoint than s0 are clamped to s0; there the
    // substituted integrand is continuous (exactly constant for 1/sqrt).
    auto edge = [](double at) {
        return at != 0.0 ? 64.0 * std::sqrt(2.3e-16 * std::abs(at)) : 1e-100;
    };
    if (sing_lo) {
        const double s0 = edge(lo);
        auto gs = [&, s0](double s) {
            s = std::max(s, s0);
            return 2.0 * s * f(lo + s * s);
        };
        result += simpson_driver(gs, 0.0, std::sqrt(mid - lo), tol / 2.0, budget_ok);
    }
    if (sing_hi) {
        const double s0 = edge(hi);
        auto gs = [&, s0](double s) {
            s = std::max(s, s0);
            return 2.0 * s * f(hi - s * s);
        };
        const double from = sing_lo ? 0.5 * (lo + hi) : lo;
        result += simpson_driver(gs, 0.0, std::sqrt(hi - from), tol / 2.0, budget_ok);
    }
    if (!sing_lo && !sing_hi) result = simpson_driver(f, lo, hi, tol, budget_ok);
    if (!budget_ok)
        throw AccuracyError("numerics", "quadrature",
                            "adaptive Simpson did not converge within the subdivision budget");
    return sign * result;
}

double solve_bracketed(const std::function<double(double)>& f,
                       const std::function<double(double)>& df, double lo, double hi, double tol,
                       int max_iter) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        throw DomainError("numerics", "solve_bracketed", "endpoints do not bracket a root");
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < max_iter; ++it) {
        const double fx = f(x);
        if (std::abs(fx) <= tol) return x;
        if (flo * fx < 0.0) {
            hi = x;
        } else {
            lo = x;
            flo = fx;
        }
        double next = x;
        const double d = df ? df(x) : 0.0;
        if (d != 0.0 && std::isfinite(d)) next = x - fx / d;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) next = 0.5 * (lo + hi);
        x = next;
    }
    const double fx = f(x);
    if (std::abs(fx) <= tol * 1e3) return x;
    throw AccuracyError("numerics", "solve_bracketed", "root iteration did not converge");
}

}  // namespace intlab::numerics
