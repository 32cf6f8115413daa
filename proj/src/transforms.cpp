#include "intlab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "intlab/errors.hpp"

namespace intlab::transforms {

using numerics::cplx;
using numerics::SampledField;

namespace {

// Mixed partial d^{ax+ay} f / dx^{ax} dy^{ay} from tensorized central stencils.
double fd2_partial(const Fn2& f, double x, double y, int ax, int ay, int accuracy, double hx,
                   double hy) {
    const std::vector<double> one{1.0};
    const std::vector<double> wx = ax > 0 ? numerics::central_stencil(ax, accuracy) : one;
    const std::vector<double> wy = ay > 0 ? numerics::central_stencil(ay, accuracy) : one;
    const int rx = (static_cast<int>(wx.size()) - 1) / 2;
    const int ry = (static_cast<int>(wy.size()) - 1) / 2;
    double acc = 0.0;
    for (int s = -rx; s <= rx; ++s) {
        if (wx[s + rx] == 0.0) continue;
        double inner = 0.0;
        for (int q = -ry; q <= ry; ++q) inner += wy[q + ry] * f(x + s * hx, y + q * hy);
        acc += wx[s + rx] * inner;
    }
    return acc / (std::pow(hx, ax) * std::pow(hy, ay));
}

// Max of |residual(x,y)| over the interior nodes of an n x n grid where the
// widest stencil still fits.
double interior_max(const std::function<double(double, double, double, double)>& residual,
                    double x0, double x1, double y0, double y1, int n, int accuracy) {
    if (n < 16) throw ConfigError("transforms", "residual", "grid too small (need n >= 16)");
    const double hx = (x1 - x0) / (n - 1);
    const double hy = (y1 - y0) / (n - 1);
    const int margin = accuracy / 2 + 1;
    double worst = 0.0;
    for (int i = margin; i < n - margin; ++i) {
        for (int j = margin; j < n - margin; ++j) {
            const double v = residual(x0 + i * hx, y0 + j * hy, hx, hy);
            if (!std::isfinite(v))
                throw NumericalError("transforms", "residual", "non-finite residual sample");
            worst = std::max(worst, std::abs(v));
        }
    }
    return worst;
}

}  // namespace

// --- quadrature reduction ------------------------------------------------------

double QuadratureTable::speed(double y) const {
    const double radicand = 2.0 * (F_(y) + E_);
    if (radicand <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / std::sqrt(radicand);
}

QuadratureTable::QuadratureTable(Fn1 F, double E, double y_lo, double y_hi, int sign,
                                 double x_anchor, int nodes, double tol)
    : F_(std::move(F)), E_(E), sign_(sign), tol_(tol) {
    if (nodes < 8) throw ConfigError("transforms", "quadrature_reduce", "need >= 8 nodes");
    if (sign != 1 && sign != -1)
        throw ConfigError("transforms", "quadrature_reduce", "sign must be +1 or -1");
    if (!(y_hi > y_lo)) throw ConfigError("transforms", "quadrature_reduce", "empty y range");
    // the radicand must stay positive strictly inside the interval
    for (int j = 1; j < 4 * nodes; ++j) {
        const double y = y_lo + (y_hi - y_lo) * j / (4.0 * nodes);
        if (y >= y_hi) break;
        if (2.0 * (F_(y) + E_) <= 0.0) {
            const double root = numerics::solve_bracketed(
                [&](double s) { return F_(s) + E_; }, {}, y_lo + 1e-14 * (y_hi - y_lo), y,
                1e-13);
            throw DomainError("transforms", "quadrature_reduce",
                              "turning point inside the branch: F+E vanishes near y=" +
                                  std::to_string(root));
        }
    }
    ys_.resize(nodes);
    xs_.resize(nodes);
    for (int j = 0; j < nodes; ++j) ys_[j] = y_lo + (y_hi - y_lo) * j / (nodes - 1.0);
    xs_[0] = x_anchor;
    for (int j = 1; j < nodes; ++j) {
        const double piece =
            numerics::quadrature([this](double y) { return speed(y); }, ys_[j - 1], ys_[j],
                                 tol_ / nodes);
        xs_[j] = xs_[j - 1] + sign_ * piece;
    }
    // anchor convention: x(y_lo) = x_anchor
}

double QuadratureTable::x_at(double y) const {
    if (y < ys_.front() - 1e-12 || y > ys_.back() + 1e-12)
        throw DomainError("transforms", "quadrature_reduce", "y outside the tabulated branch");
    y = std::clamp(y, ys_.front(), ys_.back());
    const auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
    const size_t j = std::min(ys_.size() - 2, static_cast<size_t>(
                                                  std::max<long>(0, it - ys_.begin() - 1)));
    return xs_[j] +
           sign_ * numerics::quadrature([this](double s) { return speed(s); }, ys_[j], y, tol_);
}

double QuadratureTable::x_min() const { return std::min(xs_.front(), xs_.back()); }
double QuadratureTable::x_max() const { return std::max(xs_.front(), xs_.back()); }

double QuadratureTable::y_at(double x) const {
    const bool increasing = xs_.back() >= xs_.front();
    if (x < x_min() - 1e-12 || x > x_max() + 1e-12)
        throw DomainError("transforms", "quadrature_reduce", "x outside the tabulated branch");
    x = std::clamp(x, x_min(), x_max());
    // bracket on the table, then refine on the exact cumulative map
    size_t lo = 0, hi = xs_.size() - 1;
    while (hi - lo > 1) {
        const size_t mid = (lo + hi) / 2;
        const bool left = increasing ? (xs_[mid] <= x) : (xs_[mid] >= x);
        if (left)
            lo = mid;
        else
            hi = mid;
    }
    const double y_left = ys_[lo];
    const double x_left = xs_[lo];
    auto g = [&](double y) {
        return x_left +
               sign_ * numerics::quadrature([this](double s) { return speed(s); }, y_left, y,
                                            tol_) -
               x;
    };
    return numerics::solve_bracketed(g, [&](double y) { return sign_ * speed(y); }, ys_[lo],
                                     ys_[hi], tol_ * 10.0);
}

QuadratureTable quadrature_reduce(const Fn1& f, const Fn1& F, double y_lo, double y_hi,
                                  double E, int sign, double x_anchor, int nodes, double tol) {
    // F must actually be an antiderivative of f (spot check in the interior)
    for (int j = 1; j <= 8; ++j) {
        const double y = y_lo + (y_hi - y_lo) * j / 9.0;
        const double h = 1e-5 * (y_hi - y_lo);
        const double fd = (F(y + h) - F(y - h)) / (2.0 * h);
        const double scale = std::max({1.0, std::abs(fd), std::abs(f(y))});
        if (std::abs(fd - f(y)) > 1e-5 * scale)
            throw ContractError("transforms", "quadrature_reduce",
                                "F' != f near y=" + std::to_string(y));
    }
    return QuadratureTable(F, E, y_lo, y_hi, sign, x_anchor, nodes, tol);
}

// --- hodograph -----------------------------------------------------------------

int MonotoneProfile::validate(int samples) const {
    if (!(u_hi > u_lo)) throw ConfigError("transforms", "hodograph", "empty profile domain");
    if (samples < 8) throw ConfigError("transforms", "hodograph", "need >= 8 samples");
    int dir = 0;
    for (int j = 0; j <= samples; ++j) {
        const double u = u_lo + (u_hi - u_lo) * j / samples;
        const double d = dphi(u);
        if (!std::isfinite(d))
            throw NumericalError("transforms", "hodograph", "phi' not finite at u=" +
                                                                std::to_string(u));
        const int s = (d > 0.0) ? 1 : (d < 0.0 ? -1 : 0);
        if (s == 0)
            throw DomainError("transforms", "hodograph",
                              "phi' vanishes at u=" + std::to_string(u) +
                                  "; profile is not strictly monotone");
        if (dir == 0) dir = s;
        if (s != dir)
            throw DomainError("transforms", "hodograph", "phi' changes sign; not monotone");
    }
    return dir;
}

double breaking_time(const MonotoneProfile& profile, int samples) {
    const int dir = profile.validate(samples);
    if (dir < 0) return std::numeric_limits<double>::infinity();
    double tstar = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= samples; ++j) {
        const double u = profile.u_lo + (profile.u_hi - profile.u_lo) * j / samples;
        tstar = std::min(tstar, profile.dphi(u) / 2.0);
    }
    return tstar;
}

HodographPoint hodograph_solve(const MonotoneProfile& profile, double x, double t) {
    profile.validate();
    auto g = [&](double u) { return profile.phi(u) - 2.0 * t * u - x; };
    auto dg = [&](double u) { return profile.dphi(u) - 2.0 * t; };
    const int scan = 1024;
    std::vector<std::pair<double, double>> brackets;
    double prev_u = profile.u_lo;
    double prev_g = g(prev_u);
    std::vector<double> roots;
    for (int j = 1; j <= scan; ++j) {
        const double u = profile.u_lo + (profile.u_hi - profile.u_lo) * j / scan;
        const double gu = g(u);
        if (prev_g == 0.0) {
            roots.push_back(prev_u);
        } else if (gu != 0.0 && prev_g * gu < 0.0) {
            brackets.emplace_back(prev_u, u);
        }
        prev_u = u;
        prev_g = gu;
    }
    if (prev_g == 0.0) roots.push_back(prev_u);
    for (const auto& [lo, hi] : brackets)
        roots.push_back(numerics::solve_bracketed(g, dg, lo, hi, 1e-14));
    if (roots.empty())
        throw DomainError("transforms", "hodograph_solve",
                          "no profile value reaches x=" + std::to_string(x) + " at t=" +
                              std::to_string(t));
    if (roots.size() > 1) {
        std::ostringstream os;
        os << "solution is multivalued (shock formed) at x=" << x << ", t=" << t << "; roots:";
        for (double r : roots) os << " " << r;
        throw ShockFormedError("transforms", "hodograph_solve", os.str(), roots);
    }
    HodographPoint pt;
    pt.u = roots.front();
    pt.residual = std::abs(g(pt.u));
    return pt;
}

// --- Thomas --------------------------------------------------------------------

Fn2 thomas_linearize(const Fn2& psi) {
    return [psi](double x, double y) { return std::exp(psi(x, y)); };
}

Fn2 thomas_delinearize(const Fn2& theta) {
    return [theta](double x, double y) {
        const double v = theta(x, y);
        if (!(v > 0.0))
            throw PositivityError("transforms", "thomas_delinearize",
                                  "theta(" + std::to_string(x) + ", " + std::to_string(y) +
                                      ") = " + std::to_string(v) + " is not positive");
        return std::log(v);
    };
}

double thomas_residual(const Fn2& psi, double alpha, double beta, double x0, double x1,
                       double y0, double y1, int n, int accuracy) {
    return interior_max(
        [&](double x, double y, double hx, double hy) {
            const double pxy = fd2_partial(psi, x, y, 1, 1, accuracy, hx, hy);
            const double px = fd2_partial(psi, x, y, 1, 0, accuracy, hx, hy);
            const double py = fd2_partial(psi, x, y, 0, 1, accuracy, hx, hy);
            return pxy + alpha * px + beta * py + px * py;
        },
        x0, x1, y0, y1, n, accuracy);
}

double thomas_linear_residual(const Fn2& theta, double alpha, double beta, double x0, double x1,
                              double y0, double y1, int n, int accuracy) {
    return interior_max(
        [&](double x, double y, double hx, double hy) {
            const double txy = fd2_partial(theta, x, y, 1, 1, accuracy, hx, hy);
            const double tx = fd2_partial(theta, x, y, 1, 0, accuracy, hx, hy);
            const double ty = fd2_partial(theta, x, y, 0, 1, accuracy, hx, hy);
            return txy + alpha * tx + beta * ty;
        },
        x0, x1, y0, y1, n, accuracy);
}

Fn2 thomas_general_solution(const ThomasParams& params, const Fn1& fhat, const Fn1& h) {
    if (params.beta != 0.0)
        throw ConfigError("transforms", "thomas_general_solution",
                          "only the beta = 0 family is constructed");
    const double k2 = params.k2();
    return [fhat, h, k2](double x, double y) { return fhat(y) + std::exp(k2 * y) * h(x); };
}

double thomas_reduced_residual(const Fn2& phi, const ThomasParams& params, double x0, double x1,
                               double y0, double y1, int n, int accuracy) {
    const double c = params.k1 + params.alpha;
    return interior_max(
        [&](double x, double y, double hx, double hy) {
            const double pxy = fd2_partial(phi, x, y, 1, 1, accuracy, hx, hy);
            const double px = fd2_partial(phi, x, y, 1, 0, accuracy, hx, hy);
            return pxy + c * px;
        },
        x0, x1, y0, y1, n, accuracy);
}

// --- Cole-Hopf -----------------------------------------------------------------

SampledField cole_hopf(const numerics::SampledField& w) {
    for (const auto& z : w.values) {
        if (std::abs(z.imag()) > 1e-12 * std::max(1.0, std::abs(z.real())))
            throw ConfigError("transforms", "cole_hopf", "w must be a real field");
        if (!(z.real() > 0.0))
            throw PositivityError("transforms", "cole_hopf",
                                  "w must be strictly positive (found " +
                                      std::to_string(z.real()) + ")");
    }
    const SampledField wx = numerics::spectral_derivative(w, 1);
    SampledField u = w;
    for (int j = 0; j < w.grid.n; ++j)
        u.values[j] = cplx(wx.values[j].real() / w.values[j].real(), 0.0);
    return u;
}

SampledField inverse_cole_hopf(const numerics::SampledField& u, double mean_tol) {
    numerics::SpectralField s = numerics::dft(u);
    const double mean = std::abs(s.at(0));
    if (mean > mean_tol)
        throw DomainError("transforms", "inverse_cole_hopf",
                          "u has nonzero mean " + std::to_string(mean) +
                              "; exp(∫u) would not be periodic");
    SampledField v = numerics::spectral_antiderivative(u, mean_tol);
    SampledField w = v;
    for (auto& z : w.values) z = std::exp(z.real());
    return w;  // w at the leftmost point is exp(0) = 1
}

// --- viscosity scaling -----------------------------------------------------------

BurgersScaling scale_burgers(double eps) {
    if (eps == 0.0)
        throw ConfigError("transforms", "scale_burgers", "eps = 0 degenerates the scaling");
    return BurgersScaling{eps};
}

// --- inviscid reduction ----------------------------------------------------------

Fn2 reduce_to_inviscid(const Fn1& phi, const Fn2& u) {
    return [phi, u](double x, double t) { return phi(u(x, t)); };
}

double inviscid_residual(const Fn2& v, double x0, double x1, double t0, double t1, int n,
                         int accuracy) {
    return interior_max(
        [&](double x, double t, double hx, double ht) {
            const double vt = fd2_partial(v, x, t, 0, 1, accuracy, hx, ht);
            const double vx = fd2_partial(v, x, t, 1, 0, accuracy, hx, ht);
            return vt - v(x, t) * vx;
        },
        x0, x1, t0, t1, n, accuracy);
}

}  // namespace intlab::transforms
