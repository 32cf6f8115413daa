#include "intlab/cli.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "intlab/acceptance.hpp"
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

namespace intlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// formatting and artifact helpers
// ---------------------------------------------------------------------------

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const fs::path& path, const std::vector<std::string>& columns) : f_(path) {
        if (!f_) throw ConfigError("cli", "csv", "cannot open " + path.string());
        for (size_t i = 0; i < columns.size(); ++i) f_ << (i ? "," : "") << columns[i];
        f_ << "\n";
    }
    void row(const std::vector<double>& values) {
        for (size_t i = 0; i < values.size(); ++i) f_ << (i ? "," : "") << fmt17(values[i]);
        f_ << "\n";
    }

private:
    std::ofstream f_;
};

void write_json(const fs::path& path, json j) {
    j["schema_version"] = kSchemaVersion;
    std::ofstream f(path);
    if (!f) throw ConfigError("cli", "json", "cannot open " + path.string());
    f << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// typed parameter access
// ---------------------------------------------------------------------------

class Params {
public:
    Params(const RunConfig& cfg, const SubcommandSpec& spec) : cfg_(cfg) {
        std::set<std::string> allowed;
        for (const auto& p : spec.params) allowed.insert(p.name);
        for (const auto& [k, v] : cfg.params)
            if (!allowed.contains(k))
                throw ConfigError("cli", cfg.subcommand,
                                  "unknown parameter --" + k + " (see --help)");
        for (const auto& p : spec.params)
            if (p.required && !cfg.params.contains(p.name))
                throw ConfigError("cli", cfg.subcommand, "missing required parameter --" + p.name);
    }

    bool has(const std::string& key) const { return cfg_.params.contains(key); }

    std::string str(const std::string& key, const std::string& fallback = "") const {
        const auto it = cfg_.params.find(key);
        return it == cfg_.params.end() ? fallback : it->second;
    }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) const {
        const auto it = cfg_.params.find(key);
        if (it == cfg_.params.end()) {
            if (fallback) return *fallback;
            throw ConfigError("cli", cfg_.subcommand, "missing numeric parameter --" + key);
        }
        try {
            size_t used = 0;
            const double v = std::stod(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("cli", cfg_.subcommand,
                              "parameter --" + key + " is not a number: " + it->second);
        }
    }

    long integer(const std::string& key, std::optional<long> fallback = std::nullopt) const {
        const double v = number(key, fallback ? std::optional<double>(*fallback) : std::nullopt);
        if (v != std::floor(v))
            throw ConfigError("cli", cfg_.subcommand, "parameter --" + key + " must be integer");
        return static_cast<long>(v);
    }

    bool flag(const std::string& key) const {
        const auto it = cfg_.params.find(key);
        return it != cfg_.params.end() && it->second != "false" && it->second != "0";
    }

    std::vector<double> numbers(const std::string& key, size_t expect = 0) const {
        const auto it = cfg_.params.find(key);
        if (it == cfg_.params.end())
            throw ConfigError("cli", cfg_.subcommand, "missing list parameter --" + key);
        std::vector<double> out;
        std::stringstream ss(it->second);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                out.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ConfigError("cli", cfg_.subcommand,
                                  "parameter --" + key + " has a bad entry: " + tok);
            }
        }
        if (expect != 0 && out.size() != expect)
            throw ConfigError("cli", cfg_.subcommand,
                              "parameter --" + key + " needs " + std::to_string(expect) +
                                  " comma-separated values");
        return out;
    }

private:
    const RunConfig& cfg_;
};

fs::path ensure_out_dir(const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (!fs::is_directory(cfg.out_dir))
        throw ConfigError("cli", cfg.subcommand,
                          "cannot create output directory " + cfg.out_dir.string());
    return cfg.out_dir;
}

// named initial fields on [0, 2pi)
numerics::SampledField named_field(const std::string& name, int n) {
    const numerics::Grid1D g(n, 0.0, 2.0 * std::numbers::pi);
    if (name == "sin")
        return numerics::SampledField::from_function(g, [](double x) {
            return numerics::cplx(std::sin(x));
        });
    if (name == "halfsin")
        return numerics::SampledField::from_function(g, [](double x) {
            return numerics::cplx(0.5 * std::sin(x));
        });
    if (name == "sin3mix")
        return numerics::SampledField::from_function(g, [](double x) {
            return numerics::cplx(std::sin(x) + 0.5 * std::sin(3.0 * x));
        });
    if (name == "gauss")
        return numerics::SampledField::from_function(g, [](double x) {
            const double d = x - std::numbers::pi;
            return numerics::cplx(std::exp(-4.0 * d * d));
        });
    throw ConfigError("cli", "init", "unknown initial field '" + name +
                                         "' (sin, halfsin, sin3mix, gauss)");
}

numerics::SampledField read_field_csv(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cli", "field", "cannot read " + path.string());
    std::string line;
    std::getline(f, line);  // header
    std::vector<double> xs;
    std::vector<numerics::cplx> vs;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b;
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        xs.push_back(std::stod(a));
        vs.push_back(numerics::cplx(std::stod(b)));
    }
    if (xs.size() < 8) throw ConfigError("cli", "field", "field file has fewer than 8 rows");
    const int n = static_cast<int>(xs.size());
    const double h = xs[1] - xs[0];
    for (int j = 1; j < n; ++j)
        if (std::abs(xs[j] - xs[0] - j * h) > 1e-9 * std::max(1.0, std::abs(xs[j])))
            throw ConfigError("cli", "field", "field grid is not uniform");
    return numerics::SampledField(numerics::Grid1D(n, xs[0], xs[0] + n * h), std::move(vs));
}

void write_field_csv(const fs::path& path, const numerics::SampledField& f, bool complex_pair) {
    std::vector<std::string> cols =
        complex_pair ? std::vector<std::string>{"x", "re", "im"}
                     : std::vector<std::string>{"x", "value"};
    CsvWriter csv(path, cols);
    for (int j = 0; j < f.grid.n; ++j) {
        if (complex_pair)
            csv.row({f.grid.x(j), f.values[j].real(), f.values[j].imag()});
        else
            csv.row({f.grid.x(j), f.values[j].real()});
    }
}

// thin wrappers shared by a few handlers ------------------------------------------------

threebody::ForceLaw law_from_params(const Params& p) {
    const std::string kind = p.str("law", "poincare");
    if (kind == "poincare") return threebody::ForceLaw::poincare(p.number("sigma", -1.0));
    if (kind == "newton") return threebody::ForceLaw::newton_like(p.number("coeff", -1.0));
    if (kind == "power")
        return threebody::ForceLaw::power(p.number("coeff", -1.0), p.number("exponent", -1.5));
    throw ConfigError("cli", "threebody", "unknown law '" + kind + "' (poincare, newton, power)");
}

jet::JetVectorField field_from_json(const json& j, const std::string& what) {
    if (!j.contains("components") || !j["components"].is_object())
        throw ConfigError("cli", "symmetry", what + ": expected a 'components' object");
    jet::JetVectorField field;
    for (const auto& [name, poly] : j["components"].items()) {
        const auto coord = jet::JetCoord::parse_name(name);
        if (!coord)
            throw ConfigError("cli", "symmetry", what + ": unknown coordinate " + name);
        field[*coord] = jet::JetPolynomial::parse(poly.get<std::string>());
    }
    return field;
}

// ---------------------------------------------------------------------------
// subcommand handlers
// ---------------------------------------------------------------------------

void run_diffop(const RunConfig& cfg, const Params& p) {
    const fs::path out = ensure_out_dir(cfg);
    const std::string action = p.str("action", "compose");
    const auto A = diffop::LinearDiffOp::parse(p.str("op-a"));
    json rep;
    rep["action"] = action;
    rep["op_a"] = A.str();
    if (action == "compose" || action == "commutator") {
        const auto B = diffop::LinearDiffOp::parse(p.str("op-b"));
        rep["op_b"] = B.str();
        const auto R = action == "compose" ? diffop::compose(A, B) : diffop::commutator(A, B);
        rep["result"] = R.str();
        json coeffs = json::array();
        for (int k = 0; k <= R.order(); ++k)
            coeffs.push_back({{"num", R.coeff(k).num().str()}, {"den", R.coeff(k).den().str()}});
        rep["coefficients"] = coeffs;
    } else if (action == "euler") {
        rep["result"] = diffop::euler_substitute(A).str();
    } else if (action == "apply") {
        // polynomial argument given in the same syntax with x only
        const auto arg = diffop::LinearDiffOp::parse(p.str("poly"));
        if (arg.order() != 0)
            throw ConfigError("cli", "diffop", "--poly must not contain d-symbols");
        rep["result"] = diffop::apply_op(A, arg.coeff(0).as_polynomial()).str();
    } else {
        throw ConfigError("cli", "diffop",
                          "unknown action '" + action + "' (compose, commutator, euler, apply)");
    }
    write_json(out / "diffop.json", rep);
}

void run_wronskian(const RunConfig& cfg, const Params& p) {
    const fs::path out = ensure_out_dir(cfg);
    std::stringstream names(p.str("basis", "sin,sqrt"));
    std::vector<wronskian::BasisFunction> basis;
    std::vector<std::string> labels;
    std::string tok;
    while (std::getline(names, tok, ',')) {
        basis.push_back(wronskian::catalog(tok, p.number("param", 1.0)));
        labels.push_back(tok);
    }
    const auto window = p.numbers("window", 2);
    wronskian::KernelSpec spec{basis, window[0], window[1],
                               static_cast<int>(p.integer("samples", 64))};
    const auto op = wronskian::operator_from_kernel(spec);

    std::vector<std::string> cols{"x"};
    for (int k = 0; k < op.order; ++k) cols.push_back("c" + std::to_string(k));
    CsvWriter csv(out / "wronskian.csv", cols);
    for (size_t j = 0; j < op.xs.size(); ++j) {
        std::vector<double> row{op.xs[j]};
        for (int k = 0; k < op.order; ++k) row.push_back(op.coeff[k][j]);
        csv.row(row);
    }

    json rep;
    rep["order"] = op.order;
    json members = json::array();
    for (size_t i = 0; i < basis.size(); ++i)
        members.push_back({{"label", labels[i]},
                           {"residual",
                            wronskian::membership_test(op, basis[i], window[0], window[1])}});
    rep["members"] = members;
    // reference-form comparison for the sin/sqrt kernel
    if (labels == std::vector<std::string>{"sin", "sqrt"}) {
        const wronskian::ReferenceForm printed{{
            [](double x) { return -1.0 / (2.0 * x) - 0.75 / (x * x); },
            [](double x) { return std::tan(x); },
            [](double x) { return 1.0 - 0.5 * std::tan(x); },
        }};
        const double rs = wronskian::form_residual(printed, basis[0], window[0], window[1], 64);
        const double rq = wronskian::form_residual(printed, basis[1], window[0], window[1], 64);
        rep["reference_form"] = {{"sin_residual", rs},
                                 {"sqrt_residual", rq},
                                 {"verdict", (rs < 1e-8 && rq < 1e-8)
                                                 ? "match"
                                                 : "documented-discrepancy"}};
    }
    write_json(out / "wronskian.json", rep);
}

void run_symmetry(const RunConfig& cfg, const Params& p) {
    const fs::path out = ensure_out_dir(cfg);
    json sys_json, cand_json;
    {
        std::ifstream f(p.str("system"));
        if (!f) throw ConfigError("cli", "symmetry", "cannot read --system file");
        f >> sys_json;
        std::ifstream g(p.str("candidate"));
        if (!g) throw ConfigError("cli", "symmetry", "cannot read --candidate file");
        g >> cand_json;
    }
    symmetry::DynamicalSystem sys;
    sys.field = field_from_json(sys_json, "system");
    for (const auto& [coord, comp] : sys.field) sys.coords.push_back(coord);
    sys.validate();
    symmetry::SymmetryCandidate cand;
    cand.field = field_from_json(cand_json, "candidate");

    const auto verdict = symmetry::is_symmetry(sys, cand);
    json rep;
    rep["symmetry"] = verdict.symmetry;
    rep["trivial"] = verdict.trivial;
    rep["bracket"] = jet::field_str(verdict.bracket);
    write_json(out / "symmetry.json", rep);
    std::cout << rep.dump(2) << "\n";
}

transforms::MonotoneProfile named_profile(const std::string& name) {
    if (name == "linear")
        return {[](double u) { return u; }, [](double) { return 1.0; }, -3.0, 3.0};
    if (name == "cubic")
        return {[](double u) { return u * u * u + u; },
                [](double u) { return 3.0 * u * u + 1.0; }, -2.0, 2.0};
    if (name == "tanh")
        return {[](double u) { return std::tanh(u); },
                [](double u) { return 1.0 / std::pow(std::cosh(u), 2); }, -2.0, 2.0};
    throw ConfigError("cli", "shock", "unknown profile '" + name + "' (linear, cubic, tanh)");
}

void run_shock(const RunConfig& cfg, const Params& p) {
    const fs::path out = ensure_out_dir(cfg);
    const auto profile = named_profile(p.str("profile", "linear"));
    const double x = p.number("x");
    const double t = p.number("t");
    const auto pt = transforms::hodograph_solve(profile, x, t);
    json rep;
    rep["u"] = pt.u;
    rep["residual"] = pt.residual;
    rep["breaking_time"] = transforms::breaking_time(profile);
    write_json(out / "shock.json", rep);
    std::cout << rep.dump(2) << "\n";
}

void run_thomas(const RunConfig& cfg, const Params& p) {
    const fs::path out = ensure_out_dir(cfg);
    transforms::ThomasParams params;
    params.alpha = p.number("alpha");
    params.k1 = p.number("k1", 0.0);
    params.beta = 0.0;
    const int n = static_cast<int>(p.integer("grid", 96));
    const auto phi = transforms::thomas_general_solution(
        params, [](double y) { return std::cos(y); }, [](double x) { return std::sin(x); });
    CsvWriter csv(out / "thomas.csv", {"x", "y", "value"});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = i / (n - 1.0), y = j / (n - 1.0);
            csv.row({x, y, phi(x, y)});
        }
    json rep;
    rep["k2"] = params.k2();
    rep["reduced_residual"] =
        transforms::thomas_reduced_residual(phi, params, 0.0, 1.0, 0.0, 1.0, n, 8);
    write_json(out / "thomas.json", rep);
}

void run_colehopf(const RunConfig& cfg, const Params& p) {
    const fs::path out = ensure_out_dir(cfg);
    const auto field = read_field_csv(p.str("in"));
    json rep;
    if (p.flag("inverse")) {
        const auto w = transforms::inverse_cole_hopf(field);
        write_field_csv(out / "colehopf.csv", w, false);
        rep["direction"] = "u -> w";
    } else {
        const auto u = transforms::cole_hopf(field);
        write_field_csv(out / "colehopf.csv", u, false);
        rep["direction"] = "w -> u";
    }
    write_json(out / "colehopf.json", rep);
}

void run_heat(const RunConfig& cfg, const Params& p) {
    const fs::path out = ensure_out_dir(cfg);
    const int n = static_cast<int>(p.integer("n", 128));
    const double t = p.number("t", 1.0);
    const auto u0 = named_field(p.str("init", "sin"), n);
    const auto ut = spectral::heat_solve(u0, t);
    write_field_csv(out / "heat.csv", ut, false);
    json rep;
    rep["t"] = t;
    rep["n"] = n;
    rep["max_abs"] = ut.max_abs();
    write_json(out / "heat.json", rep);
}

void run_burgers(const RunConfig& cfg, const Params& p) {
    const fs::path out = ensure_out_dir(cfg);
    const int n = static_cast<int>(p.integer("n", 256));
    const double t = p.number("t", 0.5);
    const double eps = p.number("eps", 1.0);
    const auto u0 = named_field(p.str("init", "halfsin"), n);
    const auto ut = spectral::burgers_solve(u0, t, eps);
    write_field_csv(out / "burgers.csv", ut, false);

    auto mean = [](const numerics::SampledField& f) {
        numerics::cplx acc(0.0);
        for (const auto& z : f.values) acc += z;
        return (acc / static_cast<double>(f.grid.n)).real();
    };
    const spectral::Candidate cand = [&](double x, double tt) {
        const auto s = numerics::dft(spectral::burgers_solve(u0, tt, eps));
        return s.eval(x);
    };
    const double res = (t > 0.05)
                           ? spectral::pde_residual(spectral::burgers_spec(eps), cand, 1.0, 5.0,
                                                    std::max(0.03, t - 0.02), t, 4, 6, 5e-3)
                           : 0.0;
    json rep;
    rep["t"] = t;
    rep["eps"] = eps;
    rep["mass_drift"] = std::abs(mean(ut) - mean(u0));
    rep["pde_residual"] = res;
    write_json(out / "burgers.json", rep);
}

void run_dispersion(const RunConfig& cfg, const Params& p) {
    const fs::path out = ensure_out_dir(cfg);
    const auto spec = spectral::parse_dispersion(p.str("poly"));
    const double klo = p.number("kmin", 0.5), khi = p.number("kmax", 2.0);
    const int samples = static_cast<int>(p.integer("samples", 64));
    const auto res = spectral::dispersion_relation(spec, klo, khi, samples);

    std::vector<std::string> cols{"k"};
    for (size_t b = 0; b < res.branches.size(); ++b) {
        cols.push_back("omega" + std::to_string(b) + "_re");
        cols.push_back("omega" + std::to_string(b) + "_im");
        cols.push_back("omega" + std::to_string(b) + "_dd");
    }
    CsvWriter csv(out / "dispersion.csv", cols);
    for (size_t i = 0; i < res.ks.size(); ++i) {
        std::vector<double> row{res.ks[i]};
        for (size_t b = 0; b < res.branches.size(); ++b) {
            row.push_back(res.branches[b][i].real());
            row.push_back(res.branches[b][i].imag());
            row.push_back(res.omega_dd[b][i]);
        }
        csv.row(row);
    }
    json rep;
    rep["dispersive"] = res.dispersive;
    rep["crossing_warning"] = res.crossing_warning;
    rep["max_abs_omega_dd"] = res.max_abs_omega_dd;
    write_json(out / "dispersion.json", rep);
    std::cout << rep.dump(2) << "\n";
}

void run_residual(const RunConfig& cfg, const Params& p) {
    const fs::path out = ensure_out_dir(cfg);
    const std::string eq = p.str("equation", "kdv");
    const int accuracy = static_cast<int>(p.integer("accuracy", 4));
    const double h = p.number("h", 0.08);
    const int levels = static_cast<int>(p.integer("levels", 3));

    spectral::PDESpec spec;
    spectral::Candidate cand;
    if (eq == "kdv") {
        spec = spectral::kdv_spec();
        cand = [](double x, double t) {
            const double s = 1.0 / std::cosh(x + 4.0 * t);
            return spectral::cplx(2.0 * s * s);
        };
    } else if (eq == "nls") {
        spec = spectral::nls_spec(+1);
        cand = [](double x, double t) {
            const double env = std::sqrt(2.0) / std::cosh(x);
            return env * std::exp(spectral::cplx(0.0, -t));
        };
    } else if (eq == "heat") {
        spec = spectral::heat_spec();
        cand = [](double x, double t) { return spectral::cplx(std::exp(-t) * std::sin(x)); };
    } else {
        throw ConfigError("cli", "residual", "unknown equation '" + eq + "' (kdv, nls, heat)");
    }
    const auto table = spectral::pde_residual_convergence(spec, cand, -2.0, 2.0, 0.0, 0.1, 10,
                                                          accuracy, h, levels);
    json rep;
    rep["equation"] = spec.label;
    rep["levels"] = table;
    json ratios = json::array();
    for (size_t i = 0; i + 1 < table.size(); ++i) ratios.push_back(table[i] / table[i + 1]);
    rep["ratios"] = ratios;
    write_json(out / "residual.json", rep);
    std::cout << rep.dump(2) << "\n";
}

void run_jost(const RunConfig& cfg, const Params& p) {
    const fs::path out = ensure_out_dir(cfg);
    spectral::JostProblem prob;
    prob.k = p.number("k", 1.0);
    const double amp = p.number("amp", -0.1);
    prob.n = static_cast<int>(p.integer("n", 12001));
    prob.potential = [amp](double x) {
        if (x < -1.0 || x > 1.0) return 0.0;
        if (x == -1.0 || x == 1.0) return 0.5 * amp;
        return amp;
    };
    const auto sol = spectral::jost_solve(prob);
    const auto oracle = spectral::jost_ode_oracle(prob, spectral::JostConvention::printed_real);
    double gap = 0.0;
    for (size_t i = 0; i < sol.phi.size(); ++i)
        gap = std::max(gap, std::abs(sol.phi[i] - oracle[i]));

    CsvWriter csv(out / "jost.csv", {"x", "re", "im"});
    for (size_t i = 0; i < sol.xs.size(); ++i)
        csv.row({sol.xs[i], sol.phi[i].real(), sol.phi[i].imag()});
    json rep;
    rep["contraction_bound"] = sol.contraction_bound;
    rep["sweeps"] = sol.sweeps;
    rep["oracle_gap"] = gap;
    write_json(out / "jost.json", rep);
    std::cout << rep.dump(2) << "\n";
}

void run_triad(const RunConfig& cfg, const Params& p) {
    const fs::path out = ensure_out_dir(cfg);
    std::optional<resonance::TriadSystem> sys;
    if (p.has("n")) {
        const auto n = p.numbers("n", 3);
        sys.emplace(resonance::TriadSystem::planetary(n[0], n[1], n[2]));
    } else if (p.has("couplings")) {
        const auto cc = p.numbers("couplings", 3);
        sys.emplace(resonance::TriadSystem::generic(cc[0], cc[1], cc[2]));
    } else {
        throw ConfigError("cli", "triad", "need --n or --couplings");
    }
    const auto a0v = p.numbers("a0", 3);
    const std::array<double, 3> a0{a0v[0], a0v[1], a0v[2]};
    const double T = p.number("t", 20.0);
    numerics::IntegratorConfig icfg;
    icfg.dt = p.number("dt", 1e-3);

    const auto ref = sys->invariants(a0);
    const long steps = std::lround(T / icfg.dt);
    const long stride = std::max(1L, steps / 2000);

    CsvWriter csv(out / "triad.csv", {"t", "a1", "a2", "a3", "energy", "enstrophy"});
    std::vector<double> y(a0.begin(), a0.end());
    double drift = 0.0;
    long row = 0;
    numerics::integrate(sys->ode(), y, 0.0, T, icfg,
                        [&](double t, std::span<const double> s) {
                            const auto inv = sys->invariants({s[0], s[1], s[2]});
                            drift = std::max({drift, std::abs(inv[0] - ref[0]),
                                              std::abs(inv[1] - ref[1])});
                            if (row++ % stride == 0)
                                csv.row({t, s[0], s[1], s[2], inv[0], inv[1]});
                        });
    json rep;
    rep["seed"] = cfg.seed;
    rep["invariant_drift"] = drift;
    rep["energy"] = ref[0];
    rep["enstrophy"] = ref[1];
    if (p.flag("closed-form")) {
        const auto cfm = resonance::closed_form(*sys, a0);
        const auto& ep = cfm.params();
        double gap = 0.0;
        std::vector<double> yy(a0.begin(), a0.end());
        numerics::integrate(sys->ode(), yy, 0.0, std::min(T, cfm.period()), icfg,
                            [&](double t, std::span<const double> s) {
                                const auto v = cfm.eval(t);
                                gap = std::max({gap, std::abs(v[0] - s[0]),
                                                std::abs(v[1] - s[1]), std::abs(v[2] - s[2])});
                            });
        rep["closed_form"] = {{"b_cn", ep.b_cn},       {"b_dn", ep.b_dn},
                              {"b_sn", ep.b_sn},       {"t0", ep.t0},
                              {"lambda", ep.lambda},   {"m", ep.m},
                              {"assignment", ep.assignment}, {"period", cfm.period()},
                              {"rk4_gap", gap}};
    }
    write_json(out / "triad.json", rep);
}

void run_quartet(const RunConfig& cfg, const Params& p) {
    const fs::path out = ensure_out_dir(cfg);
    const auto cc = p.numbers("couplings", 4);
    const resonance::QuartetSystem sys({cc[0], cc[1], cc[2], cc[3]});
    const auto a0v = p.numbers("a0", 4);
    const std::array<double, 4> a0{a0v[0], a0v[1], a0v[2], a0v[3]};
    const double T = p.number("t", 5.0);
    numerics::IntegratorConfig icfg;
    icfg.dt = p.number("dt", 1e-3);
    const auto ref = sys.invariants(a0);
    const long stride = std::max(1L, std::lround(T / icfg.dt) / 2000);

    CsvWriter csv(out / "quartet.csv", {"t", "A1", "A2", "A3", "A4", "I1", "I2", "I3"});
    std::vector<double> y(a0.begin(), a0.end());
    double drift = 0.0;
    long row = 0;
    numerics::integrate(sys.ode(), y, 0.0, T, icfg, [&](double t, std::span<const double> s) {
        const auto inv = sys.invariants({s[0], s[1], s[2], s[3]});
        for (int i = 0; i < 3; ++i) drift = std::max(drift, std::abs(inv[i] - ref[i]));
        if (row++ % stride == 0)
            csv.row({t, s[0], s[1], s[2], s[3], inv[0], inv[1], inv[2]});
    });
    json rep;
    rep["invariant_drift"] = drift;
    write_json(out / "quartet.json", rep);
}

void run_threebody(const RunConfig& cfg, const Params& p) {
    const fs::path out = ensure_out_dir(cfg);
    const auto law = law_from_params(p);
    threebody::ThreeBodyState s;
    if (p.str("preset", "") == "lagrange") {
        s = threebody::lagrange_orbit(law, p.number("side", 1.0)).initial;
    } else if (p.has("init")) {
        std::ifstream f(p.str("init"));
        if (!f) throw ConfigError("cli", "threebody", "cannot read --init file");
        json j;
        f >> j;
        for (int b = 0; b < 3; ++b) {
            s.z[b] = threebody::cplx(j["z"][b][0].get<double>(), j["z"][b][1].get<double>());
            s.v[b] = threebody::cplx(j["v"][b][0].get<double>(), j["v"][b][1].get<double>());
        }
        s.enforce_com_gauge();
    } else {
        throw ConfigError("cli", "threebody", "need --preset lagrange or --init <file>");
    }
    const double T = p.number("T", 10.0);
    numerics::IntegratorConfig icfg;
    icfg.method = numerics::IntegratorConfig::Method::rkf45_adaptive;
    icfg.abs_tol = icfg.rel_tol = p.number("tol", 1e-10);
    icfg.dt = 1e-2;

    CsvWriter csv(out / "threebody.csv",
                  {"t", "x1", "y1", "x2", "y2", "x3", "y3", "energy", "angmom", "Z"});
    threebody::MonitorReport last{};
    threebody::integrate(s, law, T, icfg, [&](const threebody::ThreeBodyState& st) {
        last = threebody::monitors(st, law);
        csv.row({st.t, st.z[0].real(), st.z[0].imag(), st.z[1].real(), st.z[1].imag(),
                 st.z[2].real(), st.z[2].imag(), last.energy, last.angular_momentum,
                 last.inertia});
    });
    json rep;
    rep["law"] = law.label;
    rep["final"] = {{"energy", last.energy},
                    {"angular_momentum", last.angular_momentum},
                    {"inertia", last.inertia},
                    {"com_velocity", {last.com_velocity.real(), last.com_velocity.imag()}},
                    {"lagrange_jacobi_residual", last.lagrange_jacobi_residual}};
    write_json(out / "threebody.json", rep);
}

void run_calogero(const RunConfig& cfg, const Params& p) {
    const fs::path out = ensure_out_dir(cfg);
    const auto x0 = p.numbers("x0");
    const auto v0 = p.numbers("v0");
    const double T = p.number("t", 10.0);
    numerics::IntegratorConfig icfg;
    icfg.method = numerics::IntegratorConfig::Method::rkf45_adaptive;
    icfg.abs_tol = icfg.rel_tol = p.number("tol", 1e-12);
    icfg.dt = 1e-2;
    const auto run = threebody::calogero_run(x0, v0, T, icfg);

    std::vector<std::string> cols;
    for (size_t i = 0; i < x0.size(); ++i) cols.push_back("x" + std::to_string(i + 1));
    for (size_t i = 0; i < v0.size(); ++i) cols.push_back("v" + std::to_string(i + 1));
    CsvWriter csv(out / "calogero.csv", cols);
    std::vector<double> row = run.x_final;
    row.insert(row.end(), run.v_final.begin(), run.v_final.end());
    csv.row(row);

    json rep;
    rep["energy_drift"] = run.energy_drift;
    rep["momentum_drift"] = run.momentum_drift;
    rep["ordering_preserved"] = run.ordering_preserved;
    rep["v_final"] = run.v_final;
    write_json(out / "calogero.json", rep);
    std::cout << rep.dump(2) << "\n";
}

int run_verify_all(const RunConfig& cfg, const Params& p) {
    const fs::path out = ensure_out_dir(cfg);
    const std::string level_s = p.str("level", "fast");
    acceptance::Level level;
    if (level_s == "fast")
        level = acceptance::Level::fast;
    else if (level_s == "full")
        level = acceptance::Level::full;
    else
        throw ConfigError("cli", "verify-all", "level must be fast or full");

    auto results = acceptance::run_criteria(level, cfg.seed);
    results.push_back(acceptance::determinism_check(cfg.seed));

    json rep;
    rep["level"] = level_s;
    rep["seed"] = cfg.seed;
    json list = json::array();
    bool all = true;
    for (const auto& r : results) {
        std::printf("[%s] %-55s (%.2fs) %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.seconds, r.passed ? "" : r.detail.c_str());
        all = all && r.passed;
        list.push_back({{"name", r.name},
                        {"passed", r.passed},
                        {"detail", r.detail},
                        {"seconds", r.seconds}});
    }
    rep["criteria"] = list;
    rep["all_passed"] = all;
    write_json(out / "verify.json", rep);
    std::printf("%s\n", all ? "ALL CRITERIA PASSED" : "FAILURES PRESENT (see verify.json)");
    return all ? 0 : 1;
}

}  // namespace

// ---------------------------------------------------------------------------
// schema
// ---------------------------------------------------------------------------

const std::vector<SubcommandSpec>& subcommands() {
    static const std::vector<SubcommandSpec> specs = {
        {"diffop",
         "linear differential operator algebra: compose, commutator, Euler substitution, apply",
         {{"op-a", true, "operator text, e.g. \"(x^2)*d2 + x*d1 + 1\""},
          {"op-b", false, "second operator for compose/commutator"},
          {"action", false, "compose | commutator | euler | apply (default compose)"},
          {"poly", false, "polynomial argument for apply"}}},
        {"wronskian",
         "construct the monic operator annihilating a function basis",
         {{"basis", false, "comma list from: 1,x,x2,x3,sin,cos,sqrt,exp (default sin,sqrt)"},
          {"window", true, "construction window, e.g. 0.5,1.4"},
          {"samples", false, "sample count (default 64)"},
          {"param", false, "parameter c for exp(c x) (default 1)"}}},
        {"symmetry",
         "exact symmetry check of a polynomial flow against a candidate flow",
         {{"system", true, "JSON file with {components: {coord: polynomial}}"},
          {"candidate", true, "JSON file with {components: {coord: polynomial}}"}}},
        {"shock",
         "quasilinear profile inversion u_t = 2uu_x via x + 2tu = phi(u)",
         {{"profile", false, "linear | cubic | tanh (default linear)"},
          {"x", true, "query position"},
          {"t", true, "query time"}}},
        {"thomas",
         "general solution of the reduced mixed-derivative equation (beta = 0)",
         {{"alpha", true, "alpha coefficient"},
          {"k1", false, "gauge exponent k1 (default 0)"},
          {"grid", false, "grid resolution (default 96)"}}},
        {"colehopf",
         "logarithmic-derivative transform of a periodic field (u = w_x/w)",
         {{"in", true, "CSV file x,value on a uniform periodic grid"},
          {"inverse", false, "map u -> w instead (flag)"}}},
        {"heat",
         "periodic spectral heat flow",
         {{"n", false, "grid size (default 128)"},
          {"t", false, "time (default 1)"},
          {"init", false, "sin | halfsin | sin3mix | gauss (default sin)"}}},
        {"burgers",
         "viscous quasilinear flow via the linearizing substitution",
         {{"n", false, "grid size (default 256)"},
          {"t", false, "time (default 0.5)"},
          {"eps", false, "viscosity (default 1)"},
          {"init", false, "zero-mean initial field (default halfsin)"}}},
        {"dispersion",
         "omega(k) branches and dispersivity of a constant-coefficient operator",
         {{"poly", true, "operator text, e.g. \"ut - uxxx\""},
          {"kmin", false, "window start (default 0.5)"},
          {"kmax", false, "window end (default 2)"},
          {"samples", false, "sample count (default 64)"}}},
        {"residual",
         "stencil residual convergence for closed-form solutions",
         {{"equation", false, "kdv | nls | heat (default kdv)"},
          {"accuracy", false, "stencil order (default 4)"},
          {"h", false, "base stencil spacing (default 0.08)"},
          {"levels", false, "halving levels (default 3)"}}},
        {"jost",
         "scattering factor from its Volterra integral equation (square-well potential)",
         {{"k", false, "spectral parameter (default 1)"},
          {"amp", false, "well amplitude (default -0.1)"},
          {"n", false, "grid points (default 12001)"}}},
        {"triad",
         "three-wave resonance: integration, invariants, elliptic closed form",
         {{"n", false, "planetary constants n1,n2,n3"},
          {"couplings", false, "generic couplings c1,c2,c3"},
          {"a0", true, "initial amplitudes a1,a2,a3"},
          {"t", false, "horizon (default 20)"},
          {"dt", false, "step (default 1e-3)"},
          {"closed-form", false, "also derive the elliptic solution (flag)"}}},
        {"quartet",
         "four-wave resonance with its three quadratic invariants",
         {{"couplings", true, "c1,c2,c3,c4"},
          {"a0", true, "initial amplitudes"},
          {"t", false, "horizon (default 5)"},
          {"dt", false, "step (default 1e-3)"}}},
        {"threebody",
         "planar equal-mass three-body run with conservation monitors",
         {{"law", false, "poincare | newton | power (default poincare)"},
          {"sigma", false, "poincare coefficient (default -1)"},
          {"coeff", false, "newton/power coefficient (default -1)"},
          {"exponent", false, "power-law exponent (default -1.5)"},
          {"preset", false, "lagrange: start on the equidistant circular orbit"},
          {"side", false, "triangle side for the lagrange preset (default 1)"},
          {"init", false, "JSON file {z: [[re,im]x3], v: [[re,im]x3]}"},
          {"T", false, "horizon (default 10)"},
          {"tol", false, "adaptive tolerance (default 1e-10)"},
          {"monitors", false, "accepted for compatibility; monitors always on"}}},
        {"calogero",
         "collinear inverse-square gas scattering",
         {{"x0", true, "ordered positions, comma list"},
          {"v0", true, "velocities, comma list"},
          {"t", false, "horizon (default 10)"},
          {"tol", false, "adaptive tolerance (default 1e-12)"}}},
        {"verify-all",
         "run the whole verification suite and print one line per criterion",
         {{"level", false, "fast | full (default fast)"}}},
    };
    return specs;
}

// ---------------------------------------------------------------------------
// config / dispatch / main
// ---------------------------------------------------------------------------

RunConfig config_from_json_file(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cli", "config", "cannot read config file " + path.string());
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw ConfigError("cli", "config", std::string("bad JSON: ") + e.what());
    }
    RunConfig cfg;
    if (!j.contains("subcommand"))
        throw ConfigError("cli", "config", "config file needs a 'subcommand' key");
    cfg.subcommand = j["subcommand"].get<std::string>();
    if (j.contains("params"))
        for (const auto& [k, v] : j["params"].items())
            cfg.params[k] = v.is_string() ? v.get<std::string>() : v.dump();
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    return cfg;
}

RunConfig config_from_args(const std::vector<std::string>& args) {
    if (args.empty()) throw ConfigError("cli", "args", "no subcommand given (see --help)");
    if (args[0] == "--config") {
        if (args.size() != 2)
            throw ConfigError("cli", "args", "--config takes exactly one file path");
        return config_from_json_file(args[1]);
    }
    RunConfig cfg;
    cfg.subcommand = args[0];
    for (size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.size() < 3 || a.substr(0, 2) != "--")
            throw ConfigError("cli", "args", "expected --key [value], got '" + a + "'");
        const std::string key = a.substr(2);
        std::string value = "true";  // bare flag
        if (i + 1 < args.size() && args[i + 1].substr(0, 2) != "--") value = args[++i];
        if (key == "out")
            cfg.out_dir = value;
        else if (key == "seed")
            cfg.seed = std::stoull(value);
        else
            cfg.params[key] = value;
    }
    return cfg;
}

int dispatch(const RunConfig& cfg) {
    const auto& specs = subcommands();
    const auto it = std::find_if(specs.begin(), specs.end(),
                                 [&](const SubcommandSpec& s) { return s.name == cfg.subcommand; });
    if (it == specs.end())
        throw ConfigError("cli", "dispatch", "unknown subcommand '" + cfg.subcommand + "'");
    // the environment may cap worker threads; all current paths are
    // single-threaded, so the value is validated and recorded only
    if (const char* threads = std::getenv("INTEGRABILITY_LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(threads, &end, 10);
        if (end == threads || *end != '\0' || v < 1)
            throw ConfigError("cli", "dispatch",
                              "INTEGRABILITY_LAB_THREADS must be a positive integer");
    }
    const Params p(cfg, *it);
    if (cfg.subcommand == "diffop") run_diffop(cfg, p);
    else if (cfg.subcommand == "wronskian") run_wronskian(cfg, p);
    else if (cfg.subcommand == "symmetry") run_symmetry(cfg, p);
    else if (cfg.subcommand == "shock") run_shock(cfg, p);
    else if (cfg.subcommand == "thomas") run_thomas(cfg, p);
    else if (cfg.subcommand == "colehopf") run_colehopf(cfg, p);
    else if (cfg.subcommand == "heat") run_heat(cfg, p);
    else if (cfg.subcommand == "burgers") run_burgers(cfg, p);
    else if (cfg.subcommand == "dispersion") run_dispersion(cfg, p);
    else if (cfg.subcommand == "residual") run_residual(cfg, p);
    else if (cfg.subcommand == "jost") run_jost(cfg, p);
    else if (cfg.subcommand == "triad") run_triad(cfg, p);
    else if (cfg.subcommand == "quartet") run_quartet(cfg, p);
    else if (cfg.subcommand == "threebody") run_threebody(cfg, p);
    else if (cfg.subcommand == "calogero") run_calogero(cfg, p);
    else if (cfg.subcommand == "verify-all") return run_verify_all(cfg, p);
    return 0;
}

std::string usage() {
    std::ostringstream os;
    os << "intlab -- constructive integrability toolbox\n\n"
          "usage: intlab <subcommand> [--key value ...] [--out DIR] [--seed N]\n"
          "       intlab --config run.json\n\n"
          "subcommands:\n";
    for (const auto& s : subcommands()) {
        os << "  " << s.name << "\n      " << s.doc << "\n";
        for (const auto& p : s.params)
            os << "      --" << p.name << (p.required ? " (required)  " : "  ") << p.doc
               << "\n";
    }
    os << "\nexit codes: 0 ok, 2 configuration error, 3 numerical failure.\n"
          "INTEGRABILITY_LAB_THREADS caps worker threads (all current subcommands are\n"
          "single-threaded).\n";
    return os.str();
}

int main_entry(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "--help" || args[0] == "-h") {
        std::cout << usage();
        return args.empty() ? 2 : 0;
    }
    RunConfig cfg;
    try {
        cfg = config_from_args(args);
        return dispatch(cfg);
    } catch (const Error& e) {
        json rep;
        rep["schema_version"] = kSchemaVersion;
        rep["error"] = {{"module", e.module_name()},
                        {"operation", e.operation()},
                        {"message", e.what()},
                        {"exit_code", static_cast<int>(e.error_class())}};
        if (const auto* shock = dynamic_cast<const ShockFormedError*>(&e))
            rep["error"]["roots"] = shock->roots();
        if (const auto* sing = dynamic_cast<const SingularityError*>(&e))
            rep["error"]["time"] = sing->when();
        std::cerr << rep.dump(2) << "\n";
        std::error_code ec;
        fs::create_directories(cfg.out_dir, ec);
        if (!ec) {
            std::ofstream f(cfg.out_dir / "error.json");
            if (f) f << rep.dump(2) << "\n";
        }
        return static_cast<int>(e.error_class());
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace intlab::cli
