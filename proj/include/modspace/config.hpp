#ifndef MODSPACE_CONFIG_HPP
#define MODSPACE_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "modspace/decomp.hpp"
#include "modspace/evolve.hpp"
#include "modspace/families.hpp"
#include "modspace/norms.hpp"
#include "modspace/symbols.hpp"
#include "modspace/windows.hpp"

namespace modspace {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// How the initial datum of a run is produced.
struct InitialSpec {
    std::string kind = "gaussian";  // gaussian | family | csv
    double amplitude = 1.0;
    double width = 1.0;             // e^{-|x|^2 / (2 width^2)}
    std::optional<double> modulation_size;  // rescale so that ||u0||_{M^0_{2,1}} equals this
    std::string family;
    int index = 0;
    std::string path;
};

/// Knobs of the verify subcommand.
struct VerifySpec {
    int count = 20;
    std::size_t pairs = 50;
    double s = 1.0;
    double p = 2.0;
    double q = 1.0;
    double r = 2.0;
    double gamma = 4.0;
    std::vector<double> T_list = {0.25, 0.125, 0.0625};
    std::vector<std::string> estimates = {"algebra", "multilinear", "derivative", "linear_smoothing", "remainder_separable",
                                          "remainder_symbol_class", "triple_decay"};
    std::string catalog_symbol = "modulated_diffusion_drift";
    double algebra_bound = 1e3;
    double derivative_bound = 1e2;
};

/// Inputs of the params subcommand.
struct ParamSpec {
    double kappa = 1.0;
    int K = 3;
    std::string regime = "general";
    std::optional<double> gamma;
    std::optional<int> factors;
};

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    std::string description;
    std::string criterion;
    TorusGrid grid{1, 32, 512};
    int R_freq = 8;
    int R_phys = 15;
    double plateau = 0.25;
    int smoothness = Smoothness::infinite;
    Symbol symbol = confining_symbol();
    NonlinearitySpec nonlinearity;
    NormParams norm;
    TimeGrid time{0.25, 64};
    bool auto_T = false;
    std::optional<double> horizon;
    SolverOptions solver;
    InitialSpec initial;
    std::uint64_t seed = 1;
    VerifySpec verify;
    ParamSpec params;
    std::map<std::string, double> thresholds;

    WindowFamily family() const { return build_ud_family(grid.d, plateau, Smoothness{smoothness}); }
    TruncatedLattice freq_lattice() const { return TruncatedLattice(grid.d, R_freq, LatticeRole::frequency); }
    TruncatedLattice phys_lattice() const { return TruncatedLattice(grid.d, R_phys, LatticeRole::physical); }
    Decomposer decomposer() const { return Decomposer(grid, family(), freq_lattice(), phys_lattice()); }
    double threshold(const std::string& key, double fallback) const {
        const auto it = thresholds.find(key);
        return it == thresholds.end() ? fallback : it->second;
    }
    SolveSetup solve_setup() const {
        SolveSetup s;
        s.symbol = symbol;
        s.nonlinearity = nonlinearity;
        s.norm = norm;
        s.time = time;
        s.options = solver;
        return s;
    }
};

namespace detail {

inline void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad value for '" + std::string(key) + "' in " + where + ": " + e.what());
    }
}

// numbers, or the strings "inf" / "infinity" for exponents
inline double read_exponent(const json& j, const char* key, double fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "infinity") return kInf;
        throw ConfigError("bad exponent '" + s + "' for '" + key + "' in " + where);
    }
    if (!v.is_number()) throw ConfigError("exponent '" + std::string(key) + "' in " + where + " must be a number or \"inf\"");
    return v.get<double>();
}

inline SymbolFactor parse_factor(const json& j, const std::string& where) {
    reject_unknown(j, {"kind", "order", "coeff_re", "coeff_im"}, where);
    SymbolFactor f;
    std::string kind = "zero";
    double order = 0.0, re = 1.0, im = 0.0;
    read(j, "kind", kind, where);
    read(j, "order", order, where);
    read(j, "coeff_re", re, where);
    read(j, "coeff_im", im, where);
    f.kind = factor_kind_from_string(kind);
    f.order = order;
    f.coeff = {re, im};
    return f;
}

inline Symbol parse_symbol(const json& j) {
    const std::string where = "symbol";
    reject_unknown(j, {"kind", "a", "b", "sigma1", "sigma2", "name"}, where);
    std::string kind = "separable";
    read(j, "kind", kind, where);
    if (kind == "catalog") {
        std::string name;
        read(j, "name", name, where);
        return catalog_symbol(name);
    }
    if (kind != "separable") throw ConfigError("symbol kind must be 'separable' or 'catalog'");
    SeparableSymbol s;
    s.a = j.contains("a") ? parse_factor(j.at("a"), "symbol.a") : SymbolFactor::zero();
    s.b = j.contains("b") ? parse_factor(j.at("b"), "symbol.b") : SymbolFactor::zero();
    read(j, "sigma1", s.sigma1, where);
    read(j, "sigma2", s.sigma2, where);
    if (s.a.kind == FactorKind::bracket_power || s.a.kind == FactorKind::abs_power) s.sigma1 = j.value("sigma1", s.a.order);
    if (s.b.kind == FactorKind::bracket_power || s.b.kind == FactorKind::abs_power) s.sigma2 = j.value("sigma2", s.b.order);
    if (!(s.sigma2 > 0.0)) throw ConfigError("symbol sigma2 must be positive");
    if (s.sigma1 < 0.0) throw ConfigError("symbol sigma1 must be nonnegative");
    return Symbol(s);
}

inline NonlinearitySpec parse_nonlinearity(const json& j, int d) {
    const std::string where = "nonlinearity";
    reject_unknown(j, {"preset", "power", "coeff_re", "coeff_im", "terms", "kappa_max", "K_max", "dealias"}, where);
    NonlinearitySpec s;
    std::string preset;
    read(j, "preset", preset, where);
    if (!preset.empty()) {
        if (preset == "none") {
        } else if (preset == "cubic_damping") {
            s = cubic_damping(d);
        } else if (preset == "power") {
            int k = 3;
            double re = -1.0, im = 0.0;
            read(j, "power", k, where);
            read(j, "coeff_re", re, where);
            read(j, "coeff_im", im, where);
            s = power_nonlinearity(d, k, {re, im});
        } else if (preset == "derivative_product") {
            double re = 1.0, im = 0.0;
            read(j, "coeff_re", re, where);
            read(j, "coeff_im", im, where);
            s = derivative_product(d, {re, im});
        } else {
            throw ConfigError("unknown nonlinearity preset '" + preset + "'");
        }
    }
    if (j.contains("terms")) {
        if (!preset.empty()) throw ConfigError("nonlinearity: give either a preset or terms, not both");
        for (const auto& t : j.at("terms")) {
            reject_unknown(t, {"coeff_re", "coeff_im", "factors"}, "nonlinearity term");
            Monomial m;
            double re = 1.0, im = 0.0;
            read(t, "coeff_re", re, "nonlinearity term");
            read(t, "coeff_im", im, "nonlinearity term");
            m.coeff = {re, im};
            if (!t.contains("factors")) throw ConfigError("nonlinearity term needs factors");
            for (const auto& f : t.at("factors")) {
                reject_unknown(f, {"alpha", "conj"}, "nonlinearity factor");
                NonlinearFactor nf;
                nf.alpha = MultiIndex(static_cast<std::size_t>(d), 0);
                read(f, "alpha", nf.alpha, "nonlinearity factor");
                read(f, "conj", nf.conjugated, "nonlinearity factor");
                m.factors.push_back(nf);
            }
            s.terms.push_back(m);
        }
    }
    read(j, "kappa_max", s.kappa_max, where);
    read(j, "K_max", s.K_max, where);
    read(j, "dealias", s.dealias, where);
    try {
        s.validate(d);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("nonlinearity: ") + e.what());
    }
    return s;
}

}  // namespace detail

/// Parses and validates a configuration; every guard of the library is run here.
inline ExperimentConfig parse_config(const json& j) {
    detail::reject_unknown(j, {"schema_version", "description", "criterion", "grid", "lattices", "window", "symbol",
                               "nonlinearity", "norm", "time", "solver", "initial", "seed", "verify", "params", "thresholds"},
                           "config");
    ExperimentConfig c;
    if (!j.contains("schema_version")) throw ConfigError("config needs a schema_version");
    detail::read(j, "schema_version", c.schema_version, "config");
    if (c.schema_version != kSchemaVersion) throw ConfigError("unsupported schema_version " + std::to_string(c.schema_version));
    detail::read(j, "description", c.description, "config");
    detail::read(j, "criterion", c.criterion, "config");
    detail::read(j, "seed", c.seed, "config");

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        detail::reject_unknown(g, {"d", "L", "N"}, "grid");
        detail::read(g, "d", c.grid.d, "grid");
        detail::read(g, "L", c.grid.L, "grid");
        detail::read(g, "N", c.grid.N, "grid");
    }
    if (j.contains("lattices")) {
        const json& l = j.at("lattices");
        detail::reject_unknown(l, {"R_freq", "R_phys"}, "lattices");
        detail::read(l, "R_freq", c.R_freq, "lattices");
        detail::read(l, "R_phys", c.R_phys, "lattices");
    }
    if (j.contains("window")) {
        const json& w = j.at("window");
        detail::reject_unknown(w, {"plateau", "smoothness"}, "window");
        detail::read(w, "plateau", c.plateau, "window");
        if (w.contains("smoothness")) {
            const json& s = w.at("smoothness");
            if (s.is_string() && s.get<std::string>() == "infinite") c.smoothness = Smoothness::infinite;
            else if (s.is_number_integer() && s.get<int>() > 0) c.smoothness = s.get<int>();
            else throw ConfigError("window smoothness must be \"infinite\" or a positive integer");
        }
    }
    try {
        if (j.contains("symbol")) c.symbol = detail::parse_symbol(j.at("symbol"));
        if (j.contains("nonlinearity")) c.nonlinearity = detail::parse_nonlinearity(j.at("nonlinearity"), c.grid.d);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (j.contains("norm")) {
        const json& n = j.at("norm");
        detail::reject_unknown(n, {"s", "p", "q", "r", "gamma"}, "norm");
        detail::read(n, "s", c.norm.s, "norm");
        c.norm.p = detail::read_exponent(n, "p", c.norm.p, "norm");
        c.norm.q = detail::read_exponent(n, "q", c.norm.q, "norm");
        c.norm.r = detail::read_exponent(n, "r", c.norm.r, "norm");
        c.norm.gamma = detail::read_exponent(n, "gamma", c.norm.gamma, "norm");
    }
    if (j.contains("time")) {
        const json& t = j.at("time");
        detail::reject_unknown(t, {"T", "J", "auto_T", "horizon"}, "time");
        detail::read(t, "T", c.time.T, "time");
        detail::read(t, "J", c.time.J, "time");
        detail::read(t, "auto_T", c.auto_T, "time");
        if (t.contains("horizon")) c.horizon = t.at("horizon").get<double>();
    }
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        detail::reject_unknown(s, {"tol", "max_iter", "scheme", "tail_warn", "tail_error"}, "solver");
        detail::read(s, "tol", c.solver.tol, "solver");
        detail::read(s, "max_iter", c.solver.max_iter, "solver");
        detail::read(s, "tail_warn", c.solver.tail_warn, "solver");
        detail::read(s, "tail_error", c.solver.tail_error, "solver");
        std::string scheme = "semi_implicit";
        detail::read(s, "scheme", scheme, "solver");
        if (scheme != "semi_implicit" && scheme != "explicit") throw ConfigError("solver scheme must be semi_implicit or explicit");
        c.solver.semi_implicit = scheme == "semi_implicit";
        if (!(c.solver.tol > 0.0)) throw ConfigError("solver tol must be positive");
        if (c.solver.max_iter < 1) throw ConfigError("solver max_iter must be at least 1");
    }
    if (j.contains("initial")) {
        const json& i = j.at("initial");
        detail::reject_unknown(i, {"kind", "amplitude", "width", "modulation_size", "family", "index", "path"}, "initial");
        detail::read(i, "kind", c.initial.kind, "initial");
        detail::read(i, "amplitude", c.initial.amplitude, "initial");
        detail::read(i, "width", c.initial.width, "initial");
        if (i.contains("modulation_size")) c.initial.modulation_size = i.at("modulation_size").get<double>();
        detail::read(i, "family", c.initial.family, "initial");
        detail::read(i, "index", c.initial.index, "initial");
        detail::read(i, "path", c.initial.path, "initial");
        if (c.initial.kind != "gaussian" && c.initial.kind != "family" && c.initial.kind != "csv") {
            throw ConfigError("initial kind must be gaussian, family or csv");
        }
        if (!(c.initial.width > 0.0)) throw ConfigError("initial width must be positive");
    }
    if (j.contains("verify")) {
        const json& v = j.at("verify");
        detail::reject_unknown(v, {"count", "pairs", "s", "p", "q", "r", "gamma", "T_list", "estimates", "catalog_symbol",
                                   "algebra_bound", "derivative_bound"},
                               "verify");
        detail::read(v, "count", c.verify.count, "verify");
        detail::read(v, "pairs", c.verify.pairs, "verify");
        detail::read(v, "s", c.verify.s, "verify");
        c.verify.p = detail::read_exponent(v, "p", c.verify.p, "verify");
        c.verify.q = detail::read_exponent(v, "q", c.verify.q, "verify");
        c.verify.r = detail::read_exponent(v, "r", c.verify.r, "verify");
        c.verify.gamma = detail::read_exponent(v, "gamma", c.verify.gamma, "verify");
        detail::read(v, "T_list", c.verify.T_list, "verify");
        detail::read(v, "estimates", c.verify.estimates, "verify");
        detail::read(v, "catalog_symbol", c.verify.catalog_symbol, "verify");
        detail::read(v, "algebra_bound", c.verify.algebra_bound, "verify");
        detail::read(v, "derivative_bound", c.verify.derivative_bound, "verify");
        if (c.verify.count < 2) throw ConfigError("verify count must be at least 2");
    }
    if (j.contains("params")) {
        const json& p = j.at("params");
        detail::reject_unknown(p, {"kappa", "K", "regime", "gamma", "factors"}, "params");
        detail::read(p, "kappa", c.params.kappa, "params");
        detail::read(p, "K", c.params.K, "params");
        detail::read(p, "regime", c.params.regime, "params");
        if (p.contains("gamma")) c.params.gamma = p.at("gamma").get<double>();
        if (p.contains("factors")) c.params.factors = p.at("factors").get<int>();
        regime_from_string(c.params.regime);
    }
    if (j.contains("thresholds")) {
        const json& t = j.at("thresholds");
        if (!t.is_object()) throw ConfigError("thresholds must be an object of numbers");
        for (const auto& [k, v] : t.items()) {
            if (!v.is_number()) throw ConfigError("threshold '" + k + "' must be a number");
            c.thresholds[k] = v.get<double>();
        }
    }

    // module guards, translated into configuration errors
    try {
        c.grid.validate();
        c.norm.validate();
        c.time.validate();
        const Decomposer dec = c.decomposer();
        (void)dec;
        if (!c.symbol.separable() && c.grid.d != 1) throw DomainError("catalog symbols need d = 1");
        if (!c.symbol.separable() && c.grid.N > kMaxQuadratureN) throw DomainError("catalog symbols need N <= 1024");
        if (c.horizon && !(*c.horizon > 0.0)) throw DomainError("time horizon must be positive");
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    } catch (const PreconditionError& e) {
        throw ConfigError(e.what());
    }
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

/// u0 from the initial spec.
inline GridFunction initial_data(const ExperimentConfig& c) {
    GridFunction u(c.grid);
    const auto& in = c.initial;
    if (in.kind == "gaussian") {
        const double w2 = in.width * in.width;
        u = GridFunction::sample(c.grid, [&](std::span<const double> x) {
            double r = 0.0;
            for (double v : x) r += v * v;
            return cplx{in.amplitude * std::exp(-0.5 * r / w2), 0.0};
        });
    } else if (in.kind == "family") {
        u = family_by_name(in.family, in.index + 1).member(c.grid, c.seed, in.index);
    } else {
        std::ifstream f(in.path);
        if (!f) throw ConfigError("cannot read initial data '" + in.path + "'");
        u = read_csv(c.grid, f);
    }
    if (in.modulation_size) {
        const double m = modulation_norm(u, 0.0, 2.0, 1.0, c.family(), c.freq_lattice());
        if (!(m > 0.0)) throw ConfigError("cannot rescale zero initial data");
        u *= *in.modulation_size / m;
    }
    return u;
}

}  // namespace modspace

#endif  // MODSPACE_CONFIG_HPP
