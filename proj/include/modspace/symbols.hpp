#ifndef MODSPACE_SYMBOLS_HPP
#define MODSPACE_SYMBOLS_HPP

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "modspace/decomp.hpp"
#include "modspace/error.hpp"
#include "modspace/grid.hpp"
#include "modspace/lattice.hpp"
#include "modspace/parallel.hpp"
#include "modspace/rng.hpp"

namespace modspace {

// ------------------------------------------------------------------ factors

enum class FactorKind { zero, constant, bracket_power, abs_power };

inline std::string to_string(FactorKind k) {
    switch (k) {
        case FactorKind::zero: return "zero";
        case FactorKind::constant: return "constant";
        case FactorKind::bracket_power: return "bracket_power";
        case FactorKind::abs_power: return "abs_power";
    }
    return "?";
}

inline FactorKind factor_kind_from_string(const std::string& s) {
    if (s == "zero") return FactorKind::zero;
    if (s == "constant") return FactorKind::constant;
    if (s == "bracket_power") return FactorKind::bracket_power;
    if (s == "abs_power") return FactorKind::abs_power;
    throw ConfigError("unknown symbol factor '" + s + "'");
}

/// One half of a separable symbol: coeff * <y>^order, coeff * |y|^order,
/// a constant, or identically zero (a waiver: the half is switched off).
struct SymbolFactor {
    FactorKind kind = FactorKind::zero;
    double order = 0.0;
    cplx coeff{1.0, 0.0};

    static SymbolFactor zero() { return {}; }
    static SymbolFactor constant(cplx c) { return {FactorKind::constant, 0.0, c}; }
    static SymbolFactor bracket_power(double order, cplx c = 1.0) { return {FactorKind::bracket_power, order, c}; }
    static SymbolFactor abs_power(double order, cplx c = 1.0) { return {FactorKind::abs_power, order, c}; }

    bool is_zero() const { return kind == FactorKind::zero; }

    cplx operator()(std::span<const double> y) const {
        double r2 = 0.0;
        for (double v : y) r2 += v * v;
        switch (kind) {
            case FactorKind::zero: return 0.0;
            case FactorKind::constant: return coeff;
            case FactorKind::bracket_power: return coeff * std::pow(1.0 + r2, 0.5 * order);
            case FactorKind::abs_power: return r2 == 0.0 ? (order == 0.0 ? coeff : cplx{}) : coeff * std::pow(r2, 0.5 * order);
        }
        return 0.0;
    }
};

/// A(x, D) = a(x) + b(D) with orders sigma1 (for a) and sigma2 (for b).
struct SeparableSymbol {
    SymbolFactor a;
    SymbolFactor b;
    double sigma1 = 0.0;
    double sigma2 = 2.0;
};

/// General symbol of class S^M, evaluated pointwise; eps is the order gap of
/// the x-derivatives.
struct SmSymbol {
    std::string name;
    std::function<cplx(std::span<const double>, std::span<const double>)> A;
    double M = 2.0;
    double eps = 1.0;
};

class Symbol;

namespace detail {

/// Dense quadrature matrix e^{i x_j xi_k} A(x_j, xi_k) dxi (d = 1), built once per grid.
class QuadratureCache {
public:
    const CVec& matrix(const TorusGrid& g, const std::function<cplx(std::span<const double>, std::span<const double>)>& A) {
        std::lock_guard<std::mutex> lock(mutex_);
        if (built_ && grid_ == g) return matrix_;
        const std::size_t n = static_cast<std::size_t>(g.N);
        CVec m(n * n);
        parallel_for(n, [&](std::size_t j) {
            const double x[1] = {g.coord(static_cast<int>(j))};
            for (std::size_t k = 0; k < n; ++k) {
                const double xi[1] = {g.dxi() * (static_cast<int>(k) - g.N / 2)};
                m[j * n + k] = std::exp(cplx{0.0, x[0] * xi[0]}) * A(x, xi) * g.dxi();
            }
        });
        matrix_ = std::move(m);
        grid_ = g;
        built_ = true;
        return matrix_;
    }

private:
    std::mutex mutex_;
    bool built_ = false;
    TorusGrid grid_{};
    CVec matrix_;
};

}  // namespace detail

/// Maximum grid size accepted by the quadrature applier.
inline constexpr int kMaxQuadratureN = 1024;

/// Op(A) f(x_j) = sum_k e^{i x_j xi_k} A(x_j, xi_k) fhat(xi_k) dxi, by direct
/// summation. O(N^2); restricted to d = 1 and N <= 1024.
inline GridFunction quadrature_apply(const std::function<cplx(std::span<const double>, std::span<const double>)>& A,
                                     const GridFunction& f, detail::QuadratureCache* cache = nullptr) {
    const TorusGrid& g = f.grid();
    if (g.d != 1) throw PreconditionError("quadrature applier supports d = 1 only");
    if (g.N > kMaxQuadratureN) throw PreconditionError("quadrature applier limited to N <= 1024");
    const GridFunction fhat = fourier_transform(f, TransformDirection::forward);
    const std::size_t n = static_cast<std::size_t>(g.N);
    GridFunction out(g);
    if (cache != nullptr) {
        const CVec& m = cache->matrix(g, A);
        parallel_for(n, [&](std::size_t j) {
            cplx acc{};
            const cplx* row = &m[j * n];
            for (std::size_t k = 0; k < n; ++k) acc += row[k] * fhat[k];
            out[j] = acc;
        });
        return out;
    }
    parallel_for(n, [&](std::size_t j) {
        const double x[1] = {g.coord(static_cast<int>(j))};
        cplx acc{};
        for (std::size_t k = 0; k < n; ++k) {
            const double xi[1] = {g.dxi() * (static_cast<int>(k) - g.N / 2)};
            acc += std::exp(cplx{0.0, x[0] * xi[0]}) * A(x, xi) * fhat[k];
        }
        out[j] = acc * g.dxi();
    });
    return out;
}

/// Either a separable or a general symbol, plus the orders used by the solver.
class Symbol {
public:
    Symbol() : Symbol(SeparableSymbol{}) {}
    explicit Symbol(SeparableSymbol s) : impl_(std::move(s)) {}
    explicit Symbol(SmSymbol s) : impl_(std::move(s)), cache_(std::make_shared<detail::QuadratureCache>()) {}

    bool separable() const { return std::holds_alternative<SeparableSymbol>(impl_); }
    const SeparableSymbol& as_separable() const {
        if (!separable()) throw DomainError("symbol is not separable");
        return std::get<SeparableSymbol>(impl_);
    }
    const SmSymbol& as_general() const {
        if (separable()) throw DomainError("symbol is separable");
        return std::get<SmSymbol>(impl_);
    }

    /// Dissipation order in frequency (sigma2 or M).
    double sigma2() const { return separable() ? as_separable().sigma2 : as_general().M; }
    /// Growth order in space (sigma1; zero for general symbols).
    double sigma1() const { return separable() ? as_separable().sigma1 : 0.0; }

    std::string description() const {
        if (!separable()) return "S^M catalog symbol '" + as_general().name + "'";
        const auto& s = as_separable();
        return "a = " + to_string(s.a.kind) + ", b = " + to_string(s.b.kind);
    }

    cplx operator()(std::span<const double> x, std::span<const double> xi) const {
        if (separable()) {
            const auto& s = as_separable();
            return s.a(x) + s.b(xi);
        }
        return as_general().A(x, xi);
    }

    std::function<cplx(std::span<const double>, std::span<const double>)> function() const {
        return [self = *this](std::span<const double> x, std::span<const double> xi) { return self(x, xi); };
    }

    detail::QuadratureCache* cache() const { return cache_.get(); }

private:
    std::variant<SeparableSymbol, SmSymbol> impl_;
    std::shared_ptr<detail::QuadratureCache> cache_;
};

// ------------------------------------------------------------------ catalog

/// A = <x>^{sigma1} + |xi|^{sigma2}.
inline Symbol confining_symbol(double sigma1 = 2.0, double sigma2 = 2.0) {
    return Symbol(SeparableSymbol{SymbolFactor::bracket_power(sigma1), SymbolFactor::abs_power(sigma2), sigma1, sigma2});
}

/// A = |xi|^{sigma2} with the a-half waived.
inline Symbol fractional_heat_symbol(double sigma2 = 2.0) {
    return Symbol(SeparableSymbol{SymbolFactor::zero(), SymbolFactor::abs_power(sigma2), 0.0, sigma2});
}

inline Symbol constant_symbol(cplx c) {
    return Symbol(SeparableSymbol{SymbolFactor::constant(c), SymbolFactor::zero(), 0.0, 0.0});
}

/// Named general symbols of class S^2 (d = 1 quadrature path).
inline Symbol catalog_symbol(const std::string& name) {
    SmSymbol s;
    s.name = name;
    if (name == "modulated_diffusion_drift") {
        // |xi|^2 + (1 + e^{-x^2/8}/2) <xi>
        s.A = [](std::span<const double> x, std::span<const double> xi) {
            const double x2 = x[0] * x[0], k2 = xi[0] * xi[0];
            return cplx{k2 + (1.0 + 0.5 * std::exp(-x2 / 8.0)) * std::sqrt(1.0 + k2), 0.0};
        };
        s.M = 2.0;
        s.eps = 1.0;
    } else if (name == "complex_transport") {
        // |xi|^2 + 1 + e^{-x^2/4} (1 + i xi / <xi>)
        s.A = [](std::span<const double> x, std::span<const double> xi) {
            const double w = std::exp(-x[0] * x[0] / 4.0);
            const double k = xi[0];
            return cplx{k * k + 1.0 + w, w * k / std::sqrt(1.0 + k * k)};
        };
        s.M = 2.0;
        s.eps = 2.0;
    } else {
        throw ConfigError("unknown S^M catalog symbol '" + name + "'");
    }
    return Symbol(std::move(s));
}

/// Wraps a separable symbol as a general one so that the quadrature path
/// can be cross-checked against the separable path.
inline Symbol as_general_symbol(const Symbol& sym) {
    SmSymbol s;
    s.name = "general:" + sym.description();
    s.A = sym.function();
    s.M = sym.sigma2();
    s.eps = 1.0;
    return Symbol(std::move(s));
}

// ------------------------------------------------------------------ evaluation

/// A(m, n) with the lattice points taken as real coordinates.
inline cplx symbol_at_lattice(const Symbol& sym, const LatticeIndex& m, const LatticeIndex& n) {
    const auto x = m.as_point();
    const auto xi = n.as_point();
    return sym(x, xi);
}

/// A(x, D) f. Separable: a(x) f + b(D) f (a uses the fundamental-domain
/// coordinate, no periodization). General: direct quadrature.
inline GridFunction apply_symbol(const Symbol& sym, const GridFunction& f) {
    if (sym.separable()) {
        const auto& s = sym.as_separable();
        GridFunction out(f.grid());
        if (!s.a.is_zero()) {
            const TorusGrid& g = f.grid();
            std::vector<double> x(static_cast<std::size_t>(g.d));
            for (std::size_t i = 0; i < f.size(); ++i) {
                g.node(i, x.data());
                out[i] = s.a(x) * f[i];
            }
        }
        if (!s.b.is_zero()) out += fourier_multiplier(f, [&](std::span<const double> xi) { return s.b(xi); });
        return out;
    }
    return quadrature_apply(sym.as_general().A, f, sym.cache());
}

/// box_{m,n}((A(x,D) - A(m,n)) u). Separable symbols use the split
/// (a(x) - a(m)) u + (b(D) - b(n)) u; general symbols the quadrature applier.
inline GridFunction remainder_apply(const Symbol& sym, const GridFunction& u, const LatticeIndex& m, const LatticeIndex& n,
                                    const Decomposer& dec) {
    const std::size_t m_pos = dec.phys().position(m);
    const std::size_t n_pos = dec.freq().position(n);
    GridFunction inner(u.grid());
    if (sym.separable()) {
        const auto& s = sym.as_separable();
        const auto mp = m.as_point();
        const auto np = n.as_point();
        const cplx am = s.a(mp), bn = s.b(np);
        const TorusGrid& g = u.grid();
        std::vector<double> x(static_cast<std::size_t>(g.d));
        for (std::size_t i = 0; i < u.size(); ++i) {
            g.node(i, x.data());
            inner[i] = (s.a.is_zero() ? cplx{} : s.a(x) - am) * u[i];
        }
        if (!s.b.is_zero()) inner += fourier_multiplier(u, [&](std::span<const double> xi) { return s.b(xi) - bn; });
    } else {
        inner = apply_symbol(sym, u) - symbol_at_lattice(sym, m, n) * u;
    }
    return dec.localize(dec.box_freq_from_spectrum(dec.spectrum(inner), n_pos), m_pos);
}

// ------------------------------------------------------------------ hypotheses

enum class HypothesisStatus { pass, fail, waived };

inline std::string to_string(HypothesisStatus s) {
    switch (s) {
        case HypothesisStatus::pass: return "pass";
        case HypothesisStatus::fail: return "fail";
        case HypothesisStatus::waived: return "waived";
    }
    return "?";
}

struct HypothesisResult {
    std::string id;
    HypothesisStatus status = HypothesisStatus::pass;
    double constant = 0.0;  // measured envelope or lower constant
    std::string note;
};

struct SymbolReport {
    std::vector<HypothesisResult> results;
    double c_a = 0.0;  // measured lower constants
    double c_b = 0.0;
    std::string note = "derivatives checked by central differences (step 1e-4) up to order 2 only";

    bool passed() const {
        for (const auto& r : results)
            if (r.status == HypothesisStatus::fail) return false;
        return true;
    }
    const HypothesisResult* find(const std::string& id) const {
        for (const auto& r : results)
            if (r.id == id) return &r;
        return nullptr;
    }
};

struct ProbeSpec {
    int count = 2000;
    double x_extent = 16.0;   // |x|_inf probed up to this value
    double xi_extent = 50.0;  // |xi|_inf probed up to this value
    std::uint64_t seed = 1;
    double max_constant = 1e6;  // envelopes above this count as failures
};

namespace detail {

// central differences along the first axis, orders 0..2
template <typename Fn>
std::array<cplx, 3> axis_derivatives(Fn&& f, std::vector<double> y, double h = 1e-4) {
    const double y0 = y[0];
    const cplx c = f(y);
    y[0] = y0 + h;
    const cplx p = f(y);
    y[0] = y0 - h;
    const cplx m = f(y);
    return {c, (p - m) / (2 * h), (p - 2.0 * c + m) / (h * h)};
}

inline std::vector<double> probe_point(CounterRng& rng, int d, double lo, double hi) {
    std::vector<double> y(static_cast<std::size_t>(d));
    for (auto& v : y) v = rng.uniform(lo, hi) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    return y;
}

inline double norm2(const std::vector<double>& y) {
    double r = 0.0;
    for (double v : y) r += v * v;
    return std::sqrt(r);
}

}  // namespace detail

/// Measures the hypotheses on random probes: growth envelopes of the
/// derivatives (finite differences, order <= 2) and lower dissipation
/// constants. A zero half of a separable symbol waives its hypotheses.
inline SymbolReport verify_hypotheses(const Symbol& sym, int d, const ProbeSpec& probes = {}) {
    require(probes.count >= 10, "verify_hypotheses needs at least 10 probes");
    SymbolReport rep;
    CounterRng rng(probes.seed, "verify_hypotheses");
    auto finish = [&](HypothesisResult r, bool ok) {
        if (r.status != HypothesisStatus::waived) r.status = ok ? HypothesisStatus::pass : HypothesisStatus::fail;
        rep.results.push_back(std::move(r));
    };

    if (sym.separable()) {
        const auto& s = sym.as_separable();
        // (H2) |d^k a(x)| <= C <x>^{sigma1 - k}
        HypothesisResult h2{"H2", HypothesisStatus::pass, 0.0, "a-derivative envelope"};
        HypothesisResult h4a{"H4a", HypothesisStatus::pass, kInf, "Re a(x) >= c_a |x|^sigma1"};
        HypothesisResult h3{"H3", HypothesisStatus::pass, 0.0, "b-derivative envelope"};
        HypothesisResult h4b{"H4b", HypothesisStatus::pass, kInf, "Re b(xi) >= c_b |xi|^sigma2"};
        if (s.a.is_zero()) h2.status = h4a.status = HypothesisStatus::waived;
        if (s.b.is_zero()) h3.status = h4b.status = HypothesisStatus::waived;
        for (int i = 0; i < probes.count; ++i) {
            const auto x = detail::probe_point(rng, d, 0.1, probes.x_extent);
            const auto xi = detail::probe_point(rng, d, 0.05, probes.xi_extent);
            if (!s.a.is_zero()) {
                const auto da = detail::axis_derivatives([&](std::span<const double> y) { return s.a(y); }, x);
                const double bx = bracket(detail::norm2(x));
                for (int k = 0; k <= 2; ++k) h2.constant = std::max(h2.constant, std::abs(da[static_cast<std::size_t>(k)]) / std::pow(bx, s.sigma1 - k));
                const double r = detail::norm2(x);
                h4a.constant = std::min(h4a.constant, da[0].real() / std::pow(r, s.sigma1));
            }
            if (!s.b.is_zero()) {
                const auto db = detail::axis_derivatives([&](std::span<const double> y) { return s.b(y); }, xi);
                const double r = detail::norm2(xi);
                for (int k = 0; k <= 2; ++k) h3.constant = std::max(h3.constant, std::abs(db[static_cast<std::size_t>(k)]) / std::pow(r, s.sigma2 - k));
                h4b.constant = std::min(h4b.constant, db[0].real() / std::pow(r, s.sigma2));
            }
        }
        finish(h2, std::isfinite(h2.constant) && h2.constant <= probes.max_constant);
        finish(h3, std::isfinite(h3.constant) && h3.constant <= probes.max_constant);
        finish(h4a, h4a.constant > 0.0);
        finish(h4b, h4b.constant > 0.0);
        rep.c_a = h4a.status == HypothesisStatus::pass ? h4a.constant : 0.0;
        rep.c_b = h4b.status == HypothesisStatus::pass ? h4b.constant : 0.0;
        return rep;
    }

    const auto& g = sym.as_general();
    HypothesisResult sm{"SM", HypothesisStatus::pass, 0.0, "|dx^a dxi^b A| <= C (1+|xi|)^{M-|b|}, |a|+|b| <= 2"};
    HypothesisResult a1{"A1", HypothesisStatus::pass, kInf, "Re A(x,xi) >= c |xi|^M"};
    HypothesisResult a2{"A2", HypothesisStatus::pass, 0.0, "|dx^a A| <= C (1+|xi|)^{M-eps}, 1 <= |a| <= 2"};
    for (int i = 0; i < probes.count; ++i) {
        const auto x = detail::probe_point(rng, d, 0.0, probes.x_extent);
        const auto xi = detail::probe_point(rng, d, 0.05, probes.xi_extent);
        const double r = detail::norm2(xi);
        const double w = 1.0 + r;
        auto in_x = [&](std::span<const double> y) { return g.A(y, xi); };
        auto in_xi = [&](std::span<const double> y) { return g.A(x, y); };
        const auto dx = detail::axis_derivatives(in_x, x);
        const auto dxi = detail::axis_derivatives(in_xi, xi);
        // mixed derivative d_x d_xi by a 4-point stencil
        const double h = 1e-4;
        auto xp = x, xm = x, kp = xi, km = xi;
        xp[0] += h;
        xm[0] -= h;
        kp[0] += h;
        km[0] -= h;
        const cplx mixed = (g.A(xp, kp) - g.A(xp, km) - g.A(xm, kp) + g.A(xm, km)) / (4 * h * h);
        sm.constant = std::max({sm.constant, std::abs(dx[0]) / std::pow(w, g.M), std::abs(dx[1]) / std::pow(w, g.M),
                                std::abs(dx[2]) / std::pow(w, g.M), std::abs(dxi[1]) / std::pow(w, g.M - 1),
                                std::abs(dxi[2]) / std::pow(w, g.M - 2), std::abs(mixed) / std::pow(w, g.M - 1)});
        a1.constant = std::min(a1.constant, dx[0].real() / std::pow(r, g.M));
        a2.constant = std::max({a2.constant, std::abs(dx[1]) / std::pow(w, g.M - g.eps), std::abs(dx[2]) / std::pow(w, g.M - g.eps)});
    }
    finish(sm, std::isfinite(sm.constant) && sm.constant <= probes.max_constant);
    finish(a1, a1.constant > 0.0);
    finish(a2, std::isfinite(a2.constant) && a2.constant <= probes.max_constant);
    rep.c_b = a1.status == HypothesisStatus::pass ? a1.constant : 0.0;
    return rep;
}

// ------------------------------------------------------------------ nonlinearity

struct NonlinearFactor {
    MultiIndex alpha;
    bool conjugated = false;
};

struct Monomial {
    cplx coeff{1.0, 0.0};
    std::vector<NonlinearFactor> factors;

    int degree() const { return static_cast<int>(factors.size()); }
};

/// F = sum of coeff * prod (d^alpha u or its conjugate); dealiased by the 2/3 rule.
struct NonlinearitySpec {
    std::vector<Monomial> terms;
    int kappa_max = 2;
    int K_max = 9;
    bool dealias = true;

    bool empty() const { return terms.empty(); }

    int kappa() const {
        int k = 0;
        for (const auto& t : terms)
            for (const auto& f : t.factors) k = std::max(k, order(f.alpha));
        return k;
    }
    int degree() const {
        int k = 0;
        for (const auto& t : terms) k = std::max(k, t.degree());
        return k;
    }

    void validate(int d) const {
        for (const auto& t : terms) {
            if (t.degree() < 2 || t.degree() > K_max) {
                throw DomainError("nonlinearity monomial degree must lie in [2, K]");
            }
            for (const auto& f : t.factors) {
                if (static_cast<int>(f.alpha.size()) != d) throw DomainError("nonlinearity multi-index length must equal d");
                for (int a : f.alpha)
                    if (a < 0) throw DomainError("nonlinearity derivative orders must be nonnegative");
                if (order(f.alpha) > kappa_max) throw DomainError("nonlinearity derivative order exceeds kappa_max");
            }
        }
    }
};

/// lambda * |u|^{k-1} u for odd k (conjugate pairs).
inline NonlinearitySpec power_nonlinearity(int d, int k, cplx lambda) {
    require(k >= 3 && k % 2 == 1, "power nonlinearity needs an odd exponent k >= 3");
    Monomial m;
    m.coeff = lambda;
    const MultiIndex zero(static_cast<std::size_t>(d), 0);
    for (int i = 0; i < (k + 1) / 2; ++i) m.factors.push_back({zero, false});
    for (int i = 0; i < (k - 1) / 2; ++i) m.factors.push_back({zero, true});
    NonlinearitySpec s;
    s.terms.push_back(m);
    s.kappa_max = 0;
    s.K_max = k;
    return s;
}

/// -|u|^2 u.
inline NonlinearitySpec cubic_damping(int d) { return power_nonlinearity(d, 3, -1.0); }

/// lambda (d_1 u) u.
inline NonlinearitySpec derivative_product(int d, cplx lambda = 1.0) {
    MultiIndex dx(static_cast<std::size_t>(d), 0);
    dx[0] = 1;
    Monomial m{lambda, {{dx, false}, {MultiIndex(static_cast<std::size_t>(d), 0), false}}};
    NonlinearitySpec s;
    s.terms.push_back(m);
    s.kappa_max = 1;
    s.K_max = 2;
    return s;
}

namespace detail {

/// Zeroes wavenumbers with |k| > N/3 on some axis (raw FFT order).
inline void truncate_two_thirds(const TorusGrid& g, CVec& raw) {
    int pos[8];
    for (std::size_t i = 0; i < raw.size(); ++i) {
        g.unflatten(i, pos);
        for (int a = 0; a < g.d; ++a) {
            if (3 * std::abs(g.wavenumber(pos[a])) > g.N) {
                raw[i] = 0.0;
                break;
            }
        }
    }
}

inline GridFunction dealiased(const GridFunction& f) {
    CVec raw = raw_spectrum(f);
    truncate_two_thirds(f.grid(), raw);
    return from_raw_spectrum(f.grid(), std::move(raw));
}

}  // namespace detail

inline GridFunction eval_nonlinearity(const NonlinearitySpec& spec, const GridFunction& u) {
    const TorusGrid& g = u.grid();
    spec.validate(g.d);
    GridFunction out(g);
    if (spec.empty()) return out;
    const GridFunction base = spec.dealias ? detail::dealiased(u) : u;
    for (const auto& t : spec.terms) {
        GridFunction prod = GridFunction::constant(g, t.coeff);
        for (const auto& f : t.factors) {
            GridFunction factor = spectral_derivative(base, f.alpha);
            if (f.conjugated) factor = factor.conj();
            for (std::size_t i = 0; i < prod.size(); ++i) prod[i] *= factor[i];
        }
        out += prod;
    }
    return spec.dealias ? detail::dealiased(out) : out;
}

struct DissipativityReport {
    std::vector<double> values;  // Re (F(u), u) per sample
    bool pass = true;
};

/// Re (F(u), u) <= 0 on every sample (absolute slack 1e-12, scaled by the size of the pairing).
inline DissipativityReport dissipativity_check(const NonlinearitySpec& spec, const std::vector<GridFunction>& samples) {
    DissipativityReport rep;
    for (const auto& u : samples) {
        const GridFunction F = eval_nonlinearity(spec, u);
        const double v = inner_product(F, u).real();
        double scale = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) scale += std::abs(F[i]) * std::abs(u[i]);
        scale *= u.grid().cell_volume();
        rep.values.push_back(v);
        if (v > 1e-12 * std::max(1.0, scale)) rep.pass = false;
    }
    return rep;
}

}  // namespace modspace

#endif  // MODSPACE_SYMBOLS_HPP
