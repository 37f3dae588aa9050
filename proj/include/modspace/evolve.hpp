#ifndef MODSPACE_EVOLVE_HPP
#define MODSPACE_EVOLVE_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "modspace/decomp.hpp"
#include "modspace/error.hpp"
#include "modspace/norms.hpp"
#include "modspace/parallel.hpp"
#include "modspace/symbols.hpp"
#include "modspace/trajectory.hpp"

namespace modspace {

// ------------------------------------------------------------------ scalar kernels

/// e^{-t A(m, n)}.
inline cplx semigroup_factor(const Symbol& sym, const LatticeIndex& m, const LatticeIndex& n, double t) {
    require(t >= 0.0, "semigroup_factor needs t >= 0");
    return std::exp(-t * symbol_at_lattice(sym, m, n));
}

/// (e^z - 1) / z, with a short series near zero.
inline cplx phi1(cplx z) {
    if (std::abs(z) < 1e-3) {
        // sum z^k / (k+1)!
        cplx term = 1.0, sum = 1.0;
        for (int k = 1; k < 8; ++k) {
            term *= z / static_cast<double>(k + 1);
            sum += term;
        }
        return sum;
    }
    if (z.imag() == 0.0) return std::expm1(z.real()) / z.real();
    return (std::exp(z) - 1.0) / z;
}

/// (e^z - 1 - z) / z^2.
inline cplx phi2(cplx z) {
    if (std::abs(z) < 1.0) {
        // sum z^k / (k+2)!
        cplx term = 0.5, sum = 0.5;
        for (int k = 1; k < 20; ++k) {
            term *= z / static_cast<double>(k + 2);
            sum += term;
        }
        return sum;
    }
    return (phi1(z) - 1.0) / z;
}

/// int_0^{t_j} e^{-(t_j - s) lambda} g(s) ds with g interpolated linearly
/// between nodes and the kernel integrated exactly.
inline GridFunction apply_A_op(cplx lambda, const Trajectory& g, int j) {
    if (j < 0 || static_cast<std::size_t>(j) >= g.size()) throw DomainError("apply_A_op: node outside the time grid");
    const double h = g.time().dt();
    const cplx e = std::exp(-h * lambda);
    const cplx w0 = h * (phi1(-h * lambda) - phi2(-h * lambda));
    const cplx w1 = h * phi2(-h * lambda);
    GridFunction acc(g.grid());
    for (int i = 0; i < j; ++i) {
        const auto& a = g[static_cast<std::size_t>(i)];
        const auto& b = g[static_cast<std::size_t>(i) + 1];
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] = e * acc[k] + w0 * a[k] + w1 * b[k];
    }
    return acc;
}

inline GridFunction apply_A_op(const Symbol& sym, const LatticeIndex& m, const LatticeIndex& n, const Trajectory& g, int j) {
    return apply_A_op(symbol_at_lattice(sym, m, n), g, j);
}

// ------------------------------------------------------------------ solver

struct SolverOptions {
    double tol = 1e-10;  // relative successive difference in the time_x_norm
    int max_iter = 30;
    bool semi_implicit = true;
    int inner_max = 60;
    double inner_tol = 1e-14;
    double tail_warn = 1e-6;
    double tail_error = 1e-3;
    bool check_hypotheses = true;
};

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    std::vector<double> diff_norms;          // relative, one per iteration
    std::vector<double> contraction_factors; // diff_mu / diff_{mu-1}, from iteration 2
    double final_diff_norm = 0.0;
    double tail_mass = 0.0;
    double T = 0.0;
    int J = 0;
    std::string scheme;
    std::vector<std::string> warnings;
};

/// Raised when the iteration stops contracting; carries the report so far.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, SolveReport rep) : Error(what), report(std::move(rep)) {}
    SolveReport report;
};

struct SolveResult {
    Trajectory trajectory;
    SolveReport report;
};

struct SolveSetup {
    Symbol symbol;
    NonlinearitySpec nonlinearity;
    NormParams norm;  // exponents of the stopping norm; s is shifted to s_gamma
    TimeGrid time;
    SolverOptions options;
};

namespace detail {

/// Per-piece state of the localized Duhamel system on the support of sigma_m.
struct PieceState {
    std::size_t m_pos = 0;
    std::size_t n_pos = 0;
    cplx lambda{};
    cplx decay{};  // e^{-h lambda}
    cplx w0{};     // h (phi1 - phi2)
    cplx w1{};     // h phi2
    CVec I;        // piece value on the window support
    CVec G;        // integrand data at the current node
};

class PicardEngine {
public:
    PicardEngine(const SolveSetup& setup, const Decomposer& dec) : s_(setup), dec_(dec) {
        const double h = s_.time.dt();
        const std::size_t nf = dec_.freq().size(), np = dec_.phys().size();
        const std::size_t size = dec_.grid().size();
        W_.assign(nf, CVec(size));
        V_.assign(nf, CVec(size));
        pieces_.reserve(nf * np);
        for (std::size_t j = 0; j < nf; ++j) {
            for (std::size_t i = 0; i < np; ++i) {
                PieceState p;
                p.m_pos = i;
                p.n_pos = j;
                p.lambda = symbol_at_lattice(s_.symbol, dec_.phys().at(i), dec_.freq().at(j));
                p.decay = std::exp(-h * p.lambda);
                p.w1 = h * phi2(-h * p.lambda);
                p.w0 = h * phi1(-h * p.lambda) - p.w1;
                const auto& w = dec_.phys_window(i);
                p.I.assign(w.index.size(), cplx{});
                p.G.assign(w.index.size(), cplx{});
                for (std::size_t k = 0; k < w.index.size(); ++k) {
                    W_[j][w.index[k]] += p.w1 * w.value[k];
                    V_[j][w.index[k]] += p.w1 * p.lambda * w.value[k];
                }
                pieces_.push_back(std::move(p));
            }
        }
    }

    /// One sweep: the next iterate from the previous one (u_prev may be all zero).
    Trajectory sweep(const GridFunction& u0, const Trajectory& u_prev) {
        const TimeGrid& tg = s_.time;
        std::vector<GridFunction> states;
        states.reserve(tg.node_count());

        // node 0: pieces of u0
        {
            const CVec raw = dec_.spectrum(u0);
            for_pieces_by_n([&](std::size_t j, const GridFunction& bn) {
                for (auto* p : by_n_[j]) {
                    const auto& w = dec_.phys_window(p->m_pos);
                    for (std::size_t k = 0; k < w.index.size(); ++k) p->I[k] = w.value[k] * bn[w.index[k]];
                }
            }, raw);
        }
        GridFunction u = assemble_pieces();
        states.push_back(u);
        set_integrand(u, forcing(u));

        for (int step = 0; step < tg.J; ++step) {
            const std::size_t next = static_cast<std::size_t>(step) + 1;
            const GridFunction Fl = forcing(u_prev[next]);
            // explicit part K = sum e^{-h lambda} I + w0 G
            GridFunction K(dec_.grid());
            for (auto& p : pieces_) {
                const auto& w = dec_.phys_window(p.m_pos);
                for (std::size_t k = 0; k < w.index.size(); ++k) K[w.index[k]] += p.decay * p.I[k] + p.w0 * p.G[k];
            }
            GridFunction un = s_.options.semi_implicit ? solve_step(K, Fl, states.back()) : implicit_map(K, Fl, u_prev[next]);
            // advance the pieces
            set_integrand_next(s_.options.semi_implicit ? un : u_prev[next], Fl);
            states.push_back(std::move(un));
        }
        return Trajectory(tg, std::move(states));
    }

private:
    // F(u) with the nonlinearity switched off when empty
    GridFunction forcing(const GridFunction& u) const {
        if (s_.nonlinearity.empty()) return GridFunction(dec_.grid());
        return eval_nonlinearity(s_.nonlinearity, u);
    }

    template <typename Body>
    void for_pieces_by_n(Body&& body, const CVec& raw) {
        ensure_by_n();
        parallel_for(dec_.freq().size(), [&](std::size_t j) { body(j, dec_.box_freq_from_spectrum(raw, j)); });
    }

    void ensure_by_n() {
        if (!by_n_.empty()) return;
        by_n_.assign(dec_.freq().size(), {});
        for (auto& p : pieces_) by_n_[p.n_pos].push_back(&p);
    }

    GridFunction assemble_pieces() const {
        GridFunction u(dec_.grid());
        for (const auto& p : pieces_) {
            const auto& w = dec_.phys_window(p.m_pos);
            for (std::size_t k = 0; k < w.index.size(); ++k) u[w.index[k]] += p.I[k];
        }
        return u;
    }

    // G_mn = sigma_m box_n [F - A u] + lambda sigma_m box_n u
    template <typename Store>
    void integrand(const GridFunction& u, const GridFunction& F, Store&& store) {
        const GridFunction rhs = F - apply_symbol(s_.symbol, u);
        const CVec raw_r = dec_.spectrum(rhs);
        const CVec raw_u = dec_.spectrum(u);
        ensure_by_n();
        parallel_for(dec_.freq().size(), [&](std::size_t j) {
            const GridFunction br = dec_.box_freq_from_spectrum(raw_r, j);
            const GridFunction bu = dec_.box_freq_from_spectrum(raw_u, j);
            for (auto* p : by_n_[j]) {
                const auto& w = dec_.phys_window(p->m_pos);
                for (std::size_t k = 0; k < w.index.size(); ++k) {
                    const std::size_t idx = w.index[k];
                    store(*p, k, w.value[k] * (br[idx] + p->lambda * bu[idx]));
                }
            }
        });
    }

    void set_integrand(const GridFunction& u, const GridFunction& F) {
        integrand(u, F, [](PieceState& p, std::size_t k, cplx v) { p.G[k] = v; });
    }

    // I <- e^{-h lambda} I + w0 G_old + w1 G_new, then G <- G_new
    void set_integrand_next(const GridFunction& u, const GridFunction& F) {
        integrand(u, F, [](PieceState& p, std::size_t k, cplx v) {
            p.I[k] = p.decay * p.I[k] + p.w0 * p.G[k] + p.w1 * v;
            p.G[k] = v;
        });
    }

    // K + sum_n [ W_n box_n (F - A u) + V_n box_n u ]
    GridFunction implicit_map(const GridFunction& K, const GridFunction& F, const GridFunction& u) const {
        const GridFunction rhs = F - apply_symbol(s_.symbol, u);
        const CVec raw_r = dec_.spectrum(rhs);
        const CVec raw_u = dec_.spectrum(u);
        const std::size_t nf = dec_.freq().size();
        std::vector<GridFunction> parts(nf, GridFunction(dec_.grid()));
        parallel_for(nf, [&](std::size_t j) {
            const GridFunction br = dec_.box_freq_from_spectrum(raw_r, j);
            const GridFunction bu = dec_.box_freq_from_spectrum(raw_u, j);
            for (std::size_t i = 0; i < br.size(); ++i) parts[j][i] = W_[j][i] * br[i] + V_[j][i] * bu[i];
        });
        GridFunction out = K;
        for (const auto& part : parts) out += part;
        return out;
    }

    GridFunction solve_step(const GridFunction& K, const GridFunction& F, const GridFunction& guess) const {
        GridFunction u = guess;
        double last = kInf;
        for (int it = 0; it < s_.options.inner_max; ++it) {
            GridFunction un = implicit_map(K, F, u);
            const double diff = lp_norm(un - u, 2);
            const double scale = std::max(lp_norm(un, 2), 1e-300);
            u = std::move(un);
            if (diff <= s_.options.inner_tol * scale || diff >= last) break;
            last = diff;
        }
        return u;
    }

    const SolveSetup& s_;
    const Decomposer& dec_;
    std::vector<PieceState> pieces_;
    std::vector<std::vector<PieceState*>> by_n_;
    std::vector<CVec> W_, V_;
};

inline Trajectory difference(const Trajectory& a, const Trajectory& b) {
    std::vector<GridFunction> d;
    d.reserve(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) d.push_back(a[j] - b[j]);
    return Trajectory(a.time(), std::move(d));
}

}  // namespace detail

/// Relative L^2 distance between u0 and its reconstruction from the retained pieces.
inline double tail_fraction(const GridFunction& u0, const Decomposer& dec) {
    const double n = lp_norm(u0, 2);
    if (n == 0.0) return 0.0;
    const DecompositionTable t = decompose_all(u0, dec);
    return t.tail_mass() / n;
}

/// Checks the solver preconditions and returns warnings.
inline std::vector<std::string> check_solver_preconditions(const GridFunction& u0, const SolveSetup& setup, const Decomposer& dec,
                                                           double* tail_out = nullptr) {
    std::vector<std::string> warnings;
    setup.time.validate();
    setup.norm.validate();
    setup.nonlinearity.validate(u0.grid().d);
    if (setup.options.check_hypotheses) {
        const SymbolReport rep = verify_hypotheses(setup.symbol, u0.grid().d);
        if (!rep.passed()) throw PreconditionError("symbol fails its hypothesis checks: " + setup.symbol.description());
    }
    if (setup.nonlinearity.kappa() > setup.symbol.sigma2()) {
        throw PreconditionError("derivative order of the nonlinearity exceeds the dissipation order");
    }
    const double tail = tail_fraction(u0, dec);
    if (tail_out != nullptr) *tail_out = tail;
    if (tail > setup.options.tail_error) throw PreconditionError("initial data has tail mass " + std::to_string(tail) + " above 1e-3");
    if (tail > setup.options.tail_warn) warnings.push_back("initial tail mass " + std::to_string(tail) + " above 1e-6");
    return warnings;
}

/// Waveform-relaxation Picard iteration for the localized Duhamel system,
/// starting from u^{(0)} = 0. Each sweep integrates every piece with the
/// exponential integrator; the nonlinearity is always lagged to the previous
/// iterate. In the semi-implicit scheme the linear remainder is solved
/// within each step, in the explicit one it is lagged as well.
inline SolveResult picard_solve(const GridFunction& u0, const SolveSetup& setup, const Decomposer& dec) {
    require(u0.grid() == dec.grid(), "initial data grid differs from the decomposer grid");
    SolveReport rep;
    rep.warnings = check_solver_preconditions(u0, setup, dec, &rep.tail_mass);
    rep.T = setup.time.T;
    rep.J = setup.time.J;
    rep.scheme = setup.options.semi_implicit ? "semi_implicit" : "explicit";

    NormParams np = setup.norm;
    np.s = np.s_gamma(setup.symbol.sigma2());
    np.T = setup.time.T;

    Trajectory prev = Trajectory::constant(setup.time, GridFunction(u0.grid()));
    double last_diff = kInf;
    int growth = 0;
    detail::PicardEngine engine(setup, dec);
    for (int it = 1; it <= setup.options.max_iter; ++it) {
        Trajectory next = engine.sweep(u0, prev);
        for (const auto& s : next.states())
            if (!s.all_finite()) throw DivergenceError("non-finite iterate", rep);
        const double diff = time_x_norm(detail::difference(next, prev), np, dec);
        const double size = time_x_norm(next, np, dec);
        const double rel = size > 0.0 ? diff / size : diff;
        rep.iterations = it;
        rep.diff_norms.push_back(rel);
        rep.final_diff_norm = rel;
        if (it >= 2) {
            const double factor = last_diff > 0.0 ? rel / last_diff : 0.0;
            rep.contraction_factors.push_back(factor);
            growth = factor >= 1.0 ? growth + 1 : 0;
            if (growth >= 3) throw DivergenceError("Picard iteration diverges (contraction factor >= 1 three times)", rep);
        }
        prev = std::move(next);
        last_diff = rel;
        if (rel < setup.options.tol) {
            rep.converged = true;
            break;
        }
    }
    return {std::move(prev), std::move(rep)};
}

/// Halves T from T0 until the first measured contraction factor is <= target.
struct AutoTResult {
    SolveResult result;
    std::vector<double> tried;
};

inline AutoTResult solve_auto_T(const GridFunction& u0, SolveSetup setup, const Decomposer& dec, double T0 = 0.25,
                                double target = 0.5, int max_halvings = 8) {
    AutoTResult out;
    double T = T0;
    for (int k = 0; k <= max_halvings; ++k, T *= 0.5) {
        setup.time = TimeGrid(T, setup.time.J);
        out.tried.push_back(T);
        try {
            SolveResult r = picard_solve(u0, setup, dec);
            const bool ok = r.report.converged &&
                            std::all_of(r.report.contraction_factors.begin(), r.report.contraction_factors.end(),
                                        [&](double f) { return f <= target; });
            if (ok || k == max_halvings) {
                out.result = std::move(r);
                return out;
            }
        } catch (const DivergenceError&) {
            if (k == max_halvings) throw;
        }
    }
    throw DivergenceError("no admissible T found", {});
}

/// Restarts the solver on [kT, (k+1)T] until the horizon is covered and
/// glues the segments into one trajectory.
struct ContinuationResult {
    Trajectory trajectory;
    std::vector<SolveReport> segments;
};

inline ContinuationResult solve_continued(const GridFunction& u0, const SolveSetup& setup, const Decomposer& dec, double horizon) {
    const double T = setup.time.T;
    const double count_d = horizon / T;
    const int count = static_cast<int>(std::lround(count_d));
    if (count < 1 || std::abs(count_d - count) > 1e-9) throw DomainError("horizon must be a whole multiple of the segment length");
    ContinuationResult out;
    std::vector<GridFunction> states;
    GridFunction start = u0;
    for (int k = 0; k < count; ++k) {
        SolveResult r = picard_solve(start, setup, dec);
        if (!r.report.converged) throw DivergenceError("continuation segment did not converge", r.report);
        const auto& st = r.trajectory.states();
        states.insert(states.end(), st.begin() + (k == 0 ? 0 : 1), st.end());
        start = r.trajectory.back();
        out.segments.push_back(std::move(r.report));
    }
    out.trajectory = Trajectory(TimeGrid(horizon, setup.time.J * count), std::move(states));
    return out;
}

// ------------------------------------------------------------------ reference integrator

/// Symmetric splitting per step: a/2, b/2, F (explicit midpoint), b/2, a/2.
/// Each linear sub-flow is exact; second order overall.
inline Trajectory splitting_oracle(const GridFunction& u0, const Symbol& sym, const NonlinearitySpec& spec, const TimeGrid& tg) {
    if (!sym.separable()) throw PreconditionError("splitting oracle needs a separable symbol");
    tg.validate();
    const auto& s = sym.as_separable();
    const TorusGrid& g = u0.grid();
    const double h = tg.dt();
    std::vector<cplx> half_a(u0.size(), 1.0);
    if (!s.a.is_zero()) {
        std::vector<double> x(static_cast<std::size_t>(g.d));
        for (std::size_t i = 0; i < u0.size(); ++i) {
            g.node(i, x.data());
            half_a[i] = std::exp(-0.5 * h * s.a(x));
        }
    }
    auto flow_a = [&](GridFunction& u) {
        for (std::size_t i = 0; i < u.size(); ++i) u[i] *= half_a[i];
    };
    auto flow_b = [&](GridFunction& u) {
        if (s.b.is_zero()) return;
        u = fourier_multiplier(u, [&](std::span<const double> xi) { return std::exp(-0.5 * h * s.b(xi)); });
    };
    std::vector<GridFunction> states{u0};
    GridFunction u = u0;
    for (int j = 0; j < tg.J; ++j) {
        flow_a(u);
        flow_b(u);
        if (!spec.empty()) {
            const GridFunction mid = u + (0.5 * h) * eval_nonlinearity(spec, u);
            u += h * eval_nonlinearity(spec, mid);
        }
        flow_b(u);
        flow_a(u);
        states.push_back(u);
    }
    return Trajectory(tg, std::move(states));
}

inline double relative_l2(const GridFunction& a, const GridFunction& ref) {
    const double n = lp_norm(ref, 2);
    return n > 0.0 ? lp_norm(a - ref, 2) / n : lp_norm(a, 2);
}

// ------------------------------------------------------------------ energy

struct EnergyRow {
    double t = 0.0;
    double half_l2_sq = 0.0;
    double cumulative_dissipation = 0.0;
    double bound = 0.0;
    bool pass = true;
};

struct EnergyReport {
    std::vector<EnergyRow> rows;
    bool pass = true;
    bool monotone_l2 = true;  // 1/2 ||u||^2 nonincreasing within the step tolerance
    double max_step_increase = 0.0;
};

/// E(t) = 1/2 ||u(t)||^2 + int_0^t ||u||_{H^{sigma2/2}}^2 (trapezoid) against 1/2 ||u0||^2 (1 + tol).
inline EnergyReport energy_ledger(const Trajectory& traj, const Symbol& sym, double tol_disc = 1e-2, double step_tol = 1e-10) {
    require(!traj.empty(), "energy ledger of an empty trajectory");
    EnergyReport rep;
    const double order = 0.5 * sym.sigma2();
    const double h = traj.time().dt();
    const double bound = 0.5 * std::pow(lp_norm(traj[0], 2), 2) * (1.0 + tol_disc);
    double cum = 0.0, prev_diss = 0.0, prev_half = 0.0;
    for (std::size_t j = 0; j < traj.size(); ++j) {
        const double half = 0.5 * std::pow(lp_norm(traj[j], 2), 2);
        const double diss = std::pow(sobolev_norm(traj[j], order, true), 2);
        if (j > 0) {
            cum += 0.5 * h * (prev_diss + diss);
            const double inc = half - prev_half;
            rep.max_step_increase = std::max(rep.max_step_increase, inc);
            if (inc > step_tol * std::max(1.0, prev_half)) rep.monotone_l2 = false;
        }
        EnergyRow row{traj.time().node(static_cast<int>(j)), half, cum, bound, half + cum <= bound};
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(row);
        prev_diss = diss;
        prev_half = half;
    }
    return rep;
}

// ------------------------------------------------------------------ residual

struct ResidualReport {
    double value = 0.0;               // max over interior nodes
    std::vector<double> per_node;     // j = 1 .. J-1
};

/// Central-difference residual du/dt + A u - F(u) at interior nodes, in the
/// x-norm with frequency weight s - sigma2 and physical weight -sigma1.
inline ResidualReport pde_residual(const Trajectory& traj, const Symbol& sym, const NonlinearitySpec& spec, const NormParams& np,
                                   const Decomposer& dec) {
    if (traj.size() < 5) throw DomainError("pde_residual needs J >= 4");
    NormParams w = np;
    w.s = np.s - sym.sigma2();
    const double h = traj.time().dt();
    ResidualReport rep;
    rep.per_node.assign(traj.size() - 2, 0.0);
    for (std::size_t j = 1; j + 1 < traj.size(); ++j) {
        GridFunction r = (1.0 / (2.0 * h)) * (traj[j + 1] - traj[j - 1]);
        r += apply_symbol(sym, traj[j]);
        if (!spec.empty()) r -= eval_nonlinearity(spec, traj[j]);
        rep.per_node[j - 1] = x_norm(r, w, dec, -sym.sigma1());
    }
    rep.value = *std::max_element(rep.per_node.begin(), rep.per_node.end());
    return rep;
}

// ------------------------------------------------------------------ parameters

enum class Regime { general, power, symbol_class };

inline std::string to_string(Regime r) {
    switch (r) {
        case Regime::general: return "general";
        case Regime::power: return "power";
        case Regime::symbol_class: return "symbol_class";
    }
    return "?";
}

inline Regime regime_from_string(const std::string& s) {
    if (s == "general") return Regime::general;
    if (s == "power") return Regime::power;
    if (s == "symbol_class") return Regime::symbol_class;
    throw ConfigError("unknown regime '" + s + "'");
}

struct ParameterInput {
    int d = 1;
    double p = 2.0;
    double q = 2.0;
    double kappa = 0.0;
    double sigma1 = 0.0;
    double sigma2 = 2.0;  // M in the symbol-class regime
    int K = 3;
    Regime regime = Regime::general;
    std::optional<double> gamma;  // defaults to the lower bound
    std::optional<int> factors;   // N in delta(N); defaults to K
};

struct ParameterRecipe {
    Regime regime = Regime::general;
    double gamma_K = 0.0;     // max(K, sigma2 (K-1)/(sigma2 - kappa))
    double gamma_qK = 0.0;    // max(K, (K-1)/(1 - d/(q sigma2))); inf when d >= q sigma2
    double gamma_lower = 0.0; // the bound that applies to the regime
    bool gamma_strict = false;  // the bound is strict (symbol class)
    double gamma = 0.0;       // value used below
    double s_threshold = 0.0; // kappa + d/q' - sigma2/gamma
    bool global = false;      // K < 1 + 2 sigma2 / d
    double delta = 0.0;       // min(1 - N/gamma, 1 + (1-N)/gamma - kappa/sigma2)
    int factors = 0;
};

inline ParameterRecipe admissible_parameters(const ParameterInput& in) {
    check_exponent(in.p, "p");
    check_exponent(in.q, "q");
    if (in.d < 1) throw DomainError("dimension must be positive");
    if (!(in.sigma2 > 0.0)) throw DomainError("dissipation order must be positive");
    if (in.kappa < 0.0) throw DomainError("kappa must be nonnegative");
    if (in.kappa > in.sigma2) throw DomainError("kappa exceeds the dissipation order");
    if (in.K < 2) throw DomainError("K must be at least 2");
    ParameterRecipe r;
    r.regime = in.regime;
    const double K = in.K, s2 = in.sigma2, d = in.d;
    r.gamma_K = in.kappa == s2 ? kInf : std::max(K, s2 * (K - 1.0) / (s2 - in.kappa));
    const double denom = 1.0 - d / (in.q * s2);
    r.gamma_qK = denom > 0.0 ? std::max(K, (K - 1.0) / denom) : kInf;
    switch (in.regime) {
        case Regime::general: r.gamma_lower = r.gamma_K; break;
        case Regime::power: r.gamma_lower = r.gamma_qK; break;
        case Regime::symbol_class:
            r.gamma_lower = r.gamma_K;
            r.gamma_strict = true;
            break;
    }
    r.gamma = in.gamma.value_or(r.gamma_lower);
    if (in.gamma) {
        const bool ok = r.gamma_strict ? r.gamma > r.gamma_lower : r.gamma >= r.gamma_lower;
        if (!ok) throw DomainError("gamma is below the admissible lower bound");
    }
    const double qp = conjugate_exponent(in.q);
    r.s_threshold = in.kappa + (std::isinf(qp) ? 0.0 : d / qp) - s2 / r.gamma;
    r.global = K < 1.0 + 2.0 * s2 / d;
    r.factors = in.factors.value_or(in.K);
    r.delta = std::min(1.0 - r.factors / r.gamma, 1.0 + (1.0 - r.factors) / r.gamma - in.kappa / s2);
    return r;
}

}  // namespace modspace

#endif  // MODSPACE_EVOLVE_HPP
