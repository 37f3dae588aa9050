#ifndef MODSPACE_VERIFY_HPP
#define MODSPACE_VERIFY_HPP

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modspace/decomp.hpp"
#include "modspace/evolve.hpp"
#include "modspace/families.hpp"
#include "modspace/norms.hpp"
#include "modspace/stats.hpp"
#include "modspace/symbols.hpp"

namespace modspace {

/// Measured constants of one inequality over a function family.
struct EstimateReport {
    std::string id;
    std::map<std::string, double> params;
    RatioStats ratios;
    std::optional<LinearFit> fit;
    std::map<std::string, LinearFit> axis_fits;           // per-axis slopes (triple decay)
    std::map<std::string, std::vector<double>> series;    // measured curves behind the fits
    double bound = 0.0;
    bool pass = false;
    std::string note;
};

namespace detail {

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline NormParams norm_params(double s, double p, double q, double r, double gamma = 2.0) {
    NormParams np;
    np.s = s;
    np.p = p;
    np.q = q;
    np.r = r;
    np.gamma = gamma;
    np.validate();
    return np;
}

/// Deterministic pair list (i, j), i <= j, cycling through the set.
inline std::vector<std::pair<std::size_t, std::size_t>> pair_list(std::size_t n, std::size_t count) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t k = 0; out.size() < count; ++k) {
        const std::size_t i = k % n;
        const std::size_t j = (k / n + i) % n;
        out.emplace_back(i, j);
        if (k > 4 * count + n * n) break;
    }
    return out;
}

}  // namespace detail

/// x_norm(uv) / (x_norm(u) x_norm(v)) over pairs of the test set.
inline EstimateReport check_algebra(const std::vector<GridFunction>& set, double s, double p, double q, double r,
                                    const Decomposer& dec, std::size_t pairs = 50, double bound = 1e3) {
    require(!set.empty(), "check_algebra needs a nonempty test set");
    const int d = dec.grid().d;
    const double qp = conjugate_exponent(q);
    if (q == 1.0 ? s < 0.0 : !(s > d / qp)) throw DomainError("algebra estimate needs s >= 0 (q = 1) or s > d/q' (q > 1)");
    const NormParams np = detail::norm_params(s, p, q, r);
    std::vector<double> norms(set.size());
    parallel_for(set.size(), [&](std::size_t i) { norms[i] = x_norm(set[i], np, dec); });
    const auto pl = detail::pair_list(set.size(), pairs);
    std::vector<double> ratios(pl.size());
    parallel_for(pl.size(), [&](std::size_t k) {
        const auto [i, j] = pl[k];
        ratios[k] = x_norm(pointwise_multiply(set[i], set[j]), np, dec) / (norms[i] * norms[j]);
    });
    EstimateReport rep;
    rep.id = "algebra";
    rep.params = {{"s", s}, {"p", p}, {"q", q}, {"r", r}, {"pairs", static_cast<double>(pl.size())}};
    rep.ratios = ratio_stats(ratios);
    rep.bound = bound;
    rep.pass = detail::all_finite(ratios) && rep.ratios.max < bound;
    return rep;
}

/// Product of N constant-in-time factors against the symmetrized right side
/// sum_i ||f_i||_{L^{g_i}(X^s)} prod_{j != i} ||f_j||_{L^{g_j}(X^0)}, with
/// 1/gamma = sum 1/gamma_i.
inline EstimateReport check_multilinear(const std::vector<GridFunction>& set, const std::vector<double>& gammas, double gamma,
                                        double s, double p, double q, double r, const Decomposer& dec, double T = 1.0,
                                        std::size_t tuples = 20, double bound = 1e3) {
    require(gammas.size() >= 2, "multilinear check needs at least two factors");
    double inv = 0.0;
    for (double gi : gammas) {
        check_exponent(gi, "gamma_i");
        inv += 1.0 / gi;
    }
    if (std::abs(inv - 1.0 / gamma) > 1e-12) throw DomainError("time exponents are not Hoelder compatible");
    require(!set.empty(), "check_multilinear needs a nonempty test set");
    const std::size_t N = gammas.size();
    const NormParams hs = detail::norm_params(s, p, q, r);
    const NormParams h0 = detail::norm_params(0.0, p, q, r);
    // time factorization for constant trajectories: ||f||_{L^g(0,T;X)} = T^{1/g} ||f||_X
    auto tpow = [T](double g) { return std::isinf(g) ? 1.0 : std::pow(T, 1.0 / g); };
    std::vector<double> ns(set.size()), n0(set.size());
    parallel_for(set.size(), [&](std::size_t i) {
        ns[i] = x_norm(set[i], hs, dec);
        n0[i] = x_norm(set[i], h0, dec);
    });
    std::vector<double> ratios(tuples);
    parallel_for(tuples, [&](std::size_t k) {
        GridFunction prod = set[k % set.size()];
        std::vector<std::size_t> idx{k % set.size()};
        for (std::size_t f = 1; f < N; ++f) {
            const std::size_t i = (k * (f + 1) + f) % set.size();
            idx.push_back(i);
            prod = pointwise_multiply(prod, set[i]);
        }
        const double lhs = tpow(gamma) * x_norm(prod, hs, dec);
        double rhs = 0.0;
        for (std::size_t a = 0; a < N; ++a) {
            double term = tpow(gammas[a]) * ns[idx[a]];
            for (std::size_t b = 0; b < N; ++b)
                if (b != a) term *= tpow(gammas[b]) * n0[idx[b]];
            rhs += term;
        }
        ratios[k] = rhs > 0.0 ? lhs / rhs : 0.0;
    });
    EstimateReport rep;
    rep.id = "multilinear";
    rep.params = {{"factors", static_cast<double>(N)}, {"gamma", gamma}, {"s", s}, {"p", p}, {"q", q}, {"r", r}, {"T", T}};
    rep.ratios = ratio_stats(ratios);
    rep.bound = bound;
    rep.pass = detail::all_finite(ratios) && rep.ratios.max < bound;
    return rep;
}

/// x_norm(d^alpha u, s) / x_norm(u, s + |alpha|).
inline EstimateReport check_derivative_estimate(const std::vector<GridFunction>& set, const MultiIndex& alpha, double s, double p,
                                                double q, double r, const Decomposer& dec, double bound = 1e2) {
    require(!set.empty(), "check_derivative_estimate needs a nonempty test set");
    const NormParams lhs = detail::norm_params(s, p, q, r);
    const NormParams rhs = detail::norm_params(s + order(alpha), p, q, r);
    std::vector<double> ratios(set.size());
    parallel_for(set.size(), [&](std::size_t i) {
        ratios[i] = x_norm(spectral_derivative(set[i], alpha), lhs, dec) / x_norm(set[i], rhs, dec);
    });
    EstimateReport rep;
    rep.id = "derivative";
    rep.params = {{"order", static_cast<double>(order(alpha))}, {"s", s}, {"p", p}, {"q", q}, {"r", r}};
    rep.ratios = ratio_stats(ratios);
    rep.bound = bound;
    rep.pass = detail::all_finite(ratios) && rep.ratios.max < bound;
    return rep;
}

struct SmoothingOptions {
    double T = 1.0;
    int J_gain = 1024;       // time nodes for the per-piece gains
    int J_aggregate = 32;    // time nodes for the aggregate norm
    std::vector<int> n_values = {1, 2, 3, 4, 5, 6, 7, 8};
    double slack = 0.2;
    double bound = 1e3;
    double s0 = 0.0;         // regularity of the data norm
    double p = 2.0;
    double q = 1.0;
};

/// Free evolution e^{-t A(m,n)} box_{m,n} u0 assembled over the retained pieces.
inline Trajectory free_evolution(const GridFunction& u0, const Symbol& sym, const Decomposer& dec, const TimeGrid& tg) {
    const DecompositionTable table = decompose_all(u0, dec);
    std::vector<GridFunction> states(tg.node_count(), GridFunction(u0.grid()));
    for (const auto& [key, piece] : table.pieces()) {
        const cplx lambda = symbol_at_lattice(sym, dec.phys().at(key.m_pos), dec.freq().at(key.n_pos));
        for (std::size_t j = 0; j < states.size(); ++j) states[j] += std::exp(-tg.node(static_cast<int>(j)) * lambda) * piece;
    }
    return Trajectory(tg, std::move(states));
}

/// Per-n time-smoothing gain ||e^{-tA(m,n)} box_{m,n} u0||_{L^gamma_t L^r} / ||box_{m,n} u0||_r
/// (largest over the family and over m), its log-log slope against <n>, and the aggregate
/// ratio time_x_norm(free evolution, s0 + sigma2/gamma) / modulation_norm(u0, s0).
inline EstimateReport check_linear_smoothing(const Symbol& sym, const std::vector<GridFunction>& set, double gamma, double r,
                                             const Decomposer& dec, const SmoothingOptions& opt = {}) {
    require(!set.empty(), "check_linear_smoothing needs a nonempty test set");
    check_exponent(gamma, "gamma");
    const SymbolReport hyp = verify_hypotheses(sym, dec.grid().d);
    if (!hyp.passed()) throw PreconditionError("symbol fails its hypothesis checks");
    const int d = dec.grid().d;
    const TimeGrid fine(opt.T, opt.J_gain);
    const std::vector<double> w = fine.trapezoid_weights();

    std::vector<double> gains, brackets;
    for (int nv : opt.n_values) {
        LatticeIndex n = LatticeIndex::zero(d);
        n.coords[0] = nv;
        const std::size_t n_pos = dec.freq().position(n);
        double best = 0.0;
        for (const auto& f : set) {
            const GridFunction bn = dec.box_freq(f, n);
            for (std::size_t m_pos = 0; m_pos < dec.phys().size(); ++m_pos) {
                const double base = dec.localized_norm(bn, m_pos, r);
                if (!(base > 0.0)) continue;
                const cplx lambda = symbol_at_lattice(sym, dec.phys().at(m_pos), dec.freq().at(n_pos));
                double acc = 0.0;
                for (std::size_t j = 0; j < w.size(); ++j) {
                    // ||e^{-t lambda} piece||_r / ||piece||_r = |e^{-t lambda}|
                    const double v = std::abs(std::exp(-fine.node(static_cast<int>(j)) * lambda));
                    acc = std::isinf(gamma) ? std::max(acc, v) : acc + w[j] * std::pow(v, gamma);
                }
                best = std::max(best, std::isinf(gamma) ? acc : std::pow(acc, 1.0 / gamma));
            }
        }
        gains.push_back(best);
        brackets.push_back(bracket_weight(n));
    }

    std::vector<double> agg(set.size());
    NormParams np = detail::norm_params(opt.s0, opt.p, opt.q, r, gamma);
    np.s = np.s_gamma(sym.sigma2());
    const TimeGrid coarse(opt.T, opt.J_aggregate);
    parallel_for(set.size(), [&](std::size_t i) {
        const Trajectory tr = free_evolution(set[i], sym, dec, coarse);
        agg[i] = time_x_norm(tr, np, dec) / modulation_norm(set[i], opt.s0, opt.p, opt.q, dec);
    });

    EstimateReport rep;
    rep.id = "linear_smoothing";
    rep.params = {{"gamma", gamma}, {"r", r}, {"T", opt.T}, {"sigma2", sym.sigma2()}, {"s0", opt.s0}, {"p", opt.p}, {"q", opt.q}};
    rep.series["gain"] = gains;
    rep.series["bracket_n"] = brackets;
    rep.fit = loglog_fit(brackets, gains);
    rep.ratios = ratio_stats(agg);
    rep.bound = -sym.sigma2() / gamma + opt.slack;
    rep.pass = rep.fit->slope <= rep.bound && detail::all_finite(agg) && rep.ratios.max < opt.bound;
    rep.note = "pass iff slope <= -sigma2/gamma + slack and the aggregate ratio stays below " + std::to_string(opt.bound);
    return rep;
}

struct RemainderOptions {
    double gamma = 4.0;
    double s = 0.0;
    double p = 2.0;
    double q = 1.0;
    double r = 2.0;
    int J = 256;
    double threshold = 0.05;
};

/// Measured norm of u -> A_{m,n}(box_{m,n}(A - A(m,n)) u) on constant-in-time data,
/// with the exact kernel t phi1(-t lambda), for each horizon; slope of log ratio
/// against log T.
inline EstimateReport check_remainder_T_scaling(const Symbol& sym, const std::vector<GridFunction>& set,
                                                const std::vector<double>& T_list, const Decomposer& dec,
                                                const RemainderOptions& opt = {}) {
    require(T_list.size() >= 3, "remainder scaling needs at least three horizons");
    require(!set.empty(), "remainder scaling needs a nonempty test set");
    check_exponent(opt.gamma, "gamma");
    NormParams np = detail::norm_params(opt.s, opt.p, opt.q, opt.r, opt.gamma);
    const double s_g = np.s_gamma(sym.sigma2());
    const std::size_t np_m = dec.phys().size(), np_n = dec.freq().size();

    // remainder piece norms per member (independent of T)
    std::vector<SequenceArray> rem;
    std::vector<double> xnorm(set.size());
    NormParams xs = np;
    xs.s = s_g;
    for (std::size_t i = 0; i < set.size(); ++i) {
        SequenceArray a(dec.phys(), dec.freq());
        const GridFunction& u = set[i];
        parallel_for(np_n, [&](std::size_t j) {
            for (std::size_t m = 0; m < np_m; ++m) {
                a.at(m, j) = lp_norm(remainder_apply(sym, u, dec.phys().at(m), dec.freq().at(j), dec), opt.r);
            }
        });
        rem.push_back(std::move(a));
        xnorm[i] = x_norm(u, xs, dec);
    }

    std::vector<double> worst;
    bool vanishing = true;
    for (double T : T_list) {
        const TimeGrid tg(T, opt.J);
        const std::vector<double> w = tg.trapezoid_weights();
        std::vector<double> ratio(set.size());
        for (std::size_t i = 0; i < set.size(); ++i) {
            SequenceArray out(dec.phys(), dec.freq());
            for (std::size_t j = 0; j < np_n; ++j)
                for (std::size_t m = 0; m < np_m; ++m) {
                    const double base = rem[i].at(m, j);
                    if (base == 0.0) continue;
                    const cplx lambda = symbol_at_lattice(sym, dec.phys().at(m), dec.freq().at(j));
                    double acc = 0.0;
                    for (std::size_t k = 0; k < w.size(); ++k) {
                        const double t = tg.node(static_cast<int>(k));
                        acc += w[k] * std::pow(std::abs(t * phi1(-t * lambda)) * base, opt.gamma);
                    }
                    out.at(m, j) = std::pow(acc, 1.0 / opt.gamma);
                }
            const double lhs = seq_norm(out, s_g, opt.p, opt.q);
            const double rhs = std::pow(T, 1.0 / opt.gamma) * xnorm[i];
            ratio[i] = rhs > 0.0 ? lhs / rhs : 0.0;
        }
        const double mx = *std::max_element(ratio.begin(), ratio.end());
        if (mx > 0.0) vanishing = false;
        worst.push_back(mx);
    }

    EstimateReport rep;
    rep.id = "remainder_T_scaling";
    rep.params = {{"gamma", opt.gamma}, {"s", opt.s}, {"p", opt.p}, {"q", opt.q}, {"r", opt.r}};
    rep.series["T"] = T_list;
    rep.series["operator_norm"] = worst;
    rep.ratios = ratio_stats(worst);
    rep.bound = opt.threshold;
    if (vanishing) {
        rep.fit = LinearFit{};
        rep.pass = true;
        rep.note = "remainder vanishes identically";
        return rep;
    }
    rep.fit = loglog_fit(T_list, worst);
    rep.pass = rep.fit->slope > opt.threshold;
    rep.note = sym.separable() ? "separable model" : "symbol class: composite rate T + T^{eps/M} + T^{1/gamma'}";
    return rep;
}

struct TripleDecayOptions {
    std::vector<int> shells = {8, 16, 32, 64};  // dyadic shell edges; every integer offset is probed
    double q = 2.0;
    double required_slope = -2.0;  // -(d + 1)
    double slack = 0.2;
    int L_phys = 128;              // torus for the physical offsets
    int L_freq = 32;               // torus for the frequency offset
    int N = 1024;
};

namespace detail {

/// Op(sigma_l(xi) phi(x, xi)) a, summing only over the grid frequencies inside the window.
inline GridFunction windowed_symbol_apply(const WindowFamily& fam, int l,
                                          const std::function<cplx(std::span<const double>, std::span<const double>)>& phi,
                                          const GridFunction& a) {
    const TorusGrid& g = a.grid();
    const GridFunction ahat = fourier_transform(a, TransformDirection::forward);
    std::vector<std::pair<std::size_t, double>> cols;
    for (int k = 0; k < g.N; ++k) {
        const double xi[1] = {g.dxi() * (k - g.N / 2)};
        const double w = fam.eval(LatticeIndex{l}, xi);
        if (w != 0.0) cols.emplace_back(static_cast<std::size_t>(k), w);
    }
    GridFunction out(g);
    parallel_for(static_cast<std::size_t>(g.N), [&](std::size_t j) {
        const double x[1] = {g.coord(static_cast<int>(j))};
        cplx acc{};
        for (const auto& [k, w] : cols) {
            const double xi[1] = {g.dxi() * (static_cast<int>(k) - g.N / 2)};
            acc += std::exp(cplx{0.0, x[0] * xi[0]}) * w * phi(x, xi) * ahat[k];
        }
        out[j] = acc * g.dxi();
    });
    return out;
}

}  // namespace detail

/// ||box_{m,n}( sigma_h(x) Op(sigma_l(xi) phi(x, xi)) sigma_k f )||_q for f = 1, with one
/// offset varied at a time (m - h, n - l, h - k) and the others held at zero. The kernels of
/// unit-width windows oscillate, so each axis is summarized by its largest value on dyadic
/// shells of offsets; the slope of the shell maxima against the shell edge is the decay rate.
inline EstimateReport check_triple_decay(const Symbol& phi_sym, const WindowFamily& fam, const TripleDecayOptions& opt = {}) {
    if (fam.dim() != 1) throw PreconditionError("triple decay check supports d = 1 only");
    require(opt.shells.size() >= 4, "triple decay needs at least three shells");
    const int top = opt.shells.back() - 1;
    if (top > opt.L_phys / 2 - 1) throw DomainError("physical torus too small for the largest shell");
    const auto phi = phi_sym.function();
    const TorusGrid gp(1, opt.L_phys, opt.N), gf(1, opt.L_freq, opt.N);
    gp.validate();
    gf.validate();
    if (top + 0.75 >= gf.nyquist()) throw DomainError("frequency torus does not resolve the largest shell");
    const GridFunction one_p = GridFunction::constant(gp, 1.0), one_f = GridFunction::constant(gf, 1.0);

    auto term = [&](const GridFunction& f, int m, int n, int h, int l, int k) {
        const TorusGrid& g = f.grid();
        const GridFunction a = pointwise_multiply(physical_window(g, fam, LatticeIndex{k}), f);
        const GridFunction b = detail::windowed_symbol_apply(fam, l, phi, a);
        const GridFunction c = pointwise_multiply(physical_window(g, fam, LatticeIndex{h}), b);
        return lp_norm(box_phys_freq(c, LatticeIndex{m}, LatticeIndex{n}, fam), opt.q);
    };
    // m - h and n - l only change the outer box, so the inner part is shared
    const GridFunction inner_p = [&] {
        const GridFunction b = detail::windowed_symbol_apply(fam, 0, phi, pointwise_multiply(physical_window(gp, fam, LatticeIndex{0}), one_p));
        return pointwise_multiply(physical_window(gp, fam, LatticeIndex{0}), b);
    }();
    const GridFunction inner_f = [&] {
        const GridFunction b = detail::windowed_symbol_apply(fam, 0, phi, pointwise_multiply(physical_window(gf, fam, LatticeIndex{0}), one_f));
        return pointwise_multiply(physical_window(gf, fam, LatticeIndex{0}), b);
    }();

    EstimateReport rep;
    rep.id = "triple_decay";
    rep.params = {{"q", opt.q}, {"required_slope", opt.required_slope}, {"slack", opt.slack},
                  {"L_phys", static_cast<double>(opt.L_phys)}, {"L_freq", static_cast<double>(opt.L_freq)},
                  {"N", static_cast<double>(opt.N)}};
    const double base_p = term(one_p, 0, 0, 0, 0, 0);
    const double base_f = term(one_f, 0, 0, 0, 0, 0);
    rep.params["baseline"] = base_p;
    rep.pass = std::isfinite(base_p) && base_p > 0.0 && std::isfinite(base_f) && base_f > 0.0;

    std::vector<double> edges;
    for (std::size_t i = 0; i + 1 < opt.shells.size(); ++i) edges.push_back(static_cast<double>(opt.shells[i]));
    rep.series["shell_start"] = edges;
    const std::vector<std::pair<std::string, std::function<double(int)>>> axes = {
        {"m-h", [&](int o) { return lp_norm(box_phys_freq(inner_p, LatticeIndex{o}, LatticeIndex{0}, fam), opt.q) / base_p; }},
        {"n-l", [&](int o) { return lp_norm(box_phys_freq(inner_f, LatticeIndex{0}, LatticeIndex{o}, fam), opt.q) / base_f; }},
        {"h-k", [&](int o) { return term(one_p, 0, 0, 0, 0, o) / base_p; }},
    };
    std::vector<double> all;
    for (const auto& [name, fn] : axes) {
        std::vector<double> shell_max;
        for (std::size_t i = 0; i + 1 < opt.shells.size(); ++i) {
            double mx = 0.0;
            for (int o = opt.shells[i]; o < opt.shells[i + 1]; ++o) mx = std::max(mx, fn(o));
            shell_max.push_back(mx);
        }
        rep.series[name] = shell_max;
        all.insert(all.end(), shell_max.begin(), shell_max.end());
        if (std::any_of(shell_max.begin(), shell_max.end(), [](double v) { return !(v > 0.0); })) {
            rep.pass = false;
            continue;
        }
        const LinearFit fit = loglog_fit(edges, shell_max);
        rep.axis_fits[name] = fit;
        if (!(fit.slope <= opt.required_slope + opt.slack)) rep.pass = false;
    }
    rep.ratios = ratio_stats(all);
    rep.bound = opt.required_slope + opt.slack;
    rep.note = "shell maxima relative to the all-zero offset term, f = 1";
    return rep;
}

}  // namespace modspace

#endif  // MODSPACE_VERIFY_HPP
