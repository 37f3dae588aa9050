#ifndef MODSPACE_NORMS_HPP
#define MODSPACE_NORMS_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "modspace/decomp.hpp"
#include "modspace/lattice.hpp"
#include "modspace/parallel.hpp"
#include "modspace/stats.hpp"
#include "modspace/trajectory.hpp"

namespace modspace {

/// Regularity and exponents shared by the norm families.
struct NormParams {
    double s = 0.0;
    double p = 2.0;
    double q = 2.0;
    double r = 2.0;
    double gamma = 2.0;
    double T = 1.0;

    void validate() const {
        check_exponent(p, "p");
        check_exponent(q, "q");
        check_exponent(r, "r");
        check_exponent(gamma, "gamma");
        if (!std::isfinite(s)) throw DomainError("regularity s must be finite");
    }

    /// s_gamma = s + sigma2 / gamma (the time-smoothing shift).
    double s_gamma(double sigma2) const { return std::isinf(gamma) ? s : s + sigma2 / gamma; }
};

/// ( sum_n <n>^{sq} ||box_n f||_p^q )^{1/q}.
inline double modulation_norm(const GridFunction& f, double s, double p, double q, const Decomposer& dec) {
    check_exponent(q, "q");
    const std::vector<double> b = dec.box_norms(f, p);
    std::vector<double> w(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) w[j] = std::pow(bracket_weight(dec.freq().at(j)), s) * b[j];
    return detail::lp_sum(w.data(), w.size(), 1, q);
}

inline double modulation_norm(const GridFunction& f, double s, double p, double q, const WindowFamily& fam,
                              const TruncatedLattice& freq) {
    return modulation_norm(f, s, p, q, Decomposer(f.grid(), fam, freq, TruncatedLattice(f.grid().d, 0, LatticeRole::physical)));
}

/// l^q_s over n of l^p over m of ||box_{m,n} f||_r, optionally with <m>^{s_phys}.
inline double x_norm(const GridFunction& f, const NormParams& np, const Decomposer& dec, double s_phys = 0.0) {
    np.validate();
    return seq_norm(dec.piece_norms(f, np.r), np.s, np.p, np.q, s_phys);
}

inline double x_norm(const GridFunction& f, const NormParams& np, const WindowFamily& fam, const TruncatedLattice& freq,
                     const TruncatedLattice& phys) {
    return x_norm(f, np, Decomposer(f.grid(), fam, freq, phys));
}

/// Per-piece L^gamma(0,T; L^r) magnitudes by trapezoid quadrature (max for gamma = inf).
inline SequenceArray time_piece_norms(const Trajectory& traj, double r, double gamma, const Decomposer& dec) {
    if (traj.empty()) throw DomainError("time norm of an empty trajectory");
    check_exponent(gamma, "gamma");
    std::vector<SequenceArray> per_node;
    per_node.reserve(traj.size());
    for (const auto& u : traj.states()) per_node.push_back(dec.piece_norms(u, r));
    const std::vector<double> w = traj.time().trapezoid_weights();
    SequenceArray out(dec.phys(), dec.freq());
    const std::size_t count = dec.phys().size() * dec.freq().size();
    for (std::size_t c = 0; c < count; ++c) {
        const std::size_t i = c % dec.phys().size();
        const std::size_t j = c / dec.phys().size();
        double acc = 0.0;
        for (std::size_t t = 0; t < per_node.size(); ++t) {
            const double v = per_node[t].at(i, j);
            acc = std::isinf(gamma) ? std::max(acc, v) : acc + w[t] * std::pow(v, gamma);
        }
        out.at(i, j) = std::isinf(gamma) ? acc : std::pow(acc, 1.0 / gamma);
    }
    return out;
}

/// l^q_s over n of l^p over m of ||box_{m,n} u||_{L^gamma(0,T; L^r)}.
inline double time_x_norm(const Trajectory& traj, const NormParams& np, const Decomposer& dec, double s_phys = 0.0) {
    np.validate();
    return seq_norm(time_piece_norms(traj, np.r, np.gamma, dec), np.s, np.p, np.q, s_phys);
}

/// ( int_0^T x_norm(u(t))^gamma dt )^{1/gamma}, the plain L^gamma(0,T; X) norm.
inline double lgamma_x_norm(const Trajectory& traj, const NormParams& np, const Decomposer& dec) {
    np.validate();
    const std::vector<double> w = traj.time().trapezoid_weights();
    double acc = 0.0;
    for (std::size_t t = 0; t < traj.size(); ++t) {
        const double v = x_norm(traj[t], np, dec);
        acc = std::isinf(np.gamma) ? std::max(acc, v) : acc + w[t] * std::pow(v, np.gamma);
    }
    return std::isinf(np.gamma) ? acc : std::pow(acc, 1.0 / np.gamma);
}

/// Ratio statistics of x_norm_{r1} / x_norm_{r2} over a test set.
struct EquivalencePair {
    double r1 = 2.0;
    double r2 = 2.0;
    RatioStats ratios;
    double spread = 1.0;  // max / min
};

struct EquivalenceReport {
    std::vector<EquivalencePair> pairs;
    double bound = 1e3;
    double max_spread = 1.0;
    double max_ratio = 0.0;
    bool pass = false;
};

inline EquivalenceReport norm_equivalence_report(const std::vector<GridFunction>& test_set, const std::vector<double>& r_list,
                                                 double s, double p, double q, const Decomposer& dec, double bound = 1e3) {
    require(!test_set.empty(), "norm equivalence needs a nonempty test set");
    require(!r_list.empty(), "norm equivalence needs at least one exponent r");
    // norms[k][f]
    std::vector<std::vector<double>> norms(r_list.size(), std::vector<double>(test_set.size()));
    parallel_for(test_set.size(), [&](std::size_t f) {
        for (std::size_t k = 0; k < r_list.size(); ++k) {
            NormParams np;
            np.s = s;
            np.p = p;
            np.q = q;
            np.r = r_list[k];
            norms[k][f] = x_norm(test_set[f], np, dec);
        }
    });
    EquivalenceReport rep;
    rep.bound = bound;
    rep.pass = true;
    for (std::size_t a = 0; a < r_list.size(); ++a) {
        for (std::size_t b = 0; b < r_list.size(); ++b) {
            EquivalencePair pair;
            pair.r1 = r_list[a];
            pair.r2 = r_list[b];
            std::vector<double> ratios;
            for (std::size_t f = 0; f < test_set.size(); ++f) {
                const double num = norms[a][f], den = norms[b][f];
                ratios.push_back(a == b ? 1.0 : num / den);
            }
            pair.ratios = ratio_stats(ratios);
            const bool finite = std::isfinite(pair.ratios.max) && pair.ratios.min > 0.0;
            pair.spread = finite ? pair.ratios.max / pair.ratios.min : kInf;
            if (!finite || !(pair.spread < bound)) rep.pass = false;
            rep.max_spread = std::max(rep.max_spread, pair.spread);
            rep.max_ratio = std::max(rep.max_ratio, pair.ratios.max);
            rep.pairs.push_back(pair);
        }
    }
    return rep;
}

}  // namespace modspace

#endif  // MODSPACE_NORMS_HPP
