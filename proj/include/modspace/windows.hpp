#ifndef MODSPACE_WINDOWS_HPP
#define MODSPACE_WINDOWS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "modspace/error.hpp"
#include "modspace/lattice.hpp"
#include "modspace/rng.hpp"

namespace modspace {

/// Smoothness of the bump transition. `infinite` uses the flat exp(-1/t)
/// step; a finite order k uses the C^k polynomial smoothstep.
struct Smoothness {
    static constexpr int infinite = 0;
    int order = infinite;

    bool is_infinite() const { return order == infinite; }
};

/// Partition-of-unity window family sigma_n(xi) = prod_j sigma(xi_j - n_j),
/// supported in n + [-3/4, 3/4]^d, identically one on the plateau |xi|_inf <= rho.
///
/// The mother window is sigma = g / sum_k g(. - k) where g is a symmetric bump
/// equal to one on [-a, a] and vanishing outside (-b, b), b = min(3/4, 1 - rho),
/// a = rho + (b - rho)/10.
class WindowFamily {
public:
    static constexpr double support_halfwidth = 0.75;

    WindowFamily() : WindowFamily(1, 0.25, Smoothness{}) {}

    WindowFamily(int d, double plateau, Smoothness smoothness) : d_(d), plateau_(plateau), smoothness_(smoothness) {
        require(d >= 1, "window dimension must be >= 1");
        require(plateau > 0.0 && plateau < 0.5, "window plateau must lie in (0, 1/2)");
        require(smoothness.order >= 0, "window smoothness order must be positive or infinite");
        outer_ = std::min(support_halfwidth, 1.0 - plateau);
        inner_ = plateau + 0.1 * (outer_ - plateau);
    }

    int dim() const { return d_; }
    double plateau() const { return plateau_; }
    Smoothness smoothness() const { return smoothness_; }
    double bump_inner() const { return inner_; }
    double bump_outer() const { return outer_; }

    /// The bump g.
    double bump(double xi) const {
        const double t = std::abs(xi);
        if (t <= inner_) return 1.0;
        if (t >= outer_) return 0.0;
        return step((outer_ - t) / (outer_ - inner_));
    }

    /// sum_k g(xi - k); 1-periodic and bounded below on the real line.
    double denominator(double xi) const {
        const double r = xi - std::floor(xi);
        return bump(r) + bump(r - 1.0);
    }

    /// Mother window sigma on R.
    double sigma(double xi) const {
        if (std::abs(xi) >= outer_) return 0.0;
        const double g = bump(xi);
        if (g == 0.0) return 0.0;
        return g / denominator(xi);
    }

    /// sigma_n(point) = prod_j sigma(point_j - n_j).
    double eval(const LatticeIndex& n, std::span<const double> point) const {
        require(static_cast<int>(point.size()) == d_ && n.dim() == d_, "window evaluation dimension mismatch");
        double v = 1.0;
        for (int j = 0; j < d_; ++j) {
            v *= sigma(point[static_cast<std::size_t>(j)] - n[static_cast<std::size_t>(j)]);
            if (v == 0.0) break;
        }
        return v;
    }

    /// Infimum of the normalizing denominator over one period, sampled.
    double denominator_infimum(int samples = 4096) const {
        double m = kInf;
        for (int i = 0; i <= samples; ++i) m = std::min(m, denominator(static_cast<double>(i) / samples));
        return m;
    }

private:
    double step(double t) const {
        if (smoothness_.is_infinite()) {
            const double a = flat(t);
            const double b = flat(1.0 - t);
            return a / (a + b);
        }
        // regularized incomplete beta I_t(k+1, k+1): C^k at both ends
        const int k = smoothness_.order;
        const int n = 2 * k + 1;
        double s = 0.0;
        double binom = 1.0;
        for (int j = 0; j <= n; ++j) {
            if (j > 0) binom = binom * (n - j + 1) / j;
            if (j >= k + 1) s += binom * std::pow(t, j) * std::pow(1.0 - t, n - j);
        }
        return s;
    }

    static double flat(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

    int d_;
    double plateau_;
    Smoothness smoothness_;
    double inner_ = 0.0;
    double outer_ = 0.0;
};

/// Builds the default (UD) family; fails when the normalizing denominator
/// gets too small for sigma to be well conditioned.
inline WindowFamily build_ud_family(int d, double plateau = 0.25, Smoothness smoothness = {}) {
    WindowFamily fam(d, plateau, smoothness);
    if (fam.denominator_infimum() < 1e-6) {
        throw DomainError("window too thin: partition denominator infimum below 1e-6");
    }
    return fam;
}

inline double eval_window(const WindowFamily& fam, const LatticeIndex& n, std::span<const double> point) {
    return fam.eval(n, point);
}

struct WindowValidationReport {
    int probe_count = 0;
    double partition_defect = 0.0;
    int support_violations = 0;
    int plateau_violations = 0;
    int max_overlap = 0;
    std::vector<double> derivative_sup;  // index a-1 holds sup |sigma^{(a)}|
    double fitted_constant = 0.0;        // smallest C with sup|sigma^{(a)}| <= C^a
    double denominator_infimum = 0.0;
    std::string note;

    bool passed() const { return partition_defect < 1e-12 && support_violations == 0 && plateau_violations == 0; }
};

/// Probes the window axioms: partition defect at random points, support and
/// plateau violations, and central finite-difference derivative bounds
/// (step 1e-4) up to max_order.
inline WindowValidationReport verify_ud(const WindowFamily& fam, int probe_count = 10000, int max_order = 3,
                                        std::uint64_t seed = 1) {
    require(probe_count >= 100, "verify_ud needs at least 100 probes");
    require(max_order >= 0 && max_order <= 3, "derivative checks support orders up to 3");
    WindowValidationReport rep;
    rep.probe_count = probe_count;
    rep.denominator_infimum = fam.denominator_infimum();
    CounterRng rng(seed, "verify_ud");
    for (int i = 0; i < probe_count; ++i) {
        const double xi = rng.uniform(-0.5, 0.5);
        double sum = 0.0;
        int overlap = 0;
        for (int k = -2; k <= 2; ++k) {
            const double v = fam.sigma(xi - k);
            if (v != 0.0) ++overlap;
            sum += v;
        }
        rep.partition_defect = std::max(rep.partition_defect, std::abs(sum - 1.0));
        rep.max_overlap = std::max(rep.max_overlap, overlap);

        const double far = WindowFamily::support_halfwidth + rng.uniform(0.0, 2.0);
        if (fam.sigma(far) != 0.0 || fam.sigma(-far) != 0.0) ++rep.support_violations;
        const double v = fam.sigma(xi);
        if (v < 0.0 || v > 1.0) ++rep.support_violations;

        const double inside = rng.uniform(-fam.plateau(), fam.plateau());
        if (fam.sigma(inside) != 1.0) ++rep.plateau_violations;
    }
    if (fam.sigma(fam.plateau()) != 1.0 || fam.sigma(-fam.plateau()) != 1.0) ++rep.plateau_violations;

    const double h = 1e-4;
    rep.derivative_sup.assign(static_cast<std::size_t>(max_order), 0.0);
    for (int i = 0; i <= probe_count; ++i) {
        const double x = -0.8 + 1.6 * i / probe_count;
        const double f0 = fam.sigma(x);
        const double fp = fam.sigma(x + h), fm = fam.sigma(x - h);
        const double fp2 = fam.sigma(x + 2 * h), fm2 = fam.sigma(x - 2 * h);
        const double d[3] = {(fp - fm) / (2 * h), (fp - 2 * f0 + fm) / (h * h),
                             (fp2 - 2 * fp + 2 * fm - fm2) / (2 * h * h * h)};
        for (int a = 0; a < max_order; ++a) {
            rep.derivative_sup[static_cast<std::size_t>(a)] =
                std::max(rep.derivative_sup[static_cast<std::size_t>(a)], std::abs(d[a]));
        }
    }
    rep.fitted_constant = 1.0;
    for (int a = 0; a < max_order; ++a) {
        rep.fitted_constant = std::max(rep.fitted_constant, std::pow(rep.derivative_sup[static_cast<std::size_t>(a)], 1.0 / (a + 1)));
    }
    rep.note = "derivative bounds checked up to order " + std::to_string(max_order) +
               " only; the flat exponential bump grows faster than geometrically at high order";
    return rep;
}

}  // namespace modspace

#endif  // MODSPACE_WINDOWS_HPP
