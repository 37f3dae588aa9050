#ifndef MODSPACE_DECOMP_HPP
#define MODSPACE_DECOMP_HPP

#include <cmath>
#include <map>
#include <ostream>
#include <utility>
#include <vector>

#include "modspace/error.hpp"
#include "modspace/grid.hpp"
#include "modspace/lattice.hpp"
#include "modspace/parallel.hpp"
#include "modspace/stats.hpp"
#include "modspace/windows.hpp"

namespace modspace {

/// Nonzero samples of a window on the grid: flat indices plus values.
struct SparseWindow {
    std::vector<std::size_t> index;
    std::vector<double> value;
};

namespace detail {

using AxisSamples = std::vector<std::pair<int, double>>;

// Positions k in FFT order with sigma(xi_k - center) != 0 along one axis.
inline AxisSamples frequency_axis(const TorusGrid& g, const WindowFamily& fam, int center) {
    AxisSamples out;
    for (int j = 0; j < g.N; ++j) {
        const double v = fam.sigma(g.frequency(j) - center);
        if (v != 0.0) out.emplace_back(j, v);
    }
    return out;
}

// Periodized physical window sum_l sigma(x_j - center - l L) along one axis.
inline AxisSamples physical_axis(const TorusGrid& g, const WindowFamily& fam, int center) {
    AxisSamples out;
    for (int j = 0; j < g.N; ++j) {
        double v = 0.0;
        for (int l = -1; l <= 1; ++l) v += fam.sigma(g.coord(j) - center - l * g.L);
        if (v != 0.0) out.emplace_back(j, v);
    }
    return out;
}

inline SparseWindow tensor_window(const TorusGrid& g, const std::vector<AxisSamples>& axes) {
    SparseWindow w;
    std::size_t total = 1;
    for (const auto& a : axes) total *= a.size();
    w.index.reserve(total);
    w.value.reserve(total);
    std::vector<std::size_t> it(axes.size(), 0);
    for (std::size_t c = 0; c < total; ++c) {
        std::size_t flat = 0;
        double v = 1.0;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            flat = flat * static_cast<std::size_t>(g.N) + static_cast<std::size_t>(axes[a][it[a]].first);
            v *= axes[a][it[a]].second;
        }
        w.index.push_back(flat);
        w.value.push_back(v);
        for (std::size_t a = axes.size(); a-- > 0;) {
            if (++it[a] < axes[a].size()) break;
            it[a] = 0;
        }
    }
    return w;
}

inline void check_frequency_cube(const TorusGrid& g, const LatticeIndex& n) {
    if (!(n.sup_norm() + WindowFamily::support_halfwidth < g.nyquist())) {
        throw DomainError("frequency cube of " + to_string(n) + " is not resolved below the Nyquist frequency");
    }
}

}  // namespace detail

/// Checks the lattice/grid compatibility guards used by every decomposition.
inline void check_lattices(const TorusGrid& g, const TruncatedLattice& freq, const TruncatedLattice& phys) {
    require(freq.dim() == g.d && phys.dim() == g.d, "lattice dimension must equal the grid dimension");
    const int max_freq = static_cast<int>(std::floor(g.nyquist())) - 1;
    if (freq.radius() > max_freq) {
        throw DomainError("frequency radius " + std::to_string(freq.radius()) + " exceeds floor(pi N / L) - 1 = " +
                          std::to_string(max_freq));
    }
    if (!(freq.radius() + WindowFamily::support_halfwidth < g.nyquist())) {
        throw DomainError("frequency lattice not resolved below the Nyquist frequency");
    }
    if (phys.radius() > g.L / 2 - 1) {
        throw DomainError("physical radius " + std::to_string(phys.radius()) + " exceeds L/2 - 1");
    }
}

/// Periodized physical window sigma_m(x) sampled on the grid.
inline GridFunction physical_window(const TorusGrid& g, const WindowFamily& fam, const LatticeIndex& m) {
    require(m.dim() == g.d && fam.dim() == g.d, "physical window dimension mismatch");
    std::vector<detail::AxisSamples> axes;
    for (int a = 0; a < g.d; ++a) axes.push_back(detail::physical_axis(g, fam, m[static_cast<std::size_t>(a)]));
    const SparseWindow w = detail::tensor_window(g, axes);
    GridFunction out(g);
    for (std::size_t i = 0; i < w.index.size(); ++i) out[w.index[i]] = w.value[i];
    return out;
}

/// Frequency-uniform piece F^{-1} sigma_n F f.
inline GridFunction box_freq(const GridFunction& f, const LatticeIndex& n, const WindowFamily& fam) {
    const TorusGrid& g = f.grid();
    require(n.dim() == g.d && fam.dim() == g.d, "box_freq dimension mismatch");
    detail::check_frequency_cube(g, n);
    return fourier_multiplier(f, [&](std::span<const double> xi) { return cplx{fam.eval(n, xi), 0.0}; });
}

/// Frequency-physical piece sigma_m(x) F^{-1} sigma_n F f, with sigma_m periodized on the torus.
inline GridFunction box_phys_freq(const GridFunction& f, const LatticeIndex& m, const LatticeIndex& n,
                                  const WindowFamily& fam) {
    require(m.sup_norm() <= f.grid().L / 2, "physical index outside the torus");
    return pointwise_multiply(physical_window(f.grid(), fam, m), box_freq(f, n, fam));
}

/// Precomputed windows for a grid and a pair of truncated lattices. All the
/// heavy per-piece work in the library goes through this object.
class Decomposer {
public:
    Decomposer(const TorusGrid& grid, const WindowFamily& fam, const TruncatedLattice& freq,
               const TruncatedLattice& phys)
        : grid_(grid), fam_(fam), freq_(freq), phys_(phys) {
        grid_.validate();
        require(fam.dim() == grid.d, "window family dimension must equal the grid dimension");
        check_lattices(grid_, freq_, phys_);
        for (std::size_t i = 0; i < freq_.size(); ++i) {
            const LatticeIndex n = freq_.at(i);
            std::vector<detail::AxisSamples> axes;
            for (int a = 0; a < grid.d; ++a) axes.push_back(detail::frequency_axis(grid_, fam_, n[static_cast<std::size_t>(a)]));
            freq_windows_.push_back(detail::tensor_window(grid_, axes));
        }
        for (std::size_t i = 0; i < phys_.size(); ++i) {
            const LatticeIndex m = phys_.at(i);
            std::vector<detail::AxisSamples> axes;
            for (int a = 0; a < grid.d; ++a) axes.push_back(detail::physical_axis(grid_, fam_, m[static_cast<std::size_t>(a)]));
            phys_windows_.push_back(detail::tensor_window(grid_, axes));
        }
    }

    const TorusGrid& grid() const { return grid_; }
    const WindowFamily& family() const { return fam_; }
    const TruncatedLattice& freq() const { return freq_; }
    const TruncatedLattice& phys() const { return phys_; }
    const SparseWindow& freq_window(std::size_t n_pos) const { return freq_windows_[n_pos]; }
    const SparseWindow& phys_window(std::size_t m_pos) const { return phys_windows_[m_pos]; }

    CVec spectrum(const GridFunction& f) const {
        require(f.grid() == grid_, "function grid differs from the decomposer grid");
        return detail::raw_spectrum(f);
    }

    /// Raw spectrum of box_n f from the raw spectrum of f.
    CVec box_spectrum(const CVec& raw, std::size_t n_pos) const {
        CVec s(raw.size(), cplx{});
        const auto& w = freq_windows_[n_pos];
        for (std::size_t i = 0; i < w.index.size(); ++i) s[w.index[i]] = w.value[i] * raw[w.index[i]];
        return s;
    }

    GridFunction box_freq_from_spectrum(const CVec& raw, std::size_t n_pos) const {
        return detail::from_raw_spectrum(grid_, box_spectrum(raw, n_pos));
    }

    GridFunction box_freq(const GridFunction& f, const LatticeIndex& n) const {
        return box_freq_from_spectrum(spectrum(f), freq_.position(n));
    }

    /// sigma_m * g with g a full-grid function.
    GridFunction localize(const GridFunction& g, std::size_t m_pos) const {
        GridFunction out(grid_);
        const auto& w = phys_windows_[m_pos];
        for (std::size_t i = 0; i < w.index.size(); ++i) out[w.index[i]] = w.value[i] * g[w.index[i]];
        return out;
    }

    GridFunction box_phys_freq(const GridFunction& f, const LatticeIndex& m, const LatticeIndex& n) const {
        return localize(box_freq(f, n), phys_.position(m));
    }

    /// ||sigma_m g||_r without materializing the product.
    double localized_norm(const GridFunction& g, std::size_t m_pos, double r) const {
        const auto& w = phys_windows_[m_pos];
        if (std::isinf(r)) {
            double mx = 0.0;
            for (std::size_t i = 0; i < w.index.size(); ++i) mx = std::max(mx, w.value[i] * std::abs(g[w.index[i]]));
            return mx;
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < w.index.size(); ++i) acc += std::pow(w.value[i] * std::abs(g[w.index[i]]), r);
        return std::pow(acc * grid_.cell_volume(), 1.0 / r);
    }

    /// Per-n norms ||box_n f||_p.
    std::vector<double> box_norms(const GridFunction& f, double p) const {
        check_exponent(p, "p");
        const CVec raw = spectrum(f);
        std::vector<double> out(freq_.size());
        parallel_for(freq_.size(), [&](std::size_t j) { out[j] = lp_norm(box_freq_from_spectrum(raw, j), p); });
        return out;
    }

    /// All magnitudes ||box_{m,n} f||_r.
    SequenceArray piece_norms(const GridFunction& f, double r) const {
        check_exponent(r, "r");
        const CVec raw = spectrum(f);
        SequenceArray a(phys_, freq_);
        parallel_for(freq_.size(), [&](std::size_t j) {
            const GridFunction b = box_freq_from_spectrum(raw, j);
            for (std::size_t i = 0; i < phys_.size(); ++i) a.at(i, j) = localized_norm(b, i, r);
        });
        return a;
    }

private:
    TorusGrid grid_;
    WindowFamily fam_;
    TruncatedLattice freq_;
    TruncatedLattice phys_;
    std::vector<SparseWindow> freq_windows_;
    std::vector<SparseWindow> phys_windows_;
};

/// Key of a stored piece: lattice positions, ordered by (m, n).
struct PieceKey {
    std::size_t m_pos = 0;
    std::size_t n_pos = 0;
    auto operator<=>(const PieceKey&) const = default;
};

/// The family {box_{m,n} f} over truncated lattices.
class DecompositionTable {
public:
    DecompositionTable(const TorusGrid& grid, const WindowFamily& fam, const TruncatedLattice& freq,
                       const TruncatedLattice& phys)
        : grid_(grid), fam_(fam), freq_(freq), phys_(phys) {}

    const TorusGrid& grid() const { return grid_; }
    const WindowFamily& family() const { return fam_; }
    const TruncatedLattice& freq() const { return freq_; }
    const TruncatedLattice& phys() const { return phys_; }
    const std::map<PieceKey, GridFunction>& pieces() const { return pieces_; }
    double tail_mass() const { return tail_mass_; }
    void set_tail_mass(double t) { tail_mass_ = t; }

    void insert(const LatticeIndex& m, const LatticeIndex& n, GridFunction piece) {
        require(piece.grid() == grid_, "piece grid differs from the table grid");
        pieces_[PieceKey{phys_.position(m), freq_.position(n)}] = std::move(piece);
    }
    void insert(PieceKey key, GridFunction piece) { pieces_[key] = std::move(piece); }

    /// Stored piece or nullptr when absent (absent means zero).
    const GridFunction* find(const LatticeIndex& m, const LatticeIndex& n) const {
        auto it = pieces_.find(PieceKey{phys_.position(m), freq_.position(n)});
        return it == pieces_.end() ? nullptr : &it->second;
    }

    bool compatible(const DecompositionTable& o) const {
        return grid_ == o.grid_ && freq_ == o.freq_ && phys_ == o.phys_;
    }

private:
    TorusGrid grid_;
    WindowFamily fam_;
    TruncatedLattice freq_;
    TruncatedLattice phys_;
    std::map<PieceKey, GridFunction> pieces_;
    double tail_mass_ = 0.0;
};

/// Sum of the pieces in (m, n) lexicographic order.
inline GridFunction reconstruct(const DecompositionTable& table) {
    GridFunction out(table.grid());
    for (const auto& [key, piece] : table.pieces()) out += piece;
    return out;
}

inline DecompositionTable operator+(const DecompositionTable& a, const DecompositionTable& b) {
    require(a.compatible(b), "cannot add decomposition tables over different grids or lattices");
    DecompositionTable out = a;
    for (const auto& [key, piece] : b.pieces()) {
        auto it = out.pieces().find(key);
        if (it == out.pieces().end()) {
            out.insert(key, piece);
        } else {
            out.insert(key, it->second + piece);
        }
    }
    out.set_tail_mass(0.0);
    return out;
}

/// All pieces of f; identically zero pieces are not stored.
inline DecompositionTable decompose_all(const GridFunction& f, const Decomposer& dec) {
    const auto& freq = dec.freq();
    const auto& phys = dec.phys();
    const CVec raw = dec.spectrum(f);
    std::vector<std::vector<GridFunction>> slots(freq.size());
    parallel_for(freq.size(), [&](std::size_t j) {
        const GridFunction b = dec.box_freq_from_spectrum(raw, j);
        slots[j].reserve(phys.size());
        for (std::size_t i = 0; i < phys.size(); ++i) slots[j].push_back(dec.localize(b, i));
    });
    DecompositionTable table(dec.grid(), dec.family(), freq, phys);
    for (std::size_t i = 0; i < phys.size(); ++i) {
        for (std::size_t j = 0; j < freq.size(); ++j) {
            GridFunction& p = slots[j][i];
            const bool nonzero = std::any_of(p.samples().begin(), p.samples().end(), [](cplx z) { return z != cplx{}; });
            if (nonzero) table.insert(PieceKey{i, j}, std::move(p));
        }
    }
    table.set_tail_mass(lp_norm(f - reconstruct(table), 2.0));
    return table;
}

inline DecompositionTable decompose_all(const GridFunction& f, const WindowFamily& fam, const TruncatedLattice& freq,
                                        const TruncatedLattice& phys) {
    return decompose_all(f, Decomposer(f.grid(), fam, freq, phys));
}

/// Heat-map CSV: lattice coordinates of m and n, then the piece L^2 norm.
inline void write_heatmap_csv(const DecompositionTable& table, std::ostream& os) {
    const int d = table.grid().d;
    for (int a = 0; a < d; ++a) os << "m" << a << ",";
    for (int a = 0; a < d; ++a) os << "n" << a << ",";
    os << "norm\n" << std::setprecision(17);
    for (std::size_t i = 0; i < table.phys().size(); ++i) {
        const LatticeIndex m = table.phys().at(i);
        for (std::size_t j = 0; j < table.freq().size(); ++j) {
            const LatticeIndex n = table.freq().at(j);
            auto it = table.pieces().find(PieceKey{i, j});
            const double v = it == table.pieces().end() ? 0.0 : lp_norm(it->second, 2.0);
            for (int c : m.coords) os << c << ",";
            for (int c : n.coords) os << c << ",";
            os << v << "\n";
        }
    }
}

/// Measured decay of the cross terms T_{0,k} f = sigma_0 F^{-1} phi F (sigma_k f).
struct DecayProfile {
    std::vector<int> offsets;
    std::vector<double> magnitudes;
    LinearFit fit;
    double envelope = 0.0;        // ||sigma_0||_q ||sigma_0||_{p'} ||phi||_1 ||f||_p
    double zero_offset_value = 0.0;
    bool strictly_decreasing = false;
};

/// Default multiplier for the cross terms: the Schwartz function e^{-|xi|^2/2}.
/// Its kernel decays fast enough that offsets 2..8 are already asymptotic,
/// which is not the case for a unit-width compactly supported window.
inline FrequencySymbol default_cross_multiplier() {
    return [](std::span<const double> xi) {
        double r = 0.0;
        for (double v : xi) r += v * v;
        return cplx{std::exp(-0.5 * r), 0.0};
    };
}

/// Offsets are taken along the first axis. phi must be integrable; its L^1
/// norm is a Riemann sum over the grid frequencies.
inline DecayProfile cross_term_decay(const WindowFamily& fam, const FrequencySymbol& phi, const std::vector<int>& offsets,
                                     const GridFunction& f, double p, double q) {
    check_exponent(p, "p");
    check_exponent(q, "q");
    const TorusGrid& g = f.grid();
    require(offsets.size() >= 2, "cross_term_decay needs at least two offsets");
    for (int k : offsets) {
        require(k >= 0 && k <= g.L / 2 - 1, "offset " + std::to_string(k) + " not feasible on the torus");
    }
    const GridFunction psi0 = physical_window(g, fam, LatticeIndex::zero(g.d));
    auto term = [&](int k) {
        LatticeIndex shift = LatticeIndex::zero(g.d);
        shift.coords[0] = k;
        const GridFunction inner = pointwise_multiply(physical_window(g, fam, shift), f);
        return lp_norm(pointwise_multiply(psi0, fourier_multiplier(inner, phi)), q);
    };

    DecayProfile prof;
    prof.offsets = offsets;
    std::vector<double> brackets;
    for (int k : offsets) {
        prof.magnitudes.push_back(term(k));
        brackets.push_back(bracket(static_cast<double>(k)));
    }
    prof.fit = loglog_fit(brackets, prof.magnitudes);
    prof.strictly_decreasing = true;
    for (std::size_t i = 1; i < prof.magnitudes.size(); ++i) {
        if (!(prof.magnitudes[i] < prof.magnitudes[i - 1])) prof.strictly_decreasing = false;
    }

    double phi_l1 = 0.0;
    std::vector<double> xi(static_cast<std::size_t>(g.d));
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.frequency_at(i, xi.data());
        phi_l1 += std::abs(phi(std::span<const double>(xi)));
    }
    phi_l1 *= std::pow(g.dxi(), g.d);
    prof.envelope = lp_norm(psi0, q) * lp_norm(psi0, conjugate_exponent(p)) * phi_l1 * lp_norm(f, p);
    prof.zero_offset_value = term(0);
    return prof;
}

}  // namespace modspace

#endif  // MODSPACE_DECOMP_HPP
