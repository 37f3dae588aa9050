#ifndef MODSPACE_LATTICE_HPP
#define MODSPACE_LATTICE_HPP

#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "modspace/error.hpp"

namespace modspace {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Lebesgue / sequence exponent in [1, inf].
inline void check_exponent(double e, const char* name) {
    if (!(e >= 1.0)) {
        throw DomainError(std::string("exponent ") + name + " must lie in [1, inf], got " +
                          std::to_string(e));
    }
}

/// Conjugate exponent p' with 1/p + 1/p' = 1.
inline double conjugate_exponent(double p) {
    check_exponent(p, "p");
    if (p == 1.0) return kInf;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

/// Point of Z^d.
struct LatticeIndex {
    std::vector<int> coords;

    LatticeIndex() = default;
    explicit LatticeIndex(std::vector<int> c) : coords(std::move(c)) {}
    LatticeIndex(std::initializer_list<int> c) : coords(c) {}

    static LatticeIndex zero(int d) { return LatticeIndex(std::vector<int>(static_cast<std::size_t>(d), 0)); }

    int dim() const { return static_cast<int>(coords.size()); }
    int operator[](std::size_t i) const { return coords[i]; }

    int sup_norm() const {
        int r = 0;
        for (int c : coords) r = std::max(r, std::abs(c));
        return r;
    }

    double squared_norm() const {
        double s = 0.0;
        for (int c : coords) s += static_cast<double>(c) * c;
        return s;
    }

    std::vector<double> as_point() const { return {coords.begin(), coords.end()}; }

    auto operator<=>(const LatticeIndex&) const = default;
    bool operator==(const LatticeIndex&) const = default;
};

inline LatticeIndex operator+(const LatticeIndex& a, const LatticeIndex& b) {
    require(a.dim() == b.dim(), "lattice index dimension mismatch");
    LatticeIndex r = a;
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += b.coords[i];
    return r;
}

inline LatticeIndex operator-(const LatticeIndex& a, const LatticeIndex& b) {
    require(a.dim() == b.dim(), "lattice index dimension mismatch");
    LatticeIndex r = a;
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] -= b.coords[i];
    return r;
}

inline std::string to_string(const LatticeIndex& n) {
    std::string s = "(";
    for (std::size_t i = 0; i < n.coords.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(n.coords[i]);
    }
    return s + ")";
}

/// Japanese bracket <n> = (1 + |n|^2)^{1/2}.
inline double bracket_weight(const LatticeIndex& n) { return std::sqrt(1.0 + n.squared_norm()); }

inline double bracket(double t) { return std::sqrt(1.0 + t * t); }

enum class LatticeRole { frequency, physical };

/// The (2R+1)^d points of Z^d with sup-norm at most R, in lexicographic order
/// (first coordinate most significant).
class TruncatedLattice {
public:
    TruncatedLattice() = default;
    TruncatedLattice(int d, int radius, LatticeRole role = LatticeRole::frequency)
        : d_(d), radius_(radius), role_(role) {
        require(d >= 1, "lattice dimension must be >= 1");
        require(radius >= 0, "lattice radius must be nonnegative");
        std::size_t n = 1;
        for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(2 * radius + 1);
        size_ = n;
    }

    int dim() const { return d_; }
    int radius() const { return radius_; }
    LatticeRole role() const { return role_; }
    std::size_t size() const { return size_; }
    int side() const { return 2 * radius_ + 1; }

    bool contains(const LatticeIndex& n) const { return n.dim() == d_ && n.sup_norm() <= radius_; }

    /// Index at position i of the lexicographic order.
    LatticeIndex at(std::size_t i) const {
        std::vector<int> c(static_cast<std::size_t>(d_));
        for (int a = d_ - 1; a >= 0; --a) {
            c[static_cast<std::size_t>(a)] = static_cast<int>(i % static_cast<std::size_t>(side())) - radius_;
            i /= static_cast<std::size_t>(side());
        }
        return LatticeIndex(std::move(c));
    }

    std::size_t position(const LatticeIndex& n) const {
        require(contains(n), "index " + to_string(n) + " outside truncated lattice");
        std::size_t p = 0;
        for (int c : n.coords) p = p * static_cast<std::size_t>(side()) + static_cast<std::size_t>(c + radius_);
        return p;
    }

    bool operator==(const TruncatedLattice& o) const {
        return d_ == o.d_ && radius_ == o.radius_ && role_ == o.role_;
    }

private:
    int d_ = 1;
    int radius_ = 0;
    LatticeRole role_ = LatticeRole::frequency;
    std::size_t size_ = 1;
};

inline std::vector<LatticeIndex> enumerate(const TruncatedLattice& lat) {
    std::vector<LatticeIndex> out;
    out.reserve(lat.size());
    for (std::size_t i = 0; i < lat.size(); ++i) out.push_back(lat.at(i));
    return out;
}

/// Nonnegative magnitudes a_{m,n} indexed by a physical lattice (m) and a
/// frequency lattice (n). Entries not set are zero.
class SequenceArray {
public:
    SequenceArray(TruncatedLattice phys, TruncatedLattice freq)
        : phys_(std::move(phys)), freq_(std::move(freq)), values_(phys_.size() * freq_.size(), 0.0) {}

    const TruncatedLattice& phys() const { return phys_; }
    const TruncatedLattice& freq() const { return freq_; }

    double& at(std::size_t m_pos, std::size_t n_pos) { return values_[n_pos * phys_.size() + m_pos]; }
    double at(std::size_t m_pos, std::size_t n_pos) const { return values_[n_pos * phys_.size() + m_pos]; }

    double get(const LatticeIndex& m, const LatticeIndex& n) const { return at(phys_.position(m), freq_.position(n)); }
    void set(const LatticeIndex& m, const LatticeIndex& n, double v) {
        require(std::isfinite(v) && v >= 0.0, "sequence entries must be finite and nonnegative");
        at(phys_.position(m), freq_.position(n)) = v;
    }

    const std::vector<double>& values() const { return values_; }

private:
    TruncatedLattice phys_;
    TruncatedLattice freq_;
    std::vector<double> values_;
};

namespace detail {
// ( sum_i v_i^p )^{1/p}, or max when p = inf; lexicographic summation order.
inline double lp_sum(const double* v, std::size_t count, std::size_t stride, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < count; ++i) m = std::max(m, v[i * stride]);
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += std::pow(v[i * stride], p);
    return std::pow(s, 1.0 / p);
}
}  // namespace detail

/// l^q_s over n of l^p over m:  ( sum_n <n>^{sq} ( sum_m a_{m,n}^p )^{q/p} )^{1/q}.
/// Extra physical weights <m>^{s_phys} can be supplied for the two-weight spaces.
inline double seq_norm(const SequenceArray& a, double s, double p, double q, double s_phys = 0.0) {
    check_exponent(p, "p");
    check_exponent(q, "q");
    const auto& phys = a.phys();
    const auto& freq = a.freq();
    std::vector<double> mweight(phys.size(), 1.0);
    if (s_phys != 0.0) {
        for (std::size_t i = 0; i < phys.size(); ++i) mweight[i] = std::pow(bracket_weight(phys.at(i)), s_phys);
    }
    std::vector<double> inner(freq.size());
    std::vector<double> row(phys.size());
    for (std::size_t j = 0; j < freq.size(); ++j) {
        for (std::size_t i = 0; i < phys.size(); ++i) {
            const double v = a.at(i, j);
            require(std::isfinite(v), "sequence entries must be finite");
            row[i] = v * mweight[i];
        }
        inner[j] = std::pow(bracket_weight(freq.at(j)), s) * detail::lp_sum(row.data(), row.size(), 1, p);
    }
    return detail::lp_sum(inner.data(), inner.size(), 1, q);
}

}  // namespace modspace

#endif  // MODSPACE_LATTICE_HPP
