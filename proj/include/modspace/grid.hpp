#ifndef MODSPACE_GRID_HPP
#define MODSPACE_GRID_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "modspace/error.hpp"
#include "modspace/fft.hpp"
#include "modspace/lattice.hpp"

namespace modspace {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

/// Periodic box [-L/2, L/2)^d sampled with N points per axis.
///
/// Transform convention (used everywhere in the library):
///   f(x) = \int fhat(xi) e^{i x.xi} dxi,  fhat(xi) = (2 pi)^{-d} \int f(x) e^{-i x.xi} dx,
/// so a Fourier multiplier b(D) acts as fhat -> b(xi) fhat with no extra constants.
struct TorusGrid {
    int d = 1;
    int L = 32;
    int N = 512;

    TorusGrid() = default;
    TorusGrid(int dim, int period, int samples) : d(dim), L(period), N(samples) { validate(); }

    void validate() const {
        if (d < 1 || d > 8) throw DomainError("grid dimension must lie in [1, 8]");
        if (L <= 0 || L % 2 != 0) throw DomainError("grid period L must be a positive even integer");
        if (N < 2 || !std::has_single_bit(static_cast<unsigned>(N))) throw DomainError("grid size N must be a power of two");
    }

    std::size_t size() const {
        std::size_t s = 1;
        for (int i = 0; i < d; ++i) s *= static_cast<std::size_t>(N);
        return s;
    }
    double dx() const { return static_cast<double>(L) / N; }
    double dxi() const { return 2.0 * M_PI / L; }
    double cell_volume() const { return std::pow(dx(), d); }
    double nyquist() const { return M_PI * N / L; }

    double coord(int j) const { return -0.5 * L + j * dx(); }

    /// Integer wavenumber of FFT-order position j, in [-N/2, N/2).
    int wavenumber(int j) const { return j < N / 2 ? j : j - N; }
    double frequency(int j) const { return dxi() * wavenumber(j); }

    /// Per-axis positions of a row-major flat index.
    void unflatten(std::size_t idx, int* pos) const {
        for (int a = d - 1; a >= 0; --a) {
            pos[a] = static_cast<int>(idx % static_cast<std::size_t>(N));
            idx /= static_cast<std::size_t>(N);
        }
    }

    void node(std::size_t idx, double* x) const {
        int pos[8];
        unflatten(idx, pos);
        for (int a = 0; a < d; ++a) x[a] = coord(pos[a]);
    }

    /// Frequency vector of a flat index in FFT order.
    void frequency_at(std::size_t idx, double* xi) const {
        int pos[8];
        unflatten(idx, pos);
        for (int a = 0; a < d; ++a) xi[a] = frequency(pos[a]);
    }

    bool operator==(const TorusGrid&) const = default;
};

enum class Domain { physical, frequency };

/// Complex samples on a TorusGrid, row-major in lexicographic node order.
/// Frequency-domain functions (output of fourier_transform) are indexed by
/// wavenumbers k in [-N/2, N/2)^d in lexicographic order.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(const TorusGrid& grid, Domain domain = Domain::physical)
        : grid_(grid), domain_(domain), samples_(grid.size(), cplx{}) {}
    GridFunction(const TorusGrid& grid, CVec samples, Domain domain = Domain::physical)
        : grid_(grid), domain_(domain), samples_(std::move(samples)) {
        require(samples_.size() == grid_.size(), "sample count must equal N^d");
    }

    /// Samples f at every node.
    template <typename Fn>
    static GridFunction sample(const TorusGrid& grid, Fn&& fn) {
        GridFunction g(grid);
        std::vector<double> x(static_cast<std::size_t>(grid.d));
        for (std::size_t i = 0; i < g.size(); ++i) {
            grid.node(i, x.data());
            g.samples_[i] = fn(std::span<const double>(x));
        }
        return g;
    }

    static GridFunction constant(const TorusGrid& grid, cplx value) {
        return GridFunction(grid, CVec(grid.size(), value));
    }

    const TorusGrid& grid() const { return grid_; }
    Domain domain() const { return domain_; }
    std::size_t size() const { return samples_.size(); }
    const CVec& samples() const { return samples_; }
    CVec& samples() { return samples_; }
    cplx operator[](std::size_t i) const { return samples_[i]; }
    cplx& operator[](std::size_t i) { return samples_[i]; }

    bool all_finite() const {
        return std::all_of(samples_.begin(), samples_.end(),
                           [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
    }

    GridFunction& operator+=(const GridFunction& o) {
        check_same(o);
        for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += o.samples_[i];
        return *this;
    }
    GridFunction& operator-=(const GridFunction& o) {
        check_same(o);
        for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= o.samples_[i];
        return *this;
    }
    GridFunction& operator*=(cplx c) {
        for (auto& z : samples_) z *= c;
        return *this;
    }

    GridFunction conj() const {
        GridFunction r = *this;
        for (auto& z : r.samples_) z = std::conj(z);
        return r;
    }

    void check_same(const GridFunction& o) const {
        if (!(grid_ == o.grid_) || domain_ != o.domain_) throw DomainError("grid function grid mismatch");
    }

private:
    TorusGrid grid_{};
    Domain domain_ = Domain::physical;
    CVec samples_;
};

inline GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
inline GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
inline GridFunction operator*(cplx c, GridFunction a) { return a *= c; }
inline GridFunction operator*(GridFunction a, cplx c) { return a *= c; }

namespace detail {

/// Raw DFT of the samples in FFT order.
inline CVec raw_spectrum(const GridFunction& f) {
    CVec s = f.samples();
    dft_forward(f.grid().d, f.grid().N, s);
    return s;
}

/// Inverse of raw_spectrum (includes the 1/N^d factor).
inline GridFunction from_raw_spectrum(const TorusGrid& g, CVec s) {
    dft_backward(g.d, g.N, s);
    const double scale = 1.0 / static_cast<double>(g.size());
    for (auto& z : s) z *= scale;
    return GridFunction(g, std::move(s));
}

inline int wavenumber_parity(const TorusGrid& g, std::size_t idx) {
    int pos[8];
    g.unflatten(idx, pos);
    int s = 0;
    for (int a = 0; a < g.d; ++a) s += g.wavenumber(pos[a]);
    return s & 1;
}

/// Flat index of wavenumber vector in centered lexicographic order.
inline std::size_t centered_index(const TorusGrid& g, std::size_t fft_idx) {
    int pos[8];
    g.unflatten(fft_idx, pos);
    std::size_t c = 0;
    for (int a = 0; a < g.d; ++a) c = c * static_cast<std::size_t>(g.N) + static_cast<std::size_t>(g.wavenumber(pos[a]) + g.N / 2);
    return c;
}

}  // namespace detail

enum class TransformDirection { forward, inverse };

/// Continuum-normalized Fourier transform on the torus (see TorusGrid).
inline GridFunction fourier_transform(const GridFunction& f, TransformDirection direction) {
    const TorusGrid& g = f.grid();
    if (direction == TransformDirection::forward) {
        require(f.domain() == Domain::physical, "forward transform expects a physical-domain function");
        CVec raw = detail::raw_spectrum(f);
        const double scale = std::pow(g.dx() / (2.0 * M_PI), g.d);
        CVec out(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            // x_0 = -L/2 contributes the phase e^{i L xi_k / 2} = (-1)^{sum k}
            const double sign = detail::wavenumber_parity(g, i) ? -1.0 : 1.0;
            out[detail::centered_index(g, i)] = scale * sign * raw[i];
        }
        return GridFunction(g, std::move(out), Domain::frequency);
    }
    require(f.domain() == Domain::frequency, "inverse transform expects a frequency-domain function");
    CVec raw(f.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double sign = detail::wavenumber_parity(g, i) ? -1.0 : 1.0;
        raw[i] = sign * f[detail::centered_index(g, i)];
    }
    detail::dft_backward(g.d, g.N, raw);
    const double scale = std::pow(g.dxi(), g.d);
    for (auto& z : raw) z *= scale;
    return GridFunction(g, std::move(raw));
}

using FrequencySymbol = std::function<cplx(std::span<const double>)>;
using PhysicalSymbol = std::function<cplx(std::span<const double>)>;

/// F^{-1}( b(xi) F f ).
inline GridFunction fourier_multiplier(const GridFunction& f, const FrequencySymbol& b) {
    const TorusGrid& g = f.grid();
    CVec s = detail::raw_spectrum(f);
    std::vector<double> xi(static_cast<std::size_t>(g.d));
    for (std::size_t i = 0; i < s.size(); ++i) {
        g.frequency_at(i, xi.data());
        const cplx m = b(std::span<const double>(xi));
        if (!std::isfinite(m.real()) || !std::isfinite(m.imag())) {
            throw DomainError("non-finite multiplier value at a grid frequency");
        }
        s[i] *= m;
    }
    return detail::from_raw_spectrum(g, std::move(s));
}

/// Multi-index of derivative orders, one entry per axis.
using MultiIndex = std::vector<int>;

inline int order(const MultiIndex& alpha) {
    int s = 0;
    for (int a : alpha) s += a;
    return s;
}

/// F^{-1}((i xi)^alpha F f). The Nyquist mode of an axis with odd derivative
/// order is dropped so that real functions stay real.
inline GridFunction spectral_derivative(const GridFunction& f, const MultiIndex& alpha) {
    const TorusGrid& g = f.grid();
    require(static_cast<int>(alpha.size()) == g.d, "derivative multi-index length must equal d");
    for (int a : alpha) require(a >= 0, "derivative orders must be nonnegative");
    if (order(alpha) == 0) return f;
    CVec s = detail::raw_spectrum(f);
    int pos[8];
    for (std::size_t i = 0; i < s.size(); ++i) {
        g.unflatten(i, pos);
        cplx m{1.0, 0.0};
        for (int a = 0; a < g.d; ++a) {
            const int k = alpha[static_cast<std::size_t>(a)];
            if (k == 0) continue;
            if (pos[a] == g.N / 2 && (k % 2 == 1)) {
                m = 0.0;
                break;
            }
            m *= std::pow(cplx{0.0, g.frequency(pos[a])}, k);
        }
        s[i] *= m;
    }
    return detail::from_raw_spectrum(g, std::move(s));
}

/// Riemann-sum L^r norm ( sum |f(x_j)|^r dx^d )^{1/r}; r = inf gives the max.
inline double lp_norm(const GridFunction& f, double r) {
    check_exponent(r, "r");
    const auto& s = f.samples();
    if (std::isinf(r)) {
        double m = 0.0;
        for (const auto& z : s) m = std::max(m, std::abs(z));
        return m;
    }
    double acc = 0.0;
    if (r == 2.0) {
        for (const auto& z : s) acc += std::norm(z);
        return std::sqrt(acc * f.grid().cell_volume());
    }
    for (const auto& z : s) acc += std::pow(std::abs(z), r);
    return std::pow(acc * f.grid().cell_volume(), 1.0 / r);
}

/// || m(xi) fhat ||_{L^2} scaled so that s = 0 reproduces lp_norm(f, 2);
/// m = <xi>^s (inhomogeneous) or |xi|^s (homogeneous, zero at xi = 0 for s != 0).
inline double sobolev_norm(const GridFunction& f, double s, bool homogeneous) {
    const TorusGrid& g = f.grid();
    const CVec spec = detail::raw_spectrum(f);
    std::vector<double> xi(static_cast<std::size_t>(g.d));
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        g.frequency_at(i, xi.data());
        double k2 = 0.0;
        for (double v : xi) k2 += v * v;
        double w;
        if (homogeneous) {
            w = (s == 0.0) ? 1.0 : (k2 == 0.0 ? 0.0 : std::pow(k2, s));
        } else {
            w = std::pow(1.0 + k2, s);
        }
        acc += w * std::norm(spec[i]);
    }
    return std::sqrt(acc * g.cell_volume() / static_cast<double>(g.size()));
}

inline GridFunction pointwise_multiply(const GridFunction& f, const GridFunction& h) {
    if (!(f.grid() == h.grid())) throw DomainError("pointwise_multiply: grid mismatch");
    GridFunction r(f.grid());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f[i] * h[i];
    return r;
}

/// Complex inner product (f, g) = \int f conj(g) dx.
inline cplx inner_product(const GridFunction& f, const GridFunction& g) {
    f.check_same(g);
    cplx acc{};
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * std::conj(g[i]);
    return acc * f.grid().cell_volume();
}

// ---------------------------------------------------------------- export

/// CSV rows: node coordinates, real part, imaginary part.
inline void write_csv(const GridFunction& f, std::ostream& os) {
    const TorusGrid& g = f.grid();
    for (int a = 0; a < g.d; ++a) os << "x" << a << ",";
    os << "re,im\n";
    os << std::setprecision(17);
    std::vector<double> x(static_cast<std::size_t>(g.d));
    for (std::size_t i = 0; i < f.size(); ++i) {
        g.node(i, x.data());
        for (double v : x) os << v << ",";
        os << f[i].real() << "," << f[i].imag() << "\n";
    }
}

/// Reads the write_csv layout back onto the given grid (row order must match).
inline GridFunction read_csv(const TorusGrid& g, std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("empty grid-function CSV");
    CVec samples;
    samples.reserve(g.size());
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
        if (static_cast<int>(cells.size()) != g.d + 2) throw ConfigError("grid-function CSV row has wrong column count");
        samples.emplace_back(cells[static_cast<std::size_t>(g.d)], cells[static_cast<std::size_t>(g.d) + 1]);
    }
    if (samples.size() != g.size()) throw ConfigError("grid-function CSV has wrong number of rows");
    return GridFunction(g, std::move(samples));
}

namespace detail {
inline void write_le_double(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    os.write(bytes, 8);
}

inline double read_le_double(std::istream& is) {
    char bytes[8];
    is.read(bytes, 8);
    if (!is) throw ConfigError("truncated binary grid data");
    std::uint64_t bits;
    std::memcpy(&bits, bytes, 8);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}
}  // namespace detail

/// Flat binary layout: little-endian float64, interleaved (re, im), node order.
inline void write_binary(const GridFunction& f, std::ostream& os) {
    for (const auto& z : f.samples()) {
        detail::write_le_double(os, z.real());
        detail::write_le_double(os, z.imag());
    }
}

inline GridFunction read_binary(const TorusGrid& g, std::istream& is) {
    CVec s(g.size());
    for (auto& z : s) {
        const double re = detail::read_le_double(is);
        const double im = detail::read_le_double(is);
        z = {re, im};
    }
    return GridFunction(g, std::move(s));
}

}  // namespace modspace

#endif  // MODSPACE_GRID_HPP
