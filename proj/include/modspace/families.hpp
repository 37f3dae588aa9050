#ifndef MODSPACE_FAMILIES_HPP
#define MODSPACE_FAMILIES_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "modspace/error.hpp"
#include "modspace/grid.hpp"
#include "modspace/rng.hpp"

namespace modspace {

/// Deterministic generator of test functions: member(grid, seed, index).
struct TestFamily {
    std::string name;
    std::string description;
    int count = 10;
    std::function<GridFunction(const TorusGrid&, std::uint64_t, int)> generator;

    GridFunction member(const TorusGrid& g, std::uint64_t seed, int index) const { return generator(g, seed, index); }

    std::vector<GridFunction> members(const TorusGrid& g, std::uint64_t seed) const {
        std::vector<GridFunction> out;
        out.reserve(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) out.push_back(generator(g, seed, i));
        return out;
    }
};

namespace detail {

inline double squared_radius(std::span<const double> x, double shift = 0.0) {
    double r = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) {
        const double y = x[a] - (a == 0 ? shift : 0.0);
        r += y * y;
    }
    return r;
}

inline CounterRng member_rng(std::uint64_t seed, const std::string& family, int index) {
    return CounterRng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index + 1), family);
}

}  // namespace detail

/// Gaussians e^{-|x - c e_1|^2 / 4} with centers in [-5, 5].
inline TestFamily gaussian_shifts(int count = 10) {
    TestFamily f;
    f.name = "gaussian_shifts";
    f.description = "Gaussian bumps at random shifts along the first axis";
    f.count = count;
    f.generator = [](const TorusGrid& g, std::uint64_t seed, int i) {
        auto rng = detail::member_rng(seed, "gaussian_shifts", i);
        const double c = rng.uniform(-5.0, 5.0);
        return GridFunction::sample(g, [c](std::span<const double> x) { return cplx{std::exp(-0.25 * detail::squared_radius(x, c)), 0.0}; });
    };
    return f;
}

/// e^{-|x|^2/4} times a random trigonometric polynomial with integer frequencies |k| <= 2.
inline TestFamily band_limited(int count = 10) {
    TestFamily f;
    f.name = "band_limited";
    f.description = "Gaussian envelope times random combinations of e^{ikx}, |k| <= 2";
    f.count = count;
    f.generator = [](const TorusGrid& g, std::uint64_t seed, int i) {
        auto rng = detail::member_rng(seed, "band_limited", i);
        std::vector<cplx> c;
        for (int k = -2; k <= 2; ++k) c.emplace_back(rng.normal(), rng.normal());
        return GridFunction::sample(g, [c](std::span<const double> x) {
            cplx s{};
            for (int k = -2; k <= 2; ++k) s += c[static_cast<std::size_t>(k + 2)] * std::exp(cplx{0.0, k * x[0]});
            return std::exp(-0.25 * detail::squared_radius(x)) * s;
        });
    };
    return f;
}

/// Sums of three packets with random centers, integer frequencies and phases.
inline TestFamily multi_cube(int count = 10) {
    TestFamily f;
    f.name = "multi_cube";
    f.description = "random-phase packets spread over several frequency cubes";
    f.count = count;
    f.generator = [](const TorusGrid& g, std::uint64_t seed, int i) {
        auto rng = detail::member_rng(seed, "multi_cube", i);
        struct Packet {
            double center, freq;
            cplx amp;
        };
        std::vector<Packet> ps;
        for (int j = 0; j < 3; ++j) {
            const double c = rng.uniform(-3.0, 3.0);
            const double k = std::floor(rng.uniform(-4.0, 5.0));
            const double ph = rng.uniform(0.0, 2.0 * M_PI);
            ps.push_back({c, k, std::polar(rng.uniform(0.5, 1.5), ph)});
        }
        return GridFunction::sample(g, [ps](std::span<const double> x) {
            cplx s{};
            for (const auto& p : ps) s += p.amp * std::exp(cplx{-0.25 * detail::squared_radius(x, p.center), p.freq * x[0]});
            return s;
        });
    };
    return f;
}

/// Gaussian packets e^{-|x - c|^2/4} e^{i w x_1} with |w| <= 3.
inline TestFamily oscillatory_packets(int count = 10) {
    TestFamily f;
    f.name = "oscillatory_packets";
    f.description = "Gaussian packets modulated at frequencies up to 3";
    f.count = count;
    f.generator = [](const TorusGrid& g, std::uint64_t seed, int i) {
        auto rng = detail::member_rng(seed, "oscillatory_packets", i);
        const double c = rng.uniform(-3.0, 3.0);
        const double w = rng.uniform(-3.0, 3.0);
        return GridFunction::sample(g, [c, w](std::span<const double> x) {
            return std::exp(cplx{-0.25 * detail::squared_radius(x, c), w * x[0]});
        });
    };
    return f;
}

inline TestFamily family_by_name(const std::string& name, int count) {
    if (name == "gaussian_shifts") return gaussian_shifts(count);
    if (name == "band_limited") return band_limited(count);
    if (name == "multi_cube") return multi_cube(count);
    if (name == "oscillatory_packets") return oscillatory_packets(count);
    throw ConfigError("unknown test family '" + name + "'");
}

/// Members drawn round-robin from all four families.
inline std::vector<GridFunction> mixed_test_set(const TorusGrid& g, std::uint64_t seed, int count) {
    const std::vector<TestFamily> fams = {band_limited(count), gaussian_shifts(count), oscillatory_packets(count), multi_cube(count)};
    std::vector<GridFunction> out;
    for (int i = 0; i < count; ++i) {
        const auto& fam = fams[static_cast<std::size_t>(i) % fams.size()];
        out.push_back(fam.member(g, seed, i / static_cast<int>(fams.size())));
    }
    return out;
}

}  // namespace modspace

#endif  // MODSPACE_FAMILIES_HPP
