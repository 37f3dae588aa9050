#include <catch2/catch_amalgamated.hpp>

#include "modspace/families.hpp"
#include "modspace/norms.hpp"

using namespace modspace;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const TorusGrid g1(1, 32, 512);
const WindowFamily fam = build_ud_family(1);
const Decomposer& dec() {
    static const Decomposer d(g1, fam, TruncatedLattice(1, 8), TruncatedLattice(1, 15, LatticeRole::physical));
    return d;
}

GridFunction plateau_function() {
    // wavenumbers -1, 0, 1: spectrum inside (-1/4, 1/4)
    return GridFunction::sample(g1, [](std::span<const double> x) {
        const double w = g1.dxi();
        return cplx{1.0, 0.0} + cplx{0.4, -0.2} * std::exp(cplx{0.0, w * x[0]}) + cplx{0.1, 0.3} * std::exp(cplx{0.0, -w * x[0]});
    });
}

NormParams params(double s, double p, double q, double r) {
    NormParams np;
    np.s = s;
    np.p = p;
    np.q = q;
    np.r = r;
    return np;
}

}  // namespace

TEST_CASE("modulation norm worked examples", "[norms]") {
    CHECK(modulation_norm(GridFunction(g1), 1.0, 2.0, 1.0, dec()) == 0.0);
    const auto f = multi_cube(1).member(g1, 4, 0);
    const double base = modulation_norm(f, 1.0, 2.0, 1.0, dec());
    CHECK_THAT(modulation_norm(cplx{0.0, -2.5} * f, 1.0, 2.0, 1.0, dec()), WithinRel(2.5 * base, 1e-12));
    const auto h = plateau_function();
    CHECK_THAT(modulation_norm(h, 0.0, 2.0, 2.0, dec()), WithinRel(lp_norm(h, 2.0), 1e-10));
    CHECK_THAT(modulation_norm(h, 0.0, 2.0, 2.0, fam, TruncatedLattice(1, 8)), WithinRel(lp_norm(h, 2.0), 1e-10));
}

TEST_CASE("x_norm homogeneity and the overlap band", "[norms]") {
    CHECK(x_norm(GridFunction(g1), params(0, 2, 2, 2), dec()) == 0.0);
    const auto f = band_limited(1).member(g1, 2, 0);
    const auto np = params(1.0, 2.0, 1.0, kInf);
    CHECK_THAT(x_norm(3.0 * f, np, dec()), WithinRel(3.0 * x_norm(f, np, dec()), 1e-12));

    // single cube: x_norm^2 = int sum_m sigma_m^2 |f|^2
    const auto h = plateau_function();
    GridFunction w2(g1);
    for (const auto& m : enumerate(dec().phys())) {
        const auto win = physical_window(g1, fam, m);
        for (std::size_t i = 0; i < w2.size(); ++i) w2[i] += win[i] * win[i];
    }
    double c_overlap = 1.0, integral = 0.0;
    for (std::size_t i = 0; i < w2.size(); ++i) {
        integral += w2[i].real() * std::norm(h[i]) * g1.dx();
        if (std::abs(g1.coord(static_cast<int>(i))) <= 15.25) c_overlap = std::min(c_overlap, w2[i].real());
    }
    const double xn = x_norm(h, params(0, 2, 2, 2), dec());
    CHECK_THAT(xn, WithinRel(std::sqrt(integral), 1e-10));
    const double ratio = xn / lp_norm(h, 2.0);
    CHECK(ratio <= 1.0);
    // the torus seam window is absent, so allow its share of the mass
    CHECK(ratio >= std::sqrt(c_overlap) * 0.95);
}

TEST_CASE("time_x_norm of constant and zero trajectories", "[norms]") {
    const auto f = oscillatory_packets(1).member(g1, 3, 0);
    const TimeGrid tg(0.5, 8);
    auto np = params(0.5, 2.0, 1.0, 2.0);
    np.gamma = 4.0;
    const double xn = x_norm(f, np, dec());
    CHECK_THAT(time_x_norm(Trajectory::constant(tg, f), np, dec()), WithinRel(std::pow(0.5, 0.25) * xn, 1e-12));
    np.gamma = kInf;
    CHECK_THAT(time_x_norm(Trajectory::constant(tg, f), np, dec()), WithinRel(xn, 1e-12));
    CHECK(time_x_norm(Trajectory::constant(tg, GridFunction(g1)), np, dec()) == 0.0);
    CHECK_THROWS_AS(time_x_norm(Trajectory(), np, dec()), DomainError);
}

TEST_CASE("norm equivalence report", "[norms]") {
    std::vector<GridFunction> shifts;
    for (double c : {0.0, 2.0, 5.0}) {
        shifts.push_back(GridFunction::sample(g1, [c](std::span<const double> x) {
            return cplx{std::exp(-0.5 * (x[0] - c) * (x[0] - c)), 0.0};
        }));
    }
    const auto rep = norm_equivalence_report(shifts, {1.0, 2.0, kInf}, 0.0, 2.0, 1.0, dec());
    CHECK(rep.pass);
    for (const auto& pair : rep.pairs) {
        CHECK(std::isfinite(pair.ratios.max));
        if (pair.r1 == pair.r2) {
            CHECK(pair.ratios.min == 1.0);
            CHECK(pair.ratios.max == 1.0);
        }
    }
    std::vector<GridFunction> scaled;
    for (const auto& f : shifts) scaled.push_back(7.0 * f);
    const auto rep2 = norm_equivalence_report(scaled, {1.0, 2.0, kInf}, 0.0, 2.0, 1.0, dec());
    for (std::size_t k = 0; k < rep.pairs.size(); ++k)
        CHECK_THAT(rep2.pairs[k].ratios.max, WithinRel(rep.pairs[k].ratios.max, 1e-12));
}

TEST_CASE("triangle inequality and monotonicity in s", "[norms]") {
    const auto fs = mixed_test_set(g1, 5, 6);
    const auto np = params(1.0, 2.0, 1.0, 2.0);
    for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
        const auto& f = fs[i];
        const auto& h = fs[i + 1];
        CHECK(modulation_norm(f + h, 1.0, 2.0, 1.0, dec()) <=
              modulation_norm(f, 1.0, 2.0, 1.0, dec()) + modulation_norm(h, 1.0, 2.0, 1.0, dec()) + 1e-10);
        CHECK(x_norm(f + h, np, dec()) <= x_norm(f, np, dec()) + x_norm(h, np, dec()) + 1e-10);
        CHECK(modulation_norm(f, 0.5, 2.0, 2.0, dec()) <= modulation_norm(f, 1.5, 2.0, 2.0, dec()));
    }
}

TEST_CASE("M^s_{2,2} tracks H^s", "[norms]") {
    const auto fs = mixed_test_set(g1, 9, 12);
    std::vector<double> ratios;
    for (const auto& f : fs) ratios.push_back(modulation_norm(f, 1.0, 2.0, 2.0, dec()) / sobolev_norm(f, 1.0, false));
    const auto st = ratio_stats(ratios);
    CHECK(st.min > 0.5);
    CHECK(st.max < 2.0);
}

TEST_CASE("L^gamma(X) is dominated by the time-localized norm", "[norms]") {
    const auto f = band_limited(1).member(g1, 6, 0);
    const TimeGrid tg(1.0, 8);
    std::vector<GridFunction> states;
    for (int j = 0; j <= tg.J; ++j) {
        const double t = tg.node(j);
        states.push_back(fourier_multiplier(f, [t](std::span<const double> xi) { return cplx{std::exp(-t * xi[0] * xi[0]), 0.0}; }));
    }
    const Trajectory traj(tg, states);
    auto np = params(0.5, 2.0, 1.0, 2.0);
    np.gamma = 4.0;  // p, q <= gamma
    CHECK(time_x_norm(traj, np, dec()) >= lgamma_x_norm(traj, np, dec()) * (1.0 - 1e-12));
}
