#include <catch2/catch_amalgamated.hpp>

#include "modspace/verify.hpp"

using namespace modspace;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const TorusGrid g(1, 32, 512);
const WindowFamily fam = build_ud_family(1);

const Decomposer& dec() {
    static const Decomposer d(g, fam, TruncatedLattice(1, 8), TruncatedLattice(1, 15, LatticeRole::physical));
    return d;
}

const Decomposer& wide() {
    static const Decomposer d(g, fam, TruncatedLattice(1, 16), TruncatedLattice(1, 15, LatticeRole::physical));
    return d;
}

std::vector<GridFunction> scaled(const std::vector<GridFunction>& v, cplx c) {
    std::vector<GridFunction> out;
    for (const auto& f : v) out.push_back(c * f);
    return out;
}

}  // namespace

TEST_CASE("algebra estimate", "[verify]") {
    const auto set = mixed_test_set(g, 1, 20);
    const auto rep = check_algebra(set, 1.0, 2.0, 1.0, 2.0, wide(), 50);
    CHECK(rep.pass);
    CHECK(rep.ratios.count == 50);
    CHECK(rep.ratios.max < 1e3);
    CHECK(rep.ratios.min > 0.0);

    // both sides are homogeneous of degree two
    const auto big = check_algebra(scaled(set, 7.5), 1.0, 2.0, 1.0, 2.0, wide(), 50);
    CHECK_THAT(big.ratios.max, WithinRel(rep.ratios.max, 1e-10));
    CHECK_THAT(big.ratios.min, WithinRel(rep.ratios.min, 1e-10));

    // the constant 1 is a unit: ratio = 1 / x_norm(1)
    NormParams np;
    np.s = 1.0;
    np.q = 1.0;
    const GridFunction one = GridFunction::constant(g, 1.0);
    const auto unit = check_algebra({one, set[0]}, 1.0, 2.0, 1.0, 2.0, wide(), 1);
    CHECK_THAT(unit.ratios.max, WithinRel(1.0 / x_norm(one, np, wide()), 1e-12));

    CHECK_THROWS_AS(check_algebra(set, 0.2, 2.0, 2.0, 2.0, wide()), DomainError);
}

TEST_CASE("multilinear estimate", "[verify]") {
    const auto set = mixed_test_set(g, 2, 12);
    const auto cubic = check_multilinear(set, {12.0, 12.0, 12.0}, 4.0, 1.0, 2.0, 1.0, 2.0, wide(), 0.5);
    CHECK(cubic.pass);
    CHECK(std::isfinite(cubic.ratios.max));

    // a zero factor gives a zero ratio
    std::vector<GridFunction> zeros(3, GridFunction(g));
    const auto z = check_multilinear(zeros, {4.0, 4.0}, 2.0, 0.0, 2.0, 1.0, 2.0, dec(), 1.0, 3);
    CHECK(z.ratios.max == 0.0);

    CHECK_THROWS_AS(check_multilinear(set, {4.0, 4.0}, 4.0, 0.0, 2.0, 1.0, 2.0, dec()), DomainError);
}

TEST_CASE("derivative estimate", "[verify]") {
    const auto set = mixed_test_set(g, 3, 12);
    const auto zero = check_derivative_estimate(set, MultiIndex{0}, 0.0, 2.0, 1.0, 2.0, dec());
    CHECK_THAT(zero.ratios.min, WithinAbs(1.0, 1e-14));
    CHECK_THAT(zero.ratios.max, WithinAbs(1.0, 1e-14));

    const auto one = check_derivative_estimate(set, MultiIndex{1}, 0.0, 2.0, 1.0, 2.0, dec());
    CHECK(one.pass);
    CHECK(one.ratios.max < 1e2);

    // a single grid mode inside one cube: |xi| / <n> with xi ~ n
    const int k = 20;  // xi = 3.93, cube n = 4
    const GridFunction mode = GridFunction::sample(g, [k](std::span<const double> x) {
        return std::exp(cplx{-x[0] * x[0] / 64.0, g.dxi() * k * x[0]});
    });
    const auto single = check_derivative_estimate({mode}, MultiIndex{1}, 0.0, 2.0, 1.0, 2.0, dec());
    CHECK(single.ratios.max <= 1.0);
    CHECK(single.ratios.max > 0.9);
}

TEST_CASE("linear smoothing", "[verify]") {
    const auto set = mixed_test_set(g, 4, 8);
    const auto rep = check_linear_smoothing(confining_symbol(), set, 4.0, 2.0, dec());
    REQUIRE(rep.fit.has_value());
    CHECK(rep.fit->slope <= -0.5 + 0.2);
    CHECK(rep.pass);
    // the gain of a piece with Re A >= 1 never exceeds T^{1/gamma}
    for (double v : rep.series.at("gain")) CHECK(v <= 1.0);

    const Symbol bad(SeparableSymbol{SymbolFactor::constant(-1.0), SymbolFactor::abs_power(2.0), 0.0, 2.0});
    CHECK_THROWS_AS(check_linear_smoothing(bad, set, 4.0, 2.0, dec()), PreconditionError);
}

TEST_CASE("remainder scaling in T", "[verify]") {
    const auto set = mixed_test_set(g, 5, 4);
    const std::vector<double> Ts = {0.25, 0.125, 0.0625};
    const auto cst = check_remainder_T_scaling(constant_symbol(2.0), set, Ts, dec());
    CHECK(cst.pass);
    CHECK(cst.ratios.max == 0.0);

    const auto sep = check_remainder_T_scaling(confining_symbol(), set, Ts, dec());
    CHECK(sep.pass);
    CHECK(sep.fit->slope > 0.05);

    const auto sm = check_remainder_T_scaling(catalog_symbol("modulated_diffusion_drift"), set, Ts, dec());
    CHECK(sm.pass);
    CHECK(sm.fit->slope > 0.05);
    CHECK_THROWS_AS(check_remainder_T_scaling(confining_symbol(), set, {0.25, 0.125}, dec()), DomainError);
}

TEST_CASE("three-offset decay", "[verify]") {
    const auto rep = check_triple_decay(catalog_symbol("modulated_diffusion_drift"), fam);
    CHECK(rep.pass);
    CHECK(rep.params.at("baseline") > 0.0);
    for (const char* axis : {"m-h", "n-l", "h-k"}) {
        INFO(axis);
        const auto& v = rep.series.at(axis);
        CHECK(v[0] > v[1]);
        CHECK(v[1] > v[2]);
        CHECK(rep.axis_fits.at(axis).slope <= -2.0);
    }
    CHECK_THROWS_AS(check_triple_decay(catalog_symbol("complex_transport"), build_ud_family(2)), PreconditionError);
}
