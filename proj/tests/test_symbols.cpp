#include <catch2/catch_amalgamated.hpp>

#include "modspace/families.hpp"
#include "modspace/symbols.hpp"

using namespace modspace;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const TorusGrid g(1, 32, 256);

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs(const GridFunction& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i]));
    return m;
}

GridFunction gaussian(double width = 2.0) {
    return GridFunction::sample(g, [width](std::span<const double> x) { return cplx{std::exp(-x[0] * x[0] / width), 0.0}; });
}

// grid mode closest to e^{i w x}
GridFunction mode(int k) {
    return GridFunction::sample(g, [k](std::span<const double> x) { return std::exp(cplx{0.0, g.dxi() * k * x[0]}); });
}

}  // namespace

TEST_CASE("symbol values at lattice points", "[symbols]") {
    const Symbol A = confining_symbol();
    CHECK(symbol_at_lattice(A, LatticeIndex{0}, LatticeIndex{0}) == cplx{1.0, 0.0});
    CHECK_THAT(symbol_at_lattice(A, LatticeIndex{1}, LatticeIndex{2}).real(), WithinAbs(6.0, 1e-14));
    const Symbol c = constant_symbol({2.5, -1.0});
    CHECK(symbol_at_lattice(c, LatticeIndex{7}, LatticeIndex{-3}) == cplx{2.5, -1.0});
}

TEST_CASE("hypothesis checks on separable symbols", "[symbols]") {
    const auto rep = verify_hypotheses(confining_symbol(), 1);
    CHECK(rep.passed());
    for (const char* id : {"H2", "H3", "H4a", "H4b"}) CHECK(rep.find(id)->status == HypothesisStatus::pass);
    // <x>^2 >= |x|^2 with equality only in the limit
    CHECK(rep.c_a >= 1.0);
    CHECK(rep.c_a < 1.2);
    CHECK_THAT(rep.c_b, WithinRel(1.0, 1e-9));
    CHECK_FALSE(rep.note.empty());

    const auto heat = verify_hypotheses(fractional_heat_symbol(1.5), 1);
    CHECK(heat.passed());
    CHECK(heat.find("H2")->status == HypothesisStatus::waived);
    CHECK(heat.find("H4a")->status == HypothesisStatus::waived);

    // a(x) = -1 violates the lower bound
    const Symbol bad(SeparableSymbol{SymbolFactor::constant(-1.0), SymbolFactor::abs_power(2.0), 0.0, 2.0});
    const auto r = verify_hypotheses(bad, 1);
    CHECK_FALSE(r.passed());
    CHECK(r.find("H4a")->status == HypothesisStatus::fail);

    const Symbol neg(SeparableSymbol{SymbolFactor::zero(), SymbolFactor::abs_power(2.0, -1.0), 0.0, 2.0});
    CHECK(verify_hypotheses(neg, 1).find("H4b")->status == HypothesisStatus::fail);
}

TEST_CASE("hypothesis checks on the S^M catalog", "[symbols]") {
    for (const char* name : {"modulated_diffusion_drift", "complex_transport"}) {
        const auto rep = verify_hypotheses(catalog_symbol(name), 1);
        INFO(name);
        CHECK(rep.passed());
        CHECK(rep.c_b > 0.0);
    }
    CHECK_THROWS_AS(catalog_symbol("nope"), ConfigError);
}

TEST_CASE("separable application", "[symbols]") {
    // eigenfunction of b(D) with a switched off
    const Symbol heat = fractional_heat_symbol(2.0);
    const int k = 10;
    const double xi = g.dxi() * k;
    CHECK(max_abs_diff(apply_symbol(heat, mode(k)), xi * xi * mode(k)) < 1e-10);

    // <x>^2 + |xi|^2 on e^{-x^2/2} has eigenvalue 2
    const GridFunction u = gaussian();
    CHECK(max_abs_diff(apply_symbol(confining_symbol(), u), 2.0 * u) < 1e-10);

    // sum of the two one-factor applications
    const Symbol a_only(SeparableSymbol{SymbolFactor::bracket_power(2.0), SymbolFactor::zero(), 2.0, 2.0});
    CHECK(max_abs_diff(apply_symbol(confining_symbol(), u), apply_symbol(a_only, u) + apply_symbol(heat, u)) < 1e-12);
}

TEST_CASE("quadrature path reproduces the separable path", "[symbols]") {
    const Symbol A = confining_symbol();
    const Symbol G = as_general_symbol(A);
    const auto fs = mixed_test_set(g, 5, 4);
    for (const auto& f : fs) {
        const GridFunction sep = apply_symbol(A, f);
        CHECK(max_abs_diff(sep, apply_symbol(G, f)) < 1e-8 * std::max(1.0, max_abs(sep)));
    }
    const TorusGrid big(1, 32, 2048);
    CHECK_THROWS_AS(quadrature_apply(G.function(), GridFunction(big)), PreconditionError);
    CHECK_THROWS_AS(quadrature_apply(G.function(), GridFunction(TorusGrid(2, 8, 16))), PreconditionError);
}

TEST_CASE("application is linear and conjugation-compatible", "[symbols]") {
    const Symbol A = catalog_symbol("complex_transport");
    const auto fs = mixed_test_set(g, 9, 2);
    const cplx c{0.3, -1.2};
    const GridFunction lhs = apply_symbol(A, fs[0] + c * fs[1]);
    const GridFunction rhs = apply_symbol(A, fs[0]) + c * apply_symbol(A, fs[1]);
    CHECK(max_abs_diff(lhs, rhs) < 1e-10 * max_abs(lhs));

    // conj(A)(x, -xi) applied to conj(f) gives conj(A f)
    SmSymbol conj_sym{"conj", [](std::span<const double> x, std::span<const double> xi) {
                          const double mxi[1] = {-xi[0]};
                          return std::conj(catalog_symbol("complex_transport").as_general().A(x, mxi));
                      }, 2.0, 2.0};
    const Symbol C(conj_sym);
    // the grid omits +N/2, so test on a function without a Nyquist component
    const GridFunction f = fs[0];
    CHECK(max_abs_diff(apply_symbol(C, f.conj()), apply_symbol(A, f).conj()) < 1e-10 * max_abs(apply_symbol(A, f)));
}

TEST_CASE("remainder operator", "[symbols]") {
    const WindowFamily fam = build_ud_family(1);
    const Decomposer dec(g, fam, TruncatedLattice(1, 8), TruncatedLattice(1, 15, LatticeRole::physical));
    const GridFunction u = mixed_test_set(g, 3, 1)[0];

    SECTION("constant symbol has no remainder") {
        const Symbol c = constant_symbol(3.0);
        CHECK(max_abs(remainder_apply(c, u, LatticeIndex{2}, LatticeIndex{-1}, dec)) == 0.0);
    }
    SECTION("localization identity") {
        for (const Symbol& A : {confining_symbol(), catalog_symbol("modulated_diffusion_drift")}) {
            const GridFunction Au = apply_symbol(A, u);
            for (int m : {-3, 0, 2})
                for (int n : {-2, 0, 1, 5}) {
                    const LatticeIndex mi{m}, ni{n};
                    const GridFunction lhs = dec.box_phys_freq(Au, mi, ni);
                    const GridFunction rhs =
                        symbol_at_lattice(A, mi, ni) * dec.box_phys_freq(u, mi, ni) + remainder_apply(A, u, mi, ni, dec);
                    CHECK(max_abs_diff(lhs, rhs) < 1e-10 * std::max(1.0, max_abs(lhs)));
                }
        }
    }
    SECTION("separable split agrees with the quadrature path") {
        const Symbol A = confining_symbol();
        const Symbol G = as_general_symbol(A);
        for (int m : {-1, 0, 3})
            for (int n : {-1, 0, 2}) {
                const GridFunction r1 = remainder_apply(A, u, LatticeIndex{m}, LatticeIndex{n}, dec);
                const GridFunction r2 = remainder_apply(G, u, LatticeIndex{m}, LatticeIndex{n}, dec);
                CHECK(max_abs_diff(r1, r2) < 1e-8 * std::max(1.0, max_abs(r1)));
            }
    }
}

TEST_CASE("nonlinearity evaluation", "[symbols]") {
    const GridFunction two = GridFunction::constant(g, 2.0);
    const GridFunction F = eval_nonlinearity(cubic_damping(1), two);
    for (std::size_t i = 0; i < F.size(); i += 17) CHECK_THAT(F[i].real(), WithinAbs(-8.0, 1e-12));

    // (d_x u) u on a grid mode doubles the frequency
    const int k = 5;
    const double xi = g.dxi() * k;
    const GridFunction dp = eval_nonlinearity(derivative_product(1), mode(k));
    CHECK(max_abs_diff(dp, cplx{0.0, xi} * mode(2 * k)) < 1e-12);

    // homogeneity: F(c u) = c^3 F(u) for a real cubic monomial
    const GridFunction u = gaussian();
    CHECK(max_abs_diff(eval_nonlinearity(cubic_damping(1), 0.5 * u), 0.125 * eval_nonlinearity(cubic_damping(1), u)) < 1e-14);

    // degree and derivative guards
    NonlinearitySpec lin;
    lin.terms.push_back(Monomial{1.0, {{MultiIndex{0}, false}}});
    CHECK_THROWS_AS(eval_nonlinearity(lin, u), DomainError);
    NonlinearitySpec deep = derivative_product(1);
    deep.terms[0].factors[0].alpha = MultiIndex{3};
    CHECK_THROWS_AS(eval_nonlinearity(deep, u), DomainError);
    CHECK(derivative_product(1).kappa() == 1);
    CHECK(power_nonlinearity(1, 5, -1.0).degree() == 5);
}

TEST_CASE("dissipativity check", "[symbols]") {
    const auto samples = mixed_test_set(g, 11, 8);
    CHECK(dissipativity_check(cubic_damping(1), samples).pass);
    CHECK(dissipativity_check(power_nonlinearity(1, 5, -1.0), samples).pass);
    const auto bad = dissipativity_check(power_nonlinearity(1, 3, 1.0), samples);
    CHECK_FALSE(bad.pass);
    // Re(F(u), u) = -int |u|^4 for the cubic damping
    const GridFunction u = gaussian();
    const double expected = -std::sqrt(M_PI / 2.0);  // int e^{-2x^2} dx
    CHECK_THAT(dissipativity_check(cubic_damping(1), {u}).values[0], WithinRel(expected, 1e-10));
}
