#include <catch2/catch_amalgamated.hpp>

#include "modspace/evolve.hpp"
#include "modspace/families.hpp"

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

GridFunction gaussian(double amp = 1.0) {
    return GridFunction::sample(g, [amp](std::span<const double> x) { return cplx{amp * std::exp(-0.5 * x[0] * x[0]), 0.0}; });
}

// closed-form heat flow of e^{-x^2/2}
GridFunction heat_exact(double t) {
    return GridFunction::sample(g, [t](std::span<const double> x) {
        const double w = 1.0 + 2.0 * t;
        return cplx{std::exp(-0.5 * x[0] * x[0] / w) / std::sqrt(w), 0.0};
    });
}

SolveSetup heat_setup(double T = 0.25, int J = 64) {
    SolveSetup s;
    s.symbol = fractional_heat_symbol(2.0);
    s.time = TimeGrid(T, J);
    s.norm.gamma = 4.0;
    return s;
}

}  // namespace

TEST_CASE("semigroup factors", "[evolve]") {
    const Symbol A = confining_symbol();
    const LatticeIndex z{0};
    CHECK_THAT(semigroup_factor(A, z, z, 1.0).real(), WithinAbs(0.3678794411714423, 1e-15));
    CHECK(semigroup_factor(A, LatticeIndex{3}, LatticeIndex{-2}, 0.0) == cplx{1.0, 0.0});
    const auto a = semigroup_factor(A, LatticeIndex{1}, LatticeIndex{2}, 0.3);
    const auto b = semigroup_factor(A, LatticeIndex{1}, LatticeIndex{2}, 0.45);
    CHECK(std::abs(a * b - semigroup_factor(A, LatticeIndex{1}, LatticeIndex{2}, 0.75)) < 1e-12);
    double last = 2.0;
    for (int n = 0; n <= 6; ++n) {
        const double v = std::abs(semigroup_factor(A, z, LatticeIndex{n}, 0.2));
        CHECK(v < last);
        last = v;
    }
    CHECK_THROWS_AS(semigroup_factor(A, z, z, -1.0), DomainError);
}

TEST_CASE("phi functions", "[evolve]") {
    CHECK(phi1(0.0) == cplx{1.0, 0.0});
    CHECK_THAT(phi1(-1.0).real(), WithinAbs(1.0 - std::exp(-1.0), 1e-15));
    // series against the cancellation-free direct formula
    const double z = -1e-6;
    CHECK_THAT(phi1(z).real(), WithinRel(std::expm1(z) / z, 1e-12));
    CHECK_THAT(phi2(0.0).real(), WithinAbs(0.5, 1e-16));
    for (double x : {-1e-4, -0.5, -0.99, -1.01, -3.0, -40.0}) {
        const double direct = (std::exp(x) - 1.0 - x) / (x * x);
        CHECK_THAT(phi2(x).real(), WithinRel(direct, std::abs(x) < 1e-2 ? 1e-6 : 1e-12));
    }
    // complex argument continuity at the series switch
    CHECK(std::abs(phi2(cplx{0.0, 0.999}) - phi2(cplx{0.0, 1.001})) < 1e-3);
}

TEST_CASE("localized Duhamel operator", "[evolve]") {
    const TimeGrid tg(1.0, 16);
    const GridFunction c = GridFunction::constant(g, 2.0);
    const Trajectory cst = Trajectory::constant(tg, c);
    const double lambda = 3.0;
    const GridFunction r = apply_A_op(lambda, cst, 16);
    CHECK_THAT(r[7].real(), WithinRel(2.0 * (1.0 - std::exp(-3.0)) / 3.0, 1e-12));
    CHECK_THAT(apply_A_op(0.0, cst, 8)[3].real(), WithinRel(2.0 * 0.5, 1e-12));
    CHECK(apply_A_op(lambda, cst, 0)[0] == cplx{});
    CHECK(r[0].real() > 0.0);
    CHECK(r[0].real() <= 2.0 * 1.0);
    CHECK_THROWS_AS(apply_A_op(lambda, cst, 17), DomainError);

    // g(s) = e^{-s} against the analytic convolution (e^{-s} - e^{-3s}) / 2 at t = 1
    const double exact = 0.5 * (std::exp(-1.0) - std::exp(-3.0));
    std::vector<double> errs;
    for (int J : {8, 16, 32}) {
        const TimeGrid t2(1.0, J);
        std::vector<GridFunction> st;
        for (int j = 0; j <= J; ++j) st.push_back(GridFunction::constant(g, std::exp(-t2.node(j))));
        errs.push_back(std::abs(apply_A_op(lambda, Trajectory(t2, st), J)[0].real() - exact));
    }
    CHECK(errs[1] / errs[0] < 0.3);
    CHECK(errs[2] / errs[1] < 0.3);
    CHECK(errs[2] / errs[1] > 0.2);
}

TEST_CASE("Picard solver on the heat flow", "[evolve]") {
    const auto res = picard_solve(gaussian(), heat_setup(), dec());
    CHECK(res.report.converged);
    CHECK(res.report.iterations <= 3);
    CHECK(res.report.tail_mass < 1e-8);
    CHECK(relative_l2(res.trajectory.back(), heat_exact(0.25)) < 1e-3);
    INFO("rel error " << relative_l2(res.trajectory.back(), heat_exact(0.25)));
    CHECK(relative_l2(res.trajectory[32], heat_exact(0.125)) < 1e-3);
}

TEST_CASE("explicit sweep converges to the same trajectory", "[evolve]") {
    SolveSetup s = heat_setup(0.125, 32);
    s.options.semi_implicit = false;
    const auto ex = picard_solve(gaussian(), s, dec());
    s.options.semi_implicit = true;
    const auto si = picard_solve(gaussian(), s, dec());
    CHECK(ex.report.converged);
    CHECK(ex.report.iterations > si.report.iterations);
    CHECK(relative_l2(ex.trajectory.back(), si.trajectory.back()) < 1e-8);
}

TEST_CASE("zero data gives the zero trajectory", "[evolve]") {
    SolveSetup s = heat_setup();
    s.symbol = confining_symbol();
    s.nonlinearity = cubic_damping(1);
    const auto res = picard_solve(GridFunction(g), s, dec());
    CHECK(res.report.converged);
    CHECK(res.report.iterations == 1);
    for (const auto& u : res.trajectory.states()) CHECK(lp_norm(u, 2) == 0.0);
}

TEST_CASE("solver preconditions", "[evolve]") {
    SolveSetup s = heat_setup();
    s.symbol = Symbol(SeparableSymbol{SymbolFactor::constant(-1.0), SymbolFactor::abs_power(2.0), 0.0, 2.0});
    CHECK_THROWS_AS(picard_solve(gaussian(), s, dec()), PreconditionError);

    // data far outside the retained frequency cubes
    const GridFunction rough = GridFunction::sample(g, [](std::span<const double> x) {
        return std::exp(cplx{-0.5 * x[0] * x[0], 12.0 * x[0]});
    });
    CHECK_THROWS_AS(picard_solve(rough, heat_setup(), dec()), PreconditionError);

    SolveSetup d = heat_setup();
    d.nonlinearity = derivative_product(1);
    d.symbol = fractional_heat_symbol(0.5);
    CHECK_THROWS_AS(picard_solve(gaussian(), d, dec()), PreconditionError);
}

TEST_CASE("cubic damping with confinement: contraction and oracle agreement", "[evolve]") {
    SolveSetup s = heat_setup();
    s.symbol = confining_symbol();
    s.nonlinearity = cubic_damping(1);
    const GridFunction base = gaussian();
    const double m = modulation_norm(base, 0.0, 2.0, 1.0, dec().family(), dec().freq());
    const GridFunction u0 = (0.1 / m) * base;
    const auto autoT = solve_auto_T(u0, s, dec());
    const auto& rep = autoT.result.report;
    CHECK(rep.converged);
    REQUIRE_FALSE(rep.contraction_factors.empty());
    for (double f : rep.contraction_factors) CHECK(f <= 0.5);

    const Trajectory ref = splitting_oracle(u0, s.symbol, s.nonlinearity, TimeGrid(rep.T, rep.J));
    CHECK(relative_l2(autoT.result.trajectory.back(), ref.back()) < 1e-3);
}

TEST_CASE("explicit scheme with the cubic term", "[evolve]") {
    SolveSetup s = heat_setup(0.125, 32);
    s.symbol = confining_symbol();
    s.nonlinearity = cubic_damping(1);
    s.options.semi_implicit = false;
    const auto res = picard_solve(0.5 * gaussian(), s, dec());
    CHECK(res.report.converged);
    const Trajectory ref = splitting_oracle(0.5 * gaussian(), s.symbol, s.nonlinearity, s.time);
    CHECK(relative_l2(res.trajectory.back(), ref.back()) < 1e-3);
}

TEST_CASE("splitting oracle", "[evolve]") {
    const NonlinearitySpec none;
    const Trajectory heat = splitting_oracle(gaussian(), fractional_heat_symbol(2.0), none, TimeGrid(0.5, 20));
    CHECK_THAT(lp_norm(heat.back(), 2), WithinAbs(std::sqrt(std::sqrt(M_PI) / std::sqrt(2.0)), 1e-6));

    const Symbol a_only(SeparableSymbol{SymbolFactor::bracket_power(2.0), SymbolFactor::zero(), 2.0, 2.0});
    const Trajectory conf = splitting_oracle(gaussian(), a_only, none, TimeGrid(0.4, 8));
    const GridFunction exact = GridFunction::sample(g, [](std::span<const double> x) {
        return cplx{std::exp(-0.4 * (1.0 + x[0] * x[0]) - 0.5 * x[0] * x[0]), 0.0};
    });
    CHECK(relative_l2(conf.back(), exact) < 1e-13);

    // self-convergence under step halving
    const Symbol A = confining_symbol();
    const Trajectory fine = splitting_oracle(gaussian(), A, cubic_damping(1), TimeGrid(0.25, 256));
    std::vector<double> errs;
    for (int J : {8, 16, 32}) errs.push_back(relative_l2(splitting_oracle(gaussian(), A, cubic_damping(1), TimeGrid(0.25, J)).back(), fine.back()));
    const double order = std::log2(errs[1] / errs[2]);
    CHECK(order > 1.8);
    CHECK(order < 2.2);
    CHECK_THROWS_AS(splitting_oracle(gaussian(), catalog_symbol("complex_transport"), none, TimeGrid(0.1, 4)), PreconditionError);
}

TEST_CASE("energy ledger", "[evolve]") {
    const auto heat = picard_solve(gaussian(), heat_setup(), dec());
    const auto led = energy_ledger(heat.trajectory, fractional_heat_symbol(2.0));
    CHECK(led.pass);
    CHECK(led.monotone_l2);
    for (std::size_t j = 1; j < led.rows.size(); ++j) CHECK(led.rows[j].half_l2_sq < led.rows[j - 1].half_l2_sq);
    // heat flow: equality up to quadrature error
    CHECK_THAT(led.rows.back().half_l2_sq + led.rows.back().cumulative_dissipation, WithinRel(led.rows[0].half_l2_sq, 1e-4));

    SolveSetup s = heat_setup(0.25, 32);
    s.symbol = confining_symbol();
    s.nonlinearity = cubic_damping(1);
    const auto cont = solve_continued(0.5 * gaussian(), s, dec(), 0.5);
    CHECK(cont.segments.size() == 2);
    CHECK(cont.trajectory.size() == 65);
    CHECK(energy_ledger(cont.trajectory, s.symbol).pass);
    CHECK_THROWS_AS(solve_continued(gaussian(), s, dec(), 0.6), DomainError);

    // growth violates the ledger
    std::vector<GridFunction> grow;
    const TimeGrid tg(1.0, 4);
    for (int j = 0; j <= 4; ++j) grow.push_back((1.0 + 0.1 * j) * gaussian());
    CHECK_FALSE(energy_ledger(Trajectory(tg, grow), s.symbol).pass);
}

TEST_CASE("PDE residual", "[evolve]") {
    NormParams np;
    np.p = 2.0;
    np.q = 1.0;
    const NonlinearitySpec none;
    // zero trajectory
    const Trajectory zero = Trajectory::constant(TimeGrid(0.25, 8), GridFunction(g));
    CHECK(pde_residual(zero, confining_symbol(), cubic_damping(1), np, dec()).value == 0.0);

    // exact solution e^{-2t} u0 of the confined flow: residual shrinks like dt^2
    std::vector<double> vals;
    for (int J : {16, 32}) {
        const TimeGrid tg(0.25, J);
        std::vector<GridFunction> st;
        for (int j = 0; j <= J; ++j) st.push_back(std::exp(-2.0 * tg.node(j)) * gaussian());
        vals.push_back(pde_residual(Trajectory(tg, st), confining_symbol(), none, np, dec()).value);
    }
    CHECK(vals[1] / vals[0] < 0.3);
    CHECK(vals[1] / vals[0] > 0.2);
    CHECK_THROWS_AS(pde_residual(Trajectory::constant(TimeGrid(1.0, 3), gaussian()), confining_symbol(), none, np, dec()), DomainError);
}

TEST_CASE("parameter recipes", "[evolve]") {
    ParameterInput in;
    in.d = 1;
    in.q = 1.0;
    in.kappa = 1.0;
    in.sigma2 = 2.0;
    in.K = 3;
    const auto r = admissible_parameters(in);
    CHECK(r.gamma_K == 4.0);
    CHECK(r.gamma == 4.0);
    CHECK(r.s_threshold == 0.5);
    CHECK(r.global);
    // delta(3) = min(1 - 3/4, 1 - 2/4 - 1/2) = 0
    CHECK_THAT(r.delta, WithinAbs(0.0, 1e-15));

    ParameterInput pw = in;
    pw.regime = Regime::power;
    pw.q = 2.0;
    pw.kappa = 0.0;
    // 1 - 1/(2*2) = 3/4, (K-1)/(3/4) = 8/3 < 3
    CHECK(admissible_parameters(pw).gamma_qK == 3.0);
    pw.K = 7;
    CHECK_FALSE(admissible_parameters(pw).global);

    ParameterInput sm = in;
    sm.regime = Regime::symbol_class;
    sm.gamma = 4.0;
    CHECK_THROWS_AS(admissible_parameters(sm), DomainError);
    sm.gamma = 4.5;
    CHECK(admissible_parameters(sm).gamma == 4.5);

    ParameterInput bad = in;
    bad.kappa = 3.0;
    CHECK_THROWS_AS(admissible_parameters(bad), DomainError);
}
