#include <catch2/catch_amalgamated.hpp>

#include "modspace/lattice.hpp"
#include "modspace/rng.hpp"

using namespace modspace;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("bracket weight matches the direct formula", "[lattice]") {
    CHECK(bracket_weight(LatticeIndex{0, 0}) == 1.0);
    CHECK_THAT(bracket_weight(LatticeIndex{3, 4}), WithinRel(std::sqrt(26.0), 1e-15));
    CHECK_THAT(bracket_weight(LatticeIndex{1}), WithinRel(std::sqrt(2.0), 1e-15));
}

TEST_CASE("bracket weight lies between max(1,|n|) and 1+|n|", "[lattice]") {
    for (const auto& n : enumerate(TruncatedLattice(2, 4))) {
        const double abs_n = std::sqrt(n.squared_norm());
        CHECK(bracket_weight(n) >= std::max(1.0, abs_n));
        CHECK(bracket_weight(n) <= 1.0 + abs_n);
    }
}

TEST_CASE("enumeration is lexicographic with (2R+1)^d entries", "[lattice]") {
    const auto one = enumerate(TruncatedLattice(1, 1));
    REQUIRE(one.size() == 3);
    CHECK(one[0] == LatticeIndex{-1});
    CHECK(one[1] == LatticeIndex{0});
    CHECK(one[2] == LatticeIndex{1});
    const auto origin = enumerate(TruncatedLattice(2, 0));
    REQUIRE(origin.size() == 1);
    CHECK(origin[0] == LatticeIndex{0, 0});
    CHECK(enumerate(TruncatedLattice(1, 2)).size() == 5);

    const TruncatedLattice lat(2, 2);
    const auto all = enumerate(lat);
    CHECK(all.size() == 25);
    CHECK(std::is_sorted(all.begin(), all.end()));
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(lat.position(all[i]) == i);
}

TEST_CASE("seq_norm worked examples", "[lattice]") {
    const TruncatedLattice phys(1, 1, LatticeRole::physical), freq(1, 2);
    SequenceArray zero(phys, freq);
    CHECK(seq_norm(zero, 1.0, 2.0, 1.0) == 0.0);

    SequenceArray single(phys, freq);
    single.set({0}, {0}, 0.7);
    for (double s : {-1.0, 0.0, 2.0})
        for (double p : {1.0, 2.0, kInf})
            for (double q : {1.0, 3.0, kInf}) CHECK_THAT(seq_norm(single, s, p, q), WithinRel(0.7, 1e-14));

    SequenceArray two(phys, freq);
    two.set({0}, {0}, 1.0);
    two.set({0}, {1}, 1.0);
    CHECK_THAT(seq_norm(two, 1.0, 2.0, 2.0), WithinRel(std::sqrt(3.0), 1e-14));
}

TEST_CASE("seq_norm rejects exponents below one", "[lattice]") {
    SequenceArray a(TruncatedLattice(1, 0), TruncatedLattice(1, 0));
    CHECK_THROWS_AS(seq_norm(a, 0.0, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(seq_norm(a, 0.0, 1.0, 0.0), DomainError);
}

TEST_CASE("seq_norm collapses to a flat l^p norm and is monotone", "[lattice]") {
    const TruncatedLattice phys(1, 3, LatticeRole::physical), freq(1, 4);
    SequenceArray a(phys, freq);
    CounterRng rng(7, "seq");
    for (std::size_t i = 0; i < phys.size(); ++i)
        for (std::size_t j = 0; j < freq.size(); ++j) a.at(i, j) = rng.uniform();
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
        double direct = 0.0;
        for (double v : a.values()) direct += std::pow(v, p);
        CHECK_THAT(seq_norm(a, 0.0, p, p), WithinRel(std::pow(direct, 1.0 / p), 1e-12));
    }
    double mx = 0.0;
    for (double v : a.values()) mx = std::max(mx, v);
    CHECK(seq_norm(a, 0.0, kInf, kInf) == mx);

    const double before = seq_norm(a, 1.0, 2.0, 1.0);
    a.at(2, 5) += 0.5;
    CHECK(seq_norm(a, 1.0, 2.0, 1.0) >= before);
}

TEST_CASE("seq_norm is homogeneous of degree one", "[lattice]") {
    const TruncatedLattice phys(1, 2, LatticeRole::physical), freq(1, 2);
    SequenceArray a(phys, freq), b(phys, freq);
    CounterRng rng(3, "hom");
    for (std::size_t k = 0; k < a.values().size(); ++k) {
        const double v = rng.uniform();
        a.at(k % phys.size(), k / phys.size()) = v;
        b.at(k % phys.size(), k / phys.size()) = 3.5 * v;
    }
    CHECK_THAT(seq_norm(b, 0.5, 2.0, 1.0), WithinRel(3.5 * seq_norm(a, 0.5, 2.0, 1.0), 1e-13));
}
