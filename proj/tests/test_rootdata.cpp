#include <catch2/catch_amalgamated.hpp>

#include "qsp/rootdata.hpp"

#include <random>

using namespace qsp;

namespace {

Word random_word(std::mt19937& rng, int rank, int len) {
    Word w;
    for (int k = 0; k < len; ++k) w.push_back(static_cast<int>(rng() % static_cast<unsigned>(rank)));
    return w;
}

IVec random_ivec(std::mt19937& rng, int n, int span = 5) {
    std::uniform_int_distribution<int> d(-span, span);
    IVec v(static_cast<size_t>(n));
    for (auto& c : v) c = d(rng);
    return v;
}

}  // namespace

TEST_CASE("rank-two systems have the expected roots and symmetrizers", "[rootdata]") {
    RootSystem a2 = build_root_system(cartan_type('A', 2));
    CHECK(a2.rank == 2);
    CHECK(a2.eps == std::vector<long>{1, 1});
    REQUIRE(a2.num_positive() == 3);
    CHECK(a2.positive[0] == IVec{1, 0});
    CHECK(a2.positive[1] == IVec{0, 1});
    CHECK(a2.positive[2] == IVec{1, 1});

    RootSystem b2 = build_root_system(cartan_type('B', 2));
    CHECK(b2.eps == std::vector<long>{2, 1});
    CHECK(b2.num_positive() == 4);
    CHECK(b2.is_positive_root(IVec{1, 2}));
    CHECK(!b2.is_positive_root(IVec{2, 1}));

    RootSystem c2 = build_root_system(cartan_type('C', 2));
    CHECK(c2.eps == std::vector<long>{1, 2});

    CHECK(build_root_system(cartan_type('A', 3)).num_positive() == 6);
    CHECK(build_root_system(cartan_type('A', 4)).num_positive() == 10);
    CHECK(build_root_system(cartan_type('D', 4)).num_positive() == 12);
    CHECK(build_root_system(direct_sum(cartan_type('A', 1), cartan_type('A', 1))).num_positive() == 2);
}

TEST_CASE("degenerate Cartan matrices are rejected", "[rootdata]") {
    CHECK_THROWS_AS(build_root_system(IntMat{{2, -2}, {-2, 2}}), DomainError);
    CHECK_THROWS_AS(build_root_system(IntMat{{2, -1}, {0, 2}}), DomainError);
    CHECK_THROWS_AS(build_root_system(IntMat{{1}}), DomainError);
    CHECK_THROWS_AS(build_root_system(IntMat{{2, 1}, {1, 2}}), DomainError);
}

TEST_CASE("canonical longest words and their convex orders", "[rootdata]") {
    RootSystem a2 = build_root_system(cartan_type('A', 2));
    Word w0 = a2.longest_word();
    CHECK(w0 == Word{0, 1, 0});
    auto betas = a2.convex_order(w0);
    REQUIRE(betas.size() == 3);
    CHECK(betas[0] == IVec{1, 0});
    CHECK(betas[1] == IVec{1, 1});
    CHECK(betas[2] == IVec{0, 1});

    auto alt = a2.convex_order(Word{1, 0, 1});
    CHECK(alt[0] == IVec{0, 1});
    CHECK(alt[1] == IVec{1, 1});
    CHECK(alt[2] == IVec{1, 0});

    RootSystem b2 = build_root_system(cartan_type('B', 2));
    Word w0b = b2.longest_word();
    CHECK(w0b.size() == 4);
    CHECK(b2.root_matrix(w0b) == IntMat{{-1, 0}, {0, -1}});

    RootSystem a3 = build_root_system(cartan_type('A', 3));
    Word w0c = a3.longest_word();
    CHECK(w0c.size() == 6);
    IntMat r = a3.root_matrix(w0c);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) CHECK(r.at(i, j) == (i == 2 - j ? -1 : 0));
}

TEST_CASE("every reduced word of the longest element enumerates all positive roots",
          "[rootdata]") {
    for (char t : {'A', 'B'}) {
        RootSystem rs = build_root_system(cartan_type(t, t == 'A' ? 3 : 2));
        Word w0 = rs.longest_word();
        REQUIRE(rs.is_reduced(w0));
        auto betas = rs.convex_order(w0);
        CHECK(static_cast<int>(betas.size()) == rs.num_positive());
        for (const auto& b : betas) CHECK(rs.is_positive_root(b));
    }
}

TEST_CASE("reducedness detection and canonical rewriting", "[rootdata]") {
    RootSystem a2 = build_root_system(cartan_type('A', 2));
    CHECK(!a2.is_reduced(Word{0, 0}));
    CHECK(a2.is_reduced(Word{0, 1, 0}));
    CHECK(!a2.is_reduced(Word{0, 1, 0, 1}));
    CHECK_THROWS_AS(a2.convex_order(Word{0, 0}), DomainError);

    RootSystem a3 = build_root_system(cartan_type('A', 3));
    std::mt19937 rng(4242);
    for (int round = 0; round < 60; ++round) {
        Word w = random_word(rng, 3, static_cast<int>(rng() % 9));
        IntMat m = a3.root_matrix(w);
        Word c = a3.canonical_word(m);
        CHECK(a3.root_matrix(c) == m);
        CHECK(a3.is_reduced(c));
        CHECK(c.size() <= w.size());
    }
}

TEST_CASE("braid and involution relations hold for the generator matrices", "[rootdata]") {
    RootSystem a2 = build_root_system(cartan_type('A', 2));
    CHECK(a2.root_matrix(Word{0, 1, 0}) == a2.root_matrix(Word{1, 0, 1}));
    CHECK(a2.weight_matrix(Word{0, 1, 0}) == a2.weight_matrix(Word{1, 0, 1}));

    RootSystem b2 = build_root_system(cartan_type('B', 2));
    CHECK(b2.root_matrix(Word{0, 1, 0, 1}) == b2.root_matrix(Word{1, 0, 1, 0}));

    RootSystem aa = build_root_system(direct_sum(cartan_type('A', 1), cartan_type('A', 1)));
    CHECK(aa.root_matrix(Word{0, 1}) == aa.root_matrix(Word{1, 0}));
    CHECK(aa.root_matrix(aa.longest_word()) == IntMat{{-1, 0}, {0, -1}});

    std::mt19937 rng(7);
    RootSystem a3 = build_root_system(cartan_type('A', 3));
    for (int i = 0; i < 3; ++i)
        for (int round = 0; round < 10; ++round) {
            IVec beta = random_ivec(rng, 3);
            CHECK(a3.reflect_root(i, a3.reflect_root(i, beta)) == beta);
            RVec mu{rat(rng() % 7, 1 + rng() % 3), rat(rng() % 7, 1), rat(rng() % 5, 2)};
            CHECK(a3.reflect_weight(i, a3.reflect_weight(i, mu)) == mu);
        }
}

TEST_CASE("pairings are integral on roots, invariant, and normalized on weights",
          "[rootdata]") {
    RootSystem a2 = build_root_system(cartan_type('A', 2));
    CHECK(a2.root_pair(IVec{1, 0}, IVec{1, 0}) == 2);
    CHECK(a2.root_pair(IVec{1, 0}, IVec{0, 1}) == -1);
    CHECK(a2.weight_pair(RVec{Rat(1), Rat(0)}, RVec{Rat(1), Rat(0)}) == rat(2, 3));
    CHECK(a2.weight_pair(RVec{Rat(1), Rat(0)}, RVec{Rat(0), Rat(1)}) == rat(1, 3));

    RootSystem b2 = build_root_system(cartan_type('B', 2));
    CHECK(b2.root_pair(IVec{1, 0}, IVec{1, 0}) == 4);
    CHECK(b2.root_pair(IVec{0, 1}, IVec{0, 1}) == 2);
    CHECK(b2.root_pair(IVec{1, 0}, IVec{0, 1}) == -2);

    for (char t : {'A', 'B'}) {
        RootSystem rs = build_root_system(cartan_type(t, t == 'A' ? 3 : 2));
        for (int i = 0; i < rs.rank; ++i)
            for (int j = 0; j < rs.rank; ++j) {
                RVec wi(static_cast<size_t>(rs.rank), Rat(0));
                wi[static_cast<size_t>(i)] = 1;
                IVec aj = rs.root_to_weight(rs.simple_root(j));
                RVec ajr(aj.begin(), aj.end());
                CHECK(rs.weight_pair(wi, ajr) == (i == j ? Rat(rs.eps[static_cast<size_t>(j)]) : Rat(0)));
            }
    }

    std::mt19937 rng(99);
    RootSystem a3 = build_root_system(cartan_type('A', 3));
    for (int round = 0; round < 40; ++round) {
        IVec b = a3.positive[rng() % a3.positive.size()];
        IVec g = a3.positive[rng() % a3.positive.size()];
        IVec bw = a3.root_to_weight(b), gw = a3.root_to_weight(g);
        CHECK(a3.weight_pair(RVec(bw.begin(), bw.end()), RVec(gw.begin(), gw.end())) ==
              Rat(a3.root_pair(b, g)));

        Word w = random_word(rng, 3, 5);
        IVec mu0 = random_ivec(rng, 3), nu0 = random_ivec(rng, 3);
        RVec mu(mu0.begin(), mu0.end()), nu(nu0.begin(), nu0.end());
        CHECK(a3.weight_pair(a3.act_weight(w, mu), a3.act_weight(w, nu)) == a3.weight_pair(mu, nu));
        IVec lhs = a3.root_to_weight(a3.act_root(w, b));
        std::vector<Int> rhs = a3.weight_matrix(w).apply(a3.root_to_weight(b));
        CHECK(lhs == rhs);
    }
}