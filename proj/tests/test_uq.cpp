#include <catch2/catch_amalgamated.hpp>

#include "qsp/cyclotomic.hpp"
#include "qsp/laurent.hpp"
#include "qsp/satake.hpp"
#include "qsp/uq.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <vector>

using namespace qsp;

namespace {

using Alg = UqAlgebra<LaurentScalar>;
using Elem = UqElement<LaurentScalar>;
using WordPolyL = RewriteSystem<LaurentScalar>::WordPoly;

Alg make_alg(char series, int n) {
    return Alg(build_root_system(cartan_type(series, n)), laurent_s_power());
}

LaurentScalar q_pow(long k) { return LaurentScalar::q_power(k); }

IVec zero_mu(int rank) { return IVec(static_cast<size_t>(rank), Int(0)); }

/// Kostant partition count: number of ways to write nu as a nonnegative
/// integer combination of the positive roots. Independent of the rewrite
/// engine; plain dynamic programming over the root list.
long kostant_count(const RootSystem& rs, const IVec& nu) {
    std::map<IVec, long> table;
    table[zero_mu(rs.rank)] = 1;
    for (const IVec& beta : rs.positive) {
        std::map<IVec, long> next;
        for (const auto& [vec, cnt] : table) {
            IVec cur = vec;
            while (true) {
                next[cur] += cnt;
                bool fits = true;
                IVec bumped = ivec_add(cur, beta);
                for (int t = 0; t < rs.rank; ++t)
                    if (bumped[static_cast<size_t>(t)] > nu[static_cast<size_t>(t)]) fits = false;
                if (!fits) break;
                cur = bumped;
            }
        }
        table = std::move(next);
    }
    auto it = table.find(nu);
    return it == table.end() ? 0 : it->second;
}

/// All words with letter i appearing nu_i times.
std::vector<LetterWord> words_of_content(const IVec& nu) {
    LetterWord base;
    for (size_t i = 0; i < nu.size(); ++i)
        for (Int t = 0; t < nu[i]; ++t) base.push_back(static_cast<int>(i));
    std::sort(base.begin(), base.end());
    std::vector<LetterWord> out;
    do {
        out.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

bool contains_rule_lead(const RewriteSystem<LaurentScalar>& rw, const LetterWord& w) {
    for (const auto& rule : rw.rules()) {
        const LetterWord& lead = rule.first;
        if (lead.size() > w.size()) continue;
        for (size_t pos = 0; pos + lead.size() <= w.size(); ++pos)
            if (std::equal(lead.begin(), lead.end(), w.begin() + static_cast<long>(pos))) return true;
    }
    return false;
}

/// All exponent vectors a >= 0 with sum_t a_t beta_t = nu.
void pbw_exponents_rec(const std::vector<IVec>& betas, size_t t, IVec rem, std::vector<long>& acc,
                       std::vector<std::vector<long>>& out) {
    if (t == betas.size()) {
        bool zero = true;
        for (const Int& x : rem)
            if (x != 0) zero = false;
        if (zero) out.push_back(acc);
        return;
    }
    for (long a = 0;; ++a) {
        acc.push_back(a);
        pbw_exponents_rec(betas, t + 1, rem, acc, out);
        acc.pop_back();
        bool fits = true;
        for (size_t k = 0; k < rem.size(); ++k) {
            rem[k] -= betas[t][k];
            if (rem[k] < 0) fits = false;
        }
        if (!fits) return;
    }
}

std::vector<std::vector<long>> pbw_exponents(const std::vector<IVec>& betas, const IVec& nu) {
    std::vector<std::vector<long>> out;
    std::vector<long> acc;
    pbw_exponents_rec(betas, 0, nu, acc, out);
    return out;
}

/// Rank of a matrix of LaurentScalar entries by Gaussian elimination.
long laurent_rank(std::vector<std::vector<LaurentScalar>> m) {
    long rank = 0;
    size_t cols = m.empty() ? 0 : m[0].size();
    size_t row = 0;
    for (size_t col = 0; col < cols && row < m.size(); ++col) {
        size_t pivot = row;
        while (pivot < m.size() && m[pivot][col].is_zero()) ++pivot;
        if (pivot == m.size()) continue;
        std::swap(m[row], m[pivot]);
        LaurentScalar inv = LaurentScalar(1) / m[row][col];
        for (size_t j = col; j < cols; ++j) m[row][j] = m[row][j] * inv;
        for (size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col].is_zero()) continue;
            LaurentScalar f = m[r][col];
            for (size_t j = col; j < cols; ++j) m[r][j] = m[r][j] - f * m[row][j];
        }
        ++row;
        ++rank;
    }
    return rank;
}

Elem random_monomial_element(std::mt19937& rng, const Alg& a, int max_len) {
    std::uniform_int_distribution<int> letter(0, a.roots().rank - 1);
    std::uniform_int_distribution<int> len(0, max_len);
    std::uniform_int_distribution<long> kc(-2, 2);
    IVec mu(static_cast<size_t>(a.roots().rank), Int(0));
    for (auto& x : mu) x = kc(rng);
    LetterWord fw, ew;
    for (int t = len(rng); t > 0; --t) fw.push_back(letter(rng));
    for (int t = len(rng); t > 0; --t) ew.push_back(letter(rng));
    return a.make_element(mu, fw, ew);
}

}  // namespace

TEST_CASE("normal form straightens the mixed relations", "[uq]") {
    Alg a1 = make_alg('A', 1);

    SECTION("E F picks up the Cartan correction") {
        Elem ef = a1.multiply(a1.e_letter(0), a1.f_letter(0));
        REQUIRE(ef.terms.size() == 3);
        LaurentScalar fac = q_pow(1) - q_pow(-1);
        Elem expect = a1.multiply(a1.f_letter(0), a1.e_letter(0)) +
                      uq_scale(a1.k_simple(0, -1) - a1.k_simple(0, 1), fac);
        REQUIRE(ef == expect);
        UqMonomial fe{zero_mu(1), {0}, {0}};
        REQUIRE(ef.terms.at(fe) == LaurentScalar(1));
        UqMonomial kneg{IVec{Int(-2)}, {}, {}};
        REQUIRE(ef.terms.at(kneg) == fac);
    }

    SECTION("K twists by the pairing with the letter degree") {
        Alg a2 = make_alg('A', 2);
        IVec mu{Int(2), Int(-1)};
        for (int i = 0; i < 2; ++i) {
            Elem ke = a2.multiply(a2.k_gen(mu), a2.e_letter(i));
            Elem ek = a2.multiply(a2.e_letter(i), a2.k_gen(mu));
            long pair = a2.roots().eps[static_cast<size_t>(i)] *
                        static_cast<long>(mu[static_cast<size_t>(i)]);
            REQUIRE(ke == uq_scale(ek, q_pow(pair)));
            Elem kf = a2.multiply(a2.k_gen(mu), a2.f_letter(i));
            Elem fk = a2.multiply(a2.f_letter(i), a2.k_gen(mu));
            REQUIRE(kf == uq_scale(fk, q_pow(-pair)));
        }
    }

    SECTION("quantum Serre sums vanish in both alphabets") {
        Alg a2 = make_alg('A', 2);
        Elem se = a2.multiply(a2.power(a2.e_letter(0), 2), a2.e_letter(1)) -
                  uq_scale(a2.multiply(a2.e_letter(0), a2.multiply(a2.e_letter(1), a2.e_letter(0))),
                           a2.qint(0, 2)) +
                  a2.multiply(a2.e_letter(1), a2.power(a2.e_letter(0), 2));
        REQUIRE(se.is_zero());
        Elem sf = a2.multiply(a2.power(a2.f_letter(1), 2), a2.f_letter(0)) -
                  uq_scale(a2.multiply(a2.f_letter(1), a2.multiply(a2.f_letter(0), a2.f_letter(1))),
                           a2.qint(1, 2)) +
                  a2.multiply(a2.f_letter(0), a2.power(a2.f_letter(1), 2));
        REQUIRE(sf.is_zero());
    }

    SECTION("E and F on different nodes commute") {
        std::vector<std::pair<char, int>> specs{{'A', 2}, {'B', 2}, {'A', 3}};
        for (auto spec : specs) {
            Alg a = make_alg(spec.first, spec.second);
            for (int i = 0; i < a.roots().rank; ++i)
                for (int j = 0; j < a.roots().rank; ++j) {
                    if (i == j) continue;
                    Elem ef = a.multiply(a.e_letter(i), a.f_letter(j));
                    Elem fe = a.multiply(a.f_letter(j), a.e_letter(i));
                    REQUIRE(ef == fe);
                }
        }
    }

    SECTION("associativity on random triples") {
        std::mt19937 rng(2024);
        Alg a2 = make_alg('A', 2);
        for (int round = 0; round < 8; ++round) {
            Elem x = random_monomial_element(rng, a2, 2);
            Elem y = random_monomial_element(rng, a2, 2);
            Elem z = random_monomial_element(rng, a2, 2);
            REQUIRE(a2.multiply(a2.multiply(x, y), z) == a2.multiply(x, a2.multiply(y, z)));
        }
    }
}

TEST_CASE("rewrite systems complete to confluence", "[uq]") {
    SECTION("confluence certificates for the supported catalog types") {
        struct Case {
            char series;
            int n;
            size_t rules;
        };
        for (Case c : std::vector<Case>{{'A', 1, 0}, {'A', 2, 2}, {'B', 2, 3}, {'A', 3, 7}, {'A', 4, 15}}) {
            RewriteSystem<LaurentScalar> rw(build_root_system(cartan_type(c.series, c.n)),
                                            laurent_s_power());
            REQUIRE(rw.rules().size() == c.rules);
            IdentityCheck chk = rw.verify_confluent();
            INFO(chk.detail);
            REQUIRE(chk.pass);
        }
    }

    SECTION("every normal word is reproduced, every reducible word is rewritten") {
        RewriteSystem<LaurentScalar> rw(build_root_system(cartan_type('A', 2)), laurent_s_power());
        WordPolyL serre = rw.reduce_word({1, 0, 0});
        REQUIRE(serre.size() == 2);
        REQUIRE(serre.count({0, 1, 0}) == 1);
        REQUIRE(serre.count({0, 0, 1}) == 1);
        REQUIRE(serre.at({0, 1, 0}) == rw.qint(0, 2));
        REQUIRE(serre.at({0, 0, 1}) == LaurentScalar(0) - LaurentScalar(1));
        WordPolyL fixed = rw.reduce_word({0, 1, 0});
        REQUIRE(fixed.size() == 1);
        REQUIRE(fixed.at({0, 1, 0}) == LaurentScalar(1));
    }

    SECTION("the completion bound is enforced, never truncated") {
        REQUIRE_THROWS_AS(
            RewriteSystem<LaurentScalar>(build_root_system(cartan_type('A', 2)), laurent_s_power(), 2),
            DomainError);
    }

    SECTION("a presentation that cannot complete in time reports an error") {
        REQUIRE_THROWS_AS(RewriteSystem<LaurentScalar>(build_root_system(cartan_type('B', 3)),
                                                       laurent_s_power(), 12, 0.2),
                          DomainError);
    }

    SECTION("rank above four is rejected up front") {
        REQUIRE_THROWS_AS(Alg(build_root_system(cartan_type('A', 5)), laurent_s_power()), DomainError);
    }
}

TEST_CASE("PBW monomials form a basis in each weight space", "[uq]") {
    struct Probe {
        char series;
        int n;
        IVec nu;
    };
    std::vector<Probe> probes{{'A', 2, {Int(2), Int(2)}},
                              {'A', 2, {Int(2), Int(1)}},
                              {'B', 2, {Int(1), Int(2)}},
                              {'B', 2, {Int(2), Int(2)}},
                              {'A', 3, {Int(1), Int(1), Int(1)}}};
    for (const Probe& p : probes) {
        INFO("type " << p.series << p.n);
        Alg a(build_root_system(cartan_type(p.series, p.n)), laurent_s_power());
        const RootSystem& rs = a.roots();
        Word w0 = rs.longest_word();
        std::vector<IVec> betas = rs.convex_order(w0);

        long expected = kostant_count(rs, p.nu);
        REQUIRE(expected > 0);

        // oracle one: irreducible words of this content count the partitions
        long irreducible = 0;
        for (const LetterWord& w : words_of_content(p.nu))
            if (!contains_rule_lead(a.rewrite(), w)) ++irreducible;
        REQUIRE(irreducible == expected);

        // oracle two: expanded PBW monomials have full rank
        std::vector<std::vector<long>> exps = pbw_exponents(betas, p.nu);
        REQUIRE(static_cast<long>(exps.size()) == expected);
        std::map<UqMonomial, size_t> columns;
        std::vector<Elem> expansions;
        for (const auto& e : exps) {
            Elem x = a.pbw_f(w0, e);
            REQUIRE_FALSE(x.is_zero());
            for (const auto& [m, c] : x.terms) {
                REQUIRE(m.mu == zero_mu(rs.rank));
                REQUIRE(m.eword.empty());
                columns.emplace(m, columns.size());
            }
            expansions.push_back(std::move(x));
        }
        std::vector<std::vector<LaurentScalar>> mat(
            expansions.size(), std::vector<LaurentScalar>(columns.size(), LaurentScalar(0)));
        for (size_t r = 0; r < expansions.size(); ++r)
            for (const auto& [m, c] : expansions[r].terms) mat[r][columns.at(m)] = c;
        REQUIRE(laurent_rank(std::move(mat)) == expected);
    }
}

TEST_CASE("braid operators are symmetries of the relations", "[uq]") {
    Alg a2 = make_alg('A', 2);
    Alg b2 = make_alg('B', 2);

    SECTION("rescaled rank-one anchor") {
        for (Alg* ap : {&a2, &b2}) {
            Alg& a = *ap;
            for (int i = 0; i < a.roots().rank; ++i) {
                long e = a.roots().eps[static_cast<size_t>(i)];
                Elem te = a.braid_T(i, a.e_letter(i));
                REQUIRE(te == uq_scale(a.multiply(a.k_simple(i), a.f_letter(i)), a.qi_pow(i, 1)));
                // in rescaled generators: T_i(bE_i) = -bF_i K_i
                LaurentScalar ce = LaurentScalar::s_power(-e) * (a.qi_pow(i, -1) - a.qi_pow(i, 1));
                LaurentScalar cf = LaurentScalar::s_power(e) * (a.qi_pow(i, 1) - a.qi_pow(i, -1));
                Elem lhs = uq_scale(te, LaurentScalar(1) / ce);
                Elem rhs = uq_scale(a.multiply(a.f_letter(i), a.k_simple(i)),
                                    (LaurentScalar(0) - LaurentScalar(1)) / cf);
                REQUIRE(lhs == rhs);
                Elem tf = a.braid_T(i, a.f_letter(i));
                REQUIRE(tf == uq_scale(a.multiply(a.k_simple(i, -1), a.e_letter(i)), a.qi_pow(i, 1)));
            }
        }
    }

    SECTION("K images follow the reflection") {
        std::mt19937 rng(7);
        std::uniform_int_distribution<long> kc(-3, 3);
        for (Alg* ap : {&a2, &b2}) {
            Alg& a = *ap;
            for (int round = 0; round < 5; ++round) {
                IVec mu(static_cast<size_t>(a.roots().rank), Int(0));
                for (auto& x : mu) x = kc(rng);
                for (int i = 0; i < a.roots().rank; ++i)
                    REQUIRE(a.braid_T(i, a.k_gen(mu)) == a.k_gen(a.roots().reflect_weight(i, mu)));
            }
        }
    }

    SECTION("defining relations map to zero") {
        for (Alg* ap : {&a2, &b2}) {
            Alg& a = *ap;
            const RootSystem& rs = a.roots();
            int n = rs.rank;
            for (int i = 0; i < n; ++i) {
                std::vector<Elem> te(static_cast<size_t>(n)), tf(static_cast<size_t>(n));
                for (int j = 0; j < n; ++j) {
                    te[static_cast<size_t>(j)] = a.braid_T(i, a.e_letter(j));
                    tf[static_cast<size_t>(j)] = a.braid_T(i, a.f_letter(j));
                }
                for (int x = 0; x < n; ++x)
                    for (int y = 0; y < n; ++y) {
                        Elem lhs = a.multiply(te[static_cast<size_t>(x)], tf[static_cast<size_t>(y)]) -
                                   a.multiply(tf[static_cast<size_t>(y)], te[static_cast<size_t>(x)]);
                        if (x == y) {
                            IVec sa = rs.reflect_weight(i, rs.root_to_weight(rs.simple_root(x)));
                            LaurentScalar fac = a.qi_pow(x, 1) - a.qi_pow(x, -1);
                            lhs = lhs - uq_scale(a.k_gen(ivec_neg(sa)) - a.k_gen(sa), fac);
                        }
                        REQUIRE(lhs.is_zero());
                    }
                for (int x = 0; x < n; ++x)
                    for (int y = 0; y < n; ++y) {
                        if (x == y) continue;
                        long m = 1 - static_cast<long>(rs.cartan.at(x, y));
                        Elem se, sf;
                        for (long r = 0; r <= m; ++r) {
                            LaurentScalar c = a.qbinom(x, m, r);
                            if (r % 2 == 1) c = LaurentScalar(0) - c;
                            se = se + uq_scale(a.multiply(a.power(te[static_cast<size_t>(x)], r),
                                                          a.multiply(te[static_cast<size_t>(y)],
                                                                     a.power(te[static_cast<size_t>(x)], m - r))),
                                               c);
                            sf = sf + uq_scale(a.multiply(a.power(tf[static_cast<size_t>(x)], r),
                                                          a.multiply(tf[static_cast<size_t>(y)],
                                                                     a.power(tf[static_cast<size_t>(x)], m - r))),
                                               c);
                        }
                        REQUIRE(se.is_zero());
                        REQUIRE(sf.is_zero());
                    }
            }
        }
    }

    SECTION("multiplicativity on random pairs") {
        std::mt19937 rng(99);
        for (Alg* ap : {&a2, &b2}) {
            Alg& a = *ap;
            for (int round = 0; round < 6; ++round) {
                Elem x = random_monomial_element(rng, a, 2);
                Elem y = random_monomial_element(rng, a, 2);
                for (int i = 0; i < a.roots().rank; ++i)
                    REQUIRE(a.braid_T(i, a.multiply(x, y)) ==
                            a.multiply(a.braid_T(i, x), a.braid_T(i, y)));
            }
        }
    }

    SECTION("rank-two braid relations on generators") {
        Alg a11(build_root_system(direct_sum(cartan_type('A', 1), cartan_type('A', 1))),
                laurent_s_power());
        struct Case {
            Alg* a;
            int m;
        };
        for (Case c : std::vector<Case>{{&a11, 2}, {&a2, 3}, {&b2, 4}}) {
            std::vector<Elem> gens;
            for (int j = 0; j < 2; ++j) {
                gens.push_back(c.a->e_letter(j));
                gens.push_back(c.a->f_letter(j));
                IVec mu(2, Int(0));
                mu[static_cast<size_t>(j)] = 1;
                gens.push_back(c.a->k_gen(mu));
            }
            for (const Elem& g : gens) {
                Elem lhs = g, rhs = g;
                for (int t = 0; t < c.m; ++t) {
                    lhs = c.a->braid_T(t % 2 == 0 ? 0 : 1, lhs);
                    rhs = c.a->braid_T(t % 2 == 0 ? 1 : 0, rhs);
                }
                REQUIRE(lhs == rhs);
            }
        }
    }

    SECTION("braid relation sampled on a composite element") {
        Elem x = a2.multiply(a2.e_letter(0), a2.f_letter(1));
        REQUIRE(a2.braid_apply({0, 1, 0}, x) == a2.braid_apply({1, 0, 1}, x));
        REQUIRE(a2.braid_apply({0, 1, 0}, a2.e_letter(0)) ==
                a2.braid_apply({1, 0, 1}, a2.e_letter(0)));
    }
}

TEST_CASE("root vectors trace the convex order", "[uq]") {
    SECTION("second vector of the A2 word is the mixed root vector") {
        Alg a2 = make_alg('A', 2);
        Elem rv = a2.f_root_vector({0, 1, 0}, 2);
        auto deg = q_degree(rv, 2);
        REQUIRE(deg.has_value());
        REQUIRE(*deg == IVec{Int(-1), Int(-1)});
        REQUIRE(rv == a2.braid_T(0, a2.f_letter(1)));
        // its terms are the two straightened words with no K or E part
        for (const auto& [m, c] : rv.terms) {
            REQUIRE(m.mu == zero_mu(2));
            REQUIRE(m.eword.empty());
        }
    }

    SECTION("degrees match the convex order along the longest word") {
        std::vector<std::pair<char, int>> specs{{'A', 2}, {'B', 2}, {'A', 3}};
        for (auto spec : specs) {
            Alg a(build_root_system(cartan_type(spec.first, spec.second)), laurent_s_power());
            Word w0 = a.roots().longest_word();
            std::vector<IVec> betas = a.roots().convex_order(w0);
            for (size_t k = 1; k <= w0.size(); ++k) {
                Elem fb = a.f_root_vector(w0, static_cast<int>(k));
                auto fd = q_degree(fb, a.roots().rank);
                REQUIRE(fd.has_value());
                REQUIRE(*fd == ivec_neg(betas[k - 1]));
                Elem eb = a.e_root_vector(w0, static_cast<int>(k));
                auto ed = q_degree(eb, a.roots().rank);
                REQUIRE(ed.has_value());
                REQUIRE(*ed == betas[k - 1]);
            }
        }
    }

    SECTION("out-of-range or non-reduced input is rejected") {
        Alg a2 = make_alg('A', 2);
        REQUIRE_THROWS_AS(a2.f_root_vector({0, 1, 0}, 0), DomainError);
        REQUIRE_THROWS_AS(a2.f_root_vector({0, 1, 0}, 4), DomainError);
        REQUIRE_THROWS_AS(a2.f_root_vector({0, 0}, 1), DomainError);
    }
}

TEST_CASE("products respect the root grading", "[uq]") {
    std::mt19937 rng(5);
    Alg a2 = make_alg('A', 2);
    for (int round = 0; round < 10; ++round) {
        Elem x = random_monomial_element(rng, a2, 2);
        Elem y = random_monomial_element(rng, a2, 2);
        auto dx = q_degree(x, 2), dy = q_degree(y, 2);
        REQUIRE(dx.has_value());
        REQUIRE(dy.has_value());
        Elem xy = a2.multiply(x, y);
        if (!xy.is_zero()) {
            auto dxy = q_degree(xy, 2);
            REQUIRE(dxy.has_value());
            REQUIRE(*dxy == ivec_add(*dx, *dy));
        }
    }
    Elem mixed = a2.e_letter(0) + a2.f_letter(0);
    REQUIRE_FALSE(q_degree(mixed, 2).has_value());
}

TEST_CASE("filtration degree counts white letters", "[uq]") {
    Alg a2 = make_alg('A', 2);
    SatakeDiagram split = make_satake(cartan_type('A', 2), {}, {0, 1});

    SECTION("generators sit at the stated levels") {
        REQUIRE(hi_degree(split, a2.f_letter(0)) == 1);
        REQUIRE(hi_degree(split, a2.f_letter(1)) == 1);
        REQUIRE(hi_degree(split, a2.e_letter(0)) == 0);
        REQUIRE(hi_degree(split, a2.k_gen(IVec{Int(3), Int(-1)})) == 0);
        REQUIRE(hi_degree(split, Elem{}) == 0);
    }

    SECTION("a height-two root vector sits at level two") {
        Elem rv = a2.f_root_vector({0, 1, 0}, 2);
        REQUIRE(hi_degree(split, rv) == 2);
        Int h = ht_imath(split, IVec{Int(1), Int(1)});
        REQUIRE(h == 2);
    }

    SECTION("black letters do not count") {
        Alg a3 = make_alg('A', 3);
        SatakeDiagram middle = make_satake(cartan_type('A', 3), {1}, {2, 1, 0});
        REQUIRE(hi_degree(middle, a3.f_letter(1)) == 0);
        REQUIRE(hi_degree(middle, a3.f_letter(0)) == 1);
        Elem prod = a3.multiply(a3.f_letter(0), a3.multiply(a3.f_letter(1), a3.f_letter(2)));
        REQUIRE(hi_degree(middle, prod) == 2);
    }

    SECTION("the maximum over monomials wins") {
        Elem x = a2.f_letter(0) + a2.multiply(a2.f_letter(0), a2.f_letter(1)) + a2.e_letter(1);
        REQUIRE(hi_degree(split, x) == 2);
    }
}

TEST_CASE("specialization lands in the cyclotomic field", "[uq]") {
    Alg a1 = make_alg('A', 1);
    CycloFieldPtr f3 = CycloField::make(3);

    SECTION("powers of generators specialize with unit coefficients") {
        UqElement<Cyclo> sp = specialize_element(a1.power(a1.f_letter(0), 3), f3);
        REQUIRE(sp.terms.size() == 1);
        UqMonomial m{IVec{Int(0)}, {0, 0, 0}, {}};
        REQUIRE(sp.terms.at(m) == Cyclo::one(f3));
    }

    SECTION("a pole is reported with the offending monomial") {
        Elem bad = uq_scale(a1.f_letter(0), LaurentScalar(1) / a1.qint(0, 3));
        try {
            specialize_element(bad, f3);
            FAIL("expected a pole");
        } catch (const PoleError& e) {
            std::string msg = e.what();
            REQUIRE(msg.find("F[0]") != std::string::npos);
        }
    }

    SECTION("specialization is additive on samples") {
        std::mt19937 rng(11);
        Alg a2 = make_alg('A', 2);
        CycloFieldPtr f5 = CycloField::make(5);
        for (int round = 0; round < 4; ++round) {
            Elem x = random_monomial_element(rng, a2, 2);
            Elem y = random_monomial_element(rng, a2, 2);
            UqElement<Cyclo> sx = specialize_element(x, f5);
            UqElement<Cyclo> sy = specialize_element(y, f5);
            REQUIRE(specialize_element(x + y, f5) == sx + sy);
        }
    }
}

TEST_CASE("the engine also runs over cyclotomic fractions", "[uq]") {
    CycloFieldPtr f3 = CycloField::make(3);
    UqAlgebra<CycloFraction> a1(build_root_system(cartan_type('A', 1)),
                                cyclofraction_s_power(f3));
    UqElement<CycloFraction> ef = a1.multiply(a1.e_letter(0), a1.f_letter(0));
    CycloFraction fac = CycloFraction::s_power(f3, 2) - CycloFraction::s_power(f3, -2);
    UqElement<CycloFraction> expect =
        a1.multiply(a1.f_letter(0), a1.e_letter(0)) +
        uq_scale(a1.k_simple(0, -1) - a1.k_simple(0, 1), fac);
    REQUIRE(ef == expect);
}

TEST_CASE("element serialization is stable", "[uq]") {
    Alg a1 = make_alg('A', 1);
    REQUIRE(uq_to_string(Elem{}) == "0");
    Elem ef = a1.multiply(a1.e_letter(0), a1.f_letter(0));
    REQUIRE(uq_to_string(ef) ==
            "(q - q^-1) * K[-2] F[] E[] + (1) * K[0] F[0] E[0] + (-q + q^-1) * K[2] F[] E[]");
    Alg a2 = make_alg('A', 2);
    Elem one = a2.one();
    REQUIRE(uq_to_string(one) == "(1) * K[0,0] F[] E[]");
}
