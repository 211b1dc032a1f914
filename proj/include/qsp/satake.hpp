#pragma once

#include "qsp/intmat.hpp"
#include "qsp/rootdata.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qsp {

/// A root system with an involutive diagram symmetry tau, a tau-stable subset
/// of "black" nodes, and a sign c_i in {+1, -1} attached to each white node.
/// Construction validates the four compatibility axioms and the sign rules;
/// invalid data never produces a SatakeDiagram.
struct SatakeDiagram {
    RootSystem rs;
    std::vector<int> black;      // sorted node indices
    std::vector<bool> is_black;  // size rank
    std::vector<int> tau;        // involutive permutation of 0..rank-1
    std::vector<int> signs;      // +-1 on white nodes, 0 on black nodes

    int rank() const { return rs.rank; }
    bool white(int i) const { return !is_black[static_cast<size_t>(i)]; }
};

/// Root system on a subset of the nodes (principal submatrix of the Cartan matrix).
inline RootSystem sub_root_system(const RootSystem& rs, const std::vector<int>& sub) {
    const int m = static_cast<int>(sub.size());
    IntMat c(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) c.at(i, j) = rs.cartan.at(sub[static_cast<size_t>(i)], sub[static_cast<size_t>(j)]);
    return build_root_system(c);
}

/// Half-sum-of-coroots pairing over the black sub-system:
/// alpha_j(rho_bullet^vee) = sum over black positive beta of (beta, alpha_j)/(beta, beta).
inline Rat black_rho_pairing(const RootSystem& rs, const std::vector<int>& black, int j) {
    Rat total = 0;
    if (black.empty()) return total;
    RootSystem sub = sub_root_system(rs, black);
    IVec aj = rs.simple_root(j);
    for (const IVec& sb : sub.positive) {
        IVec beta(static_cast<size_t>(rs.rank), Int(0));
        for (size_t k = 0; k < black.size(); ++k) beta[static_cast<size_t>(black[k])] = sb[k];
        total += Rat(rs.root_pair(beta, aj), rs.root_pair(beta, beta));
    }
    return total;
}

/// Canonical reduced word (in full-system indices) for the longest element of
/// the parabolic subgroup generated by the given nodes.
inline Word parabolic_longest_word(const RootSystem& rs, const std::vector<int>& sub) {
    if (sub.empty()) return {};
    RootSystem s = sub_root_system(rs, sub);
    Word local = s.longest_word();
    Word full;
    full.reserve(local.size());
    for (int k : local) full.push_back(sub[static_cast<size_t>(k)]);
    return rs.canonical_word(rs.root_matrix(full));
}

namespace detail {

inline std::string word_str(const Word& w) {
    std::ostringstream os;
    os << "(";
    for (size_t k = 0; k < w.size(); ++k) os << (k ? " " : "") << w[k] + 1;
    os << ")";
    return os.str();
}

inline IntMat perm_weight_matrix(const std::vector<int>& perm) {
    const int n = static_cast<int>(perm.size());
    IntMat t(n, n);
    for (int j = 0; j < n; ++j) t.at(perm[static_cast<size_t>(j)], j) = 1;
    return t;
}

}  // namespace detail

/// Matrix of theta = -w_bullet o tau on weight coordinates.
inline IntMat theta_weight_matrix(const RootSystem& rs, const std::vector<int>& black,
                                  const std::vector<int>& tau) {
    IntMat wb = rs.weight_matrix(parabolic_longest_word(rs, black));
    IntMat theta = wb * detail::perm_weight_matrix(tau);
    for (auto& v : theta.a) v = -v;
    return theta;
}

/// Matrix of theta on root coordinates.
inline IntMat theta_root_matrix(const RootSystem& rs, const std::vector<int>& black,
                                const std::vector<int>& tau) {
    IntMat wb = rs.root_matrix(parabolic_longest_word(rs, black));
    IntMat theta = wb * detail::perm_weight_matrix(tau);
    for (auto& v : theta.a) v = -v;
    return theta;
}

/// The four diagram axioms, each as a named pass/fail record:
///   tau_involution        tau is an involutive symmetry of the Cartan matrix,
///   black_tau_stable      tau preserves the black subset,
///   black_longest_negates w_bullet(alpha_j) = -alpha_{tau j} on black nodes,
///   white_fixed_integral  alpha_j(rho_bullet^vee) is an integer for white j = tau j.
/// A fifth derived record, theta_involution, confirms theta^2 = 1 and
/// theta(alpha_j) = alpha_j on black nodes once the axioms hold.
inline std::vector<IdentityCheck> satake_axiom_checks(const RootSystem& rs, const std::vector<int>& black,
                                                      const std::vector<int>& tau) {
    std::vector<IdentityCheck> out;
    const int n = rs.rank;

    bool perm_ok = static_cast<int>(tau.size()) == n;
    if (perm_ok)
        for (int i = 0; i < n; ++i)
            if (tau[static_cast<size_t>(i)] < 0 || tau[static_cast<size_t>(i)] >= n ||
                tau[static_cast<size_t>(tau[static_cast<size_t>(i)])] != i)
                perm_ok = false;
    bool cartan_ok = perm_ok;
    if (perm_ok)
        for (int i = 0; i < n && cartan_ok; ++i)
            for (int j = 0; j < n && cartan_ok; ++j)
                if (rs.cartan.at(tau[static_cast<size_t>(i)], tau[static_cast<size_t>(j)]) != rs.cartan.at(i, j))
                    cartan_ok = false;
    out.push_back({"tau_involution", cartan_ok,
                   perm_ok ? (cartan_ok ? "tau^2 = id and a_{tau i, tau j} = a_{ij}" : "Cartan entries not tau-invariant")
                           : "tau is not an involutive permutation of the nodes"});
    if (!perm_ok) return out;

    std::vector<bool> is_black(static_cast<size_t>(n), false);
    bool range_ok = true;
    for (int b : black) {
        if (b < 0 || b >= n) {
            range_ok = false;
            break;
        }
        is_black[static_cast<size_t>(b)] = true;
    }
    bool stable = range_ok;
    if (range_ok)
        for (int b : black)
            if (!is_black[static_cast<size_t>(tau[static_cast<size_t>(b)])]) stable = false;
    out.push_back({"black_tau_stable", stable,
                   range_ok ? (stable ? "tau(black) = black" : "tau moves a black node to a white node")
                            : "black node index out of range"});
    if (!stable) return out;

    Word wb = parabolic_longest_word(rs, black);
    bool negates = true;
    std::string neg_detail = "w_bullet(alpha_j) = -alpha_{tau j} on all black nodes";
    for (int b : black) {
        IVec img = rs.act_root(wb, rs.simple_root(b));
        if (img != ivec_neg(rs.simple_root(tau[static_cast<size_t>(b)]))) {
            negates = false;
            neg_detail = "w_bullet(alpha_" + std::to_string(b + 1) + ") is not -alpha_{tau j}";
            break;
        }
    }
    out.push_back({"black_longest_negates", negates, neg_detail});

    bool integral = true;
    std::string int_detail = "alpha_j(rho_bullet^vee) integral on every tau-fixed white node";
    for (int j = 0; j < n; ++j) {
        if (is_black[static_cast<size_t>(j)] || tau[static_cast<size_t>(j)] != j) continue;
        Rat p = black_rho_pairing(rs, black, j);
        if (denominator(p) != 1) {
            integral = false;
            int_detail = "alpha_" + std::to_string(j + 1) + "(rho_bullet^vee) = " + rat_str(p);
            break;
        }
    }
    out.push_back({"white_fixed_integral", integral, int_detail});

    if (negates && integral) {
        IntMat theta = theta_weight_matrix(rs, black, tau);
        bool invol = theta * theta == IntMat::identity(n);
        IntMat theta_r = theta_root_matrix(rs, black, tau);
        for (int b : black)
            if (!(theta_r.apply(rs.simple_root(b)) == rs.simple_root(b))) invol = false;
        out.push_back({"theta_involution", invol,
                       invol ? "theta^2 = 1 and theta fixes the black simple roots"
                             : "theta is not an involution fixing the black simple roots"});
    }
    return out;
}

/// (alpha_i, theta(alpha_i)) decides whether the sign pair (c_i, c_{tau i}) must be equal.
inline Int alpha_theta_alpha(const RootSystem& rs, const std::vector<int>& black, const std::vector<int>& tau,
                             int i) {
    IntMat theta_r = theta_root_matrix(rs, black, tau);
    return rs.root_pair(rs.simple_root(i), theta_r.apply(rs.simple_root(i)));
}

/// Sign constraints on a candidate assignment (zero entries expected on black nodes):
///   white_signs_unit     c_i in {+1, -1} on white, 0 on black,
///   orbit_product        c_i c_{tau i} = (-1)^{2 alpha_i(rho_bullet^vee)},
///   orthogonal_equal     c_i = c_{tau i} whenever (alpha_i, theta alpha_i) = 0,
///   fixed_minus_one      c_i = -1 whenever tau i = i or w_bullet(alpha_i) = alpha_i.
inline std::vector<IdentityCheck> satake_sign_checks(const RootSystem& rs, const std::vector<int>& black,
                                                     const std::vector<int>& tau, const std::vector<int>& signs) {
    std::vector<IdentityCheck> out;
    const int n = rs.rank;
    std::vector<bool> is_black(static_cast<size_t>(n), false);
    for (int b : black) is_black[static_cast<size_t>(b)] = true;

    bool unit = static_cast<int>(signs.size()) == n;
    if (unit)
        for (int i = 0; i < n; ++i) {
            int want_zero = is_black[static_cast<size_t>(i)] ? 1 : 0;
            int c = signs[static_cast<size_t>(i)];
            if (want_zero ? c != 0 : (c != 1 && c != -1)) unit = false;
        }
    out.push_back({"white_signs_unit", unit, unit ? "signs are +-1 on white nodes and 0 on black nodes"
                                                  : "sign vector has a bad entry"});
    if (!unit) return out;

    Word wb = parabolic_longest_word(rs, black);
    bool product = true, equal = true, fixed = true;
    std::string pd = "c_i c_{tau i} = (-1)^{2 alpha_i(rho_bullet^vee)} on white orbits";
    std::string ed = "c_i = c_{tau i} on every orthogonal white orbit";
    std::string fd = "c_i = -1 on every node with tau i = i or w_bullet(alpha_i) = alpha_i";
    for (int i = 0; i < n; ++i) {
        if (is_black[static_cast<size_t>(i)]) continue;
        int ti = tau[static_cast<size_t>(i)];
        Rat two_a = 2 * black_rho_pairing(rs, black, i);
        if (denominator(two_a) != 1) throw DomainError("satake_sign_checks: 2 alpha_i(rho_bullet^vee) not integral");
        int parity = (mod_reduce(numerator(two_a), 2) == 0) ? 1 : -1;
        if (signs[static_cast<size_t>(i)] * signs[static_cast<size_t>(ti)] != parity && product) {
            product = false;
            pd = "orbit of node " + std::to_string(i + 1) + ": c_i c_{tau i} != (-1)^{2 alpha_i(rho_bullet^vee)}";
        }
        if (alpha_theta_alpha(rs, black, tau, i) == 0 &&
            signs[static_cast<size_t>(i)] != signs[static_cast<size_t>(ti)] && equal) {
            equal = false;
            ed = "orbit of node " + std::to_string(i + 1) + ": orthogonal pair with unequal signs";
        }
        bool forced = ti == i || rs.act_root(wb, rs.simple_root(i)) == rs.simple_root(i);
        if (forced && signs[static_cast<size_t>(i)] != -1 && fixed) {
            fixed = false;
            fd = "node " + std::to_string(i + 1) + " must carry c_i = -1";
        }
    }
    out.push_back({"orbit_product", product, pd});
    out.push_back({"orthogonal_equal", equal, ed});
    out.push_back({"fixed_minus_one", fixed, fd});
    return out;
}

/// Default sign assignment: c_i = -1 on every forced node (tau i = i or
/// w_bullet(alpha_i) = alpha_i), c_i = -1 on the smaller node of each remaining
/// orbit, and the partner sign determined by the orbit product rule.
inline std::vector<int> default_signs(const RootSystem& rs, const std::vector<int>& black,
                                      const std::vector<int>& tau) {
    const int n = rs.rank;
    std::vector<bool> is_black(static_cast<size_t>(n), false);
    for (int b : black) is_black[static_cast<size_t>(b)] = true;
    Word wb = parabolic_longest_word(rs, black);
    std::vector<int> signs(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        if (is_black[static_cast<size_t>(i)] || signs[static_cast<size_t>(i)] != 0) continue;
        int ti = tau[static_cast<size_t>(i)];
        Rat two_a = 2 * black_rho_pairing(rs, black, i);
        if (denominator(two_a) != 1) throw DomainError("default_signs: 2 alpha_i(rho_bullet^vee) not integral");
        int parity = (mod_reduce(numerator(two_a), 2) == 0) ? 1 : -1;
        bool forced_i = ti == i || rs.act_root(wb, rs.simple_root(i)) == rs.simple_root(i);
        signs[static_cast<size_t>(i)] = -1;
        if (ti != i) signs[static_cast<size_t>(ti)] = forced_i ? -1 : -parity;
    }
    return signs;
}

/// Full validation report: the axioms, then (when they pass) the sign rules for
/// the provided or default sign vector.
inline std::vector<IdentityCheck> validate_satake(const IntMat& cartan, const std::vector<int>& black,
                                                  const std::vector<int>& tau,
                                                  const std::optional<std::vector<int>>& signs = std::nullopt) {
    RootSystem rs = build_root_system(cartan);
    std::vector<IdentityCheck> out = satake_axiom_checks(rs, black, tau);
    bool ok = true;
    for (const auto& c : out) ok = ok && c.pass;
    if (!ok) return out;
    std::vector<int> s = signs ? *signs : default_signs(rs, black, tau);
    for (auto& c : satake_sign_checks(rs, black, tau, s)) out.push_back(std::move(c));
    return out;
}

/// Validate and construct. Throws DomainError naming the first failed check.
inline SatakeDiagram make_satake(const IntMat& cartan, std::vector<int> black, std::vector<int> tau,
                                 std::optional<std::vector<int>> signs = std::nullopt) {
    SatakeDiagram d;
    d.rs = build_root_system(cartan);
    std::sort(black.begin(), black.end());
    black.erase(std::unique(black.begin(), black.end()), black.end());
    d.black = black;
    d.tau = tau;
    for (const auto& c : satake_axiom_checks(d.rs, d.black, d.tau))
        if (!c.pass) throw DomainError("make_satake: " + c.name + ": " + c.detail);
    d.is_black.assign(static_cast<size_t>(d.rs.rank), false);
    for (int b : d.black) d.is_black[static_cast<size_t>(b)] = true;
    d.signs = signs ? *signs : default_signs(d.rs, d.black, d.tau);
    for (const auto& c : satake_sign_checks(d.rs, d.black, d.tau, d.signs))
        if (!c.pass) throw DomainError("make_satake: " + c.name + ": " + c.detail);
    return d;
}

inline IntMat theta_weight_matrix(const SatakeDiagram& d) { return theta_weight_matrix(d.rs, d.black, d.tau); }
inline IntMat theta_root_matrix(const SatakeDiagram& d) { return theta_root_matrix(d.rs, d.black, d.tau); }

/// theta(mu) in weight coordinates.
inline IVec theta_weight(const SatakeDiagram& d, const IVec& mu) { return theta_weight_matrix(d).apply(mu); }

/// Z-basis of the theta-fixed weight lattice P^theta = ker(theta - 1).
inline std::vector<IVec> p_theta_basis(const SatakeDiagram& d) {
    return integer_kernel(theta_weight_matrix(d) - IntMat::identity(d.rank()));
}

/// The permutation tau_0 with w_0(omega_i) = -omega_{tau_0 i}, read off the
/// longest element's weight matrix.
inline std::vector<int> tau0_permutation(const RootSystem& rs) {
    IntMat w0 = rs.weight_matrix(rs.longest_word());
    std::vector<int> tau0(static_cast<size_t>(rs.rank), -1);
    for (int j = 0; j < rs.rank; ++j) {
        for (int i = 0; i < rs.rank; ++i) {
            Int v = w0.at(i, j);
            if (v == 0) continue;
            if (v != -1 || tau0[static_cast<size_t>(j)] != -1)
                throw DomainError("tau0_permutation: w_0 is not -1 times a permutation on weights");
            tau0[static_cast<size_t>(j)] = i;
        }
        if (tau0[static_cast<size_t>(j)] < 0) throw DomainError("tau0_permutation: zero column");
    }
    return tau0;
}

namespace detail {

inline bool in_lattice(const std::vector<IVec>& gens, const IVec& v) {
    if (gens.empty()) return ivec_is_zero(v);
    const int n = static_cast<int>(v.size());
    IntMat m(n, static_cast<int>(gens.size()));
    for (int j = 0; j < static_cast<int>(gens.size()); ++j)
        for (int i = 0; i < n; ++i) m.at(i, j) = gens[static_cast<size_t>(j)][static_cast<size_t>(i)];
    return solve_integer(m, v).has_value();
}

inline bool lattices_equal(const std::vector<IVec>& a, const std::vector<IVec>& b) {
    for (const auto& v : a)
        if (!in_lattice(b, v)) return false;
    for (const auto& v : b)
        if (!in_lattice(a, v)) return false;
    return true;
}

}  // namespace detail

/// Z-basis of P^imath = {mu : theta(mu) = mu + w_0 mu - w_bullet mu}: one orbit
/// sum omega_i (+ omega_{tau tau_0 i}) per orbit of tau tau_0, listed by
/// smallest representative. Cross-checked against the kernel description and
/// against tau tau_0 = tau_0 tau before returning.
inline std::vector<IVec> p_imath_basis(const SatakeDiagram& d) {
    const int n = d.rank();
    std::vector<int> tau0 = tau0_permutation(d.rs);
    std::vector<int> sigma(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        sigma[static_cast<size_t>(i)] = d.tau[static_cast<size_t>(tau0[static_cast<size_t>(i)])];
        if (sigma[static_cast<size_t>(i)] != tau0[static_cast<size_t>(d.tau[static_cast<size_t>(i)])])
            throw DomainError("p_imath_basis: tau and tau_0 do not commute");
    }
    std::vector<IVec> basis;
    for (int i = 0; i < n; ++i) {
        int si = sigma[static_cast<size_t>(i)];
        if (si < i) continue;
        IVec nu(static_cast<size_t>(n), Int(0));
        nu[static_cast<size_t>(i)] = 1;
        if (si != i) nu[static_cast<size_t>(si)] = 1;
        basis.push_back(std::move(nu));
    }
    IntMat theta = theta_weight_matrix(d);
    IntMat w0 = d.rs.weight_matrix(d.rs.longest_word());
    IntMat wb = d.rs.weight_matrix(parabolic_longest_word(d.rs, d.black));
    IntMat rel = theta - IntMat::identity(n) - w0 + wb;
    for (const auto& nu : basis)
        if (!ivec_is_zero(rel.apply(nu))) throw DomainError("p_imath_basis: orbit sum violates the defining relation");
    if (!detail::lattices_equal(basis, integer_kernel(rel)))
        throw DomainError("p_imath_basis: orbit sums do not span the kernel lattice");
    return basis;
}

/// Reduced word for w_0 adapted to the diagram: the first L letters form the
/// canonical word of bold-w_0 = w_0 w_bullet (overridable), the last M letters
/// the canonical word of w_bullet. beta holds the induced convex order; the
/// tail roots equal the w_bullet convex order computed through the primed
/// letters j'_t = tau_0 tau (j_t).
struct AdaptedWord {
    Word full;
    int L = 0, M = 0, N = 0;
    std::vector<IVec> beta;
    Word black_word;
    Word black_prime;
};

/// Relative data of the pair: w_bullet, bold-w_0, the adapted word, the
/// tau-orbit representatives of the white nodes, and for each representative i
/// the canonical word of bs_i = w_{bullet, i} w_bullet.
struct RelativeStructure {
    Word w_bullet;
    Word rel_word;
    AdaptedWord adapted;
    int relative_rank = 0;
    std::vector<int> orbit_reps;
    std::vector<Word> bs_words;
};

inline RelativeStructure relative_structure(const SatakeDiagram& d,
                                            const std::optional<Word>& rel_override = std::nullopt) {
    RelativeStructure out;
    const RootSystem& rs = d.rs;
    out.w_bullet = parabolic_longest_word(rs, d.black);
    const int N = rs.num_positive();
    const int M = static_cast<int>(out.w_bullet.size());
    const int L = N - M;

    IntMat rel_mat = rs.root_matrix(rs.longest_word()) * rs.root_matrix(out.w_bullet);
    out.rel_word = rs.canonical_word(rel_mat);
    if (static_cast<int>(out.rel_word.size()) != L)
        throw DomainError("relative_structure: bold-w_0 length mismatch");
    if (rel_override) {
        const Word& w = *rel_override;
        if (static_cast<int>(w.size()) != L || !rs.is_reduced(w) || !(rs.root_matrix(w) == rel_mat))
            throw DomainError("relative_structure: override word is not a reduced word for bold-w_0");
        out.rel_word = w;
    }

    AdaptedWord& aw = out.adapted;
    aw.full = out.rel_word;
    aw.full.insert(aw.full.end(), out.w_bullet.begin(), out.w_bullet.end());
    aw.L = L;
    aw.M = M;
    aw.N = N;
    if (!rs.is_reduced(aw.full) || static_cast<int>(aw.full.size()) != N)
        throw DomainError("relative_structure: adapted word is not reduced of full length");
    aw.beta = rs.convex_order(aw.full);
    aw.black_word = out.w_bullet;

    std::vector<int> tau0 = tau0_permutation(rs);
    aw.black_prime.reserve(out.w_bullet.size());
    for (int j : out.w_bullet) {
        int jp = tau0[static_cast<size_t>(d.tau[static_cast<size_t>(j)])];
        if (!d.is_black[static_cast<size_t>(jp)])
            throw DomainError("relative_structure: primed letter escapes the black nodes");
        aw.black_prime.push_back(jp);
    }
    for (int t = 0; t < M; ++t) {
        Word prefix(aw.black_prime.begin(), aw.black_prime.begin() + t);
        IVec gamma = rs.act_root(prefix, rs.simple_root(aw.black_prime[static_cast<size_t>(t)]));
        if (gamma != aw.beta[static_cast<size_t>(L + t)])
            throw DomainError("relative_structure: primed convex order disagrees with the word tail");
    }

    for (int i = 0; i < rs.rank; ++i) {
        if (d.is_black[static_cast<size_t>(i)] || d.tau[static_cast<size_t>(i)] < i) continue;
        out.orbit_reps.push_back(i);
        std::vector<int> sub = d.black;
        sub.push_back(i);
        if (d.tau[static_cast<size_t>(i)] != i) sub.push_back(d.tau[static_cast<size_t>(i)]);
        std::sort(sub.begin(), sub.end());
        Word wbi = parabolic_longest_word(rs, sub);
        out.bs_words.push_back(rs.canonical_word(rs.root_matrix(wbi) * rs.root_matrix(out.w_bullet)));
    }
    out.relative_rank = static_cast<int>(out.orbit_reps.size());
    return out;
}

/// Relative height: the sum of the white coefficients of a root.
inline Int ht_imath(const SatakeDiagram& d, const IVec& beta) {
    Int s = 0;
    for (int i = 0; i < d.rank(); ++i)
        if (d.white(i)) s += beta[static_cast<size_t>(i)];
    return s;
}

/// Dimension data of the fixed subalgebra and its ambient algebra, all
/// computed from the diagram alone (no root-of-unity input):
///   dim_k = N + M + rank P^theta,    rank_k = #(tau tau_0 orbits),
///   n0 = (dim_k - rank_k)/2,         dim_g = 2N + n,
///   covering_degree = 2^{#black},    max_class_dim = dim_g - rank_k,
///   max_leaf_dim = 2 n0,             branching exponents (N - n0, N - n0 + n - rank_k).
struct SatakeInvariants {
    int n = 0;
    int N = 0;
    int M = 0;
    int L = 0;
    int rank_p_theta = 0;
    long dim_k = 0;
    int rank_k = 0;
    long n0 = 0;
    long dim_g = 0;
    Int covering_degree = 0;
    long max_class_dim = 0;
    long max_leaf_dim = 0;
    std::pair<long, long> branching_exponents{0, 0};
};

inline SatakeInvariants satake_invariants(const SatakeDiagram& d) {
    SatakeInvariants inv;
    inv.n = d.rank();
    inv.N = d.rs.num_positive();
    inv.M = static_cast<int>(parabolic_longest_word(d.rs, d.black).size());
    inv.L = inv.N - inv.M;
    inv.rank_p_theta = static_cast<int>(p_theta_basis(d).size());
    inv.dim_k = inv.N + inv.M + inv.rank_p_theta;
    inv.rank_k = static_cast<int>(p_imath_basis(d).size());
    if ((inv.dim_k - inv.rank_k) % 2 != 0) throw DomainError("satake_invariants: dim_k - rank_k is odd");
    inv.n0 = (inv.dim_k - inv.rank_k) / 2;
    inv.dim_g = 2L * inv.N + inv.n;
    inv.covering_degree = int_pow(Int(2), static_cast<unsigned>(d.black.size()));
    inv.max_class_dim = inv.dim_g - inv.rank_k;
    inv.max_leaf_dim = 2 * inv.n0;
    inv.branching_exponents = {inv.N - inv.n0, inv.N - inv.n0 + inv.n - inv.rank_k};
    return inv;
}

}  // namespace qsp
