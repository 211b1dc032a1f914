#pragma once

/// Skew-commutation model of the associated graded algebra attached to a
/// Satake diagram at an adapted reduced word: the integer matrix S over the
/// ordered generator list (root vectors B_beta | black root vectors E_gamma |
/// torus K on the theta-fixed lattice), kernel certificates for its mod-ell
/// null space, the polynomial-identity degree at a root of unity, verified
/// central monomials, and the leading exponents of the distinguished central
/// elements.

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qsp/common.hpp"
#include "qsp/cyclotomic.hpp"
#include "qsp/intmat.hpp"
#include "qsp/rootdata.hpp"
#include "qsp/satake.hpp"
#include "qsp/twistedpoly.hpp"

namespace qsp {

namespace detail {

inline void require_graded_level(const RootSystem& rs, long ell, const char* where) {
    if (ell < 3 || ell % 2 == 0)
        throw DomainError(std::string(where) + ": level must be odd and at least 3");
    for (long e : rs.eps)
        if (std::gcd(ell, e) != 1)
            throw DomainError(std::string(where) + ": level must be coprime to the root lengths");
}

inline int sign_of(int x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

/// (mu, beta) for an integral weight (weight coordinates) and a root (root
/// coordinates); an integer for the normalization (alpha_i, alpha_i) = 2 eps_i.
inline Int weight_root_int(const RootSystem& rs, const IVec& mu, const IVec& beta) {
    Int s = 0;
    for (int i = 0; i < rs.rank; ++i)
        s += mu[static_cast<size_t>(i)] * beta[static_cast<size_t>(i)] * rs.eps[static_cast<size_t>(i)];
    return s;
}

inline std::vector<long> to_long_vec(const std::vector<Int>& v) {
    std::vector<long> out;
    out.reserve(v.size());
    for (const Int& c : v) {
        if (c > std::numeric_limits<long>::max() / 4 || c < std::numeric_limits<long>::min() / 4)
            throw DomainError("to_long_vec: exponent out of range");
        out.push_back(c.convert_to<long>());
    }
    return out;
}

inline std::string int_vec_str(const std::vector<Int>& v) {
    std::ostringstream os;
    os << "(";
    for (size_t k = 0; k < v.size(); ++k) os << (k ? " " : "") << v[k];
    os << ")";
    return os.str();
}

}  // namespace detail

/// Exponent-level presentation of the associated graded algebra. Generators
/// are ordered B_{beta_1}..B_{beta_N}, E_{gamma_1}..E_{gamma_M} with
/// gamma_t = beta_{L+t}, then the r torus directions along an integral basis
/// omega0 of the theta-fixed weight lattice; S is the skew-symmetric
/// commutation matrix over that list and torus_indices marks the invertible
/// block.
struct GradedPresentation {
    SatakeDiagram diagram;
    AdaptedWord word;
    std::vector<IVec> omega0;  // basis of the theta-fixed lattice, weight coordinates
    int r = 0;
    IntMat A;   // N x N, sgn(j-i)(beta_i, beta_j)
    IntMat Ap;  // M x M, sgn(j-i)(gamma_i, gamma_j)
    IntMat B;   // r x N, -(omega0_s, beta_j)
    IntMat Bp;  // r x M, -(omega0_s, gamma_t)
    IntMat S;   // [A 0 -B^T; 0 Ap Bp^T; B -Bp 0]
    std::vector<int> torus_indices;

    int size() const { return word.N + word.M + r; }
    const IVec& beta(int k) const { return word.beta[static_cast<size_t>(k)]; }
    const IVec& gamma(int t) const { return word.beta[static_cast<size_t>(word.L + t)]; }
};

inline SkewForm graded_skew_form(const GradedPresentation& p) {
    return make_skew_form(p.S, p.torus_indices);
}

/// Assemble the presentation from a validated adapted word. The word is
/// re-derived from its own prefix through relative_structure, so a malformed
/// input is rejected rather than trusted.
inline GradedPresentation graded_presentation(const SatakeDiagram& d, const AdaptedWord& word) {
    const RootSystem& rs = d.rs;
    if (static_cast<int>(word.full.size()) != word.N || word.L < 0 || word.L > word.N ||
        word.M != word.N - word.L || word.N != rs.num_positive())
        throw DomainError("graded_presentation: adapted word has inconsistent lengths");
    Word prefix(word.full.begin(), word.full.begin() + word.L);
    RelativeStructure rel = relative_structure(d, prefix);
    if (rel.adapted.full != word.full)
        throw DomainError("graded_presentation: word does not match the diagram's adapted form");

    GradedPresentation p;
    p.diagram = d;
    p.word = rel.adapted;
    const int N = p.word.N, M = p.word.M, L = p.word.L;

    p.omega0 = p_theta_basis(d);
    p.r = static_cast<int>(p.omega0.size());

    p.A = IntMat(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            p.A.at(i, j) = Int(detail::sign_of(j - i)) * rs.root_pair(p.beta(i), p.beta(j));
    p.Ap = IntMat(M, M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            p.Ap.at(i, j) = Int(detail::sign_of(j - i)) * rs.root_pair(p.gamma(i), p.gamma(j));
    p.B = IntMat(p.r, N);
    for (int s = 0; s < p.r; ++s)
        for (int j = 0; j < N; ++j)
            p.B.at(s, j) = -detail::weight_root_int(rs, p.omega0[static_cast<size_t>(s)], p.beta(j));
    p.Bp = IntMat(p.r, M);
    for (int s = 0; s < p.r; ++s)
        for (int t = 0; t < M; ++t)
            p.Bp.at(s, t) = -detail::weight_root_int(rs, p.omega0[static_cast<size_t>(s)], p.gamma(t));

    const int n = N + M + p.r;
    p.S = IntMat(n, n);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) p.S.at(i, j) = p.A.at(i, j);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) p.S.at(N + i, N + j) = p.Ap.at(i, j);
    for (int s = 0; s < p.r; ++s)
        for (int j = 0; j < N; ++j) {
            p.S.at(N + M + s, j) = p.B.at(s, j);
            p.S.at(j, N + M + s) = -p.B.at(s, j);
        }
    for (int s = 0; s < p.r; ++s)
        for (int t = 0; t < M; ++t) {
            p.S.at(N + M + s, N + t) = -p.Bp.at(s, t);
            p.S.at(N + t, N + M + s) = p.Bp.at(s, t);
        }
    for (int s = 0; s < p.r; ++s) p.torus_indices.push_back(N + M + s);
    make_skew_form(p.S, p.torus_indices);
    (void)L;
    return p;
}

/// Presentation at the diagram's canonical adapted word, or at an overridden
/// reduced word for bold-w_0 = w_0 w_bullet.
inline GradedPresentation graded_presentation(const SatakeDiagram& d,
                                              const std::optional<Word>& rel_override = std::nullopt) {
    return graded_presentation(d, relative_structure(d, rel_override).adapted);
}

/// Membership in the relative weight lattice: theta(mu) = mu + w_0 mu - w_bullet mu.
inline bool relative_lattice_member(const SatakeDiagram& d, const IVec& mu) {
    const RootSystem& rs = d.rs;
    if (static_cast<int>(mu.size()) != rs.rank)
        throw DomainError("relative_lattice_member: weight has wrong length");
    IVec w0mu = rs.act_weight(rs.longest_word(), mu);
    IVec wbmu = rs.act_weight(parabolic_longest_word(rs, d.black), mu);
    return theta_weight(d, mu) == ivec_sub(ivec_add(mu, w0mu), wbmu);
}

/// Concatenated exponent vector x(nu) = u(nu) | u'(-w_bullet nu) | lambda with
/// u_k = <alpha_{i_k}^vee, nu>, u'_t = <alpha_{j'_t}^vee, -w_bullet nu>, and
/// lambda the coordinates of (1 + w_0) nu in the omega0 basis.
inline std::vector<Int> x_nu(const GradedPresentation& p, const IVec& nu) {
    const RootSystem& rs = p.diagram.rs;
    if (static_cast<int>(nu.size()) != rs.rank) throw DomainError("x_nu: weight has wrong length");
    if (!relative_lattice_member(p.diagram, nu))
        throw DomainError("x_nu: weight is not in the relative lattice");
    std::vector<Int> x;
    x.reserve(static_cast<size_t>(p.size()));
    for (int k = 0; k < p.word.N; ++k)
        x.push_back(nu[static_cast<size_t>(p.word.full[static_cast<size_t>(k)])]);
    IVec mwb = ivec_neg(rs.act_weight(p.word.black_word, nu));
    for (int t = 0; t < p.word.M; ++t)
        x.push_back(mwb[static_cast<size_t>(p.word.black_prime[static_cast<size_t>(t)])]);
    IVec lam_weight = ivec_add(nu, rs.act_weight(p.word.full, nu));
    IntMat cols(rs.rank, p.r);
    for (int s = 0; s < p.r; ++s)
        for (int i = 0; i < rs.rank; ++i)
            cols.at(i, s) = p.omega0[static_cast<size_t>(s)][static_cast<size_t>(i)];
    std::optional<std::vector<Int>> lam = solve_integer(cols, lam_weight);
    if (!lam) throw DomainError("x_nu: torus block is not integral in the fixed basis");
    for (const Int& c : *lam) x.push_back(c);
    return x;
}

/// Mod-ell kernel data for S: generators of ker(S mod ell), the witness
/// vectors x(nu_i), both cardinalities, and the named checks certifying the
/// kernel statement together with the exact transport identities.
struct KernelCertificate {
    long ell = 0;
    std::vector<std::vector<Int>> kernel_basis;
    std::vector<std::vector<Int>> witnesses;
    Int kernel_cardinality{1};
    Int image_cardinality{1};
    std::vector<IdentityCheck> checks;
    bool pass = false;
};

/// Two-sided certificate: each witness annihilates S (exactly over Z, hence
/// mod ell), the witness span has the same mod-ell cardinality as the kernel,
/// the image has cardinality ell^(2 N0), and the transport identities between
/// the blocks and the Weyl actions hold over Z on all fundamental weights.
inline KernelCertificate verify_kernel_lemma(const GradedPresentation& p, long ell) {
    const RootSystem& rs = p.diagram.rs;
    detail::require_graded_level(rs, ell, "verify_kernel_lemma");
    KernelCertificate cert;
    cert.ell = ell;
    const int n = p.size();
    SatakeInvariants inv = satake_invariants(p.diagram);

    auto push = [&](std::string name, bool ok, std::string det) {
        cert.checks.push_back({std::move(name), ok, std::move(det)});
    };

    bool skew = true;
    for (int i = 0; i < n && skew; ++i)
        for (int j = 0; j < n && skew; ++j)
            if (p.S.at(i, j) != -p.S.at(j, i)) skew = false;
    push("S is skew-symmetric", skew, "S + S^T = 0 entrywise");

    std::vector<IVec> nus = p_imath_basis(p.diagram);
    const int m = static_cast<int>(nus.size());

    bool exact_all = true, mod_all = true;
    std::string offender;
    for (const IVec& nu : nus) {
        std::vector<Int> x = x_nu(p, nu);
        std::vector<Int> sx = p.S.apply(x);
        bool exact = std::all_of(sx.begin(), sx.end(), [](const Int& c) { return c == 0; });
        bool mod = std::all_of(sx.begin(), sx.end(), [&](const Int& c) { return c % ell == 0; });
        if (!exact && offender.empty()) offender = " offending vector " + detail::int_vec_str(x);
        exact_all = exact_all && exact;
        mod_all = mod_all && mod;
        cert.witnesses.push_back(std::move(x));
    }
    push("witnesses annihilate S over the integers", exact_all,
         "S x(nu_i) = 0 for all " + std::to_string(m) + " witnesses" + offender);
    push("witnesses annihilate S mod ell", mod_all,
         "S x(nu_i) = 0 mod " + std::to_string(ell) + offender);

    SmithResult snf = smith_normal_form(p.S);
    ModKernel ker = kernel_mod_ell(p.S, ell, &snf);
    cert.kernel_basis = ker.gens;
    cert.kernel_cardinality = ker.order;
    cert.image_cardinality = image_order_mod_ell(p.S, ell, &snf);

    IntMat witness_cols(n, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i)
            witness_cols.at(i, j) = cert.witnesses[static_cast<size_t>(j)][static_cast<size_t>(i)];
    Int span_order = image_order_mod_ell(witness_cols, ell);
    push("witness span fills the kernel mod ell", span_order == ker.order,
         "span " + span_order.str() + " vs kernel " + ker.order.str());

    Int expect = int_pow(Int(ell), static_cast<unsigned>(2 * inv.n0));
    push("image cardinality is ell^(2 N0)", cert.image_cardinality == expect,
         cert.image_cardinality.str() + " vs ell^" + std::to_string(2 * inv.n0) + " = " + expect.str());

    bool id_a = true, id_ap = true, id_sum = true, id_sump = true;
    for (int node = 0; node < rs.rank; ++node) {
        IVec mu(static_cast<size_t>(rs.rank), Int(0));
        mu[static_cast<size_t>(node)] = 1;
        IVec w0mu = rs.act_weight(p.word.full, mu);
        IVec wbmu = rs.act_weight(p.word.black_word, mu);

        std::vector<Int> u;
        for (int k = 0; k < p.word.N; ++k)
            u.push_back(mu[static_cast<size_t>(p.word.full[static_cast<size_t>(k)])]);
        std::vector<Int> au = p.A.apply(u);
        IVec lam = ivec_add(mu, w0mu);
        for (int k = 0; k < p.word.N; ++k)
            if (au[static_cast<size_t>(k)] + detail::weight_root_int(rs, lam, p.beta(k)) != 0) id_a = false;

        std::vector<Int> up;
        for (int t = 0; t < p.word.M; ++t)
            up.push_back(mu[static_cast<size_t>(p.word.black_prime[static_cast<size_t>(t)])]);
        std::vector<Int> apu = p.Ap.apply(up);
        IVec lamb = ivec_add(mu, wbmu);
        for (int t = 0; t < p.word.M; ++t)
            if (apu[static_cast<size_t>(t)] + detail::weight_root_int(rs, lamb, p.gamma(t)) != 0)
                id_ap = false;

        IVec acc(static_cast<size_t>(rs.rank), Int(0));
        for (int k = 0; k < p.word.N; ++k)
            for (int i = 0; i < rs.rank; ++i)
                acc[static_cast<size_t>(i)] += u[static_cast<size_t>(k)] * p.beta(k)[static_cast<size_t>(i)];
        if (rs.root_to_weight(acc) != ivec_sub(mu, w0mu)) id_sum = false;

        IVec accp(static_cast<size_t>(rs.rank), Int(0));
        for (int t = 0; t < p.word.M; ++t)
            for (int i = 0; i < rs.rank; ++i)
                accp[static_cast<size_t>(i)] += up[static_cast<size_t>(t)] * p.gamma(t)[static_cast<size_t>(i)];
        if (rs.root_to_weight(accp) != ivec_sub(mu, wbmu)) id_sump = false;
    }
    push("A u(mu) + ((1+w0)mu, beta) vanishes on fundamental weights", id_a,
         "white transport identity over Z");
    push("A' u'(mu) + ((1+w_bullet)mu, gamma) vanishes on fundamental weights", id_ap,
         "black transport identity over Z");
    push("sum c_k(mu) beta_k = (1-w0)mu on fundamental weights", id_sum, "convex-order weight sum");
    push("sum c'_k(mu) gamma_k = (1-w_bullet)mu on fundamental weights", id_sump,
         "primed convex-order weight sum");

    cert.pass = std::all_of(cert.checks.begin(), cert.checks.end(),
                            [](const IdentityCheck& c) { return c.pass; });
    return cert;
}

namespace detail {

inline std::string json_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string json_int_vec(const std::vector<Int>& v) {
    std::ostringstream os;
    os << "[";
    for (size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k];
    os << "]";
    return os.str();
}

}  // namespace detail

/// Certificate as a single JSON object: S, witnesses, kernel basis, both
/// cardinalities (as strings), the named checks and the overall verdict.
inline std::string kernel_certificate_json(const GradedPresentation& p, const KernelCertificate& c) {
    std::ostringstream os;
    os << "{\"ell\":" << c.ell << ",\"size\":" << p.size() << ",\"S\":[";
    for (int i = 0; i < p.size(); ++i) {
        std::vector<Int> row;
        for (int j = 0; j < p.size(); ++j) row.push_back(p.S.at(i, j));
        os << (i ? "," : "") << detail::json_int_vec(row);
    }
    os << "],\"witnesses\":[";
    for (size_t k = 0; k < c.witnesses.size(); ++k)
        os << (k ? "," : "") << detail::json_int_vec(c.witnesses[k]);
    os << "],\"kernel_basis\":[";
    for (size_t k = 0; k < c.kernel_basis.size(); ++k)
        os << (k ? "," : "") << detail::json_int_vec(c.kernel_basis[k]);
    os << "],\"kernel_cardinality\":" << detail::json_quote(c.kernel_cardinality.str())
       << ",\"image_cardinality\":" << detail::json_quote(c.image_cardinality.str()) << ",\"checks\":[";
    for (size_t k = 0; k < c.checks.size(); ++k) {
        const IdentityCheck& ch = c.checks[k];
        os << (k ? "," : "") << "{\"name\":" << detail::json_quote(ch.name)
           << ",\"pass\":" << (ch.pass ? "true" : "false")
           << ",\"detail\":" << detail::json_quote(ch.detail) << "}";
    }
    os << "],\"pass\":" << (c.pass ? "true" : "false") << "}";
    return os.str();
}

/// Polynomial-identity degree of the graded algebra at a primitive ell-th
/// root of unity; always ell^N0, with N0 recomputed independently from the
/// fixed-subalgebra dimension formula.
inline Int graded_degree(const GradedPresentation& p, long ell) {
    detail::require_graded_level(p.diagram.rs, ell, "graded_degree");
    Int deg = twisted_degree(graded_skew_form(p), ell);
    Int expect = int_pow(Int(ell), static_cast<unsigned>(satake_invariants(p.diagram).n0));
    if (deg != expect)
        throw DomainError("graded_degree: degree " + deg.str() + " does not equal ell^N0 = " + expect.str());
    return deg;
}

/// Normal-ordered monomial over the graded generator list; only the torus
/// block of the exponent may be negative.
struct GradedMonomial {
    std::string name;
    std::vector<Int> exponent;
};

/// Central monomials at the level: one exponent vector x(nu_i) per basis
/// vector of the relative weight lattice, then the ell-th powers of every
/// generator. Each output is verified central by commuting it through every
/// generator in the twisted algebra over the ell-th cyclotomic field.
inline std::vector<GradedMonomial> graded_center_generators(const GradedPresentation& p, long ell) {
    detail::require_graded_level(p.diagram.rs, ell, "graded_center_generators");
    std::vector<GradedMonomial> out;
    std::vector<IVec> nus = p_imath_basis(p.diagram);
    for (size_t i = 0; i < nus.size(); ++i)
        out.push_back({"nu[" + std::to_string(i) + "]", x_nu(p, nus[i])});
    const int n = p.size();
    auto power_monomial = [&](const std::string& name, int index) {
        std::vector<Int> e(static_cast<size_t>(n), Int(0));
        e[static_cast<size_t>(index)] = ell;
        out.push_back({name, std::move(e)});
    };
    for (int t = 0; t < p.word.N; ++t) power_monomial("B[" + std::to_string(t) + "]^l", t);
    for (int t = 0; t < p.word.M; ++t) power_monomial("E[" + std::to_string(t) + "]^l", p.word.N + t);
    for (int s = 0; s < p.r; ++s)
        power_monomial("K[" + std::to_string(s) + "]^l", p.word.N + p.word.M + s);

    SkewForm form = graded_skew_form(p);
    CycloFieldPtr field = CycloField::make(ell);
    Cyclo q = Cyclo::v(field);
    Cyclo unit = Cyclo::one(field);
    for (const GradedMonomial& g : out) {
        TwistedElement<Cyclo> gm = twisted_monomial(form, detail::to_long_vec(g.exponent), unit);
        for (int j = 0; j < n; ++j) {
            std::vector<long> ej(static_cast<size_t>(n), 0);
            ej[static_cast<size_t>(j)] = 1;
            TwistedElement<Cyclo> xj = twisted_monomial(form, ej, unit);
            if (!(twisted_multiply(form, q, gm, xj) == twisted_multiply(form, q, xj, gm)))
                throw DomainError("graded_center_generators: " + g.name +
                                  " does not commute with generator " + std::to_string(j));
        }
    }
    return out;
}

/// Leading exponent data of the distinguished central element attached to a
/// dominant weight nu of the relative lattice: scalar left as a symbolic unit
/// tag, torus factor K_{-(1+w_0)nu}, exponents <alpha_{i_k}^vee, -w_0 nu> on
/// the B block and <alpha_{j_t}^vee, nu> on the E block; weight is the total
/// degree w_0 nu - w_bullet nu.
struct LeadingTerm {
    std::string scalar;
    IVec k_weight;
    std::vector<Int> b_exponents;
    std::vector<Int> e_exponents;
    IVec weight;
    std::vector<Int> exponent;  // assembled (N | M | r) vector, torus block in omega0 coordinates
};

inline LeadingTerm kl_leading_term(const GradedPresentation& p, const IVec& nu) {
    const RootSystem& rs = p.diagram.rs;
    if (static_cast<int>(nu.size()) != rs.rank)
        throw DomainError("kl_leading_term: weight has wrong length");
    if (!relative_lattice_member(p.diagram, nu))
        throw DomainError("kl_leading_term: weight is not in the relative lattice");
    if (!ivec_nonneg(nu)) throw DomainError("kl_leading_term: weight is not dominant");

    IVec w0nu = rs.act_weight(p.word.full, nu);
    IVec neg_w0nu = ivec_neg(w0nu);
    LeadingTerm t;
    t.scalar = "+-q^(Z/D)";
    t.k_weight = ivec_neg(ivec_add(nu, w0nu));
    for (int k = 0; k < p.word.N; ++k) {
        Int b = neg_w0nu[static_cast<size_t>(p.word.full[static_cast<size_t>(k)])];
        if (b < 0) throw DomainError("kl_leading_term: negative B exponent");
        t.b_exponents.push_back(b);
    }
    for (int u = 0; u < p.word.M; ++u)
        t.e_exponents.push_back(nu[static_cast<size_t>(p.word.black_word[static_cast<size_t>(u)])]);
    t.weight = ivec_sub(w0nu, rs.act_weight(p.word.black_word, nu));

    IVec deg(static_cast<size_t>(rs.rank), Int(0));
    for (int k = 0; k < p.word.N; ++k)
        for (int i = 0; i < rs.rank; ++i)
            deg[static_cast<size_t>(i)] -=
                t.b_exponents[static_cast<size_t>(k)] * p.beta(k)[static_cast<size_t>(i)];
    for (int u = 0; u < p.word.M; ++u)
        for (int i = 0; i < rs.rank; ++i)
            deg[static_cast<size_t>(i)] +=
                t.e_exponents[static_cast<size_t>(u)] * p.gamma(u)[static_cast<size_t>(i)];
    if (rs.root_to_weight(deg) != t.weight)
        throw DomainError("kl_leading_term: monomial degree does not match w_0 nu - w_bullet nu");

    IntMat cols(rs.rank, p.r);
    for (int s = 0; s < p.r; ++s)
        for (int i = 0; i < rs.rank; ++i)
            cols.at(i, s) = p.omega0[static_cast<size_t>(s)][static_cast<size_t>(i)];
    std::optional<std::vector<Int>> lam = solve_integer(cols, t.k_weight);
    if (!lam) throw DomainError("kl_leading_term: torus factor is not integral in the fixed basis");
    t.exponent = t.b_exponents;
    t.exponent.insert(t.exponent.end(), t.e_exponents.begin(), t.e_exponents.end());
    t.exponent.insert(t.exponent.end(), lam->begin(), lam->end());
    return t;
}

}  // namespace qsp
