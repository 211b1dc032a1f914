#pragma once

#include "qsp/intmat.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace qsp {

using IVec = std::vector<Int>;
using RVec = std::vector<Rat>;
using Word = std::vector<int>;

inline IVec ivec_add(const IVec& a, const IVec& b) {
    IVec r = a;
    for (size_t k = 0; k < r.size(); ++k) r[k] += b[k];
    return r;
}
inline IVec ivec_sub(const IVec& a, const IVec& b) {
    IVec r = a;
    for (size_t k = 0; k < r.size(); ++k) r[k] -= b[k];
    return r;
}
inline IVec ivec_neg(const IVec& a) {
    IVec r = a;
    for (auto& c : r) c = -c;
    return r;
}
inline bool ivec_is_zero(const IVec& a) {
    return std::all_of(a.begin(), a.end(), [](const Int& c) { return c == 0; });
}
inline bool ivec_nonneg(const IVec& a) {
    return std::all_of(a.begin(), a.end(), [](const Int& c) { return c >= 0; });
}

/// Root system of a finite-type symmetrizable Cartan matrix. Roots are stored
/// in simple-root coordinates, weights in fundamental-weight coordinates; the
/// minimal positive symmetrizers eps give (alpha_i, alpha_j) = eps_i * a_ij.
struct RootSystem {
    IntMat cartan;
    std::vector<long> eps;
    int rank = 0;
    std::vector<IVec> positive;
    std::map<IVec, int> positive_index;
    std::vector<RVec> cartan_inv;

    int num_positive() const { return static_cast<int>(positive.size()); }

    IVec simple_root(int i) const {
        IVec r(static_cast<size_t>(rank), Int(0));
        r[static_cast<size_t>(i)] = 1;
        return r;
    }

    /// s_i(beta) = beta - <alpha_i^vee, beta> alpha_i in root coordinates.
    IVec reflect_root(int i, const IVec& beta) const {
        Int c = 0;
        for (int j = 0; j < rank; ++j) c += cartan.at(i, j) * beta[static_cast<size_t>(j)];
        IVec r = beta;
        r[static_cast<size_t>(i)] -= c;
        return r;
    }

    /// s_i(mu) = mu - mu_i alpha_i in weight coordinates.
    template <class C>
    std::vector<C> reflect_weight(int i, const std::vector<C>& mu) const {
        std::vector<C> r = mu;
        const C& mi = mu[static_cast<size_t>(i)];
        for (int k = 0; k < rank; ++k) r[static_cast<size_t>(k)] -= mi * C(cartan.at(k, i));
        return r;
    }

    /// Word acts as s_{i_1} ... s_{i_k} (v), rightmost letter first.
    IVec act_root(const Word& w, IVec beta) const {
        for (auto it = w.rbegin(); it != w.rend(); ++it) beta = reflect_root(*it, beta);
        return beta;
    }
    template <class C>
    std::vector<C> act_weight(const Word& w, std::vector<C> mu) const {
        for (auto it = w.rbegin(); it != w.rend(); ++it) mu = reflect_weight(*it, mu);
        return mu;
    }

    /// Matrix of the word's action on root coordinates (columns = images of alpha_j).
    IntMat root_matrix(const Word& w) const {
        IntMat m(rank, rank);
        for (int j = 0; j < rank; ++j) {
            IVec col = act_root(w, simple_root(j));
            for (int i = 0; i < rank; ++i) m.at(i, j) = col[static_cast<size_t>(i)];
        }
        return m;
    }
    /// Matrix of the action on weight coordinates.
    IntMat weight_matrix(const Word& w) const {
        IntMat m(rank, rank);
        for (int j = 0; j < rank; ++j) {
            IVec mu(static_cast<size_t>(rank), Int(0));
            mu[static_cast<size_t>(j)] = 1;
            mu = act_weight(w, mu);
            for (int i = 0; i < rank; ++i) m.at(i, j) = mu[static_cast<size_t>(i)];
        }
        return m;
    }

    /// (beta, gamma) for roots in root coordinates.
    Int root_pair(const IVec& beta, const IVec& gamma) const {
        Int s = 0;
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j)
                s += beta[static_cast<size_t>(i)] * gamma[static_cast<size_t>(j)] * eps[static_cast<size_t>(i)] *
                     cartan.at(i, j);
        return s;
    }

    /// Weight coordinates of a root: <alpha_k^vee, beta> = row k of the Cartan matrix.
    IVec root_to_weight(const IVec& beta) const { return cartan.apply(beta); }

    /// (mu, nu) for weights in weight coordinates, via nu = sum c_j alpha_j.
    Rat weight_pair(const RVec& mu, const RVec& nu) const {
        RVec c(static_cast<size_t>(rank), Rat(0));
        for (int j = 0; j < rank; ++j)
            for (int k = 0; k < rank; ++k)
                c[static_cast<size_t>(j)] += cartan_inv[static_cast<size_t>(j)][static_cast<size_t>(k)] *
                                             nu[static_cast<size_t>(k)];
        Rat s = 0;
        for (int j = 0; j < rank; ++j)
            s += c[static_cast<size_t>(j)] * Rat(eps[static_cast<size_t>(j)]) * mu[static_cast<size_t>(j)];
        return s;
    }
    /// (mu, beta) for a weight (weight coordinates) and a root (root coordinates).
    Rat weight_root_pair(const RVec& mu, const IVec& beta) const {
        Rat s = 0;
        for (int i = 0; i < rank; ++i)
            s += Rat(beta[static_cast<size_t>(i)] * eps[static_cast<size_t>(i)]) * mu[static_cast<size_t>(i)];
        return s;
    }

    bool is_positive_root(const IVec& beta) const { return positive_index.count(beta) > 0; }

    /// A word is reduced iff every prefix sends the next simple root to a positive root.
    bool is_reduced(const Word& w) const {
        for (size_t k = 0; k < w.size(); ++k) {
            Word prefix(w.begin(), w.begin() + static_cast<long>(k));
            if (!ivec_nonneg(act_root(prefix, simple_root(w[k])))) return false;
        }
        return true;
    }

    /// beta_k = s_{i_1} ... s_{i_{k-1}} (alpha_{i_k}) for a reduced word.
    std::vector<IVec> convex_order(const Word& w) const {
        std::vector<IVec> betas;
        std::set<IVec> seen;
        for (size_t k = 0; k < w.size(); ++k) {
            Word prefix(w.begin(), w.begin() + static_cast<long>(k));
            IVec b = act_root(prefix, simple_root(w[k]));
            if (!ivec_nonneg(b)) throw DomainError("convex_order: word is not reduced");
            if (!seen.insert(b).second) throw DomainError("convex_order: repeated root");
            betas.push_back(std::move(b));
        }
        return betas;
    }

    /// Deterministic word for the element with the given root-coordinate matrix:
    /// repeatedly strip the smallest i with w(alpha_i) negative from the right.
    Word canonical_word(IntMat root_mat) const {
        Word suffix;
        IntMat id = IntMat::identity(rank);
        while (!(root_mat == id)) {
            int pick = -1;
            for (int i = 0; i < rank && pick < 0; ++i) {
                bool neg = true;
                for (int r = 0; r < rank; ++r)
                    if (root_mat.at(r, i) > 0) {
                        neg = false;
                        break;
                    }
                if (neg) pick = i;
            }
            if (pick < 0) throw DomainError("canonical_word: matrix is not a Weyl element");
            if (static_cast<int>(suffix.size()) > 2 * num_positive())
                throw DomainError("canonical_word: length bound exceeded");
            suffix.push_back(pick);
            root_mat = root_mat * root_matrix({pick});
        }
        return Word(suffix.rbegin(), suffix.rend());
    }

    /// Canonical reduced word of the longest element.
    Word longest_word() const {
        IVec mu(static_cast<size_t>(rank), Int(1));
        Word applied;
        while (true) {
            int pick = -1;
            for (int i = 0; i < rank; ++i)
                if (mu[static_cast<size_t>(i)] > 0) {
                    pick = i;
                    break;
                }
            if (pick < 0) break;
            mu = reflect_weight(pick, mu);
            applied.push_back(pick);
        }
        Word w0(applied.rbegin(), applied.rend());
        return canonical_word(root_matrix(w0));
    }
};

/// Validate a Cartan matrix (finite type, symmetrizable) and enumerate roots.
inline RootSystem build_root_system(const IntMat& cartan) {
    RootSystem rs;
    int n = cartan.rows;
    if (cartan.cols != n || n == 0) throw DomainError("build_root_system: square matrix required");
    for (int i = 0; i < n; ++i) {
        if (cartan.at(i, i) != 2) throw DomainError("build_root_system: diagonal must be 2");
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (cartan.at(i, j) > 0) throw DomainError("build_root_system: positive off-diagonal");
            if ((cartan.at(i, j) == 0) != (cartan.at(j, i) == 0))
                throw DomainError("build_root_system: asymmetric zero pattern");
        }
    }
    rs.cartan = cartan;
    rs.rank = n;

    // Symmetrizers per connected component, scaled to minimal positive integers.
    std::vector<Rat> d(static_cast<size_t>(n), Rat(0));
    std::vector<int> comp(static_cast<size_t>(n), -1);
    int ncomp = 0;
    for (int start = 0; start < n; ++start) {
        if (comp[static_cast<size_t>(start)] >= 0) continue;
        int c = ncomp++;
        std::vector<int> stack{start};
        comp[static_cast<size_t>(start)] = c;
        d[static_cast<size_t>(start)] = 1;
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            for (int j = 0; j < n; ++j) {
                if (cartan.at(i, j) == 0 || i == j) continue;
                Rat dj = d[static_cast<size_t>(i)] * Rat(cartan.at(i, j)) / Rat(cartan.at(j, i));
                if (comp[static_cast<size_t>(j)] < 0) {
                    comp[static_cast<size_t>(j)] = c;
                    d[static_cast<size_t>(j)] = dj;
                    stack.push_back(j);
                } else if (d[static_cast<size_t>(j)] != dj) {
                    throw DomainError("build_root_system: not symmetrizable");
                }
            }
        }
    }
    rs.eps.assign(static_cast<size_t>(n), 1);
    for (int c = 0; c < ncomp; ++c) {
        Int lcm_den = 1;
        for (int i = 0; i < n; ++i)
            if (comp[static_cast<size_t>(i)] == c)
                lcm_den = lcm_den / int_gcd(lcm_den, denominator(d[static_cast<size_t>(i)])) *
                          denominator(d[static_cast<size_t>(i)]);
        Int g = 0;
        for (int i = 0; i < n; ++i)
            if (comp[static_cast<size_t>(i)] == c)
                g = int_gcd(g, numerator(d[static_cast<size_t>(i)] * Rat(lcm_den)));
        for (int i = 0; i < n; ++i)
            if (comp[static_cast<size_t>(i)] == c) {
                Rat v = d[static_cast<size_t>(i)] * Rat(lcm_den) / Rat(g);
                if (denominator(v) != 1 || v <= 0)
                    throw DomainError("build_root_system: bad symmetrizer");
                rs.eps[static_cast<size_t>(i)] = static_cast<long>(numerator(v));
            }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (rs.eps[static_cast<size_t>(i)] * cartan.at(i, j) != rs.eps[static_cast<size_t>(j)] * cartan.at(j, i))
                throw DomainError("build_root_system: symmetrizer check failed");

    // Finite type: the symmetrized matrix must be positive definite.
    for (int k = 1; k <= n; ++k) {
        IntMat lead(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) lead.at(i, j) = Int(rs.eps[static_cast<size_t>(i)]) * cartan.at(i, j);
        if (int_det(lead) <= 0) throw DomainError("build_root_system: not finite type");
    }

    // Inverse Cartan matrix, for weight-space inner products.
    rs.cartan_inv.assign(static_cast<size_t>(n), RVec(static_cast<size_t>(n), Rat(0)));
    for (int j = 0; j < n; ++j) {
        std::vector<Rat> e(static_cast<size_t>(n), Rat(0));
        e[static_cast<size_t>(j)] = 1;
        std::vector<Rat> col = solve_rational(cartan, e);
        for (int i = 0; i < n; ++i) rs.cartan_inv[static_cast<size_t>(i)][static_cast<size_t>(j)] = col[static_cast<size_t>(i)];
    }

    // All roots as the reflection closure of the simple roots.
    std::set<IVec> roots;
    std::vector<IVec> queue;
    for (int i = 0; i < n; ++i) {
        roots.insert(rs.simple_root(i));
        queue.push_back(rs.simple_root(i));
    }
    while (!queue.empty()) {
        IVec b = queue.back();
        queue.pop_back();
        for (int i = 0; i < n; ++i) {
            IVec r = rs.reflect_root(i, b);
            if (roots.insert(r).second) queue.push_back(r);
        }
    }
    for (const auto& b : roots)
        if (ivec_nonneg(b)) rs.positive.push_back(b);
    std::sort(rs.positive.begin(), rs.positive.end(), [](const IVec& x, const IVec& y) {
        Int hx = std::accumulate(x.begin(), x.end(), Int(0));
        Int hy = std::accumulate(y.begin(), y.end(), Int(0));
        if (hx != hy) return hx < hy;
        return x > y;
    });
    for (size_t k = 0; k < rs.positive.size(); ++k)
        rs.positive_index[rs.positive[k]] = static_cast<int>(k);
    return rs;
}

/// Cartan matrices of the classical series (B/C have their short/long root last).
inline IntMat cartan_type(char series, int n) {
    if (n < 1) throw DomainError("cartan_type: rank must be positive");
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 2;
    for (int i = 0; i + 1 < n; ++i) {
        m.at(i, i + 1) = -1;
        m.at(i + 1, i) = -1;
    }
    switch (series) {
        case 'A':
            break;
        case 'B':
            if (n < 2) throw DomainError("cartan_type: B needs rank >= 2");
            m.at(n - 1, n - 2) = -2;
            break;
        case 'C':
            if (n < 2) throw DomainError("cartan_type: C needs rank >= 2");
            m.at(n - 2, n - 1) = -2;
            break;
        case 'D':
            if (n < 3) throw DomainError("cartan_type: D needs rank >= 3");
            m.at(n - 1, n - 2) = 0;
            m.at(n - 2, n - 1) = 0;
            m.at(n - 1, n - 3) = -1;
            m.at(n - 3, n - 1) = -1;
            break;
        default:
            throw DomainError("cartan_type: unknown series");
    }
    return m;
}

inline IntMat direct_sum(const IntMat& a, const IntMat& b) {
    IntMat m(a.rows + b.rows, a.cols + b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) m.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows; ++i)
        for (int j = 0; j < b.cols; ++j) m.at(a.rows + i, a.cols + j) = b.at(i, j);
    return m;
}

}  // namespace qsp
