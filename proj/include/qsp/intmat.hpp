#pragma once

#include "qsp/common.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace qsp {

/// Dense integer matrix, row-major.
struct IntMat {
    int rows = 0, cols = 0;
    std::vector<Int> a;

    IntMat() = default;
    IntMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * static_cast<size_t>(c)) {}
    IntMat(std::initializer_list<std::initializer_list<long>> init) {
        rows = static_cast<int>(init.size());
        cols = rows ? static_cast<int>(init.begin()->size()) : 0;
        a.reserve(static_cast<size_t>(rows) * static_cast<size_t>(cols));
        for (const auto& row : init) {
            if (static_cast<int>(row.size()) != cols) throw DomainError("IntMat: ragged rows");
            for (long v : row) a.emplace_back(v);
        }
    }

    Int& at(int i, int j) { return a[static_cast<size_t>(i) * static_cast<size_t>(cols) + static_cast<size_t>(j)]; }
    const Int& at(int i, int j) const {
        return a[static_cast<size_t>(i) * static_cast<size_t>(cols) + static_cast<size_t>(j)];
    }

    static IntMat identity(int n) {
        IntMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    IntMat transpose() const {
        IntMat t(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    friend IntMat operator*(const IntMat& x, const IntMat& y) {
        if (x.cols != y.rows) throw DomainError("IntMat: shape mismatch in product");
        IntMat r(x.rows, y.cols);
        for (int i = 0; i < x.rows; ++i)
            for (int k = 0; k < x.cols; ++k) {
                const Int& v = x.at(i, k);
                if (v == 0) continue;
                for (int j = 0; j < y.cols; ++j) r.at(i, j) += v * y.at(k, j);
            }
        return r;
    }
    friend IntMat operator+(const IntMat& x, const IntMat& y) {
        if (x.rows != y.rows || x.cols != y.cols) throw DomainError("IntMat: shape mismatch");
        IntMat r = x;
        for (size_t k = 0; k < r.a.size(); ++k) r.a[k] += y.a[k];
        return r;
    }
    friend IntMat operator-(const IntMat& x, const IntMat& y) {
        if (x.rows != y.rows || x.cols != y.cols) throw DomainError("IntMat: shape mismatch");
        IntMat r = x;
        for (size_t k = 0; k < r.a.size(); ++k) r.a[k] -= y.a[k];
        return r;
    }
    friend bool operator==(const IntMat& x, const IntMat& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }

    std::vector<Int> apply(const std::vector<Int>& x) const {
        if (static_cast<int>(x.size()) != cols) throw DomainError("IntMat: vector length mismatch");
        std::vector<Int> r(static_cast<size_t>(rows));
        for (int i = 0; i < rows; ++i) {
            Int s = 0;
            for (int j = 0; j < cols; ++j) s += at(i, j) * x[static_cast<size_t>(j)];
            r[static_cast<size_t>(i)] = s;
        }
        return r;
    }

    bool is_zero() const {
        for (const auto& v : a)
            if (v != 0) return false;
        return true;
    }
};

/// Fraction-free Bareiss determinant.
inline Int int_det(IntMat m) {
    if (m.rows != m.cols) throw DomainError("int_det: square matrix required");
    int n = m.rows;
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m.at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (m.at(i, k) != 0) {
                    p = i;
                    break;
                }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                Int num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                m.at(i, j) = num / prev;
            }
        prev = m.at(k, k);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

/// U * A * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... | d_rank > 0.
struct SmithResult {
    IntMat D, U, V;
    int rank = 0;
    std::vector<Int> divisors;
};

inline SmithResult smith_normal_form(const IntMat& A) {
    SmithResult res;
    res.D = A;
    res.U = IntMat::identity(A.rows);
    res.V = IntMat::identity(A.cols);
    IntMat& D = res.D;
    IntMat& U = res.U;
    IntMat& V = res.V;
    int m = A.rows, n = A.cols;

    auto swap_rows = [&](int i1, int i2) {
        if (i1 == i2) return;
        for (int j = 0; j < n; ++j) std::swap(D.at(i1, j), D.at(i2, j));
        for (int j = 0; j < m; ++j) std::swap(U.at(i1, j), U.at(i2, j));
    };
    auto swap_cols = [&](int j1, int j2) {
        if (j1 == j2) return;
        for (int i = 0; i < m; ++i) std::swap(D.at(i, j1), D.at(i, j2));
        for (int i = 0; i < n; ++i) std::swap(V.at(i, j1), V.at(i, j2));
    };
    auto add_row = [&](int dst, int src, const Int& c) {
        for (int j = 0; j < n; ++j) D.at(dst, j) += c * D.at(src, j);
        for (int j = 0; j < m; ++j) U.at(dst, j) += c * U.at(src, j);
    };
    auto add_col = [&](int dst, int src, const Int& c) {
        for (int i = 0; i < m; ++i) D.at(i, dst) += c * D.at(i, src);
        for (int i = 0; i < n; ++i) V.at(i, dst) += c * V.at(i, src);
    };
    auto negate_row = [&](int i) {
        for (int j = 0; j < n; ++j) D.at(i, j) = -D.at(i, j);
        for (int j = 0; j < m; ++j) U.at(i, j) = -U.at(i, j);
    };

    int t = 0;
    while (t < m && t < n) {
        int pi = -1, pj = -1;
        Int best = 0;
        for (int i = t; i < m; ++i)
            for (int j = t; j < n; ++j) {
                Int v = D.at(i, j) < 0 ? Int(-D.at(i, j)) : D.at(i, j);
                if (v != 0 && (pi < 0 || v < best)) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;
        swap_rows(t, pi);
        swap_cols(t, pj);

        bool dirty = false;
        for (int i = t + 1; i < m; ++i) {
            if (D.at(i, t) == 0) continue;
            Int c = D.at(i, t) / D.at(t, t);
            add_row(i, t, -c);
            if (D.at(i, t) != 0) dirty = true;
        }
        if (dirty) continue;
        for (int j = t + 1; j < n; ++j) {
            if (D.at(t, j) == 0) continue;
            Int c = D.at(t, j) / D.at(t, t);
            add_col(j, t, -c);
            if (D.at(t, j) != 0) dirty = true;
        }
        if (dirty) continue;

        bool divides_all = true;
        for (int i = t + 1; i < m && divides_all; ++i)
            for (int j = t + 1; j < n && divides_all; ++j)
                if (D.at(i, j) % D.at(t, t) != 0) {
                    add_row(t, i, Int(1));
                    divides_all = false;
                }
        if (!divides_all) continue;

        if (D.at(t, t) < 0) negate_row(t);
        ++t;
    }
    res.rank = t;
    for (int k = 0; k < t; ++k) res.divisors.push_back(D.at(k, k));
    return res;
}

/// Z-basis of { x : A x = 0 }, as the columns of V past the rank.
inline std::vector<std::vector<Int>> integer_kernel(const IntMat& A) {
    SmithResult s = smith_normal_form(A);
    std::vector<std::vector<Int>> basis;
    for (int j = s.rank; j < A.cols; ++j) {
        std::vector<Int> v(static_cast<size_t>(A.cols));
        for (int i = 0; i < A.cols; ++i) v[static_cast<size_t>(i)] = s.V.at(i, j);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline Int mod_reduce(const Int& x, const Int& ell) {
    Int r = x % ell;
    if (r < 0) r += ell;
    return r;
}

/// Generators and order of { x in (Z/ell)^n : A x = 0 mod ell }.
struct ModKernel {
    std::vector<std::vector<Int>> gens;
    Int order = 1;
};

inline ModKernel kernel_mod_ell(const IntMat& A, long ell, const SmithResult* pre = nullptr) {
    SmithResult local;
    const SmithResult& s = pre ? *pre : (local = smith_normal_form(A), local);
    ModKernel k;
    Int L(ell);
    auto v_column = [&](int j, const Int& scale) {
        std::vector<Int> v(static_cast<size_t>(A.cols));
        for (int i = 0; i < A.cols; ++i) v[static_cast<size_t>(i)] = mod_reduce(scale * s.V.at(i, j), L);
        return v;
    };
    for (int j = 0; j < s.rank; ++j) {
        Int g = int_gcd(s.divisors[static_cast<size_t>(j)], L);
        k.order *= g;
        if (g > 1) k.gens.push_back(v_column(j, L / g));
    }
    for (int j = s.rank; j < A.cols; ++j) {
        k.order *= L;
        k.gens.push_back(v_column(j, Int(1)));
    }
    return k;
}

/// |A . (Z/ell)^n| = prod over divisors of ell / gcd(d_k, ell).
inline Int image_order_mod_ell(const IntMat& A, long ell, const SmithResult* pre = nullptr) {
    SmithResult local;
    const SmithResult& s = pre ? *pre : (local = smith_normal_form(A), local);
    Int r(1), L(ell);
    for (const Int& d : s.divisors) r *= L / int_gcd(d, L);
    return r;
}

/// One integer solution of A x = b, if any.
inline std::optional<std::vector<Int>> solve_integer(const IntMat& A, const std::vector<Int>& b) {
    SmithResult s = smith_normal_form(A);
    std::vector<Int> ub = s.U.apply(b);
    std::vector<Int> y(static_cast<size_t>(A.cols));
    for (int i = 0; i < A.rows; ++i) {
        if (i < s.rank) {
            const Int& d = s.divisors[static_cast<size_t>(i)];
            if (ub[static_cast<size_t>(i)] % d != 0) return std::nullopt;
            y[static_cast<size_t>(i)] = ub[static_cast<size_t>(i)] / d;
        } else if (ub[static_cast<size_t>(i)] != 0) {
            return std::nullopt;
        }
    }
    return s.V.apply(y);
}

/// Exact solve A x = b for square nonsingular A over the rationals.
inline std::vector<Rat> solve_rational(const IntMat& A, const std::vector<Rat>& b) {
    if (A.rows != A.cols || static_cast<int>(b.size()) != A.rows)
        throw DomainError("solve_rational: shape mismatch");
    int n = A.rows;
    std::vector<std::vector<Rat>> m(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n) + 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m[static_cast<size_t>(i)][static_cast<size_t>(j)] = Rat(A.at(i, j));
        m[static_cast<size_t>(i)][static_cast<size_t>(n)] = b[static_cast<size_t>(i)];
    }
    for (int k = 0; k < n; ++k) {
        int p = -1;
        for (int i = k; i < n; ++i)
            if (m[static_cast<size_t>(i)][static_cast<size_t>(k)] != 0) {
                p = i;
                break;
            }
        if (p < 0) throw DomainError("solve_rational: singular matrix");
        std::swap(m[static_cast<size_t>(k)], m[static_cast<size_t>(p)]);
        Rat piv = m[static_cast<size_t>(k)][static_cast<size_t>(k)];
        for (int j = k; j <= n; ++j) m[static_cast<size_t>(k)][static_cast<size_t>(j)] /= piv;
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            Rat f = m[static_cast<size_t>(i)][static_cast<size_t>(k)];
            if (f == 0) continue;
            for (int j = k; j <= n; ++j)
                m[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * m[static_cast<size_t>(k)][static_cast<size_t>(j)];
        }
    }
    std::vector<Rat> x(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = m[static_cast<size_t>(i)][static_cast<size_t>(n)];
    return x;
}

/// Canonical column basis of the lattice spanned by the columns: column-style
/// Hermite form. Pivots descend row by row, each pivot is positive, entries to
/// its right vanish, entries to its left are reduced into [0, pivot). Zero
/// columns are dropped, so two inputs spanning the same lattice give the same
/// matrix.
inline IntMat hermite_column_basis(const IntMat& A) {
    const int n = A.rows;
    int m = A.cols;
    std::vector<std::vector<Int>> col(static_cast<size_t>(m), std::vector<Int>(static_cast<size_t>(n)));
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) col[static_cast<size_t>(j)][static_cast<size_t>(i)] = A.at(i, j);

    int c = 0;
    for (int r = 0; r < n && c < m; ++r) {
        // gcd sweep: leave a single positive entry of row r in column c
        while (true) {
            int best = -1;
            for (int j = c; j < m; ++j) {
                const Int& v = col[static_cast<size_t>(j)][static_cast<size_t>(r)];
                if (v == 0) continue;
                if (best < 0 || abs(v) < abs(col[static_cast<size_t>(best)][static_cast<size_t>(r)])) best = j;
            }
            if (best < 0) break;
            std::swap(col[static_cast<size_t>(c)], col[static_cast<size_t>(best)]);
            const Int piv = col[static_cast<size_t>(c)][static_cast<size_t>(r)];
            bool cleared = true;
            for (int j = c + 1; j < m; ++j) {
                Int q = col[static_cast<size_t>(j)][static_cast<size_t>(r)] / piv;
                if (q != 0)
                    for (int i = 0; i < n; ++i)
                        col[static_cast<size_t>(j)][static_cast<size_t>(i)] -= q * col[static_cast<size_t>(c)][static_cast<size_t>(i)];
                if (col[static_cast<size_t>(j)][static_cast<size_t>(r)] != 0) cleared = false;
            }
            if (cleared) break;
        }
        const Int& pivot = col[static_cast<size_t>(c)][static_cast<size_t>(r)];
        if (pivot == 0) continue;
        if (pivot < 0)
            for (int i = 0; i < n; ++i) col[static_cast<size_t>(c)][static_cast<size_t>(i)] = -col[static_cast<size_t>(c)][static_cast<size_t>(i)];
        for (int j = 0; j < c; ++j) {
            Int q = col[static_cast<size_t>(j)][static_cast<size_t>(r)];
            q = (q - mod_reduce(q, col[static_cast<size_t>(c)][static_cast<size_t>(r)])) /
                col[static_cast<size_t>(c)][static_cast<size_t>(r)];
            if (q != 0)
                for (int i = 0; i < n; ++i)
                    col[static_cast<size_t>(j)][static_cast<size_t>(i)] -= q * col[static_cast<size_t>(c)][static_cast<size_t>(i)];
        }
        ++c;
    }
    IntMat out(n, c);
    for (int j = 0; j < c; ++j)
        for (int i = 0; i < n; ++i) out.at(i, j) = col[static_cast<size_t>(j)][static_cast<size_t>(i)];
    return out;
}

/// P^T H P = direct sum of [[0, e_k], [-e_k, 0]] blocks then zeros, P unimodular,
/// e_1 | e_2 | ... All congruence steps keep H skew-symmetric.
struct SkewNormal {
    IntMat P;
    IntMat normal;
    std::vector<Int> pair_divisors;
};

inline SkewNormal skew_normal_form(const IntMat& H) {
    if (H.rows != H.cols) throw DomainError("skew_normal_form: square matrix required");
    int n = H.rows;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (H.at(i, j) != -H.at(j, i)) throw DomainError("skew_normal_form: not skew-symmetric");

    SkewNormal res;
    res.P = IntMat::identity(n);
    res.normal = H;
    IntMat& M = res.normal;
    IntMat& P = res.P;

    // Congruence ops: column op M <- M Q paired with row op M <- Q^T M; P <- P Q.
    auto swap_pair = [&](int a, int b) {
        if (a == b) return;
        for (int i = 0; i < n; ++i) std::swap(M.at(i, a), M.at(i, b));
        for (int j = 0; j < n; ++j) std::swap(M.at(a, j), M.at(b, j));
        for (int i = 0; i < n; ++i) std::swap(P.at(i, a), P.at(i, b));
    };
    auto add_pair = [&](int dst, int src, const Int& c) {
        for (int i = 0; i < n; ++i) M.at(i, dst) += c * M.at(i, src);
        for (int j = 0; j < n; ++j) M.at(dst, j) += c * M.at(src, j);
        for (int i = 0; i < n; ++i) P.at(i, dst) += c * P.at(i, src);
    };
    auto negate_pair = [&](int a) {
        for (int i = 0; i < n; ++i) M.at(i, a) = -M.at(i, a);
        for (int j = 0; j < n; ++j) M.at(a, j) = -M.at(a, j);
        for (int i = 0; i < n; ++i) P.at(i, a) = -P.at(i, a);
    };

    int t = 0;
    while (t + 1 < n) {
        int pi = -1, pj = -1;
        Int best = 0;
        for (int i = t; i < n; ++i)
            for (int j = t; j < n; ++j) {
                Int v = M.at(i, j) < 0 ? Int(-M.at(i, j)) : M.at(i, j);
                if (v != 0 && (pi < 0 || v < best)) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;
        swap_pair(t, pi);
        swap_pair(t + 1, pi == pj ? pi : (pj == t ? pi : pj));
        if (M.at(t, t + 1) < 0) negate_pair(t + 1);

        // Euclid until M[t][t+1] divides row t and row t+1 beyond the pivot pair.
        bool dirty = false;
        for (int j = t + 2; j < n; ++j) {
            if (M.at(t, j) == 0) continue;
            Int c = M.at(t, j) / M.at(t, t + 1);
            add_pair(j, t + 1, -c);
            if (M.at(t, j) != 0) {
                swap_pair(t + 1, j);
                if (M.at(t, t + 1) < 0) negate_pair(t + 1);
                dirty = true;
                break;
            }
        }
        if (dirty) continue;
        for (int j = t + 2; j < n; ++j) {
            if (M.at(t + 1, j) == 0) continue;
            Int c = M.at(t + 1, j) / M.at(t, t + 1);
            add_pair(j, t, c);
            if (M.at(t + 1, j) != 0) {
                swap_pair(t, j);
                if (M.at(t, t + 1) < 0) negate_pair(t + 1);
                dirty = true;
                break;
            }
        }
        if (dirty) continue;

        // Divisibility of the remaining block for the chain e_1 | e_2 | ...
        bool divides_all = true;
        for (int i = t + 2; i < n && divides_all; ++i)
            for (int j = t + 2; j < n && divides_all; ++j)
                if (M.at(i, j) % M.at(t, t + 1) != 0) {
                    add_pair(t, i, Int(1));
                    divides_all = false;
                }
        if (!divides_all) continue;

        res.pair_divisors.push_back(M.at(t, t + 1));
        t += 2;
    }
    return res;
}

}  // namespace qsp
