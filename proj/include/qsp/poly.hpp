#pragma once

#include "qsp/common.hpp"

#include <algorithm>
#include <vector>

namespace qsp {

/// Dense univariate polynomial over a commutative coefficient ring C.
/// coeff[k] is the coefficient of the k-th power; the zero polynomial has an
/// empty coefficient vector. C must be default-constructible to its zero.
template <class C>
struct Poly {
    std::vector<C> coeff;

    Poly() = default;
    explicit Poly(std::vector<C> c) : coeff(std::move(c)) { trim(); }

    static Poly constant(C c) {
        Poly p;
        if (!(c == C())) p.coeff.push_back(std::move(c));
        return p;
    }
    /// c * x^k
    static Poly monomial(C c, int k) {
        Poly p;
        if (!(c == C())) {
            p.coeff.assign(static_cast<size_t>(k) + 1, C());
            p.coeff[static_cast<size_t>(k)] = std::move(c);
        }
        return p;
    }

    void trim() {
        while (!coeff.empty() && coeff.back() == C()) coeff.pop_back();
    }
    bool is_zero() const { return coeff.empty(); }
    int degree() const { return static_cast<int>(coeff.size()) - 1; }
    const C& leading() const { return coeff.back(); }
    C at(size_t k) const { return k < coeff.size() ? coeff[k] : C(); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r;
        r.coeff.resize(std::max(a.coeff.size(), b.coeff.size()));
        for (size_t k = 0; k < r.coeff.size(); ++k) r.coeff[k] = a.at(k) + b.at(k);
        r.trim();
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        Poly r;
        r.coeff.resize(std::max(a.coeff.size(), b.coeff.size()));
        for (size_t k = 0; k < r.coeff.size(); ++k) r.coeff[k] = a.at(k) - b.at(k);
        r.trim();
        return r;
    }
    friend Poly operator-(const Poly& a) {
        Poly r = a;
        for (auto& c : r.coeff) c = C() - c;
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        Poly r;
        r.coeff.assign(a.coeff.size() + b.coeff.size() - 1, C());
        for (size_t i = 0; i < a.coeff.size(); ++i) {
            if (a.coeff[i] == C()) continue;
            for (size_t j = 0; j < b.coeff.size(); ++j)
                r.coeff[i + j] = r.coeff[i + j] + a.coeff[i] * b.coeff[j];
        }
        r.trim();
        return r;
    }
    Poly scaled(const C& c) const {
        if (c == C()) return {};
        Poly r = *this;
        for (auto& x : r.coeff) x = x * c;
        r.trim();
        return r;
    }
    /// Multiply by x^k.
    Poly shifted(int k) const {
        if (is_zero()) return {};
        Poly r;
        r.coeff.assign(coeff.size() + static_cast<size_t>(k), C());
        std::copy(coeff.begin(), coeff.end(), r.coeff.begin() + k);
        return r;
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.coeff == b.coeff; }

    /// Horner evaluation; lift maps each coefficient into the value type X.
    template <class X, class F>
    X eval(const X& x, F&& lift) const {
        X acc{};
        for (size_t k = coeff.size(); k-- > 0;) acc = acc * x + lift(coeff[k]);
        return acc;
    }
    template <class X>
    X eval(const X& x) const {
        return eval(x, [](const C& c) { return X(c); });
    }
};

/// Quotient and remainder over a field: b's leading coefficient must be invertible.
template <class C>
std::pair<Poly<C>, Poly<C>> poly_divmod(Poly<C> a, const Poly<C>& b) {
    if (b.is_zero()) throw DomainError("poly_divmod: division by zero polynomial");
    Poly<C> q;
    if (a.degree() >= b.degree()) q.coeff.assign(static_cast<size_t>(a.degree() - b.degree()) + 1, C());
    const C& lead = b.leading();
    while (!a.is_zero() && a.degree() >= b.degree()) {
        int shift = a.degree() - b.degree();
        C f = a.leading() / lead;
        q.coeff[static_cast<size_t>(shift)] = f;
        a = a - b.scaled(f).shifted(shift);
    }
    q.trim();
    return {q, a};
}

/// Divide every coefficient by d; total when C is a field and d is nonzero.
template <class C>
Poly<C> poly_coeff_div(const Poly<C>& p, const C& d) {
    Poly<C> r = p;
    for (auto& c : r.coeff) c = c / d;
    r.trim();
    return r;
}

/// Monic gcd over a field.
template <class C>
Poly<C> poly_gcd(Poly<C> a, Poly<C> b) {
    while (!b.is_zero()) {
        auto [q, r] = poly_divmod(a, b);
        (void)q;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero()) a = poly_coeff_div(a, a.leading());
    return a;
}

/// Extended Euclid over a field: returns (g, u, v) with u*a + v*b = g, g monic or zero.
template <class C>
std::tuple<Poly<C>, Poly<C>, Poly<C>> poly_xgcd(Poly<C> a, Poly<C> b) {
    Poly<C> u0 = Poly<C>::constant(C(1)), v0{};
    Poly<C> u1{}, v1 = Poly<C>::constant(C(1));
    while (!b.is_zero()) {
        auto [q, r] = poly_divmod(a, b);
        a = std::move(b);
        b = std::move(r);
        Poly<C> u2 = u0 - q * u1, v2 = v0 - q * v1;
        u0 = std::move(u1);
        v0 = std::move(v1);
        u1 = std::move(u2);
        v1 = std::move(v2);
    }
    if (!a.is_zero()) {
        C lead = a.leading();
        a = poly_coeff_div(a, lead);
        u0 = poly_coeff_div(u0, lead);
        v0 = poly_coeff_div(v0, lead);
    }
    return {a, u0, v0};
}

using IPoly = Poly<Int>;
using QPoly = Poly<Rat>;

inline QPoly to_qpoly(const IPoly& p) {
    QPoly q;
    q.coeff.reserve(p.coeff.size());
    for (const auto& c : p.coeff) q.coeff.emplace_back(c);
    return q;
}

/// Content (gcd of coefficients), non-negative; 0 for the zero polynomial.
inline Int ipoly_content(const IPoly& p) {
    Int g = 0;
    for (const auto& c : p.coeff) g = int_gcd(g, c);
    return g;
}

inline IPoly ipoly_div_int(const IPoly& p, const Int& d) {
    IPoly r = p;
    for (auto& c : r.coeff) {
        if (c % d != 0) throw DomainError("ipoly_div_int: inexact division");
        c /= d;
    }
    return r;
}

/// Primitive integer polynomial proportional to q, positive leading coefficient.
inline IPoly qpoly_to_primitive(const QPoly& q) {
    Int lcm_den = 1;
    for (const auto& c : q.coeff) {
        Int d = denominator(c);
        lcm_den = lcm_den / int_gcd(lcm_den, d) * d;
    }
    IPoly p;
    p.coeff.reserve(q.coeff.size());
    for (const auto& c : q.coeff) p.coeff.emplace_back(numerator(c) * (lcm_den / denominator(c)));
    p.trim();
    Int content = ipoly_content(p);
    if (content != 0) p = ipoly_div_int(p, content);
    if (!p.is_zero() && p.leading() < 0)
        for (auto& c : p.coeff) c = -c;
    return p;
}

/// gcd of integer polynomials: primitive part via rational Euclid, content gcd folded in.
inline IPoly ipoly_gcd(const IPoly& a, const IPoly& b) {
    if (a.is_zero()) return b.is_zero() ? IPoly{} : ipoly_div_int(b, b.leading() < 0 ? Int(-ipoly_content(b)) : ipoly_content(b));
    if (b.is_zero()) return ipoly_div_int(a, a.leading() < 0 ? Int(-ipoly_content(a)) : ipoly_content(a));
    IPoly prim = qpoly_to_primitive(poly_gcd(to_qpoly(a), to_qpoly(b)));
    Int content = int_gcd(ipoly_content(a), ipoly_content(b));
    IPoly g = prim;
    for (auto& c : g.coeff) c *= content;
    return g;
}

inline IPoly ipoly_divexact(const IPoly& a, const IPoly& b) {
    auto [q, r] = poly_divmod(to_qpoly(a), to_qpoly(b));
    if (!r.is_zero()) throw DomainError("ipoly_divexact: inexact division");
    IPoly res;
    res.coeff.reserve(q.coeff.size());
    for (const auto& c : q.coeff) {
        if (denominator(c) != 1) throw DomainError("ipoly_divexact: non-integer quotient");
        res.coeff.emplace_back(numerator(c));
    }
    res.trim();
    return res;
}

}  // namespace qsp
