#pragma once

#include "qsp/poly.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qsp {

/// Exact rational function in s = q^(1/2) with integer coefficients.
/// Canonical form: gcd(num, den) = 1 and den has positive leading coefficient,
/// so equality is plain field-by-field comparison.
class LaurentScalar {
   public:
    LaurentScalar() : num_{}, den_(IPoly::constant(1)) {}
    explicit LaurentScalar(long v) : num_(IPoly::constant(Int(v))), den_(IPoly::constant(1)) {}
    explicit LaurentScalar(const Int& v) : num_(IPoly::constant(v)), den_(IPoly::constant(1)) {}
    explicit LaurentScalar(const Rat& v)
        : num_(IPoly::constant(numerator(v))), den_(IPoly::constant(denominator(v))) {}

    static LaurentScalar from_fraction(IPoly num, IPoly den) {
        LaurentScalar r;
        r.num_ = std::move(num);
        r.den_ = std::move(den);
        r.normalize();
        return r;
    }

    /// s^k = q^(k/2), any integer k.
    static LaurentScalar s_power(long k) {
        LaurentScalar r;
        if (k >= 0) {
            r.num_ = IPoly::monomial(Int(1), static_cast<int>(k));
        } else {
            r.num_ = IPoly::constant(Int(1));
            r.den_ = IPoly::monomial(Int(1), static_cast<int>(-k));
        }
        return r;
    }
    /// q^k.
    static LaurentScalar q_power(long k) { return s_power(2 * k); }

    /// Sum of coeff * q^(half_exp/2) terms.
    static LaurentScalar from_terms(const std::vector<std::pair<long, Int>>& terms) {
        long min_exp = 0;
        for (const auto& [e, c] : terms)
            if (c != 0 && e < min_exp) min_exp = e;
        IPoly num;
        for (const auto& [e, c] : terms) {
            if (c == 0) continue;
            num = num + IPoly::monomial(c, static_cast<int>(e - min_exp));
        }
        LaurentScalar r;
        r.num_ = std::move(num);
        if (min_exp < 0) r.den_ = IPoly::monomial(Int(1), static_cast<int>(-min_exp));
        r.normalize();
        return r;
    }

    const IPoly& num() const { return num_; }
    const IPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_ == den_; }

    friend LaurentScalar operator+(const LaurentScalar& a, const LaurentScalar& b) {
        LaurentScalar r;
        if (a.den_ == b.den_) {
            r.num_ = a.num_ + b.num_;
            r.den_ = a.den_;
        } else {
            r.num_ = a.num_ * b.den_ + b.num_ * a.den_;
            r.den_ = a.den_ * b.den_;
        }
        r.normalize();
        return r;
    }
    friend LaurentScalar operator-(const LaurentScalar& a, const LaurentScalar& b) {
        return a + (-b);
    }
    friend LaurentScalar operator-(const LaurentScalar& a) {
        LaurentScalar r = a;
        r.num_ = -r.num_;
        return r;
    }
    friend LaurentScalar operator*(const LaurentScalar& a, const LaurentScalar& b) {
        if (a.is_zero() || b.is_zero()) return LaurentScalar();
        IPoly g1 = ipoly_gcd(a.num_, b.den_);
        IPoly g2 = ipoly_gcd(b.num_, a.den_);
        LaurentScalar r;
        r.num_ = ipoly_divexact(a.num_, g1) * ipoly_divexact(b.num_, g2);
        r.den_ = ipoly_divexact(a.den_, g2) * ipoly_divexact(b.den_, g1);
        r.fix_sign();
        return r;
    }
    friend LaurentScalar operator/(const LaurentScalar& a, const LaurentScalar& b) {
        if (b.is_zero()) throw PoleError("LaurentScalar: division by zero");
        LaurentScalar binv;
        binv.num_ = b.den_;
        binv.den_ = b.num_;
        binv.fix_sign();
        return a * binv;
    }
    friend bool operator==(const LaurentScalar& a, const LaurentScalar& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    LaurentScalar pow(unsigned e) const {
        LaurentScalar acc(1), base = *this;
        while (e) {
            if (e & 1u) acc = acc * base;
            base = base * base;
            e >>= 1u;
        }
        return acc;
    }

    /// True when the value lies in Z[q^(1/2), q^(-1/2)] (denominator a monomial).
    bool is_laurent_polynomial() const {
        int nonzero = 0;
        for (const auto& c : den_.coeff)
            if (c != 0) ++nonzero;
        return nonzero == 1;
    }

    /// Map of s-exponent -> rational coefficient; requires is_laurent_polynomial().
    std::map<long, Rat, std::greater<long>> laurent_terms() const {
        if (!is_laurent_polynomial())
            throw DomainError("LaurentScalar: not a Laurent polynomial");
        int shift = den_.degree();
        Rat lead(den_.leading());
        std::map<long, Rat, std::greater<long>> out;
        for (size_t k = 0; k < num_.coeff.size(); ++k)
            if (num_.coeff[k] != 0) out[static_cast<long>(k) - shift] = Rat(num_.coeff[k]) / lead;
        return out;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        if (is_laurent_polynomial()) return laurent_poly_string();
        LaurentScalar n, d;
        n.num_ = num_;
        d.num_ = den_;
        return "(" + n.laurent_poly_string() + ")/(" + d.laurent_poly_string() + ")";
    }

   private:
    IPoly num_, den_;

    void fix_sign() {
        if (den_.leading() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
    }
    void normalize() {
        if (den_.is_zero()) throw DomainError("LaurentScalar: zero denominator");
        if (num_.is_zero()) {
            den_ = IPoly::constant(1);
            return;
        }
        IPoly g = ipoly_gcd(num_, den_);
        num_ = ipoly_divexact(num_, g);
        den_ = ipoly_divexact(den_, g);
        fix_sign();
    }

    static std::string q_base(long s_exp) {
        if (s_exp == 0) return "";
        if (s_exp % 2 == 0) {
            long e = s_exp / 2;
            if (e == 1) return "q";
            return "q^" + std::to_string(e);
        }
        return "q^(" + std::to_string(s_exp) + "/2)";
    }

    std::string laurent_poly_string() const {
        auto terms = laurent_terms();
        std::string out;
        bool first = true;
        for (const auto& [e, c] : terms) {
            Rat mag = c < 0 ? Rat(-c) : c;
            if (first) {
                if (c < 0) out += "-";
                first = false;
            } else {
                out += c < 0 ? " - " : " + ";
            }
            std::string base = q_base(e);
            if (base.empty()) {
                out += rat_str(mag);
            } else if (mag == 1) {
                out += base;
            } else {
                out += rat_str(mag) + "*" + base;
            }
        }
        return out;
    }
};

}  // namespace qsp
