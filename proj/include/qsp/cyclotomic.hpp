#pragma once

#include "qsp/laurent.hpp"
#include "qsp/poly.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace qsp {

/// Q[x]/Phi_ell(x) for odd ell >= 1; the class of x is a definite primitive
/// ell-th root of unity vtilde. ell = 1 degenerates to Q itself (vtilde = 1).
class CycloField {
   public:
    static std::shared_ptr<const CycloField> make(long ell) {
        if (ell < 1 || ell % 2 == 0) throw DomainError("CycloField: ell must be odd and positive");
        auto f = std::shared_ptr<CycloField>(new CycloField());
        f->ell_ = ell;
        f->phi_ = cyclotomic_polynomial(ell);
        return f;
    }

    long ell() const { return ell_; }
    const QPoly& modulus() const { return phi_; }
    int degree() const { return phi_.degree(); }

    /// Phi_n via x^n - 1 = prod_{d | n} Phi_d.
    static QPoly cyclotomic_polynomial(long n) {
        QPoly p = Poly<Rat>::monomial(Rat(1), static_cast<int>(n)) - QPoly::constant(Rat(1));
        for (long d = 1; d < n; ++d) {
            if (n % d != 0) continue;
            auto [q, r] = poly_divmod(p, cyclotomic_polynomial(d));
            if (!r.is_zero()) throw DomainError("cyclotomic_polynomial: inexact division");
            p = q;
        }
        return p;
    }

   private:
    CycloField() = default;
    long ell_ = 0;
    QPoly phi_;
};

using CycloFieldPtr = std::shared_ptr<const CycloField>;

/// Element of Q(zeta_ell) as a residue mod Phi_ell. A default-constructed
/// value is the field-agnostic zero, absorbed by any arithmetic partner.
class Cyclo {
   public:
    Cyclo() = default;
    Cyclo(CycloFieldPtr field, QPoly residue) : field_(std::move(field)), res_(std::move(residue)) {
        reduce();
    }

    static Cyclo from_rat(const CycloFieldPtr& f, const Rat& v) {
        return Cyclo(f, QPoly::constant(v));
    }
    static Cyclo one(const CycloFieldPtr& f) { return from_rat(f, Rat(1)); }
    /// The distinguished primitive ell-th root of unity (class of x).
    static Cyclo vtilde(const CycloFieldPtr& f) {
        return Cyclo(f, QPoly::monomial(Rat(1), 1));
    }
    /// v = vtilde^2, again primitive since ell is odd.
    static Cyclo v(const CycloFieldPtr& f) { return vtilde(f) * vtilde(f); }

    bool is_zero() const { return res_.is_zero(); }
    const CycloFieldPtr& field() const { return field_; }
    const QPoly& residue() const { return res_; }

    friend Cyclo operator+(const Cyclo& a, const Cyclo& b) {
        if (a.field_ == nullptr) return b;
        if (b.field_ == nullptr) return a;
        a.check(b);
        return Cyclo(a.field_, a.res_ + b.res_);
    }
    friend Cyclo operator-(const Cyclo& a, const Cyclo& b) { return a + (-b); }
    friend Cyclo operator-(const Cyclo& a) {
        Cyclo r = a;
        r.res_ = -r.res_;
        return r;
    }
    friend Cyclo operator*(const Cyclo& a, const Cyclo& b) {
        if (a.field_ == nullptr || b.field_ == nullptr) return Cyclo();
        a.check(b);
        return Cyclo(a.field_, a.res_ * b.res_);
    }
    Cyclo inverse() const {
        if (is_zero()) throw PoleError("Cyclo: inverse of zero");
        auto [g, u, v_] = poly_xgcd(res_, field_->modulus());
        (void)v_;
        if (g.degree() != 0) throw DomainError("Cyclo: modulus not coprime to residue");
        return Cyclo(field_, u.scaled(Rat(1) / g.leading()));
    }
    friend Cyclo operator/(const Cyclo& a, const Cyclo& b) { return a * b.inverse(); }
    friend bool operator==(const Cyclo& a, const Cyclo& b) { return (a - b).is_zero(); }

    Cyclo pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        Cyclo acc = field_ ? one(field_) : Cyclo();
        Cyclo base = *this;
        auto u = static_cast<unsigned long>(e);
        while (u) {
            if (u & 1ul) acc = acc * base;
            base = base * base;
            u >>= 1ul;
        }
        return acc;
    }

    bool is_rational() const { return res_.degree() <= 0; }
    Rat as_rat() const {
        if (!is_rational()) throw DomainError("Cyclo: not rational");
        return res_.at(0);
    }

    /// Coefficient-vector form "[c0, c1, ...] mod Phi_ell".
    std::string to_string() const {
        if (field_ == nullptr) return "0";
        std::string out = "[";
        for (int k = 0; k <= std::max(res_.degree(), 0); ++k) {
            if (k) out += ", ";
            out += rat_str(res_.at(static_cast<size_t>(k)));
        }
        return out + "] mod Phi_" + std::to_string(field_->ell());
    }

   private:
    CycloFieldPtr field_;
    QPoly res_;

    void check(const Cyclo& other) const {
        if (field_->ell() != other.field_->ell())
            throw DomainError("Cyclo: mixed cyclotomic moduli");
    }
    void reduce() {
        if (res_.degree() >= field_->modulus().degree()) {
            auto [q, r] = poly_divmod(res_, field_->modulus());
            (void)q;
            res_ = std::move(r);
        }
    }
};

/// Evaluate num/den at s = vtilde; PoleError when the denominator vanishes.
inline Cyclo specialize(const LaurentScalar& x, const CycloFieldPtr& f) {
    Cyclo s = Cyclo::vtilde(f);
    auto lift = [&](const Int& c) { return Cyclo::from_rat(f, Rat(c)); };
    Cyclo den = x.den().eval(s, lift);
    if (den.is_zero()) throw PoleError("specialize: denominator vanishes at vtilde");
    Cyclo num = x.num().eval(s, lift);
    return num / den;
}

/// Rational function in s with coefficients in Q(zeta_ell); canonical form has
/// a monic denominator coprime to the numerator. Supports exact division by
/// scalars such as q*v^-1 - 1 that live outside Q(s).
class CycloFraction {
   public:
    CycloFraction() = default;
    explicit CycloFraction(CycloFieldPtr f)
        : field_(std::move(f)), num_{}, den_(Poly<Cyclo>::constant(Cyclo::one(field_))) {}
    CycloFraction(CycloFieldPtr f, Poly<Cyclo> num, Poly<Cyclo> den)
        : field_(std::move(f)), num_(std::move(num)), den_(std::move(den)) {
        normalize();
    }

    static CycloFraction from_cyclo(const Cyclo& c) {
        if (c.field() == nullptr) return CycloFraction();
        return CycloFraction(c.field(), Poly<Cyclo>::constant(c),
                             Poly<Cyclo>::constant(Cyclo::one(c.field())));
    }
    static CycloFraction from_rat(const CycloFieldPtr& f, const Rat& v) {
        return from_cyclo(Cyclo::from_rat(f, v));
    }
    static CycloFraction from_laurent(const LaurentScalar& x, const CycloFieldPtr& f) {
        auto lift = [&](const IPoly& p) {
            Poly<Cyclo> out;
            out.coeff.reserve(p.coeff.size());
            for (const auto& c : p.coeff) out.coeff.emplace_back(Cyclo::from_rat(f, Rat(c)));
            out.trim();
            return out;
        };
        return CycloFraction(f, lift(x.num()), lift(x.den()));
    }
    /// s^k as a fraction.
    static CycloFraction s_power(const CycloFieldPtr& f, long k) {
        Poly<Cyclo> one = Poly<Cyclo>::constant(Cyclo::one(f));
        if (k >= 0)
            return CycloFraction(f, Poly<Cyclo>::monomial(Cyclo::one(f), static_cast<int>(k)), one);
        return CycloFraction(f, one, Poly<Cyclo>::monomial(Cyclo::one(f), static_cast<int>(-k)));
    }

    bool is_zero() const { return field_ == nullptr || num_.is_zero(); }
    const CycloFieldPtr& field() const { return field_; }

    friend CycloFraction operator+(const CycloFraction& a, const CycloFraction& b) {
        if (a.field_ == nullptr) return b;
        if (b.field_ == nullptr) return a;
        if (a.den_ == b.den_) return CycloFraction(a.field_, a.num_ + b.num_, a.den_);
        return CycloFraction(a.field_, a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend CycloFraction operator-(const CycloFraction& a, const CycloFraction& b) {
        return a + (-b);
    }
    friend CycloFraction operator-(const CycloFraction& a) {
        CycloFraction r = a;
        r.num_ = -r.num_;
        return r;
    }
    friend CycloFraction operator*(const CycloFraction& a, const CycloFraction& b) {
        if (a.is_zero() || b.is_zero()) return CycloFraction();
        Poly<Cyclo> g1 = poly_gcd(a.num_, b.den_);
        Poly<Cyclo> g2 = poly_gcd(b.num_, a.den_);
        auto div = [](const Poly<Cyclo>& p, const Poly<Cyclo>& g) {
            auto [q, r] = poly_divmod(p, g);
            if (!r.is_zero()) throw DomainError("CycloFraction: inexact gcd division");
            return q;
        };
        CycloFraction r;
        r.field_ = a.field_;
        r.num_ = div(a.num_, g1) * div(b.num_, g2);
        r.den_ = div(a.den_, g2) * div(b.den_, g1);
        r.make_monic();
        return r;
    }
    friend CycloFraction operator/(const CycloFraction& a, const CycloFraction& b) {
        if (b.is_zero()) throw PoleError("CycloFraction: division by zero");
        CycloFraction binv;
        binv.field_ = b.field_;
        binv.num_ = b.den_;
        binv.den_ = b.num_;
        binv.make_monic();
        return a * binv;
    }
    friend bool operator==(const CycloFraction& a, const CycloFraction& b) {
        return (a - b).is_zero();
    }

    /// Evaluate at s = vtilde; PoleError when the reduced denominator vanishes there.
    Cyclo eval_vtilde() const {
        if (field_ == nullptr) return Cyclo();
        Cyclo s = Cyclo::vtilde(field_);
        Cyclo den = den_.eval(s);
        if (den.is_zero()) throw PoleError("CycloFraction: pole at vtilde");
        return num_.eval(s) / den;
    }

   private:
    CycloFieldPtr field_;
    Poly<Cyclo> num_, den_;

    void make_monic() {
        if (num_.is_zero()) {
            den_ = Poly<Cyclo>::constant(Cyclo::one(field_));
            return;
        }
        Cyclo lead = den_.leading();
        if (!(lead == Cyclo::one(field_))) {
            Cyclo inv = lead.inverse();
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }
    void normalize() {
        if (den_.is_zero()) throw DomainError("CycloFraction: zero denominator");
        if (num_.is_zero()) {
            den_ = Poly<Cyclo>::constant(Cyclo::one(field_));
            return;
        }
        Poly<Cyclo> g = poly_gcd(num_, den_);
        if (g.degree() > 0) {
            auto [qn, rn] = poly_divmod(num_, g);
            auto [qd, rd] = poly_divmod(den_, g);
            if (!rn.is_zero() || !rd.is_zero())
                throw DomainError("CycloFraction: inexact gcd division");
            num_ = qn;
            den_ = qd;
        }
        make_monic();
    }
};

}  // namespace qsp
