#pragma once

#include "qsp/cyclotomic.hpp"
#include "qsp/laurent.hpp"

#include <string>
#include <vector>

namespace qsp {

/// [n] at q_i = q^eps: symmetric Gaussian integer, [-n] = -[n], [0] = 0.
inline LaurentScalar qint(long n, long eps = 1) {
    if (n < 0) return -qint(-n, eps);
    std::vector<std::pair<long, Int>> terms;
    terms.reserve(static_cast<size_t>(n));
    for (long k = 0; k < n; ++k) terms.emplace_back(2 * eps * (n - 1 - 2 * k), Int(1));
    return LaurentScalar::from_terms(terms);
}

inline LaurentScalar qfact(long n, long eps = 1) {
    if (n < 0) throw DomainError("qfact: negative argument");
    LaurentScalar r(1);
    for (long k = 2; k <= n; ++k) r = r * qint(k, eps);
    return r;
}

/// [m]!! = [m][m-2][m-4]... down to [1] or [2].
inline LaurentScalar qdfact(long m, long eps = 1) {
    if (m < 0) throw DomainError("qdfact: negative argument");
    LaurentScalar r(1);
    for (long k = m; k >= 1; k -= 2) r = r * qint(k, eps);
    return r;
}

/// Gaussian binomial via the product formula prod_{j=1}^{k} [m-k+j]/[j];
/// defined for all integers m and k >= 0, always a Laurent polynomial.
inline LaurentScalar qbinom(long m, long k, long eps = 1) {
    if (k < 0) throw DomainError("qbinom: negative lower argument");
    LaurentScalar num(1), den(1);
    for (long j = 1; j <= k; ++j) {
        num = num * qint(m - k + j, eps);
        den = den * qint(j, eps);
    }
    return num / den;
}

/// Dispatcher keyed by kind: "int" [n], "fact" [n]!, "dfact" [n]!!,
/// "binom" [m choose k]; the trailing parameter is the exponent eps of q_i = q^eps.
inline LaurentScalar qnumber(const std::string& kind, const std::vector<long>& args,
                             long eps = 1) {
    if (kind == "int") {
        if (args.size() != 1) throw DomainError("qnumber int: expected 1 argument");
        return qint(args[0], eps);
    }
    if (kind == "fact") {
        if (args.size() != 1) throw DomainError("qnumber fact: expected 1 argument");
        return qfact(args[0], eps);
    }
    if (kind == "dfact") {
        if (args.size() != 1) throw DomainError("qnumber dfact: expected 1 argument");
        return qdfact(args[0], eps);
    }
    if (kind == "binom") {
        if (args.size() != 2) throw DomainError("qnumber binom: expected 2 arguments");
        return qbinom(args[0], args[1], eps);
    }
    throw DomainError("qnumber: unknown kind '" + kind + "'");
}

/// Scalar identities at a primitive ell-th root of unity (ell odd >= 3):
///   sum_{r=1}^{ell-1} (-1)^r v^r / ((v - v^-1)^ell [r]! [ell-r]!) = (1-ell)/(2 ell),
///   (v - v^-1)^{ell-1} [ell-1]! = ell,
///   [2 ell choose ell] = 2,
///   [n] = 0 exactly when ell | n.
/// Summands are formed generically and specialized one at a time, so each
/// evaluation is itself a pole-freeness certificate.
inline std::vector<IdentityCheck> verify_unity_identities(long ell) {
    if (ell < 3 || ell % 2 == 0) throw DomainError("verify_unity_identities: ell must be odd >= 3");
    auto f = CycloField::make(ell);
    std::vector<IdentityCheck> out;

    LaurentScalar vm = LaurentScalar::q_power(1) - LaurentScalar::q_power(-1);
    {
        Cyclo sum;
        for (long r = 1; r <= ell - 1; ++r) {
            LaurentScalar term = LaurentScalar::q_power(r) /
                                 (vm.pow(static_cast<unsigned>(ell)) * qfact(r) * qfact(ell - r));
            if (r % 2) term = -term;
            sum = sum + specialize(term, f);
        }
        Cyclo rhs = Cyclo::from_rat(f, rat(1 - ell, 2 * ell));
        out.push_back({"alternating_inverse_sum", sum == rhs,
                       "sum = " + sum.to_string() + ", expected (1-ell)/(2 ell)"});
    }
    {
        Cyclo lhs = specialize(vm.pow(static_cast<unsigned>(ell - 1)) * qfact(ell - 1), f);
        Cyclo rhs = Cyclo::from_rat(f, Rat(ell));
        out.push_back({"factorial_times_power", lhs == rhs,
                       "value = " + lhs.to_string() + ", expected ell"});
    }
    {
        Cyclo lhs = specialize(qbinom(2 * ell, ell), f);
        Cyclo rhs = Cyclo::from_rat(f, Rat(2));
        out.push_back({"central_binomial", lhs == rhs,
                       "value = " + lhs.to_string() + ", expected 2"});
    }
    {
        bool ok = true;
        std::string detail = "checked n = 1..2 ell";
        for (long n = 1; n <= 2 * ell && ok; ++n) {
            bool vanish = specialize(qint(n), f).is_zero();
            if (vanish != (n % ell == 0)) {
                ok = false;
                detail = "failed at n = " + std::to_string(n);
            }
        }
        out.push_back({"qint_vanishing", ok, detail});
    }
    return out;
}

}  // namespace qsp
