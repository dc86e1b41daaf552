#ifndef VOA_SCALAR_HPP
#define VOA_SCALAR_HPP

#include <gmpxx.h>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace voa {

/// Exact rational scalar. All arithmetic in this library is exact; there is
/// no floating point anywhere.
using Scalar = mpq_class;

inline Scalar scalar(long num, long den = 1) {
    Scalar q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_zero(const Scalar& s) { return sgn(s) == 0; }

/// Parse "p/q" or "p" (decimal integers, optional leading '-').
inline Scalar parse_scalar(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            mpz_class num(text);
            return Scalar(num);
        }
        mpz_class num(text.substr(0, slash));
        mpz_class den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        Scalar q(num, den);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad rational literal: '" + text + "'");
    }
}

/// Canonical "p/q" form (plain "p" when the denominator is 1).
inline std::string to_string(const Scalar& s) {
    if (s.get_den() == 1) return s.get_num().get_str();
    return s.get_num().get_str() + "/" + s.get_den().get_str();
}

inline Scalar factorial(long n) {
    if (n < 0) throw std::domain_error("factorial of negative");
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Scalar(f);
}

/// Binomial C(m, k) for integer m (possibly negative), k >= 0.
inline Scalar binomial(long m, long k) {
    if (k < 0) return 0;
    Scalar acc = 1;
    for (long i = 0; i < k; ++i) acc *= Scalar(m - i, k - i);
    acc.canonicalize();
    return acc;
}

/// Falling factorial (b)_i = b (b-1) ... (b-i+1).
inline Scalar falling(long b, long i) {
    Scalar acc = 1;
    for (long j = 0; j < i; ++j) acc *= (b - j);
    return acc;
}

} // namespace voa

#endif
