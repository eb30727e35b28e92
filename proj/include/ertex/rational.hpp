#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ertex {

/// Exact rational scalar. GMP keeps values canonical (gcd 1, positive
/// denominator), so structural equality is mathematical equality.
using Rat = mpq_class;

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

/// Generalized binomial coefficient n(n-1)...(n-k+1)/k! for any integer n.
/// Zero for k < 0.
inline Rat binom(long n, long k) {
    if (k < 0) return Rat(0);
    mpz_class result;
    mpz_class nz(n);
    mpz_bin_ui(result.get_mpz_t(), nz.get_mpz_t(), static_cast<unsigned long>(k));
    return Rat(result);
}

inline Rat factorial(unsigned long k) {
    mpz_class result;
    mpz_fac_ui(result.get_mpz_t(), k);
    return Rat(result);
}

/// (+1 or -1) raised to an arbitrary integer exponent.
inline int sign_pow(int sign, long exp) {
    if (sign >= 0) return 1;
    return (exp % 2 == 0) ? 1 : -1;
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

/// Parses "a" or "a/b" with optional leading '-'. Throws on malformed input
/// or zero denominator.
inline Rat parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        bool ok = (c >= '0' && c <= '9') || c == '/' || (c == '-' && i == 0);
        if (!ok) throw std::invalid_argument("malformed rational literal: " + text);
    }
    Rat r;
    if (r.set_str(text, 10) != 0)
        throw std::invalid_argument("malformed rational literal: " + text);
    if (sgn(r.get_den()) == 0)
        throw std::invalid_argument("zero denominator in rational literal: " + text);
    r.canonicalize();
    return r;
}

}  // namespace ertex
