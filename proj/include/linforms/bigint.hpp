#ifndef LINFORMS_BIGINT_HPP
#define LINFORMS_BIGINT_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace linforms {

// Exact arithmetic only. BigInt/BigRat never round; rationals are kept
// canonical (lowest terms, positive denominator) by gmp.
using BigInt = mpz_class;
using BigRat = mpq_class;

inline BigInt parse_bigint(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("parse_bigint: empty string");
    BigInt v;
    if (v.set_str(s, 10) != 0)
        throw std::invalid_argument("parse_bigint: not a decimal integer: '" + s + "'");
    return v;
}

inline BigRat make_rat(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
    BigRat r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p" or "p/q".
inline BigRat parse_bigrat(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return BigRat(parse_bigint(s));
    return make_rat(parse_bigint(s.substr(0, slash)), parse_bigint(s.substr(slash + 1)));
}

inline std::string rat_to_string(const BigRat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline BigInt bigint_pow(const BigInt& base, unsigned long exp) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

inline BigInt bigint_abs(const BigInt& v) {
    BigInt r;
    mpz_abs(r.get_mpz_t(), v.get_mpz_t());
    return r;
}

inline BigInt bigint_gcd(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline BigInt bigint_lcm(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// Euclidean remainder in [0, m).
inline BigInt bigint_mod(const BigInt& v, const BigInt& m) {
    BigInt r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline int cmp(const BigInt& a, const BigInt& b) {
    return mpz_cmp(a.get_mpz_t(), b.get_mpz_t());
}

inline bool fits_ulong(const BigInt& v) { return v >= 0 && v.fits_ulong_p(); }

inline unsigned long to_ulong(const BigInt& v) {
    if (!fits_ulong(v)) throw std::overflow_error("BigInt does not fit unsigned long");
    return v.get_ui();
}

inline BigInt binomial(const BigInt& n, unsigned long k) {
    if (n < 0) throw std::invalid_argument("binomial: negative n");
    BigInt r;
    mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
    return r;
}

}  // namespace linforms

#endif
