#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "ranklab/errors.hpp"

namespace ranklab {

// All exact arithmetic runs on GMP. No floating point touches a rank path;
// doubles appear only in the house/root bounds, which feed log2 estimates.
using BigInt = mpz_class;
using BigRat = mpq_class;

inline BigRat make_rat(BigInt num, BigInt den) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    BigRat q;
    q.get_num() = std::move(num);
    q.get_den() = std::move(den);
    q.canonicalize();
    return q;
}

inline std::string str(const BigInt& z) { return z.get_str(); }

inline std::string str(const BigRat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Strict integer parse; throws ParseError on junk.
inline BigInt parse_int(std::string_view s) {
    if (s.empty()) throw ParseError("empty integer", 0);
    BigInt z;
    if (mpz_set_str(z.get_mpz_t(), std::string(s).c_str(), 10) != 0)
        throw ParseError("bad integer '" + std::string(s) + "'", 0);
    return z;
}

// Accepts "n" or "n/d".
inline BigRat parse_rat(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return BigRat(parse_int(s));
    return make_rat(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
}

inline BigInt gcd(const BigInt& a, const BigInt& b) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
    BigInt g;
    mpz_lcm(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline BigInt pow_ui(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline BigInt mod_floor(const BigInt& a, const BigInt& m) {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

// Inverse of a mod m; throws DivisionByZero when gcd(a, m) != 1.
inline BigInt inv_mod(const BigInt& a, const BigInt& m) {
    BigInt r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw DivisionByZero("not invertible mod " + m.get_str());
    return r;
}

inline BigInt pow_mod(const BigInt& b, const BigInt& e, const BigInt& m) {
    BigInt r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline bool is_prime(const BigInt& p) {
    return mpz_probab_prime_p(p.get_mpz_t(), 40) != 0;
}

inline BigInt next_prime(const BigInt& p) {
    BigInt r;
    mpz_nextprime(r.get_mpz_t(), p.get_mpz_t());
    return r;
}

// FNV-1a, used for content-addressed run directories and seeding.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace ranklab
