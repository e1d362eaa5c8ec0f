#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ranklab/numbers.hpp"

namespace ranklab {

// Dense univariate polynomials, coefficients ascending by power, always
// trimmed (no trailing zeros; the zero polynomial is the empty vector).
using QPoly = std::vector<BigRat>;
using ZPoly = std::vector<BigInt>;

namespace qpoly {

QPoly trim(QPoly p);
int deg(const QPoly& p); // -1 for the zero polynomial
bool is_zero(const QPoly& p);
bool equal(const QPoly& a, const QPoly& b);
QPoly constant(const BigRat& c);
QPoly add(const QPoly& a, const QPoly& b);
QPoly sub(const QPoly& a, const QPoly& b);
QPoly neg(QPoly a);
QPoly mul(const QPoly& a, const QPoly& b);
QPoly scale(const QPoly& a, const BigRat& c);
// Euclidean division; divisor must be nonzero.
std::pair<QPoly, QPoly> divrem(const QPoly& a, const QPoly& b);
QPoly monic(QPoly a);
QPoly gcd(QPoly a, QPoly b); // monic
QPoly derivative(const QPoly& a);
QPoly squarefree_part(const QPoly& a);
BigRat eval(const QPoly& a, const BigRat& x);
QPoly from_z(const ZPoly& a);

// Arithmetic in Q[w]/(mod); mod monic of degree >= 1, operands reduced.
QPoly mulmod(const QPoly& a, const QPoly& b, const QPoly& mod);
std::optional<QPoly> invmod(const QPoly& a, const QPoly& mod);

std::string to_string(const QPoly& p, const std::string& var);

} // namespace qpoly

namespace zpoly {

ZPoly trim(ZPoly p);
int deg(const ZPoly& p);
bool is_monic(const ZPoly& p);
BigInt content(const ZPoly& p);
ZPoly mul(const ZPoly& a, const ZPoly& b);
BigInt eval(const ZPoly& a, const BigInt& x);
// Resultant via a dense fraction-free elimination of the Sylvester matrix.
BigInt resultant(const ZPoly& a, const ZPoly& b);
BigInt discriminant(const ZPoly& monic);
std::string to_string(const ZPoly& p, const std::string& var);

// True iff p is irreducible over Q. Requires monic input. Certifies via an
// irreducible reduction mod small primes, falling back to a bounded search
// for factors of degree <= deg/2 (Mignotte coefficient bound). Throws
// RootIsolationFailed when neither route is conclusive.
bool is_irreducible_over_q(const ZPoly& p);

} // namespace zpoly

// Polynomials over F_p: canonical residues in [0, p), trimmed.
namespace pmod {

using Poly = std::vector<BigInt>;

Poly trim(Poly f, const BigInt& p);
Poly reduce(const ZPoly& f, const BigInt& p);
int deg(const Poly& f);
Poly add(const Poly& a, const Poly& b, const BigInt& p);
Poly sub(const Poly& a, const Poly& b, const BigInt& p);
Poly mul(const Poly& a, const Poly& b, const BigInt& p);
Poly scale(const Poly& a, const BigInt& c, const BigInt& p);
std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b, const BigInt& p);
Poly monic(Poly a, const BigInt& p);
Poly gcd(Poly a, Poly b, const BigInt& p); // monic
Poly powmod(const Poly& base, const BigInt& e, const Poly& mod, const BigInt& p);
Poly derivative(const Poly& a, const BigInt& p);
bool is_irreducible(const Poly& f, const BigInt& p);
bool divides(const Poly& d, const Poly& f, const BigInt& p);

// Complete factorization of a squarefree monic polynomial into monic
// irreducible factors, sorted for determinism (Cantor-Zassenhaus with a
// generator seeded from (p, f)).
std::vector<Poly> factor_squarefree(Poly f, const BigInt& p);

} // namespace pmod

// Certified maximum root modulus of a squarefree polynomial over Q.
// `value` is the max |root| of the Durand-Kerner approximations and every
// root of the polynomial lies within `error` of some approximation.
struct CertifiedReal {
    double value = 0.0;
    double error = 0.0;
    double upper() const { return value + error; }
};

CertifiedReal max_root_modulus(const QPoly& squarefree, double tol = 1e-10);

} // namespace ranklab
