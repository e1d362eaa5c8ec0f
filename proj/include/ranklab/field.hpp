#pragma once

// Coefficient domains: Q, number fields K = Q[w]/(f), finite fields F_p and
// F_p[w]/(gbar), and fraction fields of polynomial rings Q(t1..tl) or
// K(t1..tl).  One runtime descriptor (Field) serves all of them so a single
// binary can run every experiment; dispatch cost is noise next to elimination.

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ranklab/poly.hpp"

namespace ranklab {

// ---------------------------------------------------------------------------
// Multivariate polynomials over Q or over a number field, recursive dense in
// the last variable.  Level l >= 1 nodes hold coefficients of level l-1; the
// level-0 scalar lives in the base field (BigRat for Q, a reduced QPoly in w
// for Q[w]/(f)).

using BaseScalar = std::variant<BigRat, QPoly>;

struct BaseCtx {
    ZPoly minpoly; // empty = base Q; otherwise monic irreducible, base Q[w]/(minpoly)
    bool is_rationals() const { return minpoly.empty(); }
    bool operator==(const BaseCtx&) const = default;
};

struct MPoly {
    int level = 0;
    BaseScalar scalar{BigRat(0)}; // meaningful only at level 0
    std::vector<MPoly> coeffs;    // level >= 1: ascending exponent, trimmed
    bool operator==(const MPoly&) const = default;
};

namespace scal {
BaseScalar zero(const BaseCtx& ctx);
BaseScalar one(const BaseCtx& ctx);
BaseScalar from_rat(const BaseCtx& ctx, const BigRat& q);
bool is_zero(const BaseScalar& a);
BaseScalar add(const BaseCtx& ctx, const BaseScalar& a, const BaseScalar& b);
BaseScalar sub(const BaseCtx& ctx, const BaseScalar& a, const BaseScalar& b);
BaseScalar mul(const BaseCtx& ctx, const BaseScalar& a, const BaseScalar& b);
BaseScalar neg(const BaseScalar& a);
BaseScalar inv(const BaseCtx& ctx, const BaseScalar& a); // throws DivisionByZero
std::string to_string(const BaseScalar& a);
} // namespace scal

namespace mpoly {
MPoly zero(int level);
MPoly from_scalar(int level, BaseScalar s);
MPoly tvar(const BaseCtx& ctx, int level, int i); // the variable t_i (1-based, i <= level)
bool is_zero(const MPoly& f);
int deg(const MPoly& f); // in the top variable; -1 for zero
MPoly add(const BaseCtx& ctx, const MPoly& a, const MPoly& b);
MPoly sub(const BaseCtx& ctx, const MPoly& a, const MPoly& b);
MPoly neg(const MPoly& a);
MPoly mul(const BaseCtx& ctx, const MPoly& a, const MPoly& b);
std::optional<MPoly> divexact(const BaseCtx& ctx, const MPoly& a, const MPoly& b);
MPoly gcd(const BaseCtx& ctx, MPoly a, MPoly b); // canonical: leading scalar 1
BaseScalar leading_scalar(const MPoly& f);
BaseScalar eval(const BaseCtx& ctx, const MPoly& f, const std::vector<BigRat>& point);
std::size_t term_count(const MPoly& f);
std::string to_string(const MPoly& f, int total_vars);
} // namespace mpoly

// Reduced fraction of multivariate polynomials; den has leading scalar 1.
struct RatFunc {
    MPoly num, den;
    bool operator==(const RatFunc&) const = default;
};

namespace ratfunc {
RatFunc make(const BaseCtx& ctx, MPoly num, MPoly den); // normalizes; den = 0 throws
RatFunc from_scalar(const BaseCtx& ctx, int level, BaseScalar s);
RatFunc add(const BaseCtx& ctx, const RatFunc& a, const RatFunc& b);
RatFunc sub(const BaseCtx& ctx, const RatFunc& a, const RatFunc& b);
RatFunc mul(const BaseCtx& ctx, const RatFunc& a, const RatFunc& b);
RatFunc div(const BaseCtx& ctx, const RatFunc& a, const RatFunc& b);
RatFunc neg(const BaseCtx& ctx, const RatFunc& a);
RatFunc inv(const BaseCtx& ctx, const RatFunc& a);
bool is_zero(const RatFunc& a);
// evaluate at a rational point; throws DenominatorVanishes
BaseScalar eval(const BaseCtx& ctx, const RatFunc& a, const std::vector<BigRat>& point);
std::string to_string(const RatFunc& a, int total_vars);
} // namespace ratfunc

// ---------------------------------------------------------------------------
// Field descriptor and elements.

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// One variant covers every supported domain:
//   Rationals          -> BigRat
//   NumberField        -> QPoly in w, deg < deg f
//   PrimeField         -> BigInt in [0, p)
//   ResidueField       -> vector<BigInt>, a pmod poly in w of deg < deg gbar
//   RationalFunctions  -> RatFunc
using FieldValue = std::variant<BigRat, QPoly, BigInt, std::vector<BigInt>, RatFunc>;

class Field {
public:
    enum class Kind { Rationals, NumberField, PrimeField, ResidueField, RationalFunctions };

    Kind kind;
    ZPoly minpoly;    // NumberField, or the base of RationalFunctions (empty = Q base)
    QPoly conj_image; // NumberField: image of w under the configured involution; empty = identity
    BigInt p;         // PrimeField / ResidueField
    pmod::Poly gbar;  // ResidueField modulus, irreducible mod p
    int num_vars = 0; // RationalFunctions

    static FieldPtr rationals();
    static FieldPtr number_field(ZPoly f, QPoly conj_w = {});
    static FieldPtr prime_field(BigInt p);
    static FieldPtr residue_field(BigInt p, pmod::Poly gbar);
    static FieldPtr rational_functions(int vars, ZPoly base_minpoly = {});

    bool same(const Field& other) const;
    bool finite() const { return kind == Kind::PrimeField || kind == Kind::ResidueField; }
    std::optional<BigInt> cardinality() const;
    int extension_degree() const; // [K:Q] for char 0 (and the base of Q(t..)); [F:F_p] for finite
    std::string description() const;
    BaseCtx base_ctx() const { return BaseCtx{minpoly}; }

    FieldValue zero() const;
    FieldValue one() const;
    FieldValue from_int(long n) const;
    FieldValue from_rat(const BigRat& q) const; // finite fields: throws PrimeDividesDenominator
    FieldValue w_gen() const;                   // NumberField / ResidueField generator
    FieldValue t_var(int i) const;              // RationalFunctions variable t_i (1-based)

    FieldValue add(const FieldValue& a, const FieldValue& b) const;
    FieldValue sub(const FieldValue& a, const FieldValue& b) const;
    FieldValue mul(const FieldValue& a, const FieldValue& b) const;
    FieldValue div(const FieldValue& a, const FieldValue& b) const;
    FieldValue neg(const FieldValue& a) const;
    FieldValue inv(const FieldValue& a) const;
    FieldValue conj(const FieldValue& a) const;
    bool is_zero(const FieldValue& a) const;
    bool is_one(const FieldValue& a) const;
    bool equals(const FieldValue& a, const FieldValue& b) const;
    std::string str(const FieldValue& a) const;
    // the value as a rational number, when it canonically is one (char 0 only)
    std::optional<BigRat> rational(const FieldValue& a) const;

private:
    Field() = default;
};

// ---------------------------------------------------------------------------
// Prime ideals of O_K and reduction maps.

struct PrimeIdeal {
    BigInt p;
    pmod::Poly gbar;      // empty when the source field is Q
    FieldPtr residue;     // F_p, or F_p[w]/(gbar) when deg gbar >= 2
    BigInt residue_size;  // p^deg(gbar)
};

// Reduce x (over Q or K) modulo P.  Throws PrimeDividesDenominator when a
// denominator is not coprime to p, DomainMismatch for unsupported sources.
FieldValue reduce_mod_prime(const Field& src, const FieldValue& x, const PrimeIdeal& P);

// `count` prime ideals with strictly increasing residue-field size, smallest
// prime >= min_p, skipping primes that divide disc(f) or any listed integer.
// Deterministic.  Throws PrimeSearchExhausted past a fixed search cap.
std::vector<PrimeIdeal> enumerate_primes(const Field& K, int count, const BigInt& min_p,
                                         const std::vector<BigInt>& excluded = {});

// ---------------------------------------------------------------------------
// The house |~α~|: maximum modulus over all conjugate roots of α's minimal
// polynomial over Q.  Numerical with a certified radius (feeds only log2
// bounds, never a rank path).

CertifiedReal house_certified(const Field& K, const FieldValue& a);
double house(const Field& K, const FieldValue& a); // certified value; error <= 1e-9 enforced

// Monic characteristic polynomial of a dense rational matrix
// (Faddeev-LeVerrier); used for houses and for representation diagnostics.
QPoly char_poly_rational(const std::vector<std::vector<BigRat>>& m);

} // namespace ranklab
