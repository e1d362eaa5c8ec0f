#include "ranklab/field.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

namespace ranklab {

// ---------------------------------------------------------------------------
// Base scalars (Q or Q[w]/(f)).

namespace scal {

// Invariant: a zero scalar is always stored as BigRat(0), independent of the
// base, so structural equality of MPoly nodes is meaningful everywhere.

namespace {

BaseScalar canon(BaseScalar s) {
    if (is_zero(s)) return BigRat(0);
    return s;
}

QPoly as_nf_scalar(const BaseScalar& s) {
    if (const auto* q = std::get_if<QPoly>(&s)) return *q;
    const BigRat& r = std::get<BigRat>(s);
    return r == 0 ? QPoly{} : QPoly{r};
}

} // namespace

BaseScalar zero(const BaseCtx&) { return BigRat(0); }

BaseScalar one(const BaseCtx& ctx) {
    if (ctx.is_rationals()) return BigRat(1);
    return QPoly{BigRat(1)};
}

BaseScalar from_rat(const BaseCtx& ctx, const BigRat& q) {
    if (ctx.is_rationals() || q == 0) return q;
    return QPoly{q};
}

bool is_zero(const BaseScalar& a) {
    if (const auto* r = std::get_if<BigRat>(&a)) return *r == 0;
    return std::get<QPoly>(a).empty();
}

BaseScalar add(const BaseCtx& ctx, const BaseScalar& a, const BaseScalar& b) {
    if (ctx.is_rationals()) return BigRat(std::get<BigRat>(a) + std::get<BigRat>(b));
    return canon(qpoly::add(as_nf_scalar(a), as_nf_scalar(b)));
}

BaseScalar sub(const BaseCtx& ctx, const BaseScalar& a, const BaseScalar& b) {
    if (ctx.is_rationals()) return BigRat(std::get<BigRat>(a) - std::get<BigRat>(b));
    return canon(qpoly::sub(as_nf_scalar(a), as_nf_scalar(b)));
}

BaseScalar mul(const BaseCtx& ctx, const BaseScalar& a, const BaseScalar& b) {
    if (ctx.is_rationals()) return BigRat(std::get<BigRat>(a) * std::get<BigRat>(b));
    return canon(
        qpoly::mulmod(as_nf_scalar(a), as_nf_scalar(b), qpoly::from_z(ctx.minpoly)));
}

BaseScalar neg(const BaseScalar& a) {
    if (const auto* r = std::get_if<BigRat>(&a)) return BigRat(-*r);
    return std::get<QPoly>(a).empty() ? BaseScalar(BigRat(0))
                                      : BaseScalar(qpoly::neg(std::get<QPoly>(a)));
}

BaseScalar inv(const BaseCtx& ctx, const BaseScalar& a) {
    if (is_zero(a)) throw DivisionByZero("scalar inverse of zero");
    if (ctx.is_rationals()) return BigRat(1 / std::get<BigRat>(a));
    auto r = qpoly::invmod(as_nf_scalar(a), qpoly::from_z(ctx.minpoly));
    if (!r) throw DivisionByZero("non-invertible number field element"); // impossible: f irreducible
    return *r;
}

std::string to_string(const BaseScalar& a) {
    if (const auto* r = std::get_if<BigRat>(&a)) return str(*r);
    return qpoly::to_string(std::get<QPoly>(a), "w");
}

} // namespace scal

// ---------------------------------------------------------------------------
// Multivariate polynomials.

namespace mpoly {

namespace {

MPoly trim(MPoly f) {
    if (f.level == 0) return f;
    while (!f.coeffs.empty() && is_zero(f.coeffs.back())) f.coeffs.pop_back();
    return f;
}

MPoly smul(const BaseCtx& ctx, const MPoly& f, const BaseScalar& s) {
    if (scal::is_zero(s)) return zero(f.level);
    MPoly r = f;
    if (r.level == 0) {
        r.scalar = scal::mul(ctx, r.scalar, s);
        return r;
    }
    for (auto& c : r.coeffs) c = smul(ctx, c, s);
    return trim(std::move(r));
}

// embed a level-(l-1) polynomial as a degree-0 coefficient at level l
MPoly raise(const MPoly& c) {
    MPoly r;
    r.level = c.level + 1;
    if (!is_zero(c)) r.coeffs.push_back(c);
    return r;
}

// multiply every coefficient by a level-(l-1) polynomial
MPoly mul_coeffwise(const BaseCtx& ctx, const MPoly& f, const MPoly& c) {
    assert(f.level == c.level + 1);
    MPoly r = f;
    for (auto& x : r.coeffs) x = mul(ctx, x, c);
    return trim(std::move(r));
}

// division with remainder at level 1, where the coefficient ring is a field
std::pair<MPoly, MPoly> divrem1(const BaseCtx& ctx, const MPoly& a, const MPoly& b) {
    assert(a.level == 1 && b.level == 1);
    if (is_zero(b)) throw DivisionByZero("mpoly division by zero");
    MPoly quo = zero(1), rem = a;
    if (rem.coeffs.size() < b.coeffs.size()) return {quo, rem};
    quo.coeffs.assign(rem.coeffs.size() - b.coeffs.size() + 1, zero(0));
    BaseScalar lead_inv = scal::inv(ctx, b.coeffs.back().scalar);
    for (size_t i = rem.coeffs.size(); i-- > 0 && i + 1 >= b.coeffs.size();) {
        if (is_zero(rem.coeffs[i])) continue;
        BaseScalar q = scal::mul(ctx, rem.coeffs[i].scalar, lead_inv);
        quo.coeffs[i - (b.coeffs.size() - 1)].scalar = q;
        for (size_t j = 0; j < b.coeffs.size(); ++j) {
            size_t idx = i - (b.coeffs.size() - 1) + j;
            rem.coeffs[idx].scalar =
                scal::sub(ctx, rem.coeffs[idx].scalar, scal::mul(ctx, q, b.coeffs[j].scalar));
        }
    }
    return {trim(std::move(quo)), trim(std::move(rem))};
}

// pseudo-remainder in the top variable (level >= 2)
MPoly prem(const BaseCtx& ctx, MPoly f, const MPoly& g) {
    const MPoly& lc = g.coeffs.back();
    int dg = deg(g);
    while (!is_zero(f) && deg(f) >= dg) {
        MPoly flead = f.coeffs.back();
        int shift = deg(f) - dg;
        f = mul_coeffwise(ctx, f, lc);
        MPoly sub_term = zero(f.level);
        sub_term.coeffs.assign(static_cast<size_t>(shift), zero(f.level - 1));
        for (const auto& c : g.coeffs) sub_term.coeffs.push_back(mul(ctx, c, flead));
        f = sub(ctx, f, trim(std::move(sub_term)));
    }
    return f;
}

// content of f in its top variable: gcd of the coefficients, one level down
MPoly content(const BaseCtx& ctx, const MPoly& f) {
    MPoly c = zero(f.level - 1);
    for (const auto& x : f.coeffs) c = gcd(ctx, c, x);
    return c;
}

MPoly primitive_part(const BaseCtx& ctx, const MPoly& f, const MPoly& cont) {
    if (is_zero(f)) return f;
    MPoly r = f;
    for (auto& x : r.coeffs) {
        auto q = divexact(ctx, x, cont);
        assert(q.has_value());
        x = std::move(*q);
    }
    return r;
}

} // namespace

MPoly zero(int level) {
    MPoly r;
    r.level = level;
    return r;
}

MPoly from_scalar(int level, BaseScalar s) {
    MPoly r;
    r.level = 0;
    r.scalar = std::move(s);
    for (int i = 0; i < level; ++i) r = raise(r);
    return r;
}

MPoly tvar(const BaseCtx& ctx, int level, int i) {
    assert(1 <= i && i <= level);
    MPoly x;
    x.level = i;
    x.coeffs = {from_scalar(i - 1, scal::zero(ctx)), from_scalar(i - 1, scal::one(ctx))};
    while (x.level < level) x = raise(x);
    return x;
}

bool is_zero(const MPoly& f) {
    if (f.level == 0) return scal::is_zero(f.scalar);
    return f.coeffs.empty();
}

int deg(const MPoly& f) {
    if (f.level == 0) return is_zero(f) ? -1 : 0;
    return static_cast<int>(f.coeffs.size()) - 1;
}

MPoly add(const BaseCtx& ctx, const MPoly& a, const MPoly& b) {
    assert(a.level == b.level);
    if (a.level == 0) return from_scalar(0, scal::add(ctx, a.scalar, b.scalar));
    MPoly r = zero(a.level);
    r.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), zero(a.level - 1));
    for (size_t i = 0; i < r.coeffs.size(); ++i) {
        if (i < a.coeffs.size() && i < b.coeffs.size())
            r.coeffs[i] = add(ctx, a.coeffs[i], b.coeffs[i]);
        else if (i < a.coeffs.size())
            r.coeffs[i] = a.coeffs[i];
        else
            r.coeffs[i] = b.coeffs[i];
    }
    return trim(std::move(r));
}

MPoly sub(const BaseCtx& ctx, const MPoly& a, const MPoly& b) { return add(ctx, a, neg(b)); }

MPoly neg(const MPoly& a) {
    MPoly r = a;
    if (r.level == 0) {
        r.scalar = scal::neg(r.scalar);
        return r;
    }
    for (auto& c : r.coeffs) c = neg(c);
    return r;
}

MPoly mul(const BaseCtx& ctx, const MPoly& a, const MPoly& b) {
    assert(a.level == b.level);
    if (a.level == 0) return from_scalar(0, scal::mul(ctx, a.scalar, b.scalar));
    if (a.coeffs.empty() || b.coeffs.empty()) return zero(a.level);
    MPoly r = zero(a.level);
    r.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, zero(a.level - 1));
    for (size_t i = 0; i < a.coeffs.size(); ++i)
        for (size_t j = 0; j < b.coeffs.size(); ++j)
            r.coeffs[i + j] = add(ctx, r.coeffs[i + j], mul(ctx, a.coeffs[i], b.coeffs[j]));
    return trim(std::move(r));
}

std::optional<MPoly> divexact(const BaseCtx& ctx, const MPoly& a, const MPoly& b) {
    if (is_zero(b)) throw DivisionByZero("mpoly division by zero");
    if (is_zero(a)) return zero(a.level);
    if (a.level == 0)
        return from_scalar(0, scal::mul(ctx, a.scalar, scal::inv(ctx, b.scalar)));
    MPoly rem = a;
    MPoly quo = zero(a.level);
    if (rem.coeffs.size() < b.coeffs.size()) return std::nullopt;
    quo.coeffs.assign(rem.coeffs.size() - b.coeffs.size() + 1, zero(a.level - 1));
    while (!is_zero(rem) && rem.coeffs.size() >= b.coeffs.size()) {
        auto qc = divexact(ctx, rem.coeffs.back(), b.coeffs.back());
        if (!qc) return std::nullopt;
        size_t shift = rem.coeffs.size() - b.coeffs.size();
        quo.coeffs[shift] = *qc;
        for (size_t j = 0; j < b.coeffs.size(); ++j)
            rem.coeffs[shift + j] = sub(ctx, rem.coeffs[shift + j], mul(ctx, b.coeffs[j], *qc));
        rem = trim(std::move(rem));
    }
    if (!is_zero(rem)) return std::nullopt;
    return trim(std::move(quo));
}

MPoly gcd(const BaseCtx& ctx, MPoly a, MPoly b) {
    assert(a.level == b.level);
    auto canon = [&ctx](MPoly f) {
        if (is_zero(f)) return f;
        return smul(ctx, f, scal::inv(ctx, leading_scalar(f)));
    };
    if (is_zero(a)) return canon(std::move(b));
    if (is_zero(b)) return canon(std::move(a));
    if (a.level == 0) return from_scalar(0, scal::one(ctx));
    if (a.level == 1) { // Euclid over the base field
        while (!is_zero(b)) {
            MPoly r = divrem1(ctx, a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return canon(std::move(a));
    }
    // primitive PRS in the top variable
    MPoly ca = content(ctx, a), cb = content(ctx, b);
    MPoly c = gcd(ctx, ca, cb);
    MPoly A = primitive_part(ctx, a, ca), B = primitive_part(ctx, b, cb);
    if (deg(A) < deg(B)) std::swap(A, B);
    while (!is_zero(B)) {
        MPoly R = prem(ctx, A, B);
        A = std::move(B);
        if (is_zero(R)) {
            B = zero(A.level);
        } else {
            B = primitive_part(ctx, R, content(ctx, R));
        }
    }
    return canon(mul_coeffwise(ctx, A, c));
}

BaseScalar leading_scalar(const MPoly& f) {
    if (f.level == 0) return f.scalar;
    assert(!f.coeffs.empty());
    return leading_scalar(f.coeffs.back());
}

BaseScalar eval(const BaseCtx& ctx, const MPoly& f, const std::vector<BigRat>& point) {
    if (f.level == 0) return f.scalar;
    if (static_cast<int>(point.size()) < f.level)
        throw PointOutOfRange("evaluation point has too few coordinates");
    BaseScalar x = scal::from_rat(ctx, point[static_cast<size_t>(f.level) - 1]);
    BaseScalar r = scal::zero(ctx);
    for (size_t i = f.coeffs.size(); i-- > 0;)
        r = scal::add(ctx, scal::mul(ctx, r, x), eval(ctx, f.coeffs[i], point));
    return r;
}

std::size_t term_count(const MPoly& f) {
    if (f.level == 0) return scal::is_zero(f.scalar) ? 0 : 1;
    std::size_t n = 0;
    for (const auto& c : f.coeffs) n += term_count(c);
    return n;
}

namespace {

void collect_terms(const MPoly& f, std::vector<int>& expo,
                   std::vector<std::pair<std::vector<int>, BaseScalar>>& out) {
    if (f.level == 0) {
        if (!scal::is_zero(f.scalar))
            out.emplace_back(std::vector<int>(expo.rbegin(), expo.rend()), f.scalar);
        return;
    }
    for (size_t i = 0; i < f.coeffs.size(); ++i) {
        expo.push_back(static_cast<int>(i));
        collect_terms(f.coeffs[i], expo, out);
        expo.pop_back();
    }
}

} // namespace

std::string to_string(const MPoly& f, int total_vars) {
    if (is_zero(f)) return "0";
    std::vector<std::pair<std::vector<int>, BaseScalar>> terms;
    std::vector<int> expo;
    collect_terms(f, expo, terms);
    std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) {
        int tx = 0, ty = 0;
        for (int e : x.first) tx += e;
        for (int e : y.first) ty += e;
        if (tx != ty) return tx > ty;
        return x.first > y.first;
    });
    auto var_name = [total_vars](int i) {
        return total_vars == 1 ? std::string("t") : "t" + std::to_string(i + 1);
    };
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, s] : terms) {
        std::string mono;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += var_name(static_cast<int>(i));
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        std::string cs;
        bool negated = false;
        if (const auto* r = std::get_if<BigRat>(&s)) {
            BigRat c = *r;
            if (!first && c < 0) {
                negated = true;
                c = -c;
            }
            cs = (c == 1 && !mono.empty()) ? "" : str(c);
        } else {
            const QPoly& qv = std::get<QPoly>(s);
            cs = qpoly::to_string(qv, "w");
            if (qv.size() > 1 && !mono.empty()) cs = "(" + cs + ")";
        }
        if (!first) os << (negated ? " - " : " + ");
        if (cs.empty())
            os << mono;
        else if (mono.empty())
            os << cs;
        else
            os << cs << "*" << mono;
        first = false;
    }
    return os.str();
}

} // namespace mpoly

// ---------------------------------------------------------------------------
// Rational functions.

namespace ratfunc {

namespace {

bool mpoly_is_one(const MPoly& f) {
    const MPoly* cur = &f;
    while (cur->level > 0) {
        if (cur->coeffs.size() != 1) return false;
        cur = &cur->coeffs[0];
    }
    if (const auto* r = std::get_if<BigRat>(&cur->scalar)) return *r == 1;
    const QPoly& q = std::get<QPoly>(cur->scalar);
    return q.size() == 1 && q[0] == 1;
}

} // namespace

RatFunc make(const BaseCtx& ctx, MPoly num, MPoly den) {
    if (mpoly::is_zero(den)) throw DivisionByZero("rational function with zero denominator");
    if (mpoly::is_zero(num)) {
        MPoly one = mpoly::from_scalar(den.level, scal::one(ctx));
        return RatFunc{mpoly::zero(den.level), std::move(one)};
    }
    MPoly g = mpoly::gcd(ctx, num, den);
    auto qn = mpoly::divexact(ctx, num, g);
    auto qd = mpoly::divexact(ctx, den, g);
    assert(qn && qd);
    num = std::move(*qn);
    den = std::move(*qd);
    BaseScalar ls = mpoly::leading_scalar(den);
    BaseScalar inv_ls = scal::inv(ctx, ls);
    // scale so the denominator's leading scalar is 1
    struct Rescale {
        const BaseCtx& ctx;
        const BaseScalar& s;
        MPoly operator()(const MPoly& f) const {
            if (mpoly::is_zero(f)) return f;
            MPoly r = f;
            apply(r);
            return r;
        }
        void apply(MPoly& f) const {
            if (f.level == 0) {
                f.scalar = scal::mul(ctx, f.scalar, s);
                return;
            }
            for (auto& c : f.coeffs) apply(c);
        }
    } rescale{ctx, inv_ls};
    return RatFunc{rescale(num), rescale(den)};
}

RatFunc from_scalar(const BaseCtx& ctx, int level, BaseScalar s) {
    return RatFunc{mpoly::from_scalar(level, std::move(s)),
                   mpoly::from_scalar(level, scal::one(ctx))};
}

RatFunc add(const BaseCtx& ctx, const RatFunc& a, const RatFunc& b) {
    MPoly n = mpoly::add(ctx, mpoly::mul(ctx, a.num, b.den), mpoly::mul(ctx, b.num, a.den));
    return make(ctx, std::move(n), mpoly::mul(ctx, a.den, b.den));
}

RatFunc sub(const BaseCtx& ctx, const RatFunc& a, const RatFunc& b) {
    return add(ctx, a, neg(ctx, b));
}

RatFunc mul(const BaseCtx& ctx, const RatFunc& a, const RatFunc& b) {
    return make(ctx, mpoly::mul(ctx, a.num, b.num), mpoly::mul(ctx, a.den, b.den));
}

RatFunc div(const BaseCtx& ctx, const RatFunc& a, const RatFunc& b) {
    if (is_zero(b)) throw DivisionByZero("division by zero rational function");
    return make(ctx, mpoly::mul(ctx, a.num, b.den), mpoly::mul(ctx, a.den, b.num));
}

RatFunc neg(const BaseCtx& ctx, const RatFunc& a) {
    (void)ctx;
    return RatFunc{mpoly::neg(a.num), a.den};
}

RatFunc inv(const BaseCtx& ctx, const RatFunc& a) {
    if (is_zero(a)) throw DivisionByZero("inverse of zero rational function");
    return make(ctx, a.den, a.num);
}

bool is_zero(const RatFunc& a) { return mpoly::is_zero(a.num); }

BaseScalar eval(const BaseCtx& ctx, const RatFunc& a, const std::vector<BigRat>& point) {
    BaseScalar d = mpoly::eval(ctx, a.den, point);
    if (scal::is_zero(d)) throw DenominatorVanishes("denominator vanishes at the chosen point");
    BaseScalar n = mpoly::eval(ctx, a.num, point);
    return scal::mul(ctx, n, scal::inv(ctx, d));
}

std::string to_string(const RatFunc& a, int total_vars) {
    std::string n = mpoly::to_string(a.num, total_vars);
    if (mpoly_is_one(a.den)) return n;
    std::string d = mpoly::to_string(a.den, total_vars);
    if (mpoly::term_count(a.num) > 1) n = "(" + n + ")";
    if (mpoly::term_count(a.den) > 1) d = "(" + d + ")";
    return n + "/" + d;
}

} // namespace ratfunc

// ---------------------------------------------------------------------------
// Field construction.

namespace {

QPoly compose_mod(const QPoly& pol, const QPoly& arg, const QPoly& mod) {
    QPoly r;
    for (size_t i = pol.size(); i-- > 0;) {
        r = qpoly::mulmod(r, arg, mod);
        r = qpoly::add(r, qpoly::constant(pol[i]));
    }
    return r;
}

pmod::Poly pmod_invmod(const pmod::Poly& a, const pmod::Poly& mod, const BigInt& p) {
    pmod::Poly r0 = mod, r1 = pmod::divrem(a, mod, p).second;
    pmod::Poly t0, t1 = {BigInt(1)};
    while (!r1.empty()) {
        auto [q, r2] = pmod::divrem(r0, r1, p);
        pmod::Poly t2 = pmod::sub(t0, pmod::mul(q, t1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (pmod::deg(r0) != 0) throw DivisionByZero("non-invertible residue");
    return pmod::scale(t0, inv_mod(r0[0], p), p);
}

} // namespace

FieldPtr Field::rationals() {
    auto f = std::shared_ptr<Field>(new Field());
    f->kind = Kind::Rationals;
    return f;
}

FieldPtr Field::number_field(ZPoly f, QPoly conj_w) {
    f = zpoly::trim(std::move(f));
    if (zpoly::deg(f) < 2 || !zpoly::is_monic(f))
        throw ConfigError("number field minpoly must be monic of degree >= 2");
    if (!zpoly::is_irreducible_over_q(f))
        throw ConfigError("number field minpoly is reducible over Q");
    QPoly fq = qpoly::from_z(f);
    if (!conj_w.empty()) {
        conj_w = qpoly::divrem(conj_w, fq).second;
        if (!qpoly::is_zero(compose_mod(fq, conj_w, fq)))
            throw ConfigError("configured conjugation does not fix the minimal polynomial");
        if (!qpoly::equal(compose_mod(conj_w, conj_w, fq), QPoly{BigRat(0), BigRat(1)}))
            throw ConfigError("configured conjugation is not an involution");
    }
    auto k = std::shared_ptr<Field>(new Field());
    k->kind = Kind::NumberField;
    k->minpoly = std::move(f);
    k->conj_image = std::move(conj_w);
    return k;
}

FieldPtr Field::prime_field(BigInt p) {
    if (!is_prime(p)) throw ConfigError("characteristic is not prime: " + p.get_str());
    auto f = std::shared_ptr<Field>(new Field());
    f->kind = Kind::PrimeField;
    f->p = std::move(p);
    return f;
}

FieldPtr Field::residue_field(BigInt p, pmod::Poly gbar) {
    if (!is_prime(p)) throw ConfigError("characteristic is not prime: " + p.get_str());
    gbar = pmod::trim(std::move(gbar), p);
    if (pmod::deg(gbar) < 1) throw ConfigError("residue field modulus must have degree >= 1");
    if (!pmod::is_irreducible(gbar, p))
        throw ConfigError("residue field modulus is reducible mod " + p.get_str());
    auto f = std::shared_ptr<Field>(new Field());
    f->kind = Kind::ResidueField;
    f->p = std::move(p);
    f->gbar = pmod::monic(std::move(gbar), f->p);
    return f;
}

FieldPtr Field::rational_functions(int vars, ZPoly base_minpoly) {
    if (vars < 1) throw ConfigError("rational function field needs at least one variable");
    base_minpoly = zpoly::trim(std::move(base_minpoly));
    if (!base_minpoly.empty()) {
        if (zpoly::deg(base_minpoly) < 2 || !zpoly::is_monic(base_minpoly) ||
            !zpoly::is_irreducible_over_q(base_minpoly))
            throw ConfigError("invalid base field for rational functions");
    }
    auto f = std::shared_ptr<Field>(new Field());
    f->kind = Kind::RationalFunctions;
    f->minpoly = std::move(base_minpoly);
    f->num_vars = vars;
    return f;
}

bool Field::same(const Field& other) const {
    return kind == other.kind && minpoly == other.minpoly && conj_image == other.conj_image &&
           p == other.p && gbar == other.gbar && num_vars == other.num_vars;
}

std::optional<BigInt> Field::cardinality() const {
    if (kind == Kind::PrimeField) return p;
    if (kind == Kind::ResidueField) return pow_ui(p, static_cast<unsigned long>(pmod::deg(gbar)));
    return std::nullopt;
}

int Field::extension_degree() const {
    switch (kind) {
    case Kind::Rationals:
    case Kind::PrimeField:
        return 1;
    case Kind::NumberField:
        return zpoly::deg(minpoly);
    case Kind::ResidueField:
        return pmod::deg(gbar);
    case Kind::RationalFunctions:
        return minpoly.empty() ? 1 : zpoly::deg(minpoly);
    }
    return 1;
}

std::string Field::description() const {
    switch (kind) {
    case Kind::Rationals:
        return "Q";
    case Kind::NumberField:
        return "Q[w]/(" + zpoly::to_string(minpoly, "w") + ")";
    case Kind::PrimeField:
        return "F_" + p.get_str();
    case Kind::ResidueField: {
        ZPoly lift(gbar.begin(), gbar.end());
        return "F_" + p.get_str() + "[w]/(" + zpoly::to_string(lift, "w") + ")";
    }
    case Kind::RationalFunctions: {
        std::string base = minpoly.empty() ? "Q" : "Q[w]/(" + zpoly::to_string(minpoly, "w") + ")";
        std::string vars;
        for (int i = 1; i <= num_vars; ++i) {
            if (i > 1) vars += ",";
            vars += num_vars == 1 ? "t" : "t" + std::to_string(i);
        }
        return base + "(" + vars + ")";
    }
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Field elements.

namespace {

[[noreturn]] void bad_value(const char* what) { throw DomainMismatch(what); }

const BigRat& as_rat(const FieldValue& v) {
    if (const auto* r = std::get_if<BigRat>(&v)) return *r;
    bad_value("expected a rational value");
}

const QPoly& as_nf(const FieldValue& v) {
    if (const auto* r = std::get_if<QPoly>(&v)) return *r;
    bad_value("expected a number field value");
}

const BigInt& as_fp(const FieldValue& v) {
    if (const auto* r = std::get_if<BigInt>(&v)) return *r;
    bad_value("expected a prime field value");
}

const std::vector<BigInt>& as_res(const FieldValue& v) {
    if (const auto* r = std::get_if<std::vector<BigInt>>(&v)) return *r;
    bad_value("expected a residue field value");
}

const RatFunc& as_rf(const FieldValue& v) {
    if (const auto* r = std::get_if<RatFunc>(&v)) return *r;
    bad_value("expected a rational function value");
}

} // namespace

FieldValue Field::zero() const {
    switch (kind) {
    case Kind::Rationals:
        return BigRat(0);
    case Kind::NumberField:
        return QPoly{};
    case Kind::PrimeField:
        return BigInt(0);
    case Kind::ResidueField:
        return std::vector<BigInt>{};
    case Kind::RationalFunctions:
        return ratfunc::from_scalar(base_ctx(), num_vars, scal::zero(base_ctx()));
    }
    return BigRat(0);
}

FieldValue Field::one() const { return from_int(1); }

FieldValue Field::from_int(long n) const { return from_rat(BigRat(n)); }

FieldValue Field::from_rat(const BigRat& raw) const {
    BigRat q = raw;
    q.canonicalize(); // guard against non-canonical mpq input
    switch (kind) {
    case Kind::Rationals:
        return q;
    case Kind::NumberField:
        return q == 0 ? QPoly{} : QPoly{q};
    case Kind::PrimeField:
    case Kind::ResidueField: {
        BigInt den = q.get_den();
        if (mod_floor(den, p) == 0)
            throw PrimeDividesDenominator("denominator divisible by " + p.get_str());
        BigInt r = mod_floor(q.get_num() * inv_mod(mod_floor(den, p), p), p);
        if (kind == Kind::PrimeField) return r;
        return r == 0 ? std::vector<BigInt>{} : std::vector<BigInt>{r};
    }
    case Kind::RationalFunctions:
        return ratfunc::from_scalar(base_ctx(), num_vars, scal::from_rat(base_ctx(), q));
    }
    return q;
}

FieldValue Field::w_gen() const {
    switch (kind) {
    case Kind::NumberField:
        return QPoly{BigRat(0), BigRat(1)};
    case Kind::ResidueField:
        if (pmod::deg(gbar) >= 2) return std::vector<BigInt>{BigInt(0), BigInt(1)};
        // degree-1 modulus: w is congruent to the root of gbar
        return std::vector<BigInt>{mod_floor(-gbar[0], p)};
    case Kind::RationalFunctions:
        if (!minpoly.empty())
            return ratfunc::from_scalar(base_ctx(), num_vars, BaseScalar(QPoly{BigRat(0), BigRat(1)}));
        [[fallthrough]];
    default:
        throw DomainMismatch("field has no generator w");
    }
}

FieldValue Field::t_var(int i) const {
    if (kind != Kind::RationalFunctions) throw DomainMismatch("field has no variable t");
    if (i < 1 || i > num_vars)
        throw DomainMismatch("variable index out of range: t" + std::to_string(i));
    BaseCtx ctx = base_ctx();
    return RatFunc{mpoly::tvar(ctx, num_vars, i),
                   mpoly::from_scalar(num_vars, scal::one(ctx))};
}

FieldValue Field::add(const FieldValue& a, const FieldValue& b) const {
    switch (kind) {
    case Kind::Rationals:
        return BigRat(as_rat(a) + as_rat(b));
    case Kind::NumberField:
        return qpoly::add(as_nf(a), as_nf(b));
    case Kind::PrimeField:
        return mod_floor(as_fp(a) + as_fp(b), p);
    case Kind::ResidueField:
        return pmod::add(as_res(a), as_res(b), p);
    case Kind::RationalFunctions:
        return ratfunc::add(base_ctx(), as_rf(a), as_rf(b));
    }
    return a;
}

FieldValue Field::sub(const FieldValue& a, const FieldValue& b) const { return add(a, neg(b)); }

FieldValue Field::mul(const FieldValue& a, const FieldValue& b) const {
    switch (kind) {
    case Kind::Rationals:
        return BigRat(as_rat(a) * as_rat(b));
    case Kind::NumberField:
        return qpoly::mulmod(as_nf(a), as_nf(b), qpoly::from_z(minpoly));
    case Kind::PrimeField:
        return mod_floor(as_fp(a) * as_fp(b), p);
    case Kind::ResidueField:
        return pmod::divrem(pmod::mul(as_res(a), as_res(b), p), gbar, p).second;
    case Kind::RationalFunctions:
        return ratfunc::mul(base_ctx(), as_rf(a), as_rf(b));
    }
    return a;
}

FieldValue Field::div(const FieldValue& a, const FieldValue& b) const { return mul(a, inv(b)); }

FieldValue Field::neg(const FieldValue& a) const {
    switch (kind) {
    case Kind::Rationals:
        return BigRat(-as_rat(a));
    case Kind::NumberField:
        return qpoly::neg(as_nf(a));
    case Kind::PrimeField:
        return mod_floor(-as_fp(a), p);
    case Kind::ResidueField:
        return pmod::scale(as_res(a), p - 1, p);
    case Kind::RationalFunctions:
        return ratfunc::neg(base_ctx(), as_rf(a));
    }
    return a;
}

FieldValue Field::inv(const FieldValue& a) const {
    if (is_zero(a)) throw DivisionByZero("inverse of zero in " + description());
    switch (kind) {
    case Kind::Rationals:
        return BigRat(1 / as_rat(a));
    case Kind::NumberField: {
        auto r = qpoly::invmod(as_nf(a), qpoly::from_z(minpoly));
        if (!r) throw DivisionByZero("non-invertible element"); // unreachable: f irreducible
        return *r;
    }
    case Kind::PrimeField:
        return inv_mod(as_fp(a), p);
    case Kind::ResidueField:
        return pmod_invmod(as_res(a), gbar, p);
    case Kind::RationalFunctions:
        return ratfunc::inv(base_ctx(), as_rf(a));
    }
    return a;
}

FieldValue Field::conj(const FieldValue& a) const {
    if (kind == Kind::NumberField && !conj_image.empty()) {
        QPoly fq = qpoly::from_z(minpoly);
        return compose_mod(as_nf(a), conj_image, fq);
    }
    return a;
}

bool Field::is_zero(const FieldValue& a) const {
    switch (kind) {
    case Kind::Rationals:
        return as_rat(a) == 0;
    case Kind::NumberField:
        return as_nf(a).empty();
    case Kind::PrimeField:
        return as_fp(a) == 0;
    case Kind::ResidueField:
        return as_res(a).empty();
    case Kind::RationalFunctions:
        return ratfunc::is_zero(as_rf(a));
    }
    return false;
}

bool Field::is_one(const FieldValue& a) const { return equals(a, one()); }

bool Field::equals(const FieldValue& a, const FieldValue& b) const {
    // every representation is canonical, so structural equality decides
    return a == b;
}

std::string Field::str(const FieldValue& a) const {
    switch (kind) {
    case Kind::Rationals:
        return ranklab::str(as_rat(a));
    case Kind::NumberField:
        return qpoly::to_string(as_nf(a), "w");
    case Kind::PrimeField:
        return as_fp(a).get_str();
    case Kind::ResidueField: {
        const auto& v = as_res(a);
        ZPoly lift(v.begin(), v.end());
        return zpoly::to_string(lift, "w");
    }
    case Kind::RationalFunctions:
        return ratfunc::to_string(as_rf(a), num_vars);
    }
    return "?";
}

std::optional<BigRat> Field::rational(const FieldValue& a) const {
    switch (kind) {
    case Kind::Rationals:
        return as_rat(a);
    case Kind::NumberField: {
        const QPoly& v = as_nf(a);
        if (v.empty()) return BigRat(0);
        if (v.size() == 1) return v[0];
        return std::nullopt;
    }
    case Kind::RationalFunctions: {
        const RatFunc& v = as_rf(a);
        const MPoly* cur = &v.num;
        if (!ratfunc::is_zero(v)) {
            // denominator of a canonical nonzero constant is exactly 1
            const MPoly* d = &v.den;
            while (d->level > 0) {
                if (d->coeffs.size() != 1) return std::nullopt;
                d = &d->coeffs[0];
            }
        }
        while (cur->level > 0) {
            if (cur->coeffs.size() > 1) return std::nullopt;
            if (cur->coeffs.empty()) return BigRat(0);
            cur = &cur->coeffs[0];
        }
        if (const auto* r = std::get_if<BigRat>(&cur->scalar)) return *r;
        const QPoly& q = std::get<QPoly>(cur->scalar);
        if (q.empty()) return BigRat(0);
        if (q.size() == 1) return q[0];
        return std::nullopt;
    }
    default:
        return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Reduction modulo prime ideals.

namespace {

BigInt reduce_rat(const BigRat& q, const BigInt& p) {
    BigInt den = mod_floor(q.get_den(), p);
    if (den == 0)
        throw PrimeDividesDenominator("denominator of " + str(q) + " divisible by " + p.get_str());
    return mod_floor(q.get_num() * inv_mod(den, p), p);
}

} // namespace

FieldValue reduce_mod_prime(const Field& src, const FieldValue& x, const PrimeIdeal& P) {
    if (src.kind == Field::Kind::Rationals) {
        BigInt r = reduce_rat(as_rat(x), P.p);
        if (P.residue->kind == Field::Kind::PrimeField) return r;
        return r == 0 ? std::vector<BigInt>{} : std::vector<BigInt>{r};
    }
    if (src.kind == Field::Kind::NumberField) {
        if (P.gbar.empty()) throw DomainMismatch("prime ideal lacks a residue polynomial");
        const QPoly& a = as_nf(x);
        pmod::Poly lift(a.size());
        for (size_t i = 0; i < a.size(); ++i) lift[i] = reduce_rat(a[i], P.p);
        lift = pmod::trim(std::move(lift), P.p);
        if (P.residue->kind == Field::Kind::PrimeField) {
            // degree-1 ideal: evaluate at the root of gbar
            BigInt root = mod_floor(-P.gbar[0], P.p);
            BigInt r = 0;
            for (size_t i = lift.size(); i-- > 0;) r = mod_floor(r * root + lift[i], P.p);
            return r;
        }
        return pmod::divrem(lift, P.gbar, P.p).second;
    }
    throw DomainMismatch("reduce_mod_prime expects a source over Q or a number field");
}

std::vector<PrimeIdeal> enumerate_primes(const Field& K, int count, const BigInt& min_p,
                                         const std::vector<BigInt>& excluded) {
    if (K.kind != Field::Kind::Rationals && K.kind != Field::Kind::NumberField)
        throw DomainMismatch("prime enumeration expects Q or a number field");
    std::vector<BigInt> skip = excluded;
    if (K.kind == Field::Kind::NumberField) skip.push_back(zpoly::discriminant(K.minpoly));
    auto skipped = [&skip](const BigInt& p) {
        for (const auto& e : skip)
            if (e != 0 && mod_floor(e, p) == 0) return true;
        return false;
    };
    // candidate ideal above p: the smallest-degree (then lexicographically
    // first) factor of f mod p; for K = Q just p itself
    auto candidate = [&K](const BigInt& p) -> std::pair<pmod::Poly, BigInt> {
        if (K.kind == Field::Kind::Rationals) return {{}, p};
        auto factors = pmod::factor_squarefree(pmod::reduce(K.minpoly, p), p);
        pmod::Poly g = factors.front();
        if (pmod::deg(g) == 1) {
            // several roots: take the smallest, i.e. g = w - r with r minimal
            BigInt best_root = mod_floor(-g[0], p);
            for (const auto& f : factors) {
                if (pmod::deg(f) != 1) break;
                BigInt r = mod_floor(-f[0], p);
                if (r < best_root) {
                    best_root = r;
                    g = f;
                }
            }
        }
        return {g, pow_ui(p, static_cast<unsigned long>(pmod::deg(g)))};
    };
    // Ideals are enumerated by residue-field size (the quantity the rank
    // discrepancy decays in): each round picks the unused prime whose minimal
    // residue size is the smallest one still above the last accepted size.
    // Any p beyond the best size found so far cannot improve on it, which
    // bounds the scan.
    std::vector<PrimeIdeal> out;
    BigInt last_size = 0;
    long examined = 0;
    const long cap = 200000;
    while (static_cast<int>(out.size()) < count) {
        BigInt best_p = 0, best_size = 0;
        pmod::Poly best_g;
        BigInt p = min_p < 2 ? BigInt(2) : (is_prime(min_p) ? min_p : next_prime(min_p));
        for (;; p = next_prime(p)) {
            if (best_size != 0 && p > best_size) break;
            if (++examined > cap)
                throw PrimeSearchExhausted("no further usable primes below search cap");
            if (skipped(p)) continue;
            auto [g, size] = candidate(p);
            if (size <= last_size) continue;
            if (best_size == 0 || size < best_size) {
                best_p = p;
                best_size = size;
                best_g = g;
            }
        }
        if (best_size == 0) throw PrimeSearchExhausted("prime scan found no candidate");
        FieldPtr residue = (K.kind == Field::Kind::Rationals || pmod::deg(best_g) == 1)
                               ? Field::prime_field(best_p)
                               : Field::residue_field(best_p, best_g);
        out.push_back(PrimeIdeal{best_p, best_g, residue, best_size});
        last_size = best_size;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Houses.

QPoly char_poly_rational(const std::vector<std::vector<BigRat>>& m) {
    const size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw DomainMismatch("char poly requires a square matrix");
    std::vector<BigRat> c(n + 1);
    c[0] = 1; // coefficient of x^n
    std::vector<std::vector<BigRat>> M = m;
    auto trace = [&](const std::vector<std::vector<BigRat>>& a) {
        BigRat t = 0;
        for (size_t i = 0; i < n; ++i) t += a[i][i];
        return t;
    };
    for (size_t k = 1; k <= n; ++k) {
        if (k > 1) {
            // M <- A (M + c_{k-1} I)
            std::vector<std::vector<BigRat>> shifted = M;
            for (size_t i = 0; i < n; ++i) shifted[i][i] += c[k - 1];
            std::vector<std::vector<BigRat>> next(n, std::vector<BigRat>(n, BigRat(0)));
            for (size_t i = 0; i < n; ++i)
                for (size_t l = 0; l < n; ++l) {
                    if (m[i][l] == 0) continue;
                    for (size_t j = 0; j < n; ++j) next[i][j] += m[i][l] * shifted[l][j];
                }
            M = std::move(next);
        }
        c[k] = -trace(M) / BigRat(static_cast<long>(k));
    }
    QPoly out(n + 1);
    for (size_t k = 0; k <= n; ++k) out[n - k] = c[k];
    return qpoly::trim(std::move(out));
}

CertifiedReal house_certified(const Field& K, const FieldValue& a) {
    if (K.kind == Field::Kind::Rationals) {
        BigRat q = abs(as_rat(a));
        double v = q.get_d();
        if (std::isfinite(v) && BigRat(v) == q) return {v, 0.0};  // exactly representable
        return {v, 1e-15 * (1.0 + v)};
    }
    if (K.kind != Field::Kind::NumberField)
        throw DomainMismatch("house is defined over Q and number fields");
    const QPoly& x = as_nf(a);
    if (x.empty()) return {0.0, 0.0};
    const int d = zpoly::deg(K.minpoly);
    QPoly fq = qpoly::from_z(K.minpoly);
    // multiplication-by-a matrix on the basis 1, w, ..., w^{d-1}
    std::vector<std::vector<BigRat>> mult(static_cast<size_t>(d),
                                          std::vector<BigRat>(static_cast<size_t>(d), BigRat(0)));
    QPoly cur = x;
    for (int j = 0; j < d; ++j) {
        for (size_t i = 0; i < cur.size(); ++i) mult[i][static_cast<size_t>(j)] = cur[i];
        cur = qpoly::mulmod(cur, QPoly{BigRat(0), BigRat(1)}, fq);
    }
    QPoly ch = char_poly_rational(mult);
    return max_root_modulus(qpoly::squarefree_part(ch), 1e-13);
}

double house(const Field& K, const FieldValue& a) {
    CertifiedReal c = house_certified(K, a);
    if (c.error > 1e-9 * std::max(1.0, c.value))
        throw RootIsolationFailed("house certification exceeded tolerance");
    return c.value;
}

} // namespace ranklab
