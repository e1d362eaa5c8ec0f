#include "ranklab/poly.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <sstream>

namespace ranklab {

namespace qpoly {

QPoly trim(QPoly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

int deg(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

bool is_zero(const QPoly& p) { return p.empty(); }

bool equal(const QPoly& a, const QPoly& b) { return a == b; }

QPoly constant(const BigRat& c) {
    if (c == 0) return {};
    return {c};
}

QPoly add(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] += b[i];
    }
    return trim(std::move(r));
}

QPoly sub(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] -= b[i];
    }
    return trim(std::move(r));
}

QPoly neg(QPoly a) {
    for (auto& c : a) c = -c;
    return a;
}

QPoly mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return trim(std::move(r));
}

QPoly scale(const QPoly& a, const BigRat& c) {
    if (c == 0) return {};
    QPoly r = a;
    for (auto& x : r) x *= c;
    return r;
}

std::pair<QPoly, QPoly> divrem(const QPoly& a, const QPoly& b) {
    if (b.empty()) throw DivisionByZero("polynomial division by zero");
    QPoly rem = a;
    if (a.size() < b.size()) return {{}, rem};
    QPoly quo(a.size() - b.size() + 1);
    const BigRat& lead = b.back();
    for (int i = static_cast<int>(rem.size()) - 1; i >= static_cast<int>(b.size()) - 1; --i) {
        if (rem[i] == 0) continue;
        BigRat q = rem[i] / lead;
        quo[i - (b.size() - 1)] = q;
        for (size_t j = 0; j < b.size(); ++j) rem[i - (b.size() - 1) + j] -= q * b[j];
    }
    return {trim(std::move(quo)), trim(std::move(rem))};
}

QPoly monic(QPoly a) {
    if (a.empty()) return a;
    BigRat inv = 1 / a.back();
    for (auto& c : a) c *= inv;
    return a;
}

QPoly gcd(QPoly a, QPoly b) {
    while (!b.empty()) {
        auto [q, r] = divrem(a, b);
        (void)q;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(std::move(a));
}

QPoly derivative(const QPoly& a) {
    if (a.size() <= 1) return {};
    QPoly r(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * BigRat(static_cast<long>(i));
    return trim(std::move(r));
}

QPoly squarefree_part(const QPoly& a) {
    if (deg(a) <= 1) return a;
    QPoly g = gcd(a, derivative(a));
    if (deg(g) == 0) return a;
    return divrem(a, g).first;
}

BigRat eval(const QPoly& a, const BigRat& x) {
    BigRat r = 0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) r = r * x + *it;
    return r;
}

QPoly from_z(const ZPoly& a) {
    QPoly r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = BigRat(a[i]);
    return trim(std::move(r));
}

QPoly mulmod(const QPoly& a, const QPoly& b, const QPoly& mod) {
    return divrem(mul(a, b), mod).second;
}

std::optional<QPoly> invmod(const QPoly& a, const QPoly& mod) {
    // extended Euclid in Q[w]
    QPoly r0 = mod, r1 = divrem(a, mod).second;
    QPoly t0 = {}, t1 = {BigRat(1)};
    while (!r1.empty()) {
        auto [q, r2] = divrem(r0, r1);
        QPoly t2 = sub(t0, mul(q, t1));
        r0 = std::move(r1);
        r1 = std::move(r2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (deg(r0) != 0) return std::nullopt; // gcd not constant: not invertible
    return scale(t0, 1 / r0[0]);
}

std::string to_string(const QPoly& p, const std::string& var) {
    if (p.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = p.size(); i-- > 0;) {
        if (p[i] == 0) continue;
        BigRat c = p[i];
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        bool unit = (c == 1) && i > 0;
        if (!unit) os << str(c);
        if (i > 0) {
            if (!unit) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

} // namespace qpoly

namespace zpoly {

ZPoly trim(ZPoly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

int deg(const ZPoly& p) { return static_cast<int>(p.size()) - 1; }

bool is_monic(const ZPoly& p) { return !p.empty() && p.back() == 1; }

BigInt content(const ZPoly& p) {
    BigInt g = 0;
    for (const auto& c : p) g = ranklab::gcd(g, c);
    return g;
}

ZPoly mul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return trim(std::move(r));
}

BigInt eval(const ZPoly& a, const BigInt& x) {
    BigInt r = 0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) r = r * x + *it;
    return r;
}

namespace {

// Bareiss determinant of a dense integer matrix (destroys its argument).
BigInt bareiss_det(std::vector<std::vector<BigInt>> m) {
    const size_t n = m.size();
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
            if (swap_row == n) return 0;
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                BigInt t = m[k][k] * m[i][j] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : BigInt(-m[n - 1][n - 1]);
}

} // namespace

BigInt resultant(const ZPoly& a, const ZPoly& b) {
    int da = deg(a), db = deg(b);
    if (da < 0 || db < 0) return 0;
    if (da == 0) return pow_ui(a[0], db);
    if (db == 0) return pow_ui(b[0], da);
    size_t n = static_cast<size_t>(da + db);
    std::vector<std::vector<BigInt>> syl(n, std::vector<BigInt>(n, BigInt(0)));
    for (int i = 0; i < db; ++i)
        for (int j = 0; j <= da; ++j) syl[i][i + j] = a[da - j];
    for (int i = 0; i < da; ++i)
        for (int j = 0; j <= db; ++j) syl[db + i][i + j] = b[db - j];
    return bareiss_det(std::move(syl));
}

BigInt discriminant(const ZPoly& monic_poly) {
    int d = deg(monic_poly);
    if (d < 1) return 1;
    ZPoly der(monic_poly.size() - 1);
    for (size_t i = 1; i < monic_poly.size(); ++i)
        der[i - 1] = monic_poly[i] * BigInt(static_cast<long>(i));
    BigInt res = resultant(monic_poly, trim(std::move(der)));
    // disc = (-1)^{d(d-1)/2} * res / lc, lc = 1
    if ((static_cast<long>(d) * (d - 1) / 2) % 2 == 1) res = -res;
    return res;
}

std::string to_string(const ZPoly& p, const std::string& var) {
    return qpoly::to_string(qpoly::from_z(p), var);
}

namespace {

// Does any monic integer polynomial of degree k with coefficients bounded by
// `bound` divide f? Brute force over the coefficient box.
bool has_bounded_factor(const ZPoly& f, int k, const BigInt& bound) {
    if (bound > 40) throw RootIsolationFailed("irreducibility search bound too large");
    long b = static_cast<long>(bound.get_si());
    std::vector<long> coeffs(static_cast<size_t>(k), -b);
    auto divides_f = [&]() {
        // trial division with exact integer arithmetic (divisor monic)
        ZPoly g(static_cast<size_t>(k) + 1);
        for (int i = 0; i < k; ++i) g[static_cast<size_t>(i)] = coeffs[static_cast<size_t>(i)];
        g[static_cast<size_t>(k)] = 1;
        ZPoly rem = f;
        while (static_cast<int>(rem.size()) - 1 >= k) {
            BigInt q = rem.back();
            size_t shift = rem.size() - g.size();
            for (size_t j = 0; j < g.size(); ++j) rem[shift + j] -= q * g[j];
            rem = trim(std::move(rem));
        }
        return rem.empty();
    };
    while (true) {
        // constant coefficient 0 would mean root 0; f(0) != 0 is checked upstream
        if (coeffs[0] != 0 && divides_f()) return true;
        int pos = 0;
        while (pos < k && coeffs[static_cast<size_t>(pos)] == b) {
            coeffs[static_cast<size_t>(pos)] = -b;
            ++pos;
        }
        if (pos == k) return false;
        ++coeffs[static_cast<size_t>(pos)];
    }
}

} // namespace

bool is_irreducible_over_q(const ZPoly& f) {
    int d = deg(f);
    if (d <= 0) return false;
    if (!is_monic(f)) throw Error("irreducibility check requires monic input");
    if (d == 1) return true;
    // squarefree over Q is necessary
    QPoly fq = qpoly::from_z(f);
    if (qpoly::deg(qpoly::gcd(fq, qpoly::derivative(fq))) > 0) return false;
    // rational roots of a monic integer polynomial are integer divisors of f(0)
    if (f[0] == 0) return false;
    BigInt c0 = abs(f[0]);
    for (BigInt t = 1; t * t <= c0; ++t) {
        if (c0 % t != 0) continue;
        for (const BigInt& dvs : {t, BigInt(c0 / t)})
            for (const BigInt& r : {dvs, BigInt(-dvs)})
                if (eval(f, r) == 0) return false;
    }
    if (d <= 3) return true; // no root and degree <= 3
    // certificate: irreducible reduction mod p for some p not dividing disc(f)
    BigInt disc = discriminant(f);
    BigInt p = 1;
    for (int tries = 0; tries < 30; ++tries) {
        p = next_prime(p);
        if (disc % p == 0) continue;
        if (pmod::is_irreducible(pmod::reduce(f, p), p)) return true;
    }
    // bounded search for a factor of degree 2..d/2 (Mignotte bound)
    double norm2 = 0;
    for (const auto& c : f) norm2 += c.get_d() * c.get_d();
    norm2 = std::sqrt(norm2);
    for (int k = 2; k <= d / 2; ++k) {
        double binom = 1;
        for (int i = 0; i < k / 2; ++i) binom = binom * (k - i) / (i + 1);
        BigInt bound(static_cast<long>(std::ceil(binom * norm2)));
        if (has_bounded_factor(f, k, bound)) return false;
    }
    return true;
}

} // namespace zpoly

namespace pmod {

Poly trim(Poly f, const BigInt& p) {
    for (auto& c : f) c = mod_floor(c, p);
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

Poly reduce(const ZPoly& f, const BigInt& p) {
    Poly r(f.begin(), f.end());
    return trim(std::move(r), p);
}

int deg(const Poly& f) { return static_cast<int>(f.size()) - 1; }

Poly add(const Poly& a, const Poly& b, const BigInt& p) {
    Poly r(std::max(a.size(), b.size()), BigInt(0));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] += b[i];
    }
    return trim(std::move(r), p);
}

Poly sub(const Poly& a, const Poly& b, const BigInt& p) {
    Poly r(std::max(a.size(), b.size()), BigInt(0));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] -= b[i];
    }
    return trim(std::move(r), p);
}

Poly mul(const Poly& a, const Poly& b, const BigInt& p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, BigInt(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return trim(std::move(r), p);
}

Poly scale(const Poly& a, const BigInt& c, const BigInt& p) {
    Poly r = a;
    for (auto& x : r) x *= c;
    return trim(std::move(r), p);
}

std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b, const BigInt& p) {
    if (b.empty()) throw DivisionByZero("polynomial division by zero mod p");
    Poly rem = a;
    if (a.size() < b.size()) return {{}, rem};
    Poly quo(a.size() - b.size() + 1, BigInt(0));
    BigInt lead_inv = inv_mod(b.back(), p);
    for (int i = static_cast<int>(rem.size()) - 1; i >= static_cast<int>(b.size()) - 1; --i) {
        if (rem[static_cast<size_t>(i)] == 0) continue;
        BigInt q = mod_floor(rem[static_cast<size_t>(i)] * lead_inv, p);
        quo[static_cast<size_t>(i) - (b.size() - 1)] = q;
        for (size_t j = 0; j < b.size(); ++j) {
            size_t idx = static_cast<size_t>(i) - (b.size() - 1) + j;
            rem[idx] = mod_floor(rem[idx] - q * b[j], p);
        }
    }
    return {trim(std::move(quo), p), trim(std::move(rem), p)};
}

Poly monic(Poly a, const BigInt& p) {
    if (a.empty()) return a;
    return scale(a, inv_mod(a.back(), p), p);
}

Poly gcd(Poly a, Poly b, const BigInt& p) {
    while (!b.empty()) {
        auto [q, r] = divrem(a, b, p);
        (void)q;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(std::move(a), p);
}

Poly powmod(const Poly& base, const BigInt& e, const Poly& mod, const BigInt& p) {
    Poly result = {BigInt(1)};
    Poly b = divrem(base, mod, p).second;
    size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    if (e == 0) return result;
    for (size_t i = bits; i-- > 0;) {
        result = divrem(mul(result, result, p), mod, p).second;
        if (mpz_tstbit(e.get_mpz_t(), i))
            result = divrem(mul(result, b, p), mod, p).second;
    }
    return result;
}

Poly derivative(const Poly& a, const BigInt& p) {
    if (a.size() <= 1) return {};
    Poly r(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * BigInt(static_cast<long>(i));
    return trim(std::move(r), p);
}

bool divides(const Poly& d, const Poly& f, const BigInt& p) {
    return divrem(f, d, p).second.empty();
}

bool is_irreducible(const Poly& f, const BigInt& p) {
    int n = deg(f);
    if (n <= 0) return false;
    if (n == 1) return true;
    // Rabin test: x^(p^n) == x mod f and gcd(x^(p^(n/q)) - x, f) = 1 for prime q | n
    Poly x = {BigInt(0), BigInt(1)};
    Poly fm = monic(f, p);
    BigInt pn = 1;
    for (int i = 0; i < n; ++i) pn *= p;
    if (!sub(powmod(x, pn, fm, p), x, p).empty()) return false;
    for (int q = 2; q <= n; ++q) {
        if (n % q != 0) continue;
        bool qprime = true;
        for (int t = 2; t * t <= q; ++t)
            if (q % t == 0) qprime = false;
        if (!qprime) continue;
        BigInt pd = 1;
        for (int i = 0; i < n / q; ++i) pd *= p;
        Poly g = gcd(sub(powmod(x, pd, fm, p), x, p), fm, p);
        if (deg(g) != 0) return false;
    }
    return true;
}

namespace {

struct SplitRng {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

Poly random_poly(SplitRng& rng, int max_deg, const BigInt& p) {
    Poly r(static_cast<size_t>(max_deg) + 1);
    for (auto& c : r)
        c = mod_floor(BigInt(static_cast<unsigned long>(rng.next())), p);
    return trim(std::move(r), p);
}

void equal_degree_split(const Poly& f, int d, const BigInt& p, SplitRng& rng,
                        std::vector<Poly>& out) {
    if (deg(f) == d) {
        out.push_back(f);
        return;
    }
    Poly splitter;
    for (int attempt = 0; attempt < 256; ++attempt) {
        Poly h = random_poly(rng, deg(f) - 1, p);
        if (deg(h) < 1) continue;
        Poly g;
        if (p == 2) {
            // trace map over F_{2^d}
            Poly tr = h;
            Poly cur = h;
            for (int i = 1; i < d; ++i) {
                cur = powmod(cur, BigInt(2), f, p);
                tr = add(tr, cur, p);
            }
            g = gcd(tr, f, p);
        } else {
            BigInt e = 1;
            for (int i = 0; i < d; ++i) e *= p;
            e = (e - 1) / 2;
            Poly r = powmod(h, e, f, p);
            g = gcd(sub(r, Poly{BigInt(1)}, p), f, p);
        }
        if (deg(g) > 0 && deg(g) < deg(f)) {
            splitter = g;
            break;
        }
    }
    if (splitter.empty()) throw RootIsolationFailed("equal-degree splitting stalled");
    equal_degree_split(splitter, d, p, rng, out);
    equal_degree_split(divrem(f, splitter, p).first, d, p, rng, out);
}

} // namespace

std::vector<Poly> factor_squarefree(Poly f, const BigInt& p) {
    f = monic(std::move(f), p);
    std::uint64_t seed = fnv1a(p.get_str());
    for (const auto& c : f) seed = fnv1a(c.get_str(), seed);
    SplitRng rng{seed};
    std::vector<Poly> factors;
    // distinct-degree decomposition
    Poly x = {BigInt(0), BigInt(1)};
    Poly h = x;
    Poly rest = f;
    for (int d = 1; 2 * d <= deg(rest); ++d) {
        h = powmod(h, p, rest, p);
        Poly g = gcd(sub(h, x, p), rest, p);
        if (deg(g) > 0) {
            equal_degree_split(g, d, p, rng, factors);
            rest = divrem(rest, g, p).first;
            h = divrem(h, rest, p).second;
        }
    }
    if (deg(rest) > 0) factors.push_back(rest);
    std::sort(factors.begin(), factors.end(), [](const Poly& a, const Poly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    });
    return factors;
}

} // namespace pmod

CertifiedReal max_root_modulus(const QPoly& squarefree, double tol) {
    const int n = qpoly::deg(squarefree);
    if (n <= 0) return {0.0, 0.0};
    if (n == 1) {
        BigRat root = -squarefree[0] / squarefree[1];
        double v = std::abs(root.get_d());
        return {v, 1e-15 * (1.0 + v)};
    }
    std::vector<std::complex<double>> a(static_cast<size_t>(n) + 1);
    double lead = squarefree.back().get_d();
    for (int i = 0; i <= n; ++i)
        a[static_cast<size_t>(i)] = squarefree[static_cast<size_t>(i)].get_d() / lead;
    auto eval = [&](std::complex<double> z) {
        std::complex<double> r = 0;
        for (int i = n; i >= 0; --i) r = r * z + a[static_cast<size_t>(i)];
        return r;
    };
    double radius = 0;
    for (int i = 0; i < n; ++i) radius = std::max(radius, std::abs(a[static_cast<size_t>(i)]));
    radius += 1.0;
    std::vector<std::complex<double>> z(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double ang = 2.0 * M_PI * i / n + 0.4;
        z[static_cast<size_t>(i)] = 0.7 * radius * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    double max_w = 0;
    bool converged = false;
    for (int iter = 0; iter < 4000 && !converged; ++iter) {
        max_w = 0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> denom = 1;
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= z[static_cast<size_t>(i)] - z[static_cast<size_t>(j)];
            std::complex<double> w = eval(z[static_cast<size_t>(i)]) / denom;
            z[static_cast<size_t>(i)] -= w;
            max_w = std::max(max_w, std::abs(w));
        }
        if (max_w * n < tol) converged = true;
    }
    if (!converged) throw RootIsolationFailed("Durand-Kerner did not converge");
    // every root lies within n*|W_i| of some approximation z_i
    double value = 0, err = 0;
    for (int i = 0; i < n; ++i) {
        std::complex<double> denom = 1;
        for (int j = 0; j < n; ++j)
            if (j != i) denom *= z[static_cast<size_t>(i)] - z[static_cast<size_t>(j)];
        double w = std::abs(eval(z[static_cast<size_t>(i)]) / denom);
        value = std::max(value, std::abs(z[static_cast<size_t>(i)]));
        err = std::max(err, n * w);
    }
    return {value, err + 1e-12 * (1.0 + value)};
}

} // namespace ranklab
