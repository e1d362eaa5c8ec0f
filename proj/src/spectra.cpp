#include "ranklab/spectra.hpp"

#include <algorithm>
#include <ostream>

#include "ranklab/errors.hpp"

namespace ranklab {

namespace {

int sign_of(const BigRat& q) { return sgn(q); }

// Real-root count by Sturm's theorem (exact).
int count_real_roots(QPoly f) {
    f = qpoly::squarefree_part(f);
    if (qpoly::deg(f) <= 0) return 0;
    std::vector<QPoly> chain{f, qpoly::derivative(f)};
    while (!qpoly::is_zero(chain.back())) {
        auto [q, r] = qpoly::divrem(chain[chain.size() - 2], chain.back());
        (void)q;
        chain.push_back(qpoly::neg(std::move(r)));
    }
    chain.pop_back();
    auto variations = [&](int dir) {
        int count = 0, prev = 0;
        for (const auto& g : chain) {
            int d = qpoly::deg(g);
            if (d < 0) continue;
            int s = sign_of(g.back());
            if (dir < 0 && d % 2 == 1) s = -s;
            if (prev != 0 && s != prev) ++count;
            prev = s;
        }
        return count;
    };
    return variations(-1) - variations(+1);
}

bool totally_real(const ZPoly& f) {
    QPoly q = qpoly::from_z(f);
    return count_real_roots(q) == qpoly::deg(q);
}

// Moments are rational numbers; over K they go through the normalized field
// trace, which is a positive functional only when every embedding is real.
void require_moment_field(const Field& F) {
    if (F.kind == Field::Kind::Rationals) return;
    if (F.kind == Field::Kind::NumberField) {
        if (!totally_real(F.minpoly))
            throw ConfigError("moments over " + F.description() +
                              ": the field has complex embeddings");
        return;
    }
    throw DomainMismatch("spectral moments need coefficients over Q or a number field, got " +
                         F.description());
}

// Power sums p_k = sum of k-th powers of the roots of the monic f, k < deg f,
// by Newton's identities.
std::vector<BigRat> power_sums(const ZPoly& f) {
    int d = zpoly::deg(f);
    std::vector<BigRat> p(static_cast<std::size_t>(d));
    p[0] = d;
    for (int k = 1; k < d; ++k) {
        BigRat s = BigRat(f[static_cast<std::size_t>(d - k)]) * k;
        for (int i = 1; i < k; ++i)
            s += BigRat(f[static_cast<std::size_t>(d - i)]) * p[static_cast<std::size_t>(k - i)];
        p[static_cast<std::size_t>(k)] = -s;
    }
    return p;
}

// Tr_{K/Q}(v) / [K:Q]; the identity on Q.
BigRat rational_trace(const Field& F, const FieldValue& v, const std::vector<BigRat>& powsums) {
    if (F.kind == Field::Kind::Rationals) return std::get<BigRat>(v);
    const QPoly& c = std::get<QPoly>(v);
    BigRat t = 0;
    for (std::size_t i = 0; i < c.size(); ++i) t += c[i] * powsums[i];
    return t / BigRat(static_cast<unsigned long>(powsums.size()));
}

std::size_t term_count(const GAMatrix& a) {
    std::size_t t = 0;
    for (const auto& e : a.entries) t += e.support.size();
    return t;
}

} // namespace

MomentSequence moments_free(const GAMatrix& B, int L, std::size_t term_cap) {
    if (L < 0) throw ConfigError("moment order must be nonnegative");
    const Field& F = *B.field;
    require_moment_field(F);
    std::vector<BigRat> powsums;
    if (F.kind == Field::Kind::NumberField) powsums = power_sums(F.minpoly);

    MomentSequence out;
    out.source = "free";
    out.mu.reserve(static_cast<std::size_t>(L) + 1);
    out.mu.emplace_back(B.rows);
    if (L == 0) return out;

    GAMatrix T = mat_mul(B, mat_conj_transpose(B));
    GAMatrix P = T;
    for (int l = 1; l <= L; ++l) {
        if (l > 1) P = mat_mul(P, T);
        if (term_count(P) > term_cap)
            throw SupportExplosion("support of (BB*)^" + std::to_string(l) + " exceeds " +
                                   std::to_string(term_cap) + " terms");
        FieldValue tr = F.zero();
        for (int i = 0; i < P.rows; ++i) tr = F.add(tr, identity_coefficient(P.at(i, i)));
        out.mu.push_back(rational_trace(F, tr, powsums));
    }
    return out;
}

MomentSequence moments_finite(const GAMatrix& B, const FiniteFSet& X, int L) {
    if (L < 0) throw ConfigError("moment order must be nonnegative");
    const Field& F = *B.field;
    require_moment_field(F);
    std::vector<BigRat> powsums;
    if (F.kind == Field::Kind::NumberField) powsums = power_sums(F.minpoly);

    MomentSequence out;
    out.source = X.label.empty() ? "finite" : X.label;
    out.mu.reserve(static_cast<std::size_t>(L) + 1);
    out.mu.emplace_back(B.rows);
    if (L == 0) return out;

    SparseMatrix M = assemble_operator(B, X);
    SparseMatrix S = sparse_mul(M, sparse_conj_transpose(M));
    SparseMatrix P = S;
    const BigRat size(static_cast<unsigned long>(X.size));
    for (int l = 1; l <= L; ++l) {
        if (l > 1) P = sparse_mul(P, S);
        out.mu.push_back(rational_trace(F, sparse_trace(P), powsums) / size);
    }
    return out;
}

bool hankel_psd(const MomentSequence& m) {
    if (m.mu.empty()) return true;
    const std::size_t h = (m.mu.size() - 1) / 2 + 1;
    std::vector<std::vector<BigRat>> H(h, std::vector<BigRat>(h));
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < h; ++j) H[i][j] = m.mu[i + j];
    // symmetric elimination: a PSD matrix has nonnegative pivots, and a zero
    // pivot forces the rest of its row to vanish
    for (std::size_t k = 0; k < h; ++k) {
        if (H[k][k] < 0) return false;
        if (H[k][k] == 0) {
            for (std::size_t j = k + 1; j < h; ++j)
                if (H[k][j] != 0) return false;
            continue;
        }
        for (std::size_t i = k + 1; i < h; ++i) {
            if (H[i][k] == 0) continue;
            BigRat f = H[i][k] / H[k][k];
            for (std::size_t j = k; j < h; ++j) H[i][j] -= f * H[k][j];
        }
    }
    return true;
}

GAMatrix specialize(const GAMatrix& C, const std::vector<BigRat>& s) {
    const Field& F = *C.field;
    if (F.kind != Field::Kind::RationalFunctions)
        throw DomainMismatch("specialize needs rational-function coefficients, got " +
                             F.description());
    if (static_cast<int>(s.size()) != F.num_vars)
        throw ConfigError("specialization point has " + std::to_string(s.size()) +
                          " coordinates for " + std::to_string(F.num_vars) + " parameters");
    FieldPtr target = F.minpoly.empty() ? Field::rationals() : Field::number_field(F.minpoly);
    BaseCtx ctx = F.base_ctx();
    return mat_map_coefficients(C, target, [&](const FieldValue& v) -> FieldValue {
        BaseScalar val = ratfunc::eval(ctx, std::get<RatFunc>(v), s);
        if (const auto* q = std::get_if<BigRat>(&val)) return target->from_rat(*q);
        return qpoly::trim(std::get<QPoly>(std::move(val)));
    });
}

SemicontinuityReport semicontinuity_check(const GAMatrix& C, const std::vector<BigRat>& s,
                                          const FiniteFSet& X) {
    SemicontinuityReport rep;
    rep.generic = normalized_rank(C, X);
    rep.special = normalized_rank(specialize(C, s), X);
    rep.ok = rep.generic.normalized >= rep.special.normalized;
    return rep;
}

MomentConvergenceReport moment_convergence_check(const GAMatrix& B,
                                                 const std::vector<FiniteFSet>& series, int L,
                                                 std::size_t term_cap) {
    MomentConvergenceReport rep;
    rep.free_moments = moments_free(B, L, term_cap);
    rep.steps.reserve(series.size());
    for (const auto& X : series) {
        MomentSequence fin = moments_finite(B, X, L);
        BigRat dev = 0;
        for (std::size_t l = 0; l < fin.mu.size(); ++l) {
            BigRat d = abs(fin.mu[l] - rep.free_moments.mu[l]);
            if (d > dev) dev = d;
        }
        rep.steps.push_back({fin.source, X.size, std::move(fin.mu), std::move(dev)});
    }
    rep.deviations_non_increasing = true;
    for (std::size_t i = 1; i < rep.steps.size(); ++i)
        if (rep.steps[i].max_dev > rep.steps[i - 1].max_dev) {
            rep.deviations_non_increasing = false;
            break;
        }
    return rep;
}

void moments_save_csv(std::ostream& os, const MomentSequence& m) {
    os << "l,value_num,value_den,source\n";
    for (std::size_t l = 0; l < m.mu.size(); ++l)
        os << l << ',' << m.mu[l].get_num() << ',' << m.mu[l].get_den() << ',' << m.source
           << '\n';
}

} // namespace ranklab
