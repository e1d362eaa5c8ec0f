#include "ranklab/twist.hpp"

#include "ranklab/errors.hpp"

namespace ranklab {

Representation make_rep(int rank, std::vector<DenseMat> gens) {
    if (rank < 1 || gens.size() != static_cast<std::size_t>(rank))
        throw RepresentationInvalid("need one generator matrix per free generator");
    Representation s;
    s.field = gens.front().field;
    s.rank = rank;
    s.dim = static_cast<int>(gens.front().rows);
    if (s.dim < 1) throw RepresentationInvalid("representation dimension must be positive");
    for (const auto& g : gens) {
        if (!g.field->same(*s.field))
            throw RepresentationInvalid("generator matrices over different fields");
        if (g.rows != g.cols || g.rows != static_cast<std::size_t>(s.dim))
            throw RepresentationInvalid("generator matrices must be square of equal size");
        auto inv = dense_inverse(g);
        if (!inv) throw RepresentationInvalid("generator matrix is singular: " + dense_str(g));
        s.gen_inv.push_back(std::move(*inv));
    }
    s.gen = std::move(gens);
    return s;
}

Representation trivial_rep(FieldPtr F, int rank, int dim) {
    std::vector<DenseMat> gens(static_cast<std::size_t>(rank), dense_identity(F, dim));
    return make_rep(rank, std::move(gens));
}

DenseMat extend_rep(const Representation& s, const Word& w) {
    DenseMat m = dense_identity(s.field, s.dim);
    for (int l : w.letters) {
        if (l == 0 || std::abs(l) > s.rank)
            throw IndexOutOfAlphabet("word letter outside the representation's alphabet");
        m = dense_mul(m, l > 0 ? s.gen[l - 1] : s.gen_inv[-l - 1]);
    }
    return m;
}

std::vector<Word> validate_rep(const Representation& s, const std::vector<Word>& relators) {
    std::vector<Word> bad;
    for (const auto& r : relators)
        if (!dense_is_identity(extend_rep(s, r))) bad.push_back(r);
    return bad;
}

GAMatrix twist_matrix(const GAMatrix& A, const Representation& s) {
    if (!A.field->same(*s.field))
        throw DomainMismatch("twist: matrix over " + A.field->description() +
                             " but representation over " + s.field->description());
    if (A.rank != s.rank) throw DomainMismatch("twist: alphabet ranks differ");
    const Field& F = *A.field;
    const int k = s.dim;
    GAMatrix R = ga_matrix(A.field, A.rank, A.rows * k, A.cols * k);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j)
            for (const auto& [h, c] : A.at(i, j).support) {
                DenseMat S = extend_rep(s, h);
                for (int u = 0; u < k; ++u)
                    for (int t = 0; t < k; ++t) {
                        const FieldValue& sv =
                            S.at(static_cast<std::size_t>(u), static_cast<std::size_t>(t));
                        if (F.is_zero(sv)) continue;
                        auto& entry = R.at(i * k + u, j * k + t);
                        FieldValue v = F.mul(c, sv);
                        auto it = entry.support.find(h);
                        if (it == entry.support.end()) {
                            entry.support.emplace(h, std::move(v));
                        } else {
                            it->second = F.add(it->second, v);
                            if (F.is_zero(it->second)) entry.support.erase(it);
                        }
                    }
            }
    return R;
}

Representation map_rep(const Representation& s, FieldPtr target,
                       const std::function<FieldValue(const FieldValue&)>& f) {
    std::vector<DenseMat> gens;
    gens.reserve(s.gen.size());
    for (const auto& g : s.gen) gens.push_back(dense_map(g, target, f));
    return make_rep(s.rank, std::move(gens));
}

Representation reduce_rep_mod(const Representation& s, const PrimeIdeal& P) {
    const Field& src = *s.field;
    return map_rep(s, P.residue,
                   [&](const FieldValue& v) { return reduce_mod_prime(src, v, P); });
}

}  // namespace ranklab
