#include "ranklab/rank.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "ranklab/dense.hpp"
#include "ranklab/errors.hpp"

namespace ranklab {

namespace {

using Row = std::vector<std::pair<std::uint32_t, FieldValue>>;

// crude coefficient-size heuristic for pivot tie-breaking
std::size_t scalar_size(const BaseScalar& s) {
    if (const auto* q = std::get_if<BigRat>(&s))
        return mpz_sizeinbase(q->get_num().get_mpz_t(), 2) +
               mpz_sizeinbase(q->get_den().get_mpz_t(), 2);
    std::size_t t = 1;
    for (const auto& c : std::get<QPoly>(s))
        t += mpz_sizeinbase(c.get_num().get_mpz_t(), 2) +
             mpz_sizeinbase(c.get_den().get_mpz_t(), 2);
    return t;
}

std::size_t mpoly_size(const MPoly& f) {
    if (f.level == 0) return scalar_size(f.scalar);
    std::size_t t = 1;
    for (const auto& c : f.coeffs) t += mpoly_size(c);
    return t;
}

std::size_t value_size(const FieldValue& v) {
    if (const auto* q = std::get_if<BigRat>(&v))
        return mpz_sizeinbase(q->get_num().get_mpz_t(), 2) +
               mpz_sizeinbase(q->get_den().get_mpz_t(), 2);
    if (const auto* p = std::get_if<QPoly>(&v)) {
        std::size_t t = 1;
        for (const auto& c : *p)
            t += mpz_sizeinbase(c.get_num().get_mpz_t(), 2) +
                 mpz_sizeinbase(c.get_den().get_mpz_t(), 2);
        return t;
    }
    if (const auto* z = std::get_if<BigInt>(&v)) return mpz_sizeinbase(z->get_mpz_t(), 2);
    if (const auto* vv = std::get_if<std::vector<BigInt>>(&v)) return 1 + vv->size();
    const auto& rf = std::get<RatFunc>(v);
    return mpoly_size(rf.num) + mpoly_size(rf.den);
}

// result = (alpha·A + beta·B) / divisor over the merged supports; divisor may
// be null. Zero results are dropped.
Row row_axpby(const Field& F, const FieldValue& alpha, const Row& A, const FieldValue& beta,
              const Row& B, const FieldValue* divisor) {
    Row out;
    out.reserve(A.size() + B.size());
    std::size_t i = 0, j = 0;
    auto push = [&](std::uint32_t col, FieldValue v) {
        if (divisor) v = F.div(v, *divisor);
        if (!F.is_zero(v)) out.emplace_back(col, std::move(v));
    };
    while (i < A.size() || j < B.size()) {
        if (j == B.size() || (i < A.size() && A[i].first < B[j].first)) {
            push(A[i].first, F.mul(alpha, A[i].second));
            ++i;
        } else if (i == A.size() || B[j].first < A[i].first) {
            push(B[j].first, F.mul(beta, B[j].second));
            ++j;
        } else {
            FieldValue v = F.add(F.mul(alpha, A[i].second), F.mul(beta, B[j].second));
            if (!F.is_zero(v)) push(A[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

std::size_t eliminate(const SparseMatrix& M) {
    const Field& F = *M.field;
    const bool fraction_free = !F.finite();
    std::vector<Row> rows = M.row;
    std::vector<char> alive(rows.size(), 1);
    std::vector<std::uint32_t> col_count(M.cols, 0);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (const auto& [c, v] : rows[r]) ++col_count[c];

    FieldValue prev = F.one();
    std::size_t rank = 0;
    for (;;) {
        // Markowitz pivot: minimize (row nnz − 1)(col nnz − 1), then entry size.
        std::size_t best_r = rows.size();
        std::uint32_t best_c = 0;
        unsigned long long best_score = ~0ULL;
        std::size_t best_size = ~std::size_t(0);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (!alive[r] || rows[r].empty()) continue;
            for (const auto& [c, v] : rows[r]) {
                unsigned long long score =
                    static_cast<unsigned long long>(rows[r].size() - 1) * (col_count[c] - 1);
                if (score > best_score) continue;
                std::size_t sz = value_size(v);
                if (score < best_score || sz < best_size) {
                    best_score = score;
                    best_size = sz;
                    best_r = r;
                    best_c = c;
                }
            }
        }
        if (best_r == rows.size()) break;
        ++rank;

        Row pivot_row;
        pivot_row.swap(rows[best_r]);
        alive[best_r] = 0;
        for (const auto& [c, v] : pivot_row) --col_count[c];
        FieldValue pivot_val = F.zero();
        for (const auto& [c, v] : pivot_row)
            if (c == best_c) pivot_val = v;

        std::vector<std::size_t> affected;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (!alive[r]) continue;
            auto it = std::lower_bound(rows[r].begin(), rows[r].end(), best_c,
                                       [](const auto& e, std::uint32_t c) { return e.first < c; });
            if (it != rows[r].end() && it->first == best_c) affected.push_back(r);
        }
        for (std::size_t r : affected)
            for (const auto& [c, v] : rows[r]) --col_count[c];

        long long na = static_cast<long long>(affected.size());
#pragma omp parallel for schedule(dynamic)
        for (long long t = 0; t < na; ++t) {
            Row& target = rows[affected[static_cast<std::size_t>(t)]];
            auto it = std::lower_bound(target.begin(), target.end(), best_c,
                                       [](const auto& e, std::uint32_t c) { return e.first < c; });
            FieldValue b = it->second;
            if (fraction_free) {
                target = row_axpby(F, pivot_val, target, F.neg(b), pivot_row, &prev);
            } else {
                FieldValue f = F.neg(F.mul(b, F.inv(pivot_val)));
                target = row_axpby(F, F.one(), target, f, pivot_row, nullptr);
            }
        }
        for (std::size_t r : affected)
            for (const auto& [c, v] : rows[r]) ++col_count[c];
        if (fraction_free) prev = pivot_val;
    }
    return rank;
}

}  // namespace

SparseMatrix sparse_zero(FieldPtr F, std::size_t rows, std::size_t cols) {
    SparseMatrix M;
    M.field = std::move(F);
    M.rows = rows;
    M.cols = cols;
    M.row.resize(rows);
    return M;
}

void sparse_add_at(SparseMatrix& M, std::size_t r, std::size_t c, const FieldValue& v) {
    if (r >= M.rows || c >= M.cols) throw PointOutOfRange("sparse entry position out of range");
    if (M.field->is_zero(v)) return;
    auto& row = M.row[r];
    auto col = static_cast<std::uint32_t>(c);
    auto it = std::lower_bound(row.begin(), row.end(), col,
                               [](const auto& e, std::uint32_t cc) { return e.first < cc; });
    if (it != row.end() && it->first == col) {
        it->second = M.field->add(it->second, v);
        if (M.field->is_zero(it->second)) row.erase(it);
    } else {
        row.insert(it, {col, v});
    }
}

SparseMatrix sparse_transpose(const SparseMatrix& M) {
    SparseMatrix T = sparse_zero(M.field, M.cols, M.rows);
    for (std::size_t r = 0; r < M.rows; ++r)
        for (const auto& [c, v] : M.row[r])
            T.row[c].emplace_back(static_cast<std::uint32_t>(r), v);
    return T;  // rows already sorted because r increases
}

SparseMatrix sparse_conj_transpose(const SparseMatrix& M) {
    SparseMatrix T = sparse_transpose(M);
    for (auto& r : T.row)
        for (auto& [c, v] : r) v = T.field->conj(v);
    return T;
}

SparseMatrix sparse_mul(const SparseMatrix& A, const SparseMatrix& B) {
    if (!A.field->same(*B.field)) throw DomainMismatch("sparse product: coefficient fields differ");
    if (A.cols != B.rows)
        throw DomainMismatch("sparse product: " + std::to_string(A.cols) + " columns vs " +
                             std::to_string(B.rows) + " rows");
    const Field& F = *A.field;
    SparseMatrix C = sparse_zero(A.field, A.rows, B.cols);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t r = 0; r < A.rows; ++r) {
        Row acc;
        for (const auto& [k, a] : A.row[r])
            for (const auto& [c, b] : B.row[k]) acc.emplace_back(c, F.mul(a, b));
        std::sort(acc.begin(), acc.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        Row& out = C.row[r];
        for (auto& e : acc) {
            if (!out.empty() && out.back().first == e.first)
                out.back().second = F.add(out.back().second, e.second);
            else
                out.push_back(std::move(e));
            if (F.is_zero(out.back().second)) out.pop_back();
        }
    }
    return C;
}

FieldValue sparse_trace(const SparseMatrix& M) {
    const Field& F = *M.field;
    FieldValue t = F.zero();
    std::size_t d = std::min(M.rows, M.cols);
    for (std::size_t r = 0; r < d; ++r) {
        const auto& row = M.row[r];
        auto col = static_cast<std::uint32_t>(r);
        auto it = std::lower_bound(row.begin(), row.end(), col,
                                   [](const auto& e, std::uint32_t cc) { return e.first < cc; });
        if (it != row.end() && it->first == col) t = F.add(t, it->second);
    }
    return t;
}

DenseMat sparse_to_dense(const SparseMatrix& M) {
    DenseMat D = dense_zero(M.field, M.rows, M.cols);
    for (std::size_t r = 0; r < M.rows; ++r)
        for (const auto& [c, v] : M.row[r]) D.at(r, c) = v;
    return D;
}

SparseMatrix assemble_operator(const GAMatrix& B, const FiniteFSet& X) {
    if (B.rank != X.rank)
        throw DomainMismatch("operator assembly: matrix alphabet rank " +
                             std::to_string(B.rank) + " vs F-set rank " + std::to_string(X.rank));
    const Field& F = *B.field;
    const std::size_t N = X.size;
    SparseMatrix M = sparse_zero(B.field, B.rows * N, B.cols * N);
    std::map<Word, std::vector<std::uint32_t>, WordLess> word_perm;
    auto perm_of = [&](const Word& w) -> const std::vector<std::uint32_t>& {
        auto it = word_perm.find(w);
        if (it != word_perm.end()) return it->second;
        std::vector<std::uint32_t> p(N);
        for (std::size_t x = 0; x < N; ++x) p[x] = static_cast<std::uint32_t>(x);
        for (int l : w.letters) {
            const auto& g = l > 0 ? X.perm[l - 1] : X.inv[-l - 1];
            for (std::size_t x = 0; x < N; ++x) p[x] = g[p[x]];
        }
        return word_perm.emplace(w, std::move(p)).first->second;
    };
    for (int i = 0; i < B.rows; ++i) {
        for (int j = 0; j < B.cols; ++j) {
            for (const auto& [h, c] : B.at(i, j).support) {
                const auto& p = perm_of(h);
                for (std::size_t x = 0; x < N; ++x) {
                    auto& row = M.row[static_cast<std::size_t>(i) * N + x];
                    row.emplace_back(
                        static_cast<std::uint32_t>(static_cast<std::size_t>(j) * N + p[x]), c);
                }
            }
        }
    }
    // merge duplicate columns (distinct words can map x to the same point)
    for (auto& row : M.row) {
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        Row merged;
        merged.reserve(row.size());
        for (auto& e : row) {
            if (!merged.empty() && merged.back().first == e.first) {
                merged.back().second = F.add(merged.back().second, e.second);
            } else {
                merged.push_back(std::move(e));
            }
        }
        merged.erase(std::remove_if(merged.begin(), merged.end(),
                                    [&](const auto& e) { return F.is_zero(e.second); }),
                     merged.end());
        row = std::move(merged);
    }
    return M;
}

std::size_t rank_exact(const SparseMatrix& M) {
    if (M.rows == 0 || M.cols == 0) return 0;
    return eliminate(M);
}

std::size_t rank_reference_dense(const SparseMatrix& M) {
    if (M.rows == 0 || M.cols == 0) return 0;
    return dense_rank(sparse_to_dense(M));
}

namespace {

RankReport report_for(const GAMatrix& B, const FiniteFSet& X, const SparseMatrix& M) {
    auto t0 = std::chrono::steady_clock::now();
    std::size_t r = rank_exact(M);
    auto t1 = std::chrono::steady_clock::now();
    RankReport rep;
    rep.raw_rank = r;
    rep.set_size = X.size;
    rep.n = B.rows;
    rep.m = B.cols;
    rep.normalized = make_rat(BigInt(static_cast<unsigned long>(r)),
                              BigInt(static_cast<unsigned long>(X.size)));
    rep.field_desc = M.field->description();
    rep.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return rep;
}

}  // namespace

RankReport normalized_rank(const GAMatrix& B, const FiniteFSet& X) {
    return report_for(B, X, assemble_operator(B, X));
}

RankReport normalized_rank_mod(const GAMatrix& B, const FiniteFSet& X, const PrimeIdeal& P) {
    const Field& src = *B.field;
    GAMatrix Bp = mat_map_coefficients(
        B, P.residue, [&](const FieldValue& v) { return reduce_mod_prime(src, v, P); });
    return report_for(Bp, X, assemble_operator(Bp, X));
}

namespace {

// lcm of the denominators of a scalar's rational coordinates
BigInt coeff_den_lcm(const Field& F, const FieldValue& v) {
    if (F.kind == Field::Kind::Rationals) return BigInt(std::get<BigRat>(v).get_den());
    if (F.kind == Field::Kind::NumberField) {
        BigInt l(1);
        for (const BigRat& c : std::get<QPoly>(v)) l = lcm(l, BigInt(c.get_den()));
        return l;
    }
    return BigInt(1);
}

}  // namespace

double discrepancy_bound(const GAMatrix& B, const Field& residue) {
    if (!residue.finite())
        throw DomainMismatch("discrepancy bound needs a finite residue field");
    // The height bound assumes integral entries. Scale each row by the lcm of
    // its coefficient denominators first; this changes neither the rational
    // rank nor the residue rank (the prime is coprime to every denominator,
    // or reduce_mod_prime would have refused the matrix).
    GAMatrix C = B;
    for (int i = 0; i < C.rows; ++i) {
        BigInt l(1);
        for (int j = 0; j < C.cols; ++j)
            for (const auto& [w, v] : C.at(i, j).support) l = lcm(l, coeff_den_lcm(*C.field, v));
        if (l == 1) continue;
        FieldValue s = C.field->from_rat(BigRat(l));
        for (int j = 0; j < C.cols; ++j)
            for (auto& [w, v] : C.at(i, j).support) v = C.field->mul(v, s);
    }
    CertifiedReal h = matrix_house_certified(C);
    double upper = h.upper();
    if (upper <= 1.0) return 0.0;
    double deg = static_cast<double>(B.field->extension_degree());
    double logF = std::log2(residue.cardinality().value().get_d());
    double bound = static_cast<double>(B.cols) * deg * std::log2(upper) / logF;
    return bound;
}

void smat_save(std::ostream& os, const SparseMatrix& M) {
    os << "smat " << M.rows << " " << M.cols << " " << M.nnz() << "\n";
    for (std::size_t r = 0; r < M.rows; ++r)
        for (const auto& [c, v] : M.row[r])
            os << r << " " << c << " " << M.field->str(v) << "\n";
}

namespace {

FieldValue parse_entry(const FieldPtr& F, const std::string& s) {
    // entries are serialized with the field's canonical str(); reuse the
    // algebra parser on a rank-1 alphabet and take the identity coefficient
    GroupAlgebraElement e = parse_algebra(s, F, 1);
    for (const auto& [w, v] : e.support)
        if (!w.is_identity()) throw ParseError("matrix entry is not a scalar: " + s, 0);
    return identity_coefficient(e);
}

}  // namespace

SparseMatrix smat_load(std::istream& is, FieldPtr F) {
    std::string tag;
    std::size_t rows = 0, cols = 0, k = 0;
    if (!(is >> tag >> rows >> cols >> k) || tag != "smat")
        throw ParseError("bad sparse matrix header, expected 'smat rows cols k'", 0);
    SparseMatrix M = sparse_zero(F, rows, cols);
    std::string line;
    std::getline(is, line);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t r = 0, c = 0;
        if (!(is >> r >> c)) throw ParseError("truncated sparse matrix data", 0);
        std::getline(is, line);
        std::size_t pos = line.find_first_not_of(" \t");
        if (pos == std::string::npos) throw ParseError("sparse matrix entry missing value", 0);
        sparse_add_at(M, r, c, parse_entry(F, line.substr(pos)));
    }
    return M;
}

}  // namespace ranklab
