#pragma once

// Finite models of the rank function: assemble ρ_X(B) as a sparse matrix over
// the coefficient field, compute its exact rank, and evaluate the mod-p
// discrepancy bound.

#include <iosfwd>
#include <utility>

#include "ranklab/freealg.hpp"
#include "ranklab/sofic.hpp"

namespace ranklab {

struct SparseMatrix {
    FieldPtr field;
    std::size_t rows = 0, cols = 0;
    // per-row entries sorted by column, no explicit zeros
    std::vector<std::vector<std::pair<std::uint32_t, FieldValue>>> row;

    std::size_t nnz() const {
        std::size_t k = 0;
        for (const auto& r : row) k += r.size();
        return k;
    }
};

SparseMatrix sparse_zero(FieldPtr F, std::size_t rows, std::size_t cols);
// Accumulates into (r, c); erases the entry when the sum vanishes.
void sparse_add_at(SparseMatrix& M, std::size_t r, std::size_t c, const FieldValue& v);
SparseMatrix sparse_transpose(const SparseMatrix& M);
SparseMatrix sparse_conj_transpose(const SparseMatrix& M); // field-level conj
SparseMatrix sparse_mul(const SparseMatrix& A, const SparseMatrix& B);
FieldValue sparse_trace(const SparseMatrix& M);
DenseMat sparse_to_dense(const SparseMatrix& M);

// Row i·|X|+x, column j·|X|+y carries Σ { coeff of h in B_ij : x·h = y }.
SparseMatrix assemble_operator(const GAMatrix& B, const FiniteFSet& X);

// Exact rank. Finite fields: sparse Gaussian elimination; characteristic-zero
// domains: fraction-free (Bareiss one-step) elimination. Pivots chosen by a
// Markowitz score with an entry-size tie-break. Row updates are OpenMP-parallel.
std::size_t rank_exact(const SparseMatrix& M);

// Serial dense elimination over the field; the reference oracle.
std::size_t rank_reference_dense(const SparseMatrix& M);

struct RankReport {
    std::size_t raw_rank = 0;
    std::size_t set_size = 0;
    std::size_t n = 0, m = 0;  // block shape of B
    BigRat normalized;         // raw_rank / |X|
    std::string field_desc;
    double ms = 0.0;
};

RankReport normalized_rank(const GAMatrix& B, const FiniteFSet& X);
RankReport normalized_rank_mod(const GAMatrix& B, const FiniteFSet& X, const PrimeIdeal& P);

// m·[K:Q]·log2(house(B)) / log2(|residue field|), rounded upward; 0 when the
// matrix house is ≤ 1 (such B never lose rank mod a prime).
double discrepancy_bound(const GAMatrix& B, const Field& residue);

void smat_save(std::ostream& os, const SparseMatrix& M);
SparseMatrix smat_load(std::istream& is, FieldPtr F);

}  // namespace ranklab
