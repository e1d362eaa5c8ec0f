#pragma once

// Representations of the free group on its generators and the twisting
// operator A ↦ σ̃(A) that sends each group element g to σ(g)·g.

#include <vector>

#include "ranklab/dense.hpp"
#include "ranklab/freealg.hpp"

namespace ranklab {

struct Representation {
    FieldPtr field;
    int rank = 0;  // alphabet rank of the free group
    int dim = 0;   // k
    std::vector<DenseMat> gen;      // one k×k matrix per generator
    std::vector<DenseMat> gen_inv;  // exact inverses, verified at construction
};

// Verifies squareness and invertibility; throws RepresentationInvalid.
Representation make_rep(int rank, std::vector<DenseMat> gens);
Representation trivial_rep(FieldPtr F, int rank, int dim);

// Product of generator matrices along the word; extend_rep(uv) = extend_rep(u)·extend_rep(v).
DenseMat extend_rep(const Representation& s, const Word& w);

// Relators whose image is not the identity. Empty result means σ factors
// through the quotient presented by the relators.
std::vector<Word> validate_rep(const Representation& s, const std::vector<Word>& relators);

// Block (i,j) of the result is the k×k matrix of algebra elements whose (s,t)
// entry is Σ_h a_h·σ(h)_{s,t}·h; rows are indexed i·k+s, columns j·k+t.
GAMatrix twist_matrix(const GAMatrix& A, const Representation& s);

Representation map_rep(const Representation& s, FieldPtr target,
                       const std::function<FieldValue(const FieldValue&)>& f);
Representation reduce_rep_mod(const Representation& s, const PrimeIdeal& P);

}  // namespace ranklab
