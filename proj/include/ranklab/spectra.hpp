#pragma once

// Spectral moments of T = BB* (the trace oracle), specialization of
// polynomial-parameter matrices at rational points, and the finite-level
// semicontinuity comparison.

#include <string>
#include <vector>

#include "ranklab/rank.hpp"

namespace ranklab {

inline constexpr std::size_t kDefaultTermCap = 2'000'000;

// mu[l] = Tr(T^l) exactly, l = 0..L; mu[0] is the block count n.  For a
// number field the normalized field trace Tr_{K/Q}/[K:Q] is applied, which
// requires K totally real.
struct MomentSequence {
    std::vector<BigRat> mu;
    std::string source; // "free" or the F-set label
};

MomentSequence moments_free(const GAMatrix& B, int L, std::size_t term_cap = kDefaultTermCap);
MomentSequence moments_finite(const GAMatrix& B, const FiniteFSet& X, int L);

// Positive semidefiniteness of the Hankel matrix (mu_{i+j})_{i,j <= floor(L/2)}
// by exact symmetric elimination.
bool hankel_psd(const MomentSequence& m);

// Entrywise evaluation t_i -> s_i of a matrix over Frac(Q[t..]) or
// Frac(K[t..]); the result lives over Q (resp. K).
GAMatrix specialize(const GAMatrix& C, const std::vector<BigRat>& s);

struct SemicontinuityReport {
    RankReport generic; // over the rational-function field
    RankReport special; // at the point
    bool ok = false;    // generic >= special
};

SemicontinuityReport semicontinuity_check(const GAMatrix& C, const std::vector<BigRat>& s,
                                          const FiniteFSet& X);

struct MomentStep {
    std::string label;
    std::size_t set_size = 0;
    std::vector<BigRat> mu;
    BigRat max_dev; // max_l |mu_l(X) - mu_l(free)|
};

struct MomentConvergenceReport {
    MomentSequence free_moments;
    std::vector<MomentStep> steps;
    bool deviations_non_increasing = false;
};

MomentConvergenceReport moment_convergence_check(const GAMatrix& B,
                                                 const std::vector<FiniteFSet>& series, int L,
                                                 std::size_t term_cap = kDefaultTermCap);

void moments_save_csv(std::ostream& os, const MomentSequence& m);

} // namespace ranklab
