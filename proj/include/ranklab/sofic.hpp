#pragma once

// Finite right F-sets: the approximation side of the computation. Presets
// build the concrete families (congruence quotients of Z^d, regular actions
// of finite groups, seeded random permutations), products take diagonal
// actions, and regular_action_of_image realizes the closure of a mod-p
// representation image acting on itself.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ranklab/freealg.hpp"
#include "ranklab/twist.hpp"

namespace ranklab {

inline constexpr std::size_t kDefaultFSetCap = 1'000'000;

struct FiniteFSet {
    int rank = 0;
    std::size_t size = 0;
    std::vector<std::vector<std::uint32_t>> perm;  // one permutation per generator
    std::vector<std::vector<std::uint32_t>> inv;
    std::string label;
    // Set only by constructions where every point stabilizer is the kernel of
    // a map onto a finite group acting regularly (so stabilizers act
    // trivially on the whole set).
    bool free_by_construction = false;
};

// Validates bijectivity and builds the inverses; rank = perms.size().
FiniteFSet make_fset(std::vector<std::vector<std::uint32_t>> perms, std::string label = "",
                     bool free_tag = false);

std::size_t act(const FiniteFSet& X, std::size_t x, const Word& w);
std::size_t fixed_count(const FiniteFSet& X, const Word& w);
BigRat fixed_ratio(const FiniteFSet& X, const Word& w);

using MembershipOracle = std::function<bool(const Word&)>;

struct DefectEntry {
    Word w;
    BigRat ratio;
    int in_n = -1;      // -1 unknown, 0 not in N, 1 in N
    BigRat deviation;   // 1 - ratio if in N, ratio if not; 0 when unknown
};

struct DefectProfile {
    int radius = 0;
    std::vector<DefectEntry> entries;
    BigRat max_deviation;  // over words with a verdict
};

DefectProfile defect_profile(const FiniteFSet& X, int radius,
                             const MembershipOracle& oracle = {},
                             std::size_t ball_cap = kDefaultBallCap);

// Diagonal action on pairs; point (x, z) is stored at index x·|Z| + z.
FiniteFSet product_action(const FiniteFSet& X, const FiniteFSet& Z,
                          std::size_t cap = kDefaultFSetCap);

// Regular action of the subgroup of S_n generated by the given permutations.
FiniteFSet regular_closure_of_permutations(const std::vector<std::vector<std::uint32_t>>& gens,
                                           std::size_t cap = kDefaultFSetCap,
                                           std::string label = "");

// Regular action of ⟨σ(generators)⟩ ≤ GL_k over a finite field.
FiniteFSet regular_action_of_image(const Representation& s, std::size_t cap = kDefaultFSetCap);

// Schreier generators: per orbit, a BFS tree is rooted at the smallest point
// and every edge x·g_i = y contributes the loop u_x·g_i·u_y⁻¹ at the root.
// The non-trivial loops generate each point stabilizer up to conjugacy.
std::vector<Word> stabilizer_generators(const FiniteFSet& X);

// Whether σ is trivial on every point stabilizer — the hypothesis under which
// the twisted rank identity is exact on X. Decided by checking σ on the
// Schreier loops, without materializing the words.
bool rep_kills_stabilizers(const Representation& s, const FiniteFSet& X);

struct PresetParams {
    int rank = 0;                                   // free_random_perm
    int d = 0;                                      // zd_congruence
    std::vector<std::size_t> moduli;                // zd_congruence
    std::vector<std::size_t> sizes;                 // free_random_perm
    std::uint64_t seed = 0;                         // free_random_perm
    std::vector<std::vector<std::uint32_t>> perms;  // finite_regular / finite_quotient
    std::size_t cap = kDefaultFSetCap;
};

// name ∈ {zd_congruence, finite_regular, free_random_perm, finite_quotient}
std::vector<FiniteFSet> preset_approximation(const std::string& name, const PresetParams& p);

// w ∈ ker(F_d → Z^d): all exponent sums vanish.
MembershipOracle zd_oracle(int d);
// N trivial: only the empty word.
MembershipOracle free_oracle();

void fset_save(std::ostream& os, const FiniteFSet& X);
FiniteFSet fset_load(std::istream& is);

}  // namespace ranklab
