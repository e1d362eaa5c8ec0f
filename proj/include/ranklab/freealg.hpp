#pragma once

// Reduced words in a free group F of finite rank and exact group-algebra
// arithmetic over a runtime coefficient field.

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ranklab/field.hpp"

namespace ranklab {

// Letters are signed generator indices: +i for the i-th generator, -i for its
// inverse (1-based, i <= rank).  The sequence is always freely reduced.
struct Word {
    std::vector<int> letters;
    int rank = 0;

    bool is_identity() const { return letters.empty(); }
    std::size_t length() const { return letters.size(); }
    std::string str() const; // "e" for the identity, runs collapsed: "a^3*b^-2"
    bool operator==(const Word&) const = default;
};

// Total order: length first, then lexicographic on letter codes with
// a < a^-1 < b < b^-1 < ...  This keys every support map, so iteration order
// (and all text output) is canonical.
struct WordLess {
    bool operator()(const Word& u, const Word& v) const;
};

Word reduce_word(std::vector<int> letters, int rank); // throws IndexOutOfAlphabet
Word word_mul(const Word& u, const Word& v);
Word word_inv(const Word& u);
Word parse_word(const std::string& text, int rank); // "abA", "a^2*b^-1", "e", "1"

inline constexpr std::size_t kDefaultBallCap = 5'000'000;

// closed form 1 + sum_{j<=k} 2r(2r-1)^(j-1)
BigInt ball_size(int k, int rank);
// all reduced words of length <= k, in WordLess order
std::vector<Word> ball(int k, int rank, std::size_t cap = kDefaultBallCap);

// ---------------------------------------------------------------------------

struct GroupAlgebraElement {
    FieldPtr field;
    int rank = 0;
    std::map<Word, FieldValue, WordLess> support; // no zero coefficients

    bool is_zero() const { return support.empty(); }
    std::string str() const;
};

GroupAlgebraElement ga_zero(FieldPtr F, int rank);
GroupAlgebraElement ga_term(FieldPtr F, Word w, FieldValue c);
GroupAlgebraElement ga_one(FieldPtr F, int rank);
GroupAlgebraElement ga_add(const GroupAlgebraElement& x, const GroupAlgebraElement& y);
GroupAlgebraElement ga_sub(const GroupAlgebraElement& x, const GroupAlgebraElement& y);
GroupAlgebraElement ga_neg(const GroupAlgebraElement& x);
GroupAlgebraElement ga_scale(const GroupAlgebraElement& x, const FieldValue& c);
GroupAlgebraElement ga_mul(const GroupAlgebraElement& x, const GroupAlgebraElement& y);
GroupAlgebraElement ga_star(const GroupAlgebraElement& x); // sum conj(a_h) h^-1
FieldValue identity_coefficient(const GroupAlgebraElement& x);
bool ga_equal(const GroupAlgebraElement& x, const GroupAlgebraElement& y);

// Parse "3/2*a*b^-1 - a" style expressions over the given field; generators
// are the first `rank` letters a..z (A..Z their inverses); w is the number
// field generator and t/t1..tl the rational-function variables whenever those
// letters are not generators.  Whitespace-insensitive.
GroupAlgebraElement parse_algebra(const std::string& text, FieldPtr F, int rank);

// ---------------------------------------------------------------------------

struct GAMatrix {
    FieldPtr field;
    int rank = 0;
    int rows = 0, cols = 0;
    std::vector<GroupAlgebraElement> entries; // row-major

    GroupAlgebraElement& at(int i, int j) { return entries[static_cast<size_t>(i) * cols + j]; }
    const GroupAlgebraElement& at(int i, int j) const {
        return entries[static_cast<size_t>(i) * cols + j];
    }
};

GAMatrix ga_matrix(FieldPtr F, int rank, int rows, int cols); // zero-filled
GAMatrix mat_add(const GAMatrix& a, const GAMatrix& b);
GAMatrix mat_mul(const GAMatrix& a, const GAMatrix& b);
GAMatrix mat_conj_transpose(const GAMatrix& a); // entry (i,j) -> ga_star(a(j,i))
std::size_t mat_max_word_length(const GAMatrix& a);
// rebuild over `target`, mapping every coefficient through `f`
GAMatrix mat_map_coefficients(const GAMatrix& a, FieldPtr target,
                              const std::function<FieldValue(const FieldValue&)>& f);

// Matrix height |~B~| = max_j sum_i |~b_ij~| with |~b~| = sum_h |~a_h~|,
// where |~.~| on scalars is the house; entries must lie over Q or a number
// field.
CertifiedReal matrix_house_certified(const GAMatrix& B);
double matrix_house(const GAMatrix& B);

} // namespace ranklab
