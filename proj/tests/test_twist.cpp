#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ranklab/rank.hpp"
#include "ranklab/twist.hpp"
#include "test_support.hpp"

using namespace ranklab;
using testsup::cyclic;
using testsup::rnd_gamat;
using testsup::rnd_invertible;
using testsup::rnd_rep;
using testsup::rnd_word;

namespace {

DenseMat dm(const FieldPtr& F, int k, std::initializer_list<long> vals) {
    DenseMat m = dense_zero(F, static_cast<std::size_t>(k), static_cast<std::size_t>(k));
    std::size_t i = 0;
    for (long v : vals) m.a[i++] = F->from_int(v);
    return m;
}

GAMatrix mat1(const FieldPtr& F, int rank, const std::string& entry) {
    GAMatrix B = ga_matrix(F, rank, 1, 1);
    B.at(0, 0) = parse_algebra(entry, F, rank);
    return B;
}

}  // namespace

TEST_CASE("representations extend to words") {
    auto Q = Field::rationals();
    auto rot = make_rep(1, {dm(Q, 2, {0, 1, -1, 0})});
    CHECK(dense_is_identity(extend_rep(rot, Word{{}, 1})));
    CHECK(dense_is_identity(extend_rep(rot, parse_word("a*A", 1))));
    auto m = extend_rep(rot, parse_word("a^2", 1));
    CHECK(dense_equal(m, dm(Q, 2, {-1, 0, 0, -1})));  // rotation squared
    CHECK(dense_is_identity(extend_rep(rot, parse_word("a^4", 1))));

    Rng rng(3);
    auto s = rnd_rep(rng, Q, 2, 2, 3);
    for (int g = 0; g < 2; ++g)
        CHECK(dense_is_identity(dense_mul(s.gen[static_cast<std::size_t>(g)],
                                          s.gen_inv[static_cast<std::size_t>(g)])));
    for (int it = 0; it < 60; ++it) {
        Word u = rnd_word(rng, 2, 5), v = rnd_word(rng, 2, 5);
        CHECK(dense_equal(extend_rep(s, word_mul(u, v)),
                          dense_mul(extend_rep(s, u), extend_rep(s, v))));
    }

    DenseMat sing = dm(Q, 2, {1, 2, 2, 4});
    CHECK_THROWS_AS((void)make_rep(1, {sing}), RepresentationInvalid);
}

TEST_CASE("relator validation") {
    auto Q = Field::rationals();
    Word comm = parse_word("a*b*A*B", 2);
    auto diag = make_rep(2, {dm(Q, 2, {2, 0, 0, 3}), dm(Q, 2, {5, 0, 0, 7})});
    CHECK(validate_rep(diag, {comm}).empty());
    CHECK(validate_rep(diag, {}).empty());
    auto bad = make_rep(2, {dm(Q, 2, {1, 1, 0, 1}), dm(Q, 2, {1, 0, 1, 1})});
    auto viol = validate_rep(bad, {comm});
    REQUIRE(viol.size() == 1);
    CHECK(viol[0] == comm);
}

TEST_CASE("twisting a matrix") {
    auto Q = Field::rationals();

    // trivial sigma gives k block-diagonal copies
    auto A = ga_matrix(Q, 2, 1, 2);
    A.at(0, 0) = parse_algebra("1 - a", Q, 2);
    A.at(0, 1) = parse_algebra("3*b^-1", Q, 2);
    auto T = twist_matrix(A, trivial_rep(Q, 2, 2));
    CHECK(T.rows == 2);
    CHECK(T.cols == 4);
    CHECK(ga_equal(T.at(0, 0), A.at(0, 0)));
    CHECK(ga_equal(T.at(1, 1), A.at(0, 0)));
    CHECK(ga_equal(T.at(0, 2), A.at(0, 1)));
    CHECK(T.at(0, 1).is_zero());
    CHECK(T.at(1, 0).is_zero());

    // one-dimensional sigma substitutes a scalar per letter
    auto s3 = make_rep(1, {dm(Q, 1, {3})});
    auto tw = twist_matrix(mat1(Q, 1, "1 - a"), s3);
    CHECK(ga_equal(tw.at(0, 0), parse_algebra("1 - 3*a", Q, 1)));

    // the swap representation interleaves blocks
    auto sw = make_rep(1, {dm(Q, 2, {0, 1, 1, 0})});
    auto tw2 = twist_matrix(mat1(Q, 1, "1 - a"), sw);
    CHECK(ga_equal(tw2.at(0, 0), parse_algebra("1", Q, 1)));
    CHECK(ga_equal(tw2.at(0, 1), parse_algebra("-a", Q, 1)));
    CHECK(ga_equal(tw2.at(1, 0), parse_algebra("-a", Q, 1)));
    CHECK(ga_equal(tw2.at(1, 1), parse_algebra("1", Q, 1)));

    CHECK_THROWS_AS((void)twist_matrix(mat1(Q, 2, "a"), s3), DomainMismatch);
    auto F5 = Field::prime_field(BigInt(5));
    CHECK_THROWS_AS((void)twist_matrix(mat1(Q, 1, "a"), trivial_rep(F5, 1, 1)),
                    DomainMismatch);
}

TEST_CASE("twist is linear and multiplicative") {
    auto Q = Field::rationals();
    Rng rng(29);
    for (int it = 0; it < 15; ++it) {
        auto s = rnd_rep(rng, Q, 2, 2, 2);
        auto A = rnd_gamat(rng, Q, 2, 2, 2, 2, 2, 3);
        auto B = rnd_gamat(rng, Q, 2, 2, 2, 2, 2, 3);
        auto TA = twist_matrix(A, s);
        auto TB = twist_matrix(B, s);
        // additivity
        auto TS = twist_matrix(mat_add(A, B), s);
        auto TS2 = mat_add(TA, TB);
        for (std::size_t i = 0; i < TS.entries.size(); ++i)
            CHECK(ga_equal(TS.entries[i], TS2.entries[i]));
        // multiplicativity
        auto TP = twist_matrix(mat_mul(A, B), s);
        auto TP2 = mat_mul(TA, TB);
        for (std::size_t i = 0; i < TP.entries.size(); ++i)
            CHECK(ga_equal(TP.entries[i], TP2.entries[i]));
    }
    // star-compatibility for orthogonal generators
    auto rot = make_rep(2, {dm(Q, 2, {0, 1, -1, 0}), dm(Q, 2, {-1, 0, 0, 1})});
    for (int it = 0; it < 10; ++it) {
        auto A = rnd_gamat(rng, Q, 2, 2, 2, 2, 2, 3);
        auto L = twist_matrix(mat_conj_transpose(A), rot);
        auto R = mat_conj_transpose(twist_matrix(A, rot));
        for (std::size_t i = 0; i < L.entries.size(); ++i)
            CHECK(ga_equal(L.entries[i], R.entries[i]));
    }
}

TEST_CASE("reduction of a representation modulo p") {
    auto Q = Field::rationals();
    auto rot = make_rep(1, {dm(Q, 2, {0, 1, -1, 0})});
    auto P5 = enumerate_primes(*Q, 1, 5)[0];
    auto r5 = reduce_rep_mod(rot, P5);
    CHECK(r5.field->description() == "F_5");
    CHECK(r5.field->equals(r5.gen[0].at(0, 1), r5.field->one()));
    CHECK(r5.field->equals(r5.gen[0].at(1, 0), r5.field->from_int(4)));
    CHECK(dense_is_identity(dense_mul(r5.gen[0], r5.gen_inv[0])));
}

TEST_CASE("twisted rank identity on free actions over finite fields") {
    // X = regular action of the image: stabilizers are exactly ker(sigma),
    // so the twisted operator is conjugate to k copies of the plain one.
    Rng rng(1009);
    const long ps[] = {2, 3, 5};
    int done = 0;
    while (done < 30) {
        auto Fp = Field::prime_field(BigInt(ps[rng.below(3)]));
        int k = 1 + static_cast<int>(rng.below(2));
        auto s = rnd_rep(rng, Fp, 2, k, 6);
        FiniteFSet X;
        try {
            X = regular_action_of_image(s, 512);
        } catch (const ClosureTooLarge&) {
            continue;
        }
        auto A = rnd_gamat(rng, Fp, 2, 1 + rng.below(2), 1 + rng.below(2), 3, 3, 6);
        auto plain = normalized_rank(A, X);
        auto twisted = normalized_rank(twist_matrix(A, s), X);
        CHECK(twisted.normalized == k * plain.normalized);
        ++done;
    }
}

TEST_CASE("twisted rank identity over the rationals") {
    auto Q = Field::rationals();
    Rng rng(2027);

    // sigma factoring through Z/m: permutation matrices of the quotient Z/d
    for (std::size_t m : {4, 6, 8}) {
        auto X = cyclic(m);
        // k=1, sigma(a) = -1 factors through Z/m for even m
        auto sgn = make_rep(1, {dm(Q, 1, {-1})});
        auto A = rnd_gamat(rng, Q, 1, 2, 2, 3, 3, 4);
        auto plain = normalized_rank(A, X);
        auto tw = normalized_rank(twist_matrix(A, sgn), X);
        CHECK(tw.normalized == plain.normalized);

        // k=2, sigma(a) = 2-cycle permutation matrix (order 2 | m)
        auto sw = make_rep(1, {dm(Q, 2, {0, 1, 1, 0})});
        auto tw2 = normalized_rank(twist_matrix(A, sw), X);
        CHECK(tw2.normalized == 2 * plain.normalized);
    }
    // order-4 rotation factors through Z/8
    auto rot = make_rep(1, {dm(Q, 2, {0, 1, -1, 0})});
    auto A8 = rnd_gamat(rng, Q, 1, 2, 1, 3, 3, 3);
    CHECK(normalized_rank(twist_matrix(A8, rot), cyclic(8)).normalized ==
          2 * normalized_rank(A8, cyclic(8)).normalized);

    // conjugating sigma by an invertible rational matrix preserves the identity
    auto M = rnd_invertible(rng, Q, 2, 3);
    auto Minv = *dense_inverse(M);
    auto conj = make_rep(1, {dense_mul(dense_mul(M, dm(Q, 2, {0, 1, 1, 0})), Minv)});
    auto A6 = rnd_gamat(rng, Q, 1, 2, 2, 2, 2, 5);
    CHECK(normalized_rank(twist_matrix(A6, conj), cyclic(6)).normalized ==
          2 * normalized_rank(A6, cyclic(6)).normalized);
}

TEST_CASE("the stabilizer hypothesis is sharp") {
    // sigma(a) = -1 does not factor through Z/m for odd m: 1+a is invertible
    // there while 1-a is not, so the twisted rank leads by exactly 1/m.
    auto Q = Field::rationals();
    auto sgn = make_rep(1, {dm(Q, 1, {-1})});
    auto A = mat1(Q, 1, "1 - a");
    for (std::size_t m : {3, 5, 7, 9}) {
        auto plain = normalized_rank(A, cyclic(m));
        auto tw = normalized_rank(twist_matrix(A, sgn), cyclic(m));
        CHECK(tw.normalized - plain.normalized ==
              make_rat(BigInt(1), BigInt(static_cast<long>(m))));
    }
    for (std::size_t m : {4, 6, 8, 10}) {
        auto plain = normalized_rank(A, cyclic(m));
        auto tw = normalized_rank(twist_matrix(A, sgn), cyclic(m));
        CHECK(tw.normalized == plain.normalized);
    }
}

TEST_CASE("deciding when a representation kills the stabilizers") {
    FieldPtr Q = Field::rationals();

    // sign character on the cycle: trivial on <a^m> exactly for even m
    Representation sign = make_rep(1, {dm(Q, 1, {-1})});
    for (std::size_t m = 2; m <= 9; ++m)
        CHECK(rep_kills_stabilizers(sign, cyclic(m)) == (m % 2 == 0));

    // the scaling counterexample: free action, but sigma(a^2) = 4
    Representation twice = make_rep(1, {dm(Q, 1, {2})});
    CHECK_FALSE(rep_kills_stabilizers(twice, cyclic(2)));

    Rng rng(5301);
    for (int round = 0; round < 8; ++round) {
        auto X = make_fset({testsup::rnd_perm(rng, 10), testsup::rnd_perm(rng, 10)}, "rnd");
        CHECK(rep_kills_stabilizers(trivial_rep(Q, 2, 2), X));
    }

    // sigma always kills the stabilizers of the regular action of its own
    // image: they are exactly its kernel
    FieldPtr F3 = Field::prime_field(3);
    for (int round = 0; round < 10; ++round) {
        Representation s = rnd_rep(rng, F3, 2, 2, 2);
        FiniteFSet R;
        try {
            R = regular_action_of_image(s, 512);
        } catch (const ClosureTooLarge&) {
            continue;
        }
        CHECK(rep_kills_stabilizers(s, R));
        // products only shrink stabilizers
        auto X = make_fset({testsup::rnd_perm(rng, 7), testsup::rnd_perm(rng, 7)}, "rnd");
        CHECK(rep_kills_stabilizers(s, product_action(X, R)));
    }

    CHECK_THROWS_AS((void)rep_kills_stabilizers(sign, make_fset({{0}, {0}}, "pt")),
                    DomainMismatch);

    // agreement with the word-level definition
    for (int round = 0; round < 20; ++round) {
        FieldPtr F5 = Field::prime_field(5);
        Representation s = rnd_rep(rng, F5, 2, 1, 4);
        auto X = make_fset({testsup::rnd_perm(rng, 6), testsup::rnd_perm(rng, 6)}, "rnd");
        bool direct = true;
        for (const Word& w : stabilizer_generators(X))
            if (!dense_is_identity(extend_rep(s, w))) direct = false;
        CHECK(rep_kills_stabilizers(s, X) == direct);
    }
}

TEST_CASE("the stabilizer criterion certifies exactness of the twisted identity") {
    Rng rng(5302);
    FieldPtr Q = Field::rationals();
    int certified = 0;
    for (int round = 0; round < 40 && certified < 10; ++round) {
        // mostly-structured candidates so the criterion passes often
        std::size_t m = 2 * rng.range(1, 4);
        FiniteFSet X = cyclic(m);
        Representation s = rng.below(2) ? make_rep(1, {dm(Q, 1, {-1})})
                                        : make_rep(1, {rnd_invertible(rng, Q, 2, 2)});
        if (!rep_kills_stabilizers(s, X)) continue;
        ++certified;
        GAMatrix A = rnd_gamat(rng, Q, 1, 2, 2, 2, 2, 3);
        RankReport plain = normalized_rank(A, X);
        RankReport twisted = normalized_rank(twist_matrix(A, s), X);
        CHECK(twisted.normalized == s.dim * plain.normalized);
    }
    CHECK(certified >= 10);
}
