#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ranklab/freealg.hpp"

using namespace ranklab;

static Word w2(std::initializer_list<int> ls) { return reduce_word(ls, 2); }

TEST_CASE("free reduction") {
    CHECK(w2({1, -1}).is_identity());
    CHECK(w2({1, 2, -2, -1}).is_identity());
    CHECK(w2({1, 2, -1}) == Word{{1, 2, -1}, 2});
    // idempotent
    Word u = w2({1, 2, -1});
    CHECK(reduce_word(u.letters, 2) == u);
    CHECK_THROWS_AS((void)reduce_word({3}, 2), IndexOutOfAlphabet);
    CHECK_THROWS_AS((void)reduce_word({0}, 2), IndexOutOfAlphabet);
}

TEST_CASE("word multiplication and inversion") {
    CHECK(word_mul(w2({1}), w2({-1})).is_identity());
    CHECK(word_inv(w2({1, 2})) == Word{{-2, -1}, 2});
    CHECK(word_mul(w2({1, 2}), w2({-2, 1})) == Word{{1, 1}, 2});
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> letter(1, 2), len(0, 6), sign(0, 1);
    auto rnd = [&]() {
        std::vector<int> ls;
        int n = len(rng);
        for (int i = 0; i < n; ++i) ls.push_back(sign(rng) ? letter(rng) : -letter(rng));
        return reduce_word(std::move(ls), 2);
    };
    for (int it = 0; it < 300; ++it) {
        Word u = rnd(), v = rnd(), w = rnd();
        CHECK(word_mul(word_mul(u, v), w) == word_mul(u, word_mul(v, w)));
        CHECK(word_mul(u, Word{{}, 2}) == u);
        CHECK(word_mul(u, word_inv(u)).is_identity());
    }
}

TEST_CASE("word order and text form") {
    CHECK(Word{{}, 2}.str() == "e");
    CHECK(Word{{1, 1, 1}, 2}.str() == "a^3");
    CHECK(Word{{-1, -1}, 2}.str() == "a^-2");
    CHECK(Word{{1, 2, -1}, 2}.str() == "a*b*a^-1");
    CHECK(parse_word("a*b*a^-1", 2) == Word{{1, 2, -1}, 2});
    CHECK(parse_word("abA", 2) == Word{{1, 2, -1}, 2});
    CHECK(parse_word("e", 2).is_identity());
    CHECK(parse_word("1", 2).is_identity());
    CHECK(parse_word(" a ^ 2 ", 2) == Word{{1, 1}, 2});
    CHECK_THROWS_AS((void)parse_word("c", 2), IndexOutOfAlphabet);
    WordLess lt;
    CHECK(lt(Word{{}, 2}, Word{{1}, 2}));       // shorter first
    CHECK(lt(Word{{1}, 2}, Word{{-1}, 2}));     // a before a^-1
    CHECK(lt(Word{{-1}, 2}, Word{{2}, 2}));     // a^-1 before b
    CHECK(!lt(Word{{1}, 2}, Word{{1}, 2}));
}

TEST_CASE("balls in the free group") {
    CHECK(ball_size(0, 2) == 1);
    CHECK(ball_size(1, 2) == 5);
    CHECK(ball_size(2, 2) == 17);
    auto b0 = ball(0, 2);
    REQUIRE(b0.size() == 1);
    CHECK(b0[0].is_identity());
    auto b1 = ball(1, 2);
    REQUIRE(b1.size() == 5);
    CHECK(b1[1] == Word{{1}, 2});
    CHECK(b1[2] == Word{{-1}, 2});
    CHECK(b1[3] == Word{{2}, 2});
    CHECK(b1[4] == Word{{-2}, 2});
    for (int r = 1; r <= 3; ++r)
        for (int k = 0; k <= 6; ++k) {
            auto b = ball(k, r);
            CHECK(BigInt(static_cast<unsigned long>(b.size())) == ball_size(k, r));
            // all reduced and distinct
            for (size_t i = 0; i + 1 < b.size(); ++i) CHECK(WordLess{}(b[i], b[i + 1]));
        }
    CHECK_THROWS_AS((void)ball(4, 2, 10), BallTooLarge);
}

static GroupAlgebraElement parse_q(const std::string& s, int rank = 2) {
    return parse_algebra(s, Field::rationals(), rank);
}

TEST_CASE("group algebra arithmetic") {
    auto Q = Field::rationals();
    auto x = parse_q("1 - a");
    auto y = parse_q("1 + a");
    CHECK(ga_equal(ga_mul(x, y), parse_q("1 - a^2")));
    CHECK(ga_equal(ga_mul(x, ga_one(Q, 2)), x));
    CHECK(ga_equal(ga_mul(parse_q("a + b"), parse_q("a^-1")), parse_q("1 + b*a^-1")));
    CHECK(ga_mul(x, y).str() == "1 - a^2");
    CHECK(parse_q("3/2*a*b^-1 - a").str() == "-a + 3/2*a*b^-1");
    CHECK(ga_equal(parse_q("-a + 3/2*a*b^-1"), parse_q("3/2*a*b^-1 - a")));
    CHECK(parse_q("a*b^-1").str() == "a*b^-1");
    CHECK(ga_sub(x, x).is_zero());
    CHECK(ga_zero(Q, 2).str() == "0");
}

TEST_CASE("star and identity coefficient") {
    auto Q = Field::rationals();
    CHECK(ga_equal(ga_star(parse_q("1 - a")), parse_q("1 - a^-1")));
    CHECK(ga_equal(ga_star(parse_q("2*a + 3*b^-1")), parse_q("2*a^-1 + 3*b")));
    CHECK(*Q->rational(identity_coefficient(parse_q("1 - a"))) == 1);
    CHECK(*Q->rational(identity_coefficient(parse_q("a + a^-1"))) == 0);
    auto prod = ga_mul(parse_q("1 - a"), parse_q("1 - a^-1"));
    CHECK(*Q->rational(identity_coefficient(prod)) == 2);

    std::mt19937_64 rng(1723);
    auto words = ball(2, 2);
    std::uniform_int_distribution<size_t> wi(0, words.size() - 1);
    std::uniform_int_distribution<long> ci(-4, 4);
    auto rnd = [&]() {
        auto e = ga_zero(Q, 2);
        for (int k = 0; k < 4; ++k)
            e = ga_add(e, ga_term(Q, words[wi(rng)], Q->from_int(ci(rng))));
        return e;
    };
    for (int it = 0; it < 200; ++it) {
        auto a = rnd(), b = rnd(), c = rnd();
        CHECK(ga_equal(ga_star(ga_star(a)), a));
        CHECK(ga_equal(ga_star(ga_mul(a, b)), ga_mul(ga_star(b), ga_star(a))));
        CHECK(ga_equal(ga_mul(ga_mul(a, b), c), ga_mul(a, ga_mul(b, c))));
        CHECK(ga_equal(ga_mul(ga_add(a, b), c), ga_add(ga_mul(a, c), ga_mul(b, c))));
        // <a, a> = sum of squared coefficients over Q
        BigRat norm2 = *Q->rational(identity_coefficient(ga_mul(a, ga_star(a))));
        BigRat expect = 0;
        for (const auto& [w, v] : a.support) expect += *Q->rational(v) * *Q->rational(v);
        CHECK(norm2 == expect);
        CHECK(norm2 >= 0);
    }
}

TEST_CASE("parser corners") {
    auto Q = Field::rationals();
    CHECK(ga_equal(parse_q("  3/2 * a * b^-1-a "), parse_q("3/2*a*b^-1 - a")));
    CHECK(ga_equal(parse_q("(1 - a)^2"), parse_q("1 - 2*a + a^2")));
    CHECK(ga_equal(parse_q("a^-2"), parse_q("A*A")));
    CHECK(ga_equal(parse_q("-a + 1"), parse_q("1 - a")));
    CHECK(ga_equal(parse_q("6/4"), parse_q("3/2")));
    CHECK(ga_equal(parse_q("(a + b)/2"), parse_q("1/2*a + 1/2*b")));
    CHECK_THROWS_AS((void)parse_q("c"), ParseError);
    CHECK_THROWS_AS((void)parse_q("a +"), ParseError);
    CHECK_THROWS_AS((void)parse_q("(a"), ParseError);
    CHECK_THROWS_AS((void)parse_q("1/(1+a)"), ParseError); // multi-term divisor
    CHECK_THROWS_AS((void)parse_q("w"), ParseError);       // no number field configured
    try {
        (void)parse_q("a + c");
    } catch (const ParseError& e) {
        CHECK(e.position == 4);
    }

    auto K = Field::number_field({-2, 0, 1});
    auto xk = parse_algebra("w*a - 1/2", K, 2);
    CHECK(xk.str() == "-1/2 + w*a");
    CHECK(K->equals(identity_coefficient(ga_mul(xk, ga_star(xk))),
                    K->from_rat(BigRat(9, 4)))); // (w a - 1/2)(w a^-1 ... ) id coeff: 2 + 1/4

    auto Ft = Field::rational_functions(1);
    auto xt = parse_algebra("1 - t*a", Ft, 2);
    CHECK(xt.str() == "1 - t*a");
    CHECK(ga_equal(ga_mul(xt, parse_algebra("1 + t*a", Ft, 2)),
                   parse_algebra("1 - t^2*a^2", Ft, 2)));
}

TEST_CASE("matrices over the group algebra") {
    auto Q = Field::rationals();
    GAMatrix A = ga_matrix(Q, 2, 2, 2);
    A.at(0, 0) = parse_q("1");
    A.at(0, 1) = parse_q("a");
    A.at(1, 0) = parse_q("b");
    A.at(1, 1) = parse_q("1 - a");
    GAMatrix B = ga_matrix(Q, 2, 2, 1);
    B.at(0, 0) = parse_q("1");
    B.at(1, 0) = parse_q("a^-1");
    GAMatrix P = mat_mul(A, B);
    CHECK(P.rows == 2);
    CHECK(P.cols == 1);
    CHECK(ga_equal(P.at(0, 0), parse_q("2")));
    CHECK(ga_equal(P.at(1, 0), parse_q("b + a^-1 - 1")));
    CHECK(mat_max_word_length(A) == 1);

    // (AB)* = B* A*
    GAMatrix lhs = mat_conj_transpose(P);
    GAMatrix rhs = mat_mul(mat_conj_transpose(B), mat_conj_transpose(A));
    for (size_t i = 0; i < lhs.entries.size(); ++i)
        CHECK(ga_equal(lhs.entries[i], rhs.entries[i]));
}

TEST_CASE("matrix house") {
    auto Q = Field::rationals();
    GAMatrix B1 = ga_matrix(Q, 2, 1, 1);
    B1.at(0, 0) = parse_q("1 - a");
    CHECK(matrix_house(B1) == doctest::Approx(2.0));

    GAMatrix B2 = ga_matrix(Q, 2, 2, 2);
    B2.at(0, 0) = parse_q("2*a");
    B2.at(0, 1) = parse_q("3*b");
    B2.at(1, 0) = parse_q("1");
    B2.at(1, 1) = parse_q("1");
    CHECK(matrix_house(B2) == doctest::Approx(4.0));

    CHECK(matrix_house(ga_matrix(Q, 2, 3, 3)) == 0.0);

    auto K = Field::number_field({-2, 0, 1});
    GAMatrix BK = ga_matrix(K, 1, 1, 1);
    BK.at(0, 0) = parse_algebra("w*a + 1", K, 1);
    CHECK(matrix_house(BK) == doctest::Approx(1.0 + 1.4142135623730951));
}
