#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <sstream>

#include "doctest.h"
#include "ranklab/dense.hpp"
#include "ranklab/errors.hpp"
#include "ranklab/spectra.hpp"
#include "test_support.hpp"

using namespace ranklab;

namespace {

// Laurent polynomials in one variable as exponent -> coefficient maps; an
// implementation of the walk counts that shares nothing with the library.
using Laurent = std::map<int, BigInt>;

Laurent lmul(const Laurent& f, const Laurent& g) {
    Laurent h;
    for (const auto& [i, a] : f)
        for (const auto& [j, b] : g) h[i + j] += a * b;
    for (auto it = h.begin(); it != h.end();)
        it = (it->second == 0) ? h.erase(it) : std::next(it);
    return h;
}

Laurent lpow(const Laurent& f, int l) {
    Laurent r{{0, 1}};
    for (int i = 0; i < l; ++i) r = lmul(r, f);
    return r;
}

BigInt coeff_sum_mod(const Laurent& f, int m) {
    BigInt s = 0;
    for (const auto& [j, c] : f)
        if (((j % m) + m) % m == 0) s += c;
    return s;
}

BigInt central_binomial(int l) {
    BigInt v = 1;
    for (int i = 1; i <= l; ++i) v = v * (l + i) / i;
    return v;
}

bool mats_equal(const GAMatrix& a, const GAMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) return false;
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j)
            if (a.at(i, j).str() != b.at(i, j).str()) return false;
    return true;
}

// entries are words with degree-<=1 polynomial coefficients, so every
// specialization point is admissible
GAMatrix rnd_polymat(Rng& rng, const FieldPtr& F, int rank, int rows, int cols) {
    GAMatrix C = ga_matrix(F, rank, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            GroupAlgebraElement e = ga_zero(F, rank);
            int terms = 1 + static_cast<int>(rng.below(2));
            for (int k = 0; k < terms; ++k) {
                FieldValue c = F->from_int(rng.range(-2, 2));
                for (int v = 1; v <= F->num_vars; ++v)
                    c = F->add(c, F->mul(F->from_int(rng.range(-2, 2)), F->t_var(v)));
                e = ga_add(e, ga_term(F, testsup::rnd_word(rng, rank, 2), c));
            }
            C.at(i, j) = e;
        }
    return C;
}

SparseMatrix rnd_sparse(Rng& rng, const FieldPtr& F, std::size_t rows, std::size_t cols) {
    SparseMatrix M = sparse_zero(F, rows, cols);
    for (std::size_t k = 0; k < rows * cols / 2; ++k)
        sparse_add_at(M, rng.below(rows), rng.below(cols), F->from_int(rng.range(-4, 4)));
    return M;
}

} // namespace

TEST_CASE("sparse product, conjugate transpose and trace match the dense oracle") {
    Rng rng(4101);
    FieldPtr Q = Field::rationals();
    for (int round = 0; round < 6; ++round) {
        SparseMatrix A = rnd_sparse(rng, Q, 6, 5);
        SparseMatrix B = rnd_sparse(rng, Q, 5, 7);
        CHECK(dense_equal(sparse_to_dense(sparse_mul(A, B)),
                          dense_mul(sparse_to_dense(A), sparse_to_dense(B))));
    }
    SparseMatrix S = rnd_sparse(rng, Q, 6, 6);
    DenseMat D = sparse_to_dense(S);
    FieldValue tr = Q->zero();
    for (std::size_t i = 0; i < 6; ++i) tr = Q->add(tr, D.at(i, i));
    CHECK(Q->equals(sparse_trace(S), tr));

    CHECK_THROWS_AS(sparse_mul(rnd_sparse(rng, Q, 3, 4), rnd_sparse(rng, Q, 3, 4)),
                    DomainMismatch);

    // conjugation happens at the field level
    FieldPtr K = Field::number_field({-2, 0, 1}, QPoly{BigRat(0), BigRat(-1)}); // w -> -w
    SparseMatrix M = sparse_zero(K, 2, 2);
    sparse_add_at(M, 0, 1, K->add(K->one(), K->w_gen())); // 1 + w
    SparseMatrix T = sparse_conj_transpose(M);
    REQUIRE(T.row[1].size() == 1);
    CHECK(T.row[1][0].first == 0);
    CHECK(K->equals(T.row[1][0].second, K->sub(K->one(), K->w_gen())));
    CHECK(T.row[0].empty());
}

TEST_CASE("moments of 1-a are the central binomial coefficients") {
    FieldPtr Q = Field::rationals();
    GAMatrix B = ga_matrix(Q, 1, 1, 1);
    B.at(0, 0) = parse_algebra("1 - a", Q, 1);

    const int L = 6;
    MomentSequence m = moments_free(B, L);
    REQUIRE(m.mu.size() == L + 1);
    CHECK(m.source == "free");

    Laurent t{{-1, -1}, {0, 2}, {1, -1}}; // (1-a)(1-a^-1)
    for (int l = 0; l <= L; ++l) {
        CHECK(m.mu[static_cast<std::size_t>(l)] == central_binomial(l));
        Laurent p = lpow(t, l);
        CHECK(m.mu[static_cast<std::size_t>(l)] == p[0]);
    }
    CHECK(hankel_psd(m));
}

TEST_CASE("finite moments count the walks that wrap around the cycle") {
    FieldPtr Q = Field::rationals();
    GAMatrix B = ga_matrix(Q, 1, 1, 1);
    B.at(0, 0) = parse_algebra("1 - a", Q, 1);

    const int L = 5;
    MomentSequence free_m = moments_free(B, L);
    Laurent t{{-1, -1}, {0, 2}, {1, -1}};

    std::vector<std::size_t> sizes{3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 50};
    for (std::size_t m : sizes) {
        MomentSequence fin = moments_finite(B, testsup::cyclic(m), L);
        REQUIRE(fin.mu.size() == L + 1);
        bool saw_wrap = false;
        for (int l = 0; l <= L; ++l) {
            BigInt expected = coeff_sum_mod(lpow(t, l), static_cast<int>(m));
            CHECK(fin.mu[static_cast<std::size_t>(l)] == expected);
            if (fin.mu[static_cast<std::size_t>(l)] != free_m.mu[static_cast<std::size_t>(l)])
                saw_wrap = true;
        }
        // walks of length <= 2L cannot close up a longer cycle
        if (m > 2 * L) CHECK_FALSE(saw_wrap);
        // tighter: the support of T^l lies in [-l, l]
        CHECK(saw_wrap == (m <= L));
        CHECK(hankel_psd(fin));
    }
}

TEST_CASE("degenerate matrices have the obvious moments") {
    FieldPtr Q = Field::rationals();

    GAMatrix zero = ga_matrix(Q, 1, 2, 3);
    MomentSequence zf = moments_free(zero, 4);
    MomentSequence zx = moments_finite(zero, testsup::cyclic(4), 4);
    CHECK(zf.mu[0] == 2);
    CHECK(zx.mu[0] == 2);
    for (int l = 1; l <= 4; ++l) {
        CHECK(zf.mu[static_cast<std::size_t>(l)] == 0);
        CHECK(zx.mu[static_cast<std::size_t>(l)] == 0);
    }

    GAMatrix one = ga_matrix(Q, 1, 1, 1);
    one.at(0, 0) = ga_one(Q, 1);
    for (const BigRat& v : moments_free(one, 5).mu) CHECK(v == 1);
    for (const BigRat& v : moments_finite(one, testsup::cyclic(5), 5).mu) CHECK(v == 1);
}

TEST_CASE("number field moments use the normalized trace and need real embeddings") {
    FieldPtr K = Field::number_field({-2, 0, 1}); // Q(sqrt 2)

    GAMatrix B = ga_matrix(K, 1, 1, 1);
    B.at(0, 0) = parse_algebra("1 + w*a", K, 1);
    MomentSequence m = moments_free(B, 2);
    CHECK(m.mu[0] == 1);
    CHECK(m.mu[1] == 3);  // identity coefficient of 3 + w a + w a^-1
    CHECK(m.mu[2] == 13); // 9 + w^2 + w^2

    MomentSequence fin = moments_finite(B, testsup::cyclic(9), 4);
    MomentSequence fre = moments_free(B, 4);
    for (std::size_t l = 0; l <= 4; ++l) CHECK(fin.mu[l] == fre.mu[l]);
    CHECK(hankel_psd(fre));

    // scalar with irrational square: the trace averages the two embeddings
    GAMatrix S = ga_matrix(K, 1, 1, 1);
    S.at(0, 0) = parse_algebra("1 + w", K, 1);
    MomentSequence sm = moments_free(S, 2);
    CHECK(sm.mu[1] == 3);  // (1 +- sqrt2)^2 averages to 3
    CHECK(sm.mu[2] == 17); // (3 +- 2 sqrt2)^2 averages to 17
    CHECK(hankel_psd(sm));

    FieldPtr Ki = Field::number_field({1, 0, 1}); // Q(i): complex embeddings
    GAMatrix Bi = ga_matrix(Ki, 1, 1, 1);
    Bi.at(0, 0) = parse_algebra("1 + w*a", Ki, 1);
    CHECK_THROWS_AS(moments_free(Bi, 2), ConfigError);
    CHECK_THROWS_AS(moments_finite(Bi, testsup::cyclic(3), 2), ConfigError);
}

TEST_CASE("hankel positivity detects non-moment sequences") {
    auto seq = [](std::vector<BigRat> mu) { return MomentSequence{std::move(mu), "synthetic"}; };
    CHECK(hankel_psd(seq({})));
    CHECK(hankel_psd(seq({BigRat(3)})));
    CHECK_FALSE(hankel_psd(seq({BigRat(-1)})));
    CHECK(hankel_psd(seq({BigRat(1), BigRat(2), BigRat(6), BigRat(20), BigRat(70)})));
    CHECK_FALSE(hankel_psd(seq({BigRat(1), BigRat(3), BigRat(2)})));   // det -7
    CHECK(hankel_psd(seq({BigRat(0), BigRat(0), BigRat(1)})));         // psd with zero pivot
    CHECK_FALSE(hankel_psd(seq({BigRat(0), BigRat(1), BigRat(2)})));   // zero pivot, nonzero row
    CHECK(hankel_psd(seq({BigRat(2), BigRat(3), BigRat(5), BigRat(9)})));
}

TEST_CASE("specialization evaluates coefficients entrywise") {
    FieldPtr Ft = Field::rational_functions(1);
    FieldPtr Q = Field::rationals();

    GAMatrix C = ga_matrix(Ft, 1, 1, 1);
    C.at(0, 0) = ga_term(Ft, parse_word("a", 1), Ft->t_var(1));
    GAMatrix at0 = specialize(C, {BigRat(0)});
    CHECK(at0.field->kind == Field::Kind::Rationals);
    CHECK(at0.at(0, 0).is_zero());

    GAMatrix D = ga_matrix(Ft, 2, 1, 1);
    D.at(0, 0) = parse_algebra("(t^2 - 1)*a + t*b", Ft, 2);
    GAMatrix at1 = specialize(D, {BigRat(1)});
    GAMatrix expect = ga_matrix(Q, 2, 1, 1);
    expect.at(0, 0) = parse_algebra("b", Q, 2);
    CHECK(mats_equal(at1, expect));

    GAMatrix R = ga_matrix(Ft, 1, 1, 1);
    R.at(0, 0) = ga_term(Ft, parse_word("a", 1),
                         Ft->inv(Ft->sub(Ft->one(), Ft->t_var(1)))); // a/(1-t)
    CHECK_THROWS_AS(specialize(R, {BigRat(1)}), DenominatorVanishes);
    GAMatrix r0 = specialize(R, {BigRat(0)});
    CHECK(r0.at(0, 0).str() == "a");

    CHECK_THROWS_AS(specialize(C, {BigRat(1), BigRat(2)}), ConfigError);
    GAMatrix notfunc = ga_matrix(Q, 1, 1, 1);
    CHECK_THROWS_AS(specialize(notfunc, {BigRat(1)}), DomainMismatch);
}

TEST_CASE("specialization is a ring homomorphism") {
    Rng rng(4102);
    for (int vars : {1, 2}) {
        FieldPtr F = Field::rational_functions(vars);
        for (int round = 0; round < 8; ++round) {
            GAMatrix C = rnd_polymat(rng, F, 2, 2, 2);
            GAMatrix D = rnd_polymat(rng, F, 2, 2, 2);
            std::vector<BigRat> s;
            for (int v = 0; v < vars; ++v) s.emplace_back(static_cast<long>(rng.range(-3, 3)));
            CHECK(mats_equal(specialize(mat_mul(C, D), s),
                             mat_mul(specialize(C, s), specialize(D, s))));
            CHECK(mats_equal(specialize(mat_add(C, D), s),
                             mat_add(specialize(C, s), specialize(D, s))));
        }
    }
}

TEST_CASE("specialization keeps a number field base") {
    FieldPtr F = Field::rational_functions(1, {-2, 0, 1});
    FieldPtr K = Field::number_field({-2, 0, 1});
    GAMatrix C = ga_matrix(F, 1, 1, 1);
    C.at(0, 0) = parse_algebra("(t - w)*a", F, 1);
    GAMatrix at1 = specialize(C, {BigRat(1)});
    CHECK(at1.field->kind == Field::Kind::NumberField);
    GAMatrix expect = ga_matrix(K, 1, 1, 1);
    expect.at(0, 0) = parse_algebra("(1 - w)*a", K, 1);
    CHECK(mats_equal(at1, expect));
}

TEST_CASE("specialization can only lower the finite-level rank") {
    FieldPtr Ft = Field::rational_functions(1);

    GAMatrix scalar = ga_matrix(Ft, 1, 1, 1);
    scalar.at(0, 0) = ga_term(Ft, parse_word("e", 1), Ft->t_var(1));
    SemicontinuityReport rep = semicontinuity_check(scalar, {BigRat(0)}, testsup::cyclic(4));
    CHECK(rep.generic.normalized == 1);
    CHECK(rep.special.normalized == 0);
    CHECK(rep.ok);

    GAMatrix C = ga_matrix(Ft, 1, 1, 1);
    C.at(0, 0) = parse_algebra("1 - t*a", Ft, 1);
    for (std::size_t m : {4, 6, 9}) {
        SemicontinuityReport r1 = semicontinuity_check(C, {BigRat(1)}, testsup::cyclic(m));
        CHECK(r1.generic.normalized == 1); // 1 - tP has determinant 1 - t^m
        CHECK(r1.special.normalized ==
              make_rat(BigInt(static_cast<unsigned long>(m - 1)), BigInt(static_cast<unsigned long>(m))));
        CHECK(r1.ok);
        SemicontinuityReport r0 = semicontinuity_check(C, {BigRat(0)}, testsup::cyclic(m));
        CHECK(r0.special.normalized == 1);
        CHECK(r0.ok);
    }

    Rng rng(4103);
    for (int round = 0; round < 15; ++round) {
        GAMatrix R = rnd_polymat(rng, Ft, 2, 2, 3);
        std::vector<std::vector<std::uint32_t>> perms{testsup::rnd_perm(rng, 8),
                                                      testsup::rnd_perm(rng, 8)};
        FiniteFSet X = make_fset(perms, "rnd");
        SemicontinuityReport r =
            semicontinuity_check(R, {BigRat(static_cast<long>(rng.range(-2, 2)))}, X);
        CHECK(r.ok);
        CHECK(r.generic.normalized >= r.special.normalized);
    }
}

TEST_CASE("normalized rank is the block count minus the normalized kernel dimension") {
    Rng rng(4104);
    FieldPtr Q = Field::rationals();
    FieldPtr K = Field::number_field({-2, 0, 1});
    for (int round = 0; round < 10; ++round) {
        const FieldPtr& F = round < 7 ? Q : K;
        GAMatrix B = testsup::rnd_gamat(rng, F, 2, 2, 2, 2, 2, 2);
        std::vector<std::vector<std::uint32_t>> perms{testsup::rnd_perm(rng, 6),
                                                      testsup::rnd_perm(rng, 6)};
        FiniteFSet X = make_fset(perms, "rnd");
        SparseMatrix M = assemble_operator(B, X);
        SparseMatrix S = sparse_mul(M, sparse_conj_transpose(M));
        std::size_t r = rank_exact(M);
        CHECK(rank_exact(S) == r); // MM* has the kernel of M* over a real field
        BigRat nullity = make_rat(BigInt(static_cast<unsigned long>(S.rows - r)),
                                  BigInt(static_cast<unsigned long>(X.size)));
        CHECK(normalized_rank(B, X).normalized == BigRat(2) - nullity);
    }
}

TEST_CASE("moment convergence report tracks deviations along a series") {
    FieldPtr Q = Field::rationals();
    GAMatrix B = ga_matrix(Q, 1, 1, 1);
    B.at(0, 0) = parse_algebra("1 - a", Q, 1);

    std::vector<FiniteFSet> series{testsup::cyclic(3), testsup::cyclic(6), testsup::cyclic(12)};
    MomentConvergenceReport rep = moment_convergence_check(B, series, 5);
    REQUIRE(rep.steps.size() == 3);
    CHECK(rep.free_moments.mu[5] == 252);
    CHECK(rep.steps[0].set_size == 3);
    CHECK(rep.steps[0].max_dev > 0);
    CHECK(rep.steps[1].max_dev == 0);
    CHECK(rep.steps[2].max_dev == 0);
    CHECK(rep.deviations_non_increasing);

    std::vector<FiniteFSet> back{testsup::cyclic(6), testsup::cyclic(3)};
    CHECK_FALSE(moment_convergence_check(B, back, 5).deviations_non_increasing);

    // the 1-point action collapses T to its augmentation, which is 0 here
    std::vector<FiniteFSet> pt{make_fset({{0}}, "pt")};
    MomentConvergenceReport prep = moment_convergence_check(B, pt, 4);
    CHECK(prep.steps[0].mu[4] == 0);
    CHECK(prep.steps[0].max_dev == 70);
}

TEST_CASE("support caps and bad arguments are rejected") {
    FieldPtr Q = Field::rationals();
    GAMatrix B = ga_matrix(Q, 2, 1, 1);
    B.at(0, 0) = parse_algebra("1 - a - b", Q, 2);
    CHECK_THROWS_AS(moments_free(B, 8, 10), SupportExplosion);
    CHECK_THROWS_AS(moments_free(B, -1), ConfigError);
    CHECK_THROWS_AS(moments_finite(B, testsup::cyclic(3), -1), ConfigError);

    FieldPtr F5 = Field::prime_field(5);
    GAMatrix Bp = ga_matrix(F5, 1, 1, 1);
    Bp.at(0, 0) = parse_algebra("1 - a", F5, 1);
    CHECK_THROWS_AS(moments_free(Bp, 2), DomainMismatch);

    FieldPtr Ft = Field::rational_functions(1);
    GAMatrix Bt = ga_matrix(Ft, 1, 1, 1);
    Bt.at(0, 0) = parse_algebra("1 - t*a", Ft, 1);
    CHECK_THROWS_AS(moments_free(Bt, 2), DomainMismatch);
}

TEST_CASE("moment csv lists exact numerators and denominators") {
    FieldPtr Q = Field::rationals();
    GAMatrix B = ga_matrix(Q, 1, 1, 1);
    B.at(0, 0) = parse_algebra("1 - a", Q, 1);
    MomentSequence m = moments_finite(B, testsup::cyclic(3), 2);
    std::ostringstream os;
    moments_save_csv(os, m);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "l,value_num,value_den,source");
    std::getline(is, line);
    CHECK(line == "0,1,1,Z/3");
    std::getline(is, line);
    CHECK(line == "1,2,1,Z/3");
}
