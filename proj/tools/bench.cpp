// Timing harness: the parallel sparse elimination against the serial dense
// reference, across thread counts and a few operator families.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <omp.h>

#include "ranklab/rank.hpp"

using namespace ranklab;

namespace {

double time_ms(const std::function<std::size_t()>& f, std::size_t& out) {
    auto t0 = std::chrono::steady_clock::now();
    out = f();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

struct Case {
    std::string name;
    GAMatrix B;
    FiniteFSet X;
};

std::vector<Case> make_cases() {
    FieldPtr Q = Field::rationals();
    std::vector<Case> cases;

    PresetParams cyc;
    cyc.d = 1;
    cyc.moduli = {600};
    GAMatrix one_minus_a = ga_matrix(Q, 1, 1, 1);
    one_minus_a.at(0, 0) = parse_algebra("1 - a", Q, 1);
    cases.push_back({"circulant Z/600", one_minus_a,
                     preset_approximation("zd_congruence", cyc).front()});

    PresetParams z2;
    z2.d = 2;
    z2.moduli = {24};
    GAMatrix lap = ga_matrix(Q, 2, 1, 1);
    lap.at(0, 0) = parse_algebra("4 - a - a^-1 - b - b^-1", Q, 2);
    cases.push_back({"Z^2 laplacian 24x24", lap,
                     preset_approximation("zd_congruence", z2).front()});

    PresetParams rnd;
    rnd.rank = 2;
    rnd.sizes = {400};
    rnd.seed = 17;
    GAMatrix blk = ga_matrix(Q, 2, 2, 2);
    blk.at(0, 0) = parse_algebra("1 - a", Q, 2);
    blk.at(0, 1) = parse_algebra("b + a*b", Q, 2);
    blk.at(1, 0) = parse_algebra("2 - b^-1", Q, 2);
    blk.at(1, 1) = parse_algebra("1 + a - 3*b", Q, 2);
    cases.push_back({"random 2x2 block n=400", blk,
                     preset_approximation("free_random_perm", rnd).front()});

    return cases;
}

} // namespace

int main() {
    const int max_threads = omp_get_max_threads();
    std::printf("%-24s %10s %6s | %12s %12s %12s %8s\n", "case", "matrix", "nnz", "dense-ref",
                "sparse t=1", "sparse t=N", "speedup");
    for (const Case& c : make_cases()) {
        SparseMatrix M = assemble_operator(c.B, c.X);
        std::size_t r_dense = 0, r_s1 = 0, r_sn = 0;

        double ms_dense = time_ms([&] { return rank_reference_dense(M); }, r_dense);
        omp_set_num_threads(1);
        double ms_s1 = time_ms([&] { return rank_exact(M); }, r_s1);
        omp_set_num_threads(max_threads);
        double ms_sn = time_ms([&] { return rank_exact(M); }, r_sn);

        if (r_dense != r_s1 || r_s1 != r_sn) {
            std::printf("rank mismatch on %s: dense %zu, sparse %zu/%zu\n", c.name.c_str(),
                        r_dense, r_s1, r_sn);
            return 1;
        }
        std::printf("%-24s %5zux%-4zu %6zu | %9.1f ms %9.1f ms %9.1f ms %7.2fx\n", c.name.c_str(),
                    M.rows, M.cols, M.nnz(), ms_dense, ms_s1, ms_sn, ms_s1 / ms_sn);
    }
    std::printf("threads: %d\n", max_threads);
    return 0;
}
