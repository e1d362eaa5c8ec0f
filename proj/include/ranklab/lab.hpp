#pragma once

// Experiment orchestration: JSON configs (all numbers serialized as strings,
// so exact values survive the round trip), check runners, CSV and report
// emission, and the command-line entry point.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ranklab/rank.hpp"
#include "ranklab/spectra.hpp"
#include "ranklab/twist.hpp"

namespace ranklab {

struct ExperimentConfig {
    std::string check; // convergence | twisted | modp_bound | moments | semicontinuity
    FieldPtr field;
    int alphabet_rank = 0;
    GAMatrix A;
    std::optional<Representation> sigma; // twisted
    std::string preset_name;
    PresetParams preset;
    std::optional<BigRat> limit;       // convergence: known limit of the series
    int prime_count = 3;               // modp_bound
    BigInt min_p = 2;
    std::vector<BigInt> exclude;
    std::vector<BigRat> point;         // semicontinuity
    int moment_order = 4;              // moments
    std::string expect_exact = "auto"; // twisted: auto | always | never
    std::optional<std::uint64_t> seed;
    std::size_t cap_fset = kDefaultFSetCap;
    std::size_t cap_ball = kDefaultBallCap;
    std::size_t cap_terms = kDefaultTermCap;
    std::string canonical_json; // sorted keys, defaults materialized
};

// Throws ConfigError / ParseError with the offending key path in the message.
ExperimentConfig parse_config(const std::string& json_text);
std::string canonical_config_json(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg); // 16 hex chars, fnv1a of canonical form
std::vector<FiniteFSet> instantiate_series(const ExperimentConfig& cfg);

struct RunRow {
    int step = 0;
    std::size_t set_size = 0;
    std::string field;
    BigRat rank;
    std::string check;
    BigRat gap;
    double bound = 0.0;
    bool has_rank = false, has_gap = false, has_bound = false;
    std::string verdict; // pass | exact | fail
};

struct RunRecord {
    std::string hash;
    std::string check;
    std::string canonical_config;
    std::vector<RunRow> rows;
    std::vector<std::string> notes; // skipped primes and similar events
    std::optional<MomentConvergenceReport> moments;
    double wall_ms = 0.0;

    bool all_pass() const;
    std::string summary() const;
};

RunRecord run_convergence(const ExperimentConfig& cfg);
RunRecord run_twisted_check(const ExperimentConfig& cfg);
RunRecord run_modp_sweep(const ExperimentConfig& cfg);
RunRecord run_moments(const ExperimentConfig& cfg);
RunRecord run_semicontinuity(const ExperimentConfig& cfg);
RunRecord run_experiment(const ExperimentConfig& cfg); // dispatches on cfg.check

// step,set_size,field,rank_num,rank_den,check,gap_num,gap_den,bound,verdict,ms
// The ms column is pinned to 0 so identical configs emit identical bytes.
void write_csv(std::ostream& os, const RunRecord& rec);

// <out_root>/<hash>/{config.json, results.csv, summary.txt[, moments.csv]};
// returns the run directory.
std::string emit_report(const RunRecord& rec, const std::string& out_root);

// `run | check | report`; exit code 0 = all verdicts pass, 1 = some verdict
// failed, 2 = configuration or usage error.
int cli_main(int argc, const char* const* argv);

} // namespace ranklab
