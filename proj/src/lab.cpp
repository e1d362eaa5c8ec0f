#include "ranklab/lab.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ranklab/errors.hpp"

namespace ranklab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path + ": " + msg);
}

const json& need(const json& o, const std::string& path, const char* key) {
    auto it = o.find(key);
    if (it == o.end()) fail(path + "." + key, "missing");
    return *it;
}

std::string str_at(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string (all numbers are serialized as strings)");
    return v.get<std::string>();
}

const json& obj_at(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected an object");
    return v;
}

const json& arr_at(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array");
    return v;
}

BigInt int_at(const json& v, const std::string& path) {
    std::string s = str_at(v, path);
    try {
        return parse_int(s);
    } catch (const ParseError& e) {
        throw ParseError(path + ": bad integer '" + s + "'", e.position);
    }
}

BigRat rat_at(const json& v, const std::string& path) {
    std::string s = str_at(v, path);
    try {
        return parse_rat(s);
    } catch (const ParseError& e) {
        throw ParseError(path + ": bad rational '" + s + "'", e.position);
    } catch (const DivisionByZero&) {
        throw ParseError(path + ": zero denominator in '" + s + "'", s.find('/') + 1);
    }
}

std::uint64_t u64_at(const json& v, const std::string& path) {
    BigInt z = int_at(v, path);
    if (z < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 64) fail(path, "out of range");
    std::uint64_t r = 0;
    for (std::size_t b = 0; b < 64; ++b)
        if (mpz_tstbit(z.get_mpz_t(), b)) r |= std::uint64_t(1) << b;
    return r;
}

std::size_t size_at(const json& v, const std::string& path) {
    BigInt z = int_at(v, path);
    if (z < 0 || !z.fits_ulong_p()) fail(path, "out of range");
    return z.get_ui();
}

int small_at(const json& v, const std::string& path, int lo, int hi) {
    BigInt z = int_at(v, path);
    if (z < lo || z > hi)
        fail(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(z.get_si());
}

void check_keys(const json& o, const std::string& path, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : o.items()) {
        bool known = false;
        for (const char* key : keys) known |= k == key;
        if (!known) fail(path + "." + k, "unknown key");
    }
}

ZPoly zpoly_at(const json& v, const std::string& path) {
    ZPoly f;
    std::size_t i = 0;
    for (const json& c : arr_at(v, path)) f.push_back(int_at(c, path + "[" + std::to_string(i++) + "]"));
    return f;
}

FieldPtr field_at(const json& v, const std::string& path) {
    const json& o = obj_at(v, path);
    std::string kind = str_at(need(o, path, "kind"), path + ".kind");
    try {
        if (kind == "Q") {
            check_keys(o, path, {"kind"});
            return Field::rationals();
        }
        if (kind == "K") {
            check_keys(o, path, {"kind", "minpoly", "conj"});
            QPoly conj;
            if (o.contains("conj")) {
                std::size_t i = 0;
                for (const json& c : arr_at(o["conj"], path + ".conj"))
                    conj.push_back(rat_at(c, path + ".conj[" + std::to_string(i++) + "]"));
            }
            return Field::number_field(zpoly_at(need(o, path, "minpoly"), path + ".minpoly"),
                                       qpoly::trim(std::move(conj)));
        }
        if (kind == "F_p") {
            check_keys(o, path, {"kind", "p"});
            return Field::prime_field(int_at(need(o, path, "p"), path + ".p"));
        }
        if (kind == "Q_t") {
            check_keys(o, path, {"kind", "vars", "minpoly"});
            ZPoly base;
            if (o.contains("minpoly")) base = zpoly_at(o["minpoly"], path + ".minpoly");
            return Field::rational_functions(small_at(need(o, path, "vars"), path + ".vars", 1, 8),
                                             std::move(base));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        fail(path, e.what());
    }
    fail(path + ".kind", "expected Q, K, F_p or Q_t");
}

GroupAlgebraElement entry_at(const std::string& text, const FieldPtr& F, int rank,
                             const std::string& path) {
    try {
        return parse_algebra(text, F, rank);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.position);
    }
}

FieldValue scalar_at(const json& v, const FieldPtr& F, const std::string& path) {
    std::string text = str_at(v, path);
    GroupAlgebraElement e = entry_at(text, F, 1, path);
    if (!e.is_zero() && !(e.support.size() == 1 && e.support.begin()->first.is_identity()))
        fail(path, "expected a scalar, got '" + text + "'");
    return identity_coefficient(e);
}

std::string fmt_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

json field_json(const Field& F) {
    json f;
    switch (F.kind) {
    case Field::Kind::Rationals:
        f["kind"] = "Q";
        break;
    case Field::Kind::NumberField: {
        f["kind"] = "K";
        json mp = json::array();
        for (const BigInt& c : F.minpoly) mp.push_back(str(c));
        f["minpoly"] = std::move(mp);
        if (!F.conj_image.empty()) {
            json cj = json::array();
            for (const BigRat& c : F.conj_image) cj.push_back(str(c));
            f["conj"] = std::move(cj);
        }
        break;
    }
    case Field::Kind::PrimeField:
        f["kind"] = "F_p";
        f["p"] = F.p.get_str();
        break;
    case Field::Kind::ResidueField:
        fail("field", "residue fields are internal to the mod-p sweep");
    case Field::Kind::RationalFunctions: {
        f["kind"] = "Q_t";
        f["vars"] = std::to_string(F.num_vars);
        if (!F.minpoly.empty()) {
            json mp = json::array();
            for (const BigInt& c : F.minpoly) mp.push_back(str(c));
            f["minpoly"] = std::move(mp);
        }
        break;
    }
    }
    return f;
}

// Runs fn(0..n-1) in parallel, then rethrows the first failure in index order.
template <typename Fn>
void parallel_steps(std::size_t n, Fn&& fn) {
    std::vector<std::exception_ptr> errs(n);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < n; ++i) {
        try {
            fn(i);
        } catch (...) {
            errs[i] = std::current_exception();
        }
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

RunRecord base_record(const ExperimentConfig& cfg) {
    RunRecord rec;
    rec.hash = config_hash(cfg);
    rec.check = cfg.check;
    rec.canonical_config = cfg.canonical_json;
    return rec;
}

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what(),
                         static_cast<std::size_t>(e.byte));
    }
    if (!doc.is_object()) fail("config", "expected a JSON object");
    check_keys(doc, "config",
               {"check", "seed", "field", "alphabet_rank", "matrix", "preset", "limit", "sigma",
                "primes", "point", "moment_order", "expect_exact", "caps"});

    ExperimentConfig cfg;
    cfg.check = str_at(need(doc, "config", "check"), "check");
    if (cfg.check != "convergence" && cfg.check != "twisted" && cfg.check != "modp_bound" &&
        cfg.check != "moments" && cfg.check != "semicontinuity")
        fail("check", "unknown check '" + cfg.check + "'");

    cfg.field = field_at(need(doc, "config", "field"), "field");
    cfg.alphabet_rank = small_at(need(doc, "config", "alphabet_rank"), "alphabet_rank", 1, 26);
    if (doc.contains("seed")) cfg.seed = u64_at(doc["seed"], "seed");

    if (doc.contains("caps")) {
        const json& caps = obj_at(doc["caps"], "caps");
        check_keys(caps, "caps", {"fset", "ball", "terms"});
        if (caps.contains("fset")) cfg.cap_fset = size_at(caps["fset"], "caps.fset");
        if (caps.contains("ball")) cfg.cap_ball = size_at(caps["ball"], "caps.ball");
        if (caps.contains("terms")) cfg.cap_terms = size_at(caps["terms"], "caps.terms");
    }

    // matrix
    const json& mj = obj_at(need(doc, "config", "matrix"), "matrix");
    check_keys(mj, "matrix", {"rows", "cols", "entries"});
    int rows = small_at(need(mj, "matrix", "rows"), "matrix.rows", 1, 64);
    int cols = small_at(need(mj, "matrix", "cols"), "matrix.cols", 1, 64);
    const json& entries = arr_at(need(mj, "matrix", "entries"), "matrix.entries");
    if (static_cast<int>(entries.size()) != rows * cols)
        fail("matrix.entries", "expected " + std::to_string(rows * cols) + " entries, got " +
                                   std::to_string(entries.size()));
    cfg.A = ga_matrix(cfg.field, cfg.alphabet_rank, rows, cols);
    std::vector<std::string> entry_text;
    for (int i = 0; i < rows * cols; ++i) {
        std::string path = "matrix.entries[" + std::to_string(i) + "]";
        entry_text.push_back(str_at(entries[static_cast<std::size_t>(i)], path));
        cfg.A.entries[static_cast<std::size_t>(i)] =
            entry_at(entry_text.back(), cfg.field, cfg.alphabet_rank, path);
    }

    // preset
    const json& pj = obj_at(need(doc, "config", "preset"), "preset");
    cfg.preset_name = str_at(need(pj, "preset", "name"), "preset.name");
    if (cfg.preset_name == "zd_congruence") {
        check_keys(pj, "preset", {"name", "d", "moduli"});
        cfg.preset.d = small_at(need(pj, "preset", "d"), "preset.d", 1, 26);
        if (cfg.preset.d != cfg.alphabet_rank)
            fail("preset.d", "congruence dimension must match alphabet_rank");
        std::size_t i = 0;
        for (const json& m : arr_at(need(pj, "preset", "moduli"), "preset.moduli"))
            cfg.preset.moduli.push_back(size_at(m, "preset.moduli[" + std::to_string(i++) + "]"));
    } else if (cfg.preset_name == "finite_regular" || cfg.preset_name == "finite_quotient") {
        check_keys(pj, "preset", {"name", "perms"});
        std::size_t gi = 0;
        for (const json& perm : arr_at(need(pj, "preset", "perms"), "preset.perms")) {
            std::string ppath = "preset.perms[" + std::to_string(gi++) + "]";
            std::vector<std::uint32_t> p;
            std::size_t xi = 0;
            for (const json& x : arr_at(perm, ppath)) {
                std::size_t v = size_at(x, ppath + "[" + std::to_string(xi++) + "]");
                if (v > 0xffffffffu) fail(ppath, "point out of range");
                p.push_back(static_cast<std::uint32_t>(v));
            }
            cfg.preset.perms.push_back(std::move(p));
        }
        if (static_cast<int>(cfg.preset.perms.size()) != cfg.alphabet_rank)
            fail("preset.perms", "need one permutation per generator");
    } else if (cfg.preset_name == "free_random_perm") {
        check_keys(pj, "preset", {"name", "sizes", "seed"});
        cfg.preset.rank = cfg.alphabet_rank;
        std::size_t i = 0;
        for (const json& s : arr_at(need(pj, "preset", "sizes"), "preset.sizes"))
            cfg.preset.sizes.push_back(size_at(s, "preset.sizes[" + std::to_string(i++) + "]"));
        if (pj.contains("seed"))
            cfg.preset.seed = u64_at(pj["seed"], "preset.seed");
        else if (cfg.seed)
            cfg.preset.seed = *cfg.seed;
        else
            fail("preset.seed", "a seed is mandatory when the preset draws random permutations");
    } else {
        fail("preset.name", "unknown preset '" + cfg.preset_name + "'");
    }

    // check-specific sections
    std::vector<std::vector<std::string>> sigma_text;
    if (doc.contains("limit")) cfg.limit = rat_at(doc["limit"], "limit");
    if (cfg.check == "twisted") {
        if (!doc.contains("sigma")) fail("sigma", "the twisted check needs a representation");
        const json& sj = obj_at(doc["sigma"], "sigma");
        check_keys(sj, "sigma", {"k", "generators"});
        int k = small_at(need(sj, "sigma", "k"), "sigma.k", 1, 16);
        const json& gens = arr_at(need(sj, "sigma", "generators"), "sigma.generators");
        if (static_cast<int>(gens.size()) != cfg.alphabet_rank)
            fail("sigma.generators", "need one matrix per generator");
        std::vector<DenseMat> mats;
        std::size_t gi = 0;
        for (const json& g : gens) {
            std::string gpath = "sigma.generators[" + std::to_string(gi++) + "]";
            const json& cells = arr_at(g, gpath);
            if (static_cast<int>(cells.size()) != k * k)
                fail(gpath, "expected " + std::to_string(k * k) + " entries");
            DenseMat m = dense_zero(cfg.field, static_cast<std::size_t>(k),
                                    static_cast<std::size_t>(k));
            std::vector<std::string> row_text;
            for (int c = 0; c < k * k; ++c) {
                std::string cpath = gpath + "[" + std::to_string(c) + "]";
                row_text.push_back(str_at(cells[static_cast<std::size_t>(c)], cpath));
                m.a[static_cast<std::size_t>(c)] =
                    scalar_at(cells[static_cast<std::size_t>(c)], cfg.field, cpath);
            }
            sigma_text.push_back(std::move(row_text));
            mats.push_back(std::move(m));
        }
        cfg.sigma = make_rep(cfg.alphabet_rank, std::move(mats));
        cfg.expect_exact = doc.contains("expect_exact")
                               ? str_at(doc["expect_exact"], "expect_exact")
                               : "auto";
        if (cfg.expect_exact != "auto" && cfg.expect_exact != "always" &&
            cfg.expect_exact != "never")
            fail("expect_exact", "expected auto, always or never");
    }
    if (cfg.check == "modp_bound") {
        if (cfg.field->kind != Field::Kind::Rationals &&
            cfg.field->kind != Field::Kind::NumberField)
            fail("field", "the mod-p sweep needs coefficients over Q or a number field");
        if (doc.contains("primes")) {
            const json& prj = obj_at(doc["primes"], "primes");
            check_keys(prj, "primes", {"count", "min", "exclude"});
            if (prj.contains("count")) cfg.prime_count = small_at(prj["count"], "primes.count", 1, 64);
            if (prj.contains("min")) {
                cfg.min_p = int_at(prj["min"], "primes.min");
                if (cfg.min_p < 2) fail("primes.min", "must be at least 2");
            }
            if (prj.contains("exclude")) {
                std::size_t i = 0;
                for (const json& e : arr_at(prj["exclude"], "primes.exclude"))
                    cfg.exclude.push_back(int_at(e, "primes.exclude[" + std::to_string(i++) + "]"));
            }
        }
    }
    if (cfg.check == "semicontinuity") {
        if (cfg.field->kind != Field::Kind::RationalFunctions)
            fail("field", "semicontinuity needs a Q_t coefficient field");
        if (!doc.contains("point")) fail("point", "semicontinuity needs a specialization point");
        std::size_t i = 0;
        for (const json& c : arr_at(doc["point"], "point"))
            cfg.point.push_back(rat_at(c, "point[" + std::to_string(i++) + "]"));
        if (static_cast<int>(cfg.point.size()) != cfg.field->num_vars)
            fail("point", "expected " + std::to_string(cfg.field->num_vars) + " coordinates");
    }
    if (cfg.check == "moments") {
        if (cfg.field->kind != Field::Kind::Rationals &&
            cfg.field->kind != Field::Kind::NumberField)
            fail("field", "moments need coefficients over Q or a number field");
        if (doc.contains("moment_order"))
            cfg.moment_order = small_at(doc["moment_order"], "moment_order", 0, 64);
    }

    // canonical form: fixed key set, defaults materialized, values re-serialized
    json c;
    c["check"] = cfg.check;
    c["field"] = field_json(*cfg.field);
    c["alphabet_rank"] = std::to_string(cfg.alphabet_rank);
    c["matrix"] = {{"rows", std::to_string(rows)},
                   {"cols", std::to_string(cols)},
                   {"entries", entry_text}};
    if (cfg.seed) c["seed"] = std::to_string(*cfg.seed);
    json p;
    p["name"] = cfg.preset_name;
    if (cfg.preset_name == "zd_congruence") {
        p["d"] = std::to_string(cfg.preset.d);
        json mods = json::array();
        for (std::size_t m : cfg.preset.moduli) mods.push_back(std::to_string(m));
        p["moduli"] = std::move(mods);
    } else if (cfg.preset_name == "free_random_perm") {
        json sizes = json::array();
        for (std::size_t s : cfg.preset.sizes) sizes.push_back(std::to_string(s));
        p["sizes"] = std::move(sizes);
        p["seed"] = std::to_string(cfg.preset.seed);
    } else {
        json perms = json::array();
        for (const auto& perm : cfg.preset.perms) {
            json pe = json::array();
            for (std::uint32_t x : perm) pe.push_back(std::to_string(x));
            perms.push_back(std::move(pe));
        }
        p["perms"] = std::move(perms);
    }
    c["preset"] = std::move(p);
    if (cfg.limit) c["limit"] = str(*cfg.limit);
    if (cfg.sigma) {
        c["sigma"] = {{"k", std::to_string(cfg.sigma->dim)}, {"generators", sigma_text}};
        c["expect_exact"] = cfg.expect_exact;
    }
    if (cfg.check == "modp_bound") {
        json ex = json::array();
        for (const BigInt& e : cfg.exclude) ex.push_back(str(e));
        c["primes"] = {{"count", std::to_string(cfg.prime_count)},
                       {"min", str(cfg.min_p)},
                       {"exclude", std::move(ex)}};
    }
    if (cfg.check == "semicontinuity") {
        json pt = json::array();
        for (const BigRat& q : cfg.point) pt.push_back(str(q));
        c["point"] = std::move(pt);
    }
    if (cfg.check == "moments") c["moment_order"] = std::to_string(cfg.moment_order);
    c["caps"] = {{"fset", std::to_string(cfg.cap_fset)},
                 {"ball", std::to_string(cfg.cap_ball)},
                 {"terms", std::to_string(cfg.cap_terms)}};
    cfg.canonical_json = c.dump();
    return cfg;
}

std::string canonical_config_json(const ExperimentConfig& cfg) { return cfg.canonical_json; }

std::string config_hash(const ExperimentConfig& cfg) {
    std::uint64_t h = fnv1a(cfg.canonical_json);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<FiniteFSet> instantiate_series(const ExperimentConfig& cfg) {
    PresetParams params = cfg.preset;
    params.cap = cfg.cap_fset;
    return preset_approximation(cfg.preset_name, params);
}

RunRecord run_convergence(const ExperimentConfig& cfg) {
    Stopwatch watch;
    RunRecord rec = base_record(cfg);
    std::vector<FiniteFSet> series = instantiate_series(cfg);
    rec.rows.resize(series.size());
    parallel_steps(series.size(), [&](std::size_t i) {
        RankReport r = normalized_rank(cfg.A, series[i]);
        RunRow& row = rec.rows[i];
        row.step = static_cast<int>(i) + 1;
        row.set_size = r.set_size;
        row.field = r.field_desc;
        row.rank = r.normalized;
        row.has_rank = true;
        row.check = "convergence";
        if (cfg.limit) {
            row.gap = *cfg.limit - r.normalized;
            row.has_gap = true;
        }
        row.verdict = "pass";
    });
    rec.wall_ms = watch.ms();
    return rec;
}

RunRecord run_twisted_check(const ExperimentConfig& cfg) {
    Stopwatch watch;
    RunRecord rec = base_record(cfg);
    const Representation& s = *cfg.sigma;
    GAMatrix twisted = twist_matrix(cfg.A, s);
    std::vector<FiniteFSet> series = instantiate_series(cfg);
    rec.rows.resize(series.size());
    parallel_steps(series.size(), [&](std::size_t i) {
        const FiniteFSet& X = series[i];
        RankReport plain = normalized_rank(cfg.A, X);
        RankReport tw = normalized_rank(twisted, X);
        bool exact = cfg.expect_exact == "always" ||
                     (cfg.expect_exact == "auto" && rep_kills_stabilizers(s, X));
        RunRow& row = rec.rows[i];
        row.step = static_cast<int>(i) + 1;
        row.set_size = X.size;
        row.field = tw.field_desc;
        row.rank = tw.normalized;
        row.has_rank = true;
        row.check = "twisted";
        row.gap = tw.normalized - s.dim * plain.normalized;
        row.has_gap = true;
        row.verdict = exact ? (row.gap == 0 ? "exact" : "fail") : "pass";
    });
    rec.wall_ms = watch.ms();
    return rec;
}

RunRecord run_modp_sweep(const ExperimentConfig& cfg) {
    Stopwatch watch;
    RunRecord rec = base_record(cfg);
    std::vector<FiniteFSet> series = instantiate_series(cfg);
    std::vector<PrimeIdeal> primes = enumerate_primes(*cfg.field, cfg.prime_count, cfg.min_p,
                                                      cfg.exclude);
    std::vector<double> bounds(primes.size());
    for (std::size_t j = 0; j < primes.size(); ++j)
        bounds[j] = discrepancy_bound(cfg.A, *primes[j].residue);

    const std::size_t np = primes.size();
    std::vector<std::optional<RunRow>> grid(series.size() * np);
    std::vector<std::string> notes(series.size() * np);
    parallel_steps(series.size(), [&](std::size_t i) {
        const FiniteFSet& X = series[i];
        RankReport rational = normalized_rank(cfg.A, X);
        for (std::size_t j = 0; j < np; ++j) {
            int step = static_cast<int>(i * np + j) + 1;
            try {
                RankReport modr = normalized_rank_mod(cfg.A, X, primes[j]);
                RunRow row;
                row.step = step;
                row.set_size = X.size;
                row.field = modr.field_desc;
                row.rank = modr.normalized;
                row.has_rank = true;
                row.check = "modp_bound";
                row.gap = rational.normalized - modr.normalized;
                row.has_gap = true;
                row.bound = bounds[j];
                row.has_bound = true;
                row.verdict = row.gap >= 0 && row.gap <= BigRat(bounds[j]) ? "pass" : "fail";
                grid[i * np + j] = std::move(row);
            } catch (const PrimeDividesDenominator&) {
                notes[i * np + j] = "step " + std::to_string(step) + ": skipped " +
                                    primes[j].residue->description() +
                                    " (prime divides a coefficient denominator)";
            }
        }
    });
    for (auto& row : grid)
        if (row) rec.rows.push_back(std::move(*row));
    for (auto& n : notes)
        if (!n.empty()) rec.notes.push_back(std::move(n));
    rec.wall_ms = watch.ms();
    return rec;
}

RunRecord run_moments(const ExperimentConfig& cfg) {
    Stopwatch watch;
    RunRecord rec = base_record(cfg);
    std::vector<FiniteFSet> series = instantiate_series(cfg);
    MomentConvergenceReport rep =
        moment_convergence_check(cfg.A, series, cfg.moment_order, cfg.cap_terms);

    RunRow free_row;
    free_row.step = 0;
    free_row.set_size = 0;
    free_row.field = cfg.field->description();
    free_row.check = "moments";
    free_row.verdict = hankel_psd(rep.free_moments) ? "pass" : "fail";
    rec.rows.push_back(std::move(free_row));
    for (std::size_t i = 0; i < rep.steps.size(); ++i) {
        const MomentStep& st = rep.steps[i];
        RunRow row;
        row.step = static_cast<int>(i) + 1;
        row.set_size = st.set_size;
        row.field = cfg.field->description();
        row.check = "moments";
        row.gap = st.max_dev;
        row.has_gap = true;
        row.verdict = hankel_psd(MomentSequence{st.mu, st.label}) ? "pass" : "fail";
        rec.rows.push_back(std::move(row));
    }
    if (!rep.deviations_non_increasing)
        rec.notes.push_back("moment deviations are not monotone along the series");
    rec.moments = std::move(rep);
    rec.wall_ms = watch.ms();
    return rec;
}

RunRecord run_semicontinuity(const ExperimentConfig& cfg) {
    Stopwatch watch;
    RunRecord rec = base_record(cfg);
    std::vector<FiniteFSet> series = instantiate_series(cfg);
    rec.rows.resize(series.size());
    parallel_steps(series.size(), [&](std::size_t i) {
        SemicontinuityReport rep = semicontinuity_check(cfg.A, cfg.point, series[i]);
        RunRow& row = rec.rows[i];
        row.step = static_cast<int>(i) + 1;
        row.set_size = series[i].size;
        row.field = rep.generic.field_desc;
        row.rank = rep.generic.normalized;
        row.has_rank = true;
        row.check = "semicontinuity";
        row.gap = rep.generic.normalized - rep.special.normalized;
        row.has_gap = true;
        row.verdict = rep.ok ? "pass" : "fail";
    });
    rec.wall_ms = watch.ms();
    return rec;
}

RunRecord run_experiment(const ExperimentConfig& cfg) {
    if (cfg.check == "convergence") return run_convergence(cfg);
    if (cfg.check == "twisted") return run_twisted_check(cfg);
    if (cfg.check == "modp_bound") return run_modp_sweep(cfg);
    if (cfg.check == "moments") return run_moments(cfg);
    return run_semicontinuity(cfg);
}

bool RunRecord::all_pass() const {
    for (const RunRow& r : rows)
        if (r.verdict == "fail") return false;
    return true;
}

std::string RunRecord::summary() const {
    std::size_t pass = 0, exact = 0, failed = 0;
    for (const RunRow& r : rows) {
        if (r.verdict == "fail")
            ++failed;
        else if (r.verdict == "exact")
            ++exact;
        else
            ++pass;
    }
    std::ostringstream os;
    os << "run " << hash << "\n";
    os << "check: " << check << "\n";
    os << "rows: " << rows.size() << " (" << pass << " pass, " << exact << " exact, " << failed
       << " fail)\n";
    if (check == "twisted" && !rows.empty()) {
        std::size_t tail = (rows.size() + 1) / 2;
        BigRat worst = 0;
        for (std::size_t i = rows.size() - tail; i < rows.size(); ++i) {
            BigRat d = abs(rows[i].gap);
            if (d > worst) worst = d;
        }
        os << "max |gap| over the last " << tail << " rows: " << str(worst) << "\n";
    }
    for (const std::string& n : notes) os << "note: " << n << "\n";
    os << "wall ms: " << fmt_double(wall_ms) << "\n";
    return os.str();
}

void write_csv(std::ostream& os, const RunRecord& rec) {
    os << "step,set_size,field,rank_num,rank_den,check,gap_num,gap_den,bound,verdict,ms\n";
    for (const RunRow& r : rec.rows) {
        os << r.step << ',' << r.set_size << ',' << r.field << ',';
        if (r.has_rank)
            os << r.rank.get_num() << ',' << r.rank.get_den() << ',';
        else
            os << ",,";
        os << r.check << ',';
        if (r.has_gap)
            os << r.gap.get_num() << ',' << r.gap.get_den() << ',';
        else
            os << ",,";
        if (r.has_bound) os << fmt_double(r.bound);
        os << ',' << r.verdict << ",0\n";
    }
}

std::string emit_report(const RunRecord& rec, const std::string& out_root) {
    namespace fs = std::filesystem;
    fs::path dir = fs::path(out_root) / rec.hash;
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "config.json", std::ios::binary);
        f << json::parse(rec.canonical_config).dump(2) << "\n";
    }
    {
        std::ofstream f(dir / "results.csv", std::ios::binary);
        write_csv(f, rec);
    }
    {
        std::ofstream f(dir / "summary.txt", std::ios::binary);
        f << rec.summary();
    }
    if (rec.moments) {
        std::ofstream f(dir / "moments.csv", std::ios::binary);
        f << "l,value_num,value_den,source\n";
        auto dump_seq = [&](const std::vector<BigRat>& mu, const std::string& source) {
            for (std::size_t l = 0; l < mu.size(); ++l)
                f << l << ',' << mu[l].get_num() << ',' << mu[l].get_den() << ',' << source
                  << '\n';
        };
        dump_seq(rec.moments->free_moments.mu, rec.moments->free_moments.source);
        for (const MomentStep& st : rec.moments->steps) dump_seq(st.mu, st.label);
    }
    return dir.string();
}

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"finite-model experiments for rank functions on group algebras"};
    app.require_subcommand(1);
    std::string cfg_path, run_dir, seed_str;
    std::string out_root = "runs";

    CLI::App* run = app.add_subcommand("run", "execute a config and persist the run");
    run->add_option("config", cfg_path, "JSON config file")->required();
    run->add_option("--out", out_root, "runs root directory");
    run->add_option("--seed", seed_str, "override the config seed");

    CLI::App* chk = app.add_subcommand("check", "parse and validate a config");
    chk->add_option("config", cfg_path, "JSON config file")->required();

    CLI::App* rpt = app.add_subcommand("report", "print a persisted run");
    rpt->add_option("dir", run_dir, "run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (rpt->parsed()) {
            std::cout << read_file(run_dir + "/summary.txt");
            std::cout << read_file(run_dir + "/results.csv");
            return 0;
        }
        json doc = json::parse(read_file(cfg_path));
        if (!seed_str.empty()) doc["seed"] = seed_str;
        if (const char* v = std::getenv("RANKLAB_CAP_FSET")) doc["caps"]["fset"] = v;
        if (const char* v = std::getenv("RANKLAB_CAP_BALL")) doc["caps"]["ball"] = v;
        if (const char* v = std::getenv("RANKLAB_CAP_TERMS")) doc["caps"]["terms"] = v;
        ExperimentConfig cfg = parse_config(doc.dump());
        if (chk->parsed()) {
            std::cout << "ok " << config_hash(cfg) << "\n";
            return 0;
        }
        RunRecord rec = run_experiment(cfg);
        std::string dir = emit_report(rec, out_root);
        std::cout << rec.summary() << "saved: " << dir << "\n";
        return rec.all_pass() ? 0 : 1;
    } catch (const json::exception& e) {
        std::cerr << "ConfigError: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace ranklab
