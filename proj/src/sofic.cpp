#include "ranklab/sofic.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "ranklab/errors.hpp"
#include "ranklab/rng.hpp"

namespace ranklab {

namespace {

std::size_t act_serial(const FiniteFSet& X, std::size_t x, const Word& w) {
    for (int l : w.letters) {
        if (l == 0 || std::abs(l) > X.rank)
            throw IndexOutOfAlphabet("word letter outside the F-set's alphabet");
        x = l > 0 ? X.perm[l - 1][x] : X.inv[-l - 1][x];
    }
    return x;
}

struct VecHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const {
        return static_cast<std::size_t>(
            fnv1a(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(std::uint32_t)));
    }
};

}  // namespace

FiniteFSet make_fset(std::vector<std::vector<std::uint32_t>> perms, std::string label,
                     bool free_tag) {
    if (perms.empty()) throw ConfigError("an F-set needs at least one generator permutation");
    std::size_t n = perms.front().size();
    if (n == 0) throw ConfigError("an F-set needs at least one point");
    FiniteFSet X;
    X.rank = static_cast<int>(perms.size());
    X.size = n;
    X.label = std::move(label);
    X.free_by_construction = free_tag;
    std::vector<bool> seen(n);
    for (const auto& p : perms) {
        if (p.size() != n) throw ConfigError("generator permutations have unequal sizes");
        std::fill(seen.begin(), seen.end(), false);
        std::vector<std::uint32_t> inv(n);
        for (std::size_t x = 0; x < n; ++x) {
            if (p[x] >= n || seen[p[x]])
                throw ConfigError("generator map is not a permutation");
            seen[p[x]] = true;
            inv[p[x]] = static_cast<std::uint32_t>(x);
        }
        X.inv.push_back(std::move(inv));
    }
    X.perm = std::move(perms);
    return X;
}

std::size_t act(const FiniteFSet& X, std::size_t x, const Word& w) {
    if (x >= X.size)
        throw PointOutOfRange("point " + std::to_string(x) + " outside F-set of size " +
                              std::to_string(X.size));
    return act_serial(X, x, w);
}

std::size_t fixed_count(const FiniteFSet& X, const Word& w) {
    for (int l : w.letters)
        if (l == 0 || std::abs(l) > X.rank)
            throw IndexOutOfAlphabet("word letter outside the F-set's alphabet");
    long long n = static_cast<long long>(X.size);
    long long cnt = 0;
#pragma omp parallel for reduction(+ : cnt) schedule(static)
    for (long long x = 0; x < n; ++x) {
        std::size_t y = static_cast<std::size_t>(x);
        for (int l : w.letters) y = l > 0 ? X.perm[l - 1][y] : X.inv[-l - 1][y];
        if (y == static_cast<std::size_t>(x)) ++cnt;
    }
    return static_cast<std::size_t>(cnt);
}

BigRat fixed_ratio(const FiniteFSet& X, const Word& w) {
    return make_rat(BigInt(static_cast<unsigned long>(fixed_count(X, w))),
                    BigInt(static_cast<unsigned long>(X.size)));
}

DefectProfile defect_profile(const FiniteFSet& X, int radius, const MembershipOracle& oracle,
                             std::size_t ball_cap) {
    auto words = ball(radius, X.rank, ball_cap);
    DefectProfile prof;
    prof.radius = radius;
    prof.entries.resize(words.size());
    long long n = static_cast<long long>(words.size());
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) {
        const Word& w = words[static_cast<std::size_t>(i)];
        DefectEntry e;
        e.w = w;
        std::size_t cnt = 0;
        for (std::size_t x = 0; x < X.size; ++x)
            if (act_serial(X, x, w) == x) ++cnt;
        e.ratio = make_rat(BigInt(static_cast<unsigned long>(cnt)),
                           BigInt(static_cast<unsigned long>(X.size)));
        if (oracle) {
            e.in_n = oracle(w) ? 1 : 0;
            e.deviation = e.in_n ? BigRat(1) - e.ratio : e.ratio;
        }
        prof.entries[static_cast<std::size_t>(i)] = std::move(e);
    }
    prof.max_deviation = 0;
    for (const auto& e : prof.entries)
        if (e.in_n >= 0 && e.deviation > prof.max_deviation) prof.max_deviation = e.deviation;
    return prof;
}

FiniteFSet product_action(const FiniteFSet& X, const FiniteFSet& Z, std::size_t cap) {
    if (X.rank != Z.rank) throw DomainMismatch("product action: alphabet ranks differ");
    if (Z.size != 0 && X.size > cap / Z.size)
        throw ProductTooLarge("product action would have " + std::to_string(X.size) + "*" +
                              std::to_string(Z.size) + " points, above the cap " +
                              std::to_string(cap));
    std::size_t n = X.size * Z.size;
    std::vector<std::vector<std::uint32_t>> perms(static_cast<std::size_t>(X.rank));
    for (int g = 0; g < X.rank; ++g) {
        auto& p = perms[static_cast<std::size_t>(g)];
        p.resize(n);
        for (std::size_t x = 0; x < X.size; ++x)
            for (std::size_t z = 0; z < Z.size; ++z)
                p[x * Z.size + z] = static_cast<std::uint32_t>(
                    static_cast<std::size_t>(X.perm[g][x]) * Z.size + Z.perm[g][z]);
    }
    std::string label = (X.label.empty() ? "X" : X.label) + " x " + (Z.label.empty() ? "Z" : Z.label);
    return make_fset(std::move(perms), std::move(label),
                     X.free_by_construction && Z.free_by_construction);
}

FiniteFSet regular_closure_of_permutations(const std::vector<std::vector<std::uint32_t>>& gens,
                                           std::size_t cap, std::string label) {
    if (gens.empty()) throw ConfigError("regular closure needs at least one permutation");
    std::size_t base = gens.front().size();
    for (const auto& g : gens) {
        std::vector<bool> seen(base);
        if (g.size() != base) throw ConfigError("permutations have unequal sizes");
        for (auto v : g) {
            if (v >= base || seen[v]) throw ConfigError("generator map is not a permutation");
            seen[v] = true;
        }
    }
    int r = static_cast<int>(gens.size());
    std::vector<std::vector<std::uint32_t>> elems;
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, VecHash> index;
    std::vector<std::vector<std::uint32_t>> trans(static_cast<std::size_t>(r));
    std::vector<std::uint32_t> id(base);
    std::iota(id.begin(), id.end(), 0);
    elems.push_back(id);
    index.emplace(std::move(id), 0);
    for (std::size_t head = 0; head < elems.size(); ++head) {
        for (int g = 0; g < r; ++g) {
            std::vector<std::uint32_t> prod(base);
            for (std::size_t x = 0; x < base; ++x) prod[x] = gens[static_cast<std::size_t>(g)][elems[head][x]];
            auto [it, fresh] = index.emplace(prod, static_cast<std::uint32_t>(elems.size()));
            if (fresh) {
                if (elems.size() >= cap)
                    throw ClosureTooLarge("permutation group closure exceeds cap " +
                                          std::to_string(cap));
                elems.push_back(std::move(prod));
            }
            trans[static_cast<std::size_t>(g)].push_back(it->second);
        }
    }
    if (label.empty()) label = "regular |Q|=" + std::to_string(elems.size());
    return make_fset(std::move(trans), std::move(label), true);
}

FiniteFSet regular_action_of_image(const Representation& s, std::size_t cap) {
    if (!s.field->finite())
        throw DomainNotField("regular action of an image needs a finite coefficient field, got " +
                             s.field->description());
    int r = s.rank;
    std::vector<DenseMat> elems;
    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<std::vector<std::uint32_t>> trans(static_cast<std::size_t>(r));
    DenseMat id = dense_identity(s.field, static_cast<std::size_t>(s.dim));
    index.emplace(dense_str(id), 0);
    elems.push_back(std::move(id));
    for (std::size_t head = 0; head < elems.size(); ++head) {
        for (int g = 0; g < r; ++g) {
            DenseMat prod = dense_mul(elems[head], s.gen[static_cast<std::size_t>(g)]);
            auto [it, fresh] = index.emplace(dense_str(prod), static_cast<std::uint32_t>(elems.size()));
            if (fresh) {
                if (elems.size() >= cap)
                    throw ClosureTooLarge("matrix group closure exceeds cap " +
                                          std::to_string(cap));
                elems.push_back(std::move(prod));
            }
            trans[static_cast<std::size_t>(g)].push_back(it->second);
        }
    }
    std::string label = "image-regular k=" + std::to_string(s.dim) + " over " +
                        s.field->description() + " |Q|=" + std::to_string(elems.size());
    return make_fset(std::move(trans), std::move(label), true);
}

std::vector<Word> stabilizer_generators(const FiniteFSet& X) {
    std::vector<Word> out;
    std::vector<char> seen(X.size, 0);
    std::vector<Word> u(X.size);
    std::vector<std::size_t> order;
    for (std::size_t root = 0; root < X.size; ++root) {
        if (seen[root]) continue;
        order.clear();
        order.push_back(root);
        seen[root] = 1;
        u[root] = Word{{}, X.rank};
        for (std::size_t qi = 0; qi < order.size(); ++qi) {
            std::size_t x = order[qi];
            for (int l = 0; l < X.rank; ++l) {
                auto li = static_cast<std::size_t>(l);
                for (std::size_t y : {static_cast<std::size_t>(X.perm[li][x]),
                                      static_cast<std::size_t>(X.inv[li][x])}) {
                    if (seen[y]) continue;
                    seen[y] = 1;
                    int letter = y == X.perm[li][x] ? l + 1 : -(l + 1);
                    u[y] = word_mul(u[x], Word{{letter}, X.rank});
                    order.push_back(y);
                }
            }
        }
        for (std::size_t x : order)
            for (int l = 0; l < X.rank; ++l) {
                auto li = static_cast<std::size_t>(l);
                Word loop = word_mul(word_mul(u[x], Word{{l + 1}, X.rank}),
                                     word_inv(u[X.perm[li][x]]));
                if (!loop.is_identity()) out.push_back(std::move(loop));
            }
    }
    return out;
}

bool rep_kills_stabilizers(const Representation& s, const FiniteFSet& X) {
    if (s.rank != X.rank)
        throw DomainMismatch("representation alphabet rank " + std::to_string(s.rank) +
                             " vs F-set rank " + std::to_string(X.rank));
    std::vector<char> seen(X.size, 0);
    std::vector<DenseMat> M(X.size);
    std::vector<std::size_t> order;
    for (std::size_t root = 0; root < X.size; ++root) {
        if (seen[root]) continue;
        order.clear();
        order.push_back(root);
        seen[root] = 1;
        M[root] = dense_identity(s.field, static_cast<std::size_t>(s.dim));
        for (std::size_t qi = 0; qi < order.size(); ++qi) {
            std::size_t x = order[qi];
            for (int l = 0; l < X.rank; ++l) {
                auto li = static_cast<std::size_t>(l);
                std::size_t y = X.perm[li][x];
                if (!seen[y]) {
                    seen[y] = 1;
                    M[y] = dense_mul(M[x], s.gen[li]);
                    order.push_back(y);
                }
                std::size_t z = X.inv[li][x];
                if (!seen[z]) {
                    seen[z] = 1;
                    M[z] = dense_mul(M[x], s.gen_inv[li]);
                    order.push_back(z);
                }
            }
        }
        // every positive edge x·g = y must satisfy M_x·σ(g) = M_y; tree edges
        // do by construction, and the rest are exactly the Schreier loops
        for (std::size_t x : order)
            for (int l = 0; l < X.rank; ++l) {
                auto li = static_cast<std::size_t>(l);
                if (!dense_equal(dense_mul(M[x], s.gen[li]), M[X.perm[li][x]])) return false;
            }
    }
    return true;
}

namespace {

std::vector<FiniteFSet> preset_zd(const PresetParams& p) {
    if (p.d < 1) throw BadPreset("zd_congruence needs dimension d >= 1");
    if (p.moduli.empty()) throw BadPreset("zd_congruence needs a modulus list");
    std::vector<FiniteFSet> out;
    for (std::size_t m : p.moduli) {
        if (m < 1) throw BadPreset("zd_congruence modulus must be positive");
        std::size_t n = 1;
        for (int i = 0; i < p.d; ++i) {
            if (n > p.cap / m)
                throw BadPreset("zd_congruence set of size m^d exceeds cap " +
                                std::to_string(p.cap));
            n *= m;
        }
        std::vector<std::vector<std::uint32_t>> perms(static_cast<std::size_t>(p.d));
        std::size_t stride = 1;
        for (int i = 0; i < p.d; ++i) {
            auto& pm = perms[static_cast<std::size_t>(i)];
            pm.resize(n);
            for (std::size_t x = 0; x < n; ++x) {
                std::size_t c = (x / stride) % m;
                pm[x] = static_cast<std::uint32_t>(c + 1 == m ? x - (m - 1) * stride : x + stride);
            }
            stride *= m;
        }
        out.push_back(make_fset(std::move(perms),
                                "Z^" + std::to_string(p.d) + " mod " + std::to_string(m), true));
    }
    return out;
}

std::vector<FiniteFSet> preset_random(const PresetParams& p) {
    if (p.rank < 1) throw BadPreset("free_random_perm needs an alphabet rank");
    if (p.sizes.empty()) throw BadPreset("free_random_perm needs a size list");
    Rng rng(p.seed);
    std::vector<FiniteFSet> out;
    for (std::size_t n : p.sizes) {
        if (n < 1) throw BadPreset("free_random_perm sizes must be positive");
        if (n > p.cap) throw BadPreset("free_random_perm size exceeds cap");
        std::vector<std::vector<std::uint32_t>> perms(static_cast<std::size_t>(p.rank));
        for (auto& pm : perms) {
            pm.resize(n);
            std::iota(pm.begin(), pm.end(), 0);
            for (std::size_t i = n - 1; i > 0; --i)
                std::swap(pm[i], pm[rng.below(i + 1)]);
        }
        out.push_back(make_fset(std::move(perms),
                                "random n=" + std::to_string(n) + " seed=" + std::to_string(p.seed),
                                false));
    }
    return out;
}

}  // namespace

std::vector<FiniteFSet> preset_approximation(const std::string& name, const PresetParams& p) {
    if (name == "zd_congruence") return preset_zd(p);
    if (name == "finite_regular") {
        if (p.perms.empty()) throw BadPreset("finite_regular needs generator permutations");
        return {regular_closure_of_permutations(p.perms, p.cap)};
    }
    if (name == "free_random_perm") return preset_random(p);
    if (name == "finite_quotient") {
        if (p.perms.empty()) throw BadPreset("finite_quotient needs generator permutations");
        auto perms = p.perms;
        return {make_fset(std::move(perms), "quotient n=" + std::to_string(p.perms.front().size()),
                          false)};
    }
    throw BadPreset("unknown preset '" + name + "'");
}

MembershipOracle zd_oracle(int d) {
    return [d](const Word& w) {
        std::vector<long long> sums(static_cast<std::size_t>(d), 0);
        for (int l : w.letters) {
            int i = std::abs(l) - 1;
            if (i >= d) return false;
            sums[static_cast<std::size_t>(i)] += l > 0 ? 1 : -1;
        }
        return std::all_of(sums.begin(), sums.end(), [](long long s) { return s == 0; });
    };
}

MembershipOracle free_oracle() {
    return [](const Word& w) { return w.is_identity(); };
}

void fset_save(std::ostream& os, const FiniteFSet& X) {
    os << "fset " << X.size << " " << X.rank << "\n";
    for (const auto& p : X.perm) {
        for (std::size_t x = 0; x < p.size(); ++x) os << (x ? " " : "") << p[x];
        os << "\n";
    }
}

FiniteFSet fset_load(std::istream& is) {
    std::string tag;
    std::size_t n = 0;
    int r = 0;
    if (!(is >> tag >> n >> r) || tag != "fset")
        throw ParseError("bad F-set header, expected 'fset N r'", 0);
    if (n < 1 || r < 1) throw ParseError("F-set header out of range", 0);
    std::vector<std::vector<std::uint32_t>> perms(static_cast<std::size_t>(r));
    for (auto& p : perms) {
        p.resize(n);
        for (auto& v : p)
            if (!(is >> v)) throw ParseError("truncated F-set permutation data", 0);
    }
    return make_fset(std::move(perms), "loaded n=" + std::to_string(n), false);
}

}  // namespace ranklab
