#include "ranklab/freealg.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>

namespace ranklab {

// ---------------------------------------------------------------------------
// Words.

namespace {

// a < a^-1 < b < b^-1 < ...
int letter_code(int l) { return l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1; }

void check_letter(int l, int rank) {
    if (l == 0 || l > rank || l < -rank)
        throw IndexOutOfAlphabet("letter " + std::to_string(l) + " outside alphabet of rank " +
                                 std::to_string(rank));
}

} // namespace

bool WordLess::operator()(const Word& u, const Word& v) const {
    if (u.letters.size() != v.letters.size()) return u.letters.size() < v.letters.size();
    for (size_t i = 0; i < u.letters.size(); ++i) {
        int cu = letter_code(u.letters[i]), cv = letter_code(v.letters[i]);
        if (cu != cv) return cu < cv;
    }
    return false;
}

Word reduce_word(std::vector<int> letters, int rank) {
    std::vector<int> stack;
    stack.reserve(letters.size());
    for (int l : letters) {
        check_letter(l, rank);
        if (!stack.empty() && stack.back() == -l)
            stack.pop_back();
        else
            stack.push_back(l);
    }
    return Word{std::move(stack), rank};
}

Word word_mul(const Word& u, const Word& v) {
    if (u.rank != v.rank) throw DomainMismatch("word product across different alphabets");
    std::vector<int> cat = u.letters;
    cat.insert(cat.end(), v.letters.begin(), v.letters.end());
    return reduce_word(std::move(cat), u.rank);
}

Word word_inv(const Word& u) {
    std::vector<int> rev(u.letters.rbegin(), u.letters.rend());
    for (int& l : rev) l = -l;
    return Word{std::move(rev), u.rank};
}

std::string Word::str() const {
    if (letters.empty()) return "e";
    std::ostringstream os;
    size_t i = 0;
    bool first = true;
    while (i < letters.size()) {
        size_t j = i;
        while (j < letters.size() && letters[j] == letters[i]) ++j;
        long run = static_cast<long>(j - i);
        int l = letters[i];
        if (!first) os << "*";
        os << static_cast<char>('a' + std::abs(l) - 1);
        long e = l > 0 ? run : -run;
        if (e != 1) os << "^" << e;
        first = false;
        i = j;
    }
    return os.str();
}

Word parse_word(const std::string& text, int rank) {
    std::vector<int> letters;
    size_t i = 0;
    auto skip_ws = [&]() {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    if (i < text.size() && (text[i] == '1' || text[i] == 'e') &&
        text.find_first_not_of(" \t\n\re1", i) == std::string::npos) {
        // "1" / "e" (possibly repeated whitespace) denotes the identity
        return Word{{}, rank};
    }
    while (true) {
        skip_ws();
        if (i >= text.size()) break;
        char c = text[i];
        if (c == '*') {
            ++i;
            continue;
        }
        int l;
        if (c >= 'a' && c <= 'z')
            l = c - 'a' + 1;
        else if (c >= 'A' && c <= 'Z')
            l = -(c - 'A' + 1);
        else
            throw ParseError(std::string("unexpected character '") + c + "' in word", i);
        ++i;
        long exp = 1;
        skip_ws();
        if (i < text.size() && text[i] == '^') {
            ++i;
            skip_ws();
            bool negative = false;
            if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
                negative = text[i] == '-';
                ++i;
            }
            if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
                throw ParseError("expected an exponent", i);
            exp = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                exp = exp * 10 + (text[i++] - '0');
            if (negative) exp = -exp;
        }
        long count = std::abs(exp);
        int letter = exp >= 0 ? l : -l;
        for (long k = 0; k < count; ++k) letters.push_back(letter);
    }
    return reduce_word(std::move(letters), rank);
}

BigInt ball_size(int k, int rank) {
    BigInt total = 1;
    BigInt shell = 2 * rank;
    for (int j = 1; j <= k; ++j) {
        total += shell;
        shell *= 2 * rank - 1;
    }
    return total;
}

std::vector<Word> ball(int k, int rank, std::size_t cap) {
    if (k < 0 || rank < 1) throw BallTooLarge("ball requires k >= 0 and rank >= 1");
    BigInt projected = ball_size(k, rank);
    if (projected > BigInt(static_cast<unsigned long>(cap)))
        throw BallTooLarge("ball of radius " + std::to_string(k) + " has " +
                           projected.get_str() + " words, above the cap");
    std::vector<Word> out;
    out.push_back(Word{{}, rank});
    size_t level_begin = 0;
    for (int j = 1; j <= k; ++j) {
        size_t level_end = out.size();
        for (size_t idx = level_begin; idx < level_end; ++idx) {
            // extending reduced words by non-cancelling letters yields each
            // reduced word of the next length exactly once
            for (int l = 1; l <= rank; ++l) {
                for (int s : {l, -l}) {
                    if (!out[idx].letters.empty() && out[idx].letters.back() == -s) continue;
                    Word w = out[idx];
                    w.letters.push_back(s);
                    out.push_back(std::move(w));
                }
            }
        }
        level_begin = level_end;
        // keep each shell in canonical order
        std::sort(out.begin() + static_cast<std::ptrdiff_t>(level_begin), out.end(),
                  WordLess{});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Group algebra elements.

namespace {

void check_compatible(const GroupAlgebraElement& x, const GroupAlgebraElement& y) {
    if (x.rank != y.rank || !x.field->same(*y.field))
        throw DomainMismatch("group algebra operands over different domains");
}

void add_term(GroupAlgebraElement& acc, const Word& w, const FieldValue& c) {
    auto it = acc.support.find(w);
    if (it == acc.support.end()) {
        if (!acc.field->is_zero(c)) acc.support.emplace(w, c);
        return;
    }
    FieldValue s = acc.field->add(it->second, c);
    if (acc.field->is_zero(s))
        acc.support.erase(it);
    else
        it->second = std::move(s);
}

} // namespace

GroupAlgebraElement ga_zero(FieldPtr F, int rank) { return GroupAlgebraElement{std::move(F), rank, {}}; }

GroupAlgebraElement ga_term(FieldPtr F, Word w, FieldValue c) {
    GroupAlgebraElement x{std::move(F), w.rank, {}};
    if (!x.field->is_zero(c)) x.support.emplace(std::move(w), std::move(c));
    return x;
}

GroupAlgebraElement ga_one(FieldPtr F, int rank) {
    FieldValue one = F->one();
    return ga_term(std::move(F), Word{{}, rank}, std::move(one));
}

GroupAlgebraElement ga_add(const GroupAlgebraElement& x, const GroupAlgebraElement& y) {
    check_compatible(x, y);
    GroupAlgebraElement r = x;
    for (const auto& [w, c] : y.support) add_term(r, w, c);
    return r;
}

GroupAlgebraElement ga_neg(const GroupAlgebraElement& x) {
    GroupAlgebraElement r = x;
    for (auto& [w, c] : r.support) c = r.field->neg(c);
    return r;
}

GroupAlgebraElement ga_sub(const GroupAlgebraElement& x, const GroupAlgebraElement& y) {
    return ga_add(x, ga_neg(y));
}

GroupAlgebraElement ga_scale(const GroupAlgebraElement& x, const FieldValue& c) {
    if (x.field->is_zero(c)) return ga_zero(x.field, x.rank);
    GroupAlgebraElement r = x;
    for (auto& [w, v] : r.support) v = r.field->mul(v, c);
    return r;
}

GroupAlgebraElement ga_mul(const GroupAlgebraElement& x, const GroupAlgebraElement& y) {
    check_compatible(x, y);
    GroupAlgebraElement r = ga_zero(x.field, x.rank);
    for (const auto& [u, a] : x.support)
        for (const auto& [v, b] : y.support) add_term(r, word_mul(u, v), x.field->mul(a, b));
    return r;
}

GroupAlgebraElement ga_star(const GroupAlgebraElement& x) {
    GroupAlgebraElement r = ga_zero(x.field, x.rank);
    for (const auto& [w, c] : x.support) r.support.emplace(word_inv(w), x.field->conj(c));
    return r;
}

FieldValue identity_coefficient(const GroupAlgebraElement& x) {
    auto it = x.support.find(Word{{}, x.rank});
    return it == x.support.end() ? x.field->zero() : it->second;
}

bool ga_equal(const GroupAlgebraElement& x, const GroupAlgebraElement& y) {
    check_compatible(x, y);
    if (x.support.size() != y.support.size()) return false;
    auto ix = x.support.begin(), iy = y.support.begin();
    for (; ix != x.support.end(); ++ix, ++iy) {
        if (!(ix->first == iy->first)) return false;
        if (!x.field->equals(ix->second, iy->second)) return false;
    }
    return true;
}

std::string GroupAlgebraElement::str() const {
    if (support.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : support) {
        std::string cs = field->str(c);
        bool negated = false;
        if (!cs.empty() && cs[0] == '-') {
            std::string ns = field->str(field->neg(c));
            if (ns.find_first_of("+-", 1) == std::string::npos) {
                negated = true;
                cs = std::move(ns);
            }
        }
        if (cs.find_first_of("+-", 1) != std::string::npos &&
            (!w.is_identity() || support.size() > 1))
            cs = "(" + cs + ")";
        if (first)
            os << (negated ? "-" : "");
        else
            os << (negated ? " - " : " + ");
        if (w.is_identity())
            os << cs;
        else if (cs == "1")
            os << w.str();
        else
            os << cs << "*" << w.str();
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Expression parser.

namespace {

class AlgebraParser {
public:
    AlgebraParser(const std::string& text, FieldPtr F, int rank)
        : text_(text), field_(std::move(F)), rank_(rank) {}

    GroupAlgebraElement parse() {
        GroupAlgebraElement r = expr();
        skip_ws();
        if (pos_ < text_.size()) throw ParseError("trailing input", pos_);
        return r;
    }

private:
    const std::string& text_;
    FieldPtr field_;
    int rank_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    GroupAlgebraElement expr() {
        skip_ws();
        bool neg = false;
        if (peek() == '+' || peek() == '-') {
            neg = text_[pos_] == '-';
            ++pos_;
        }
        GroupAlgebraElement acc = term();
        if (neg) acc = ga_neg(acc);
        while (true) {
            char c = peek();
            if (c != '+' && c != '-') break;
            ++pos_;
            GroupAlgebraElement t = term();
            acc = c == '+' ? ga_add(acc, t) : ga_sub(acc, t);
        }
        return acc;
    }

    GroupAlgebraElement term() {
        GroupAlgebraElement acc = factor();
        while (true) {
            char c = peek();
            if (c != '*' && c != '/') break;
            ++pos_;
            size_t at = pos_;
            GroupAlgebraElement f = factor();
            if (c == '*')
                acc = ga_mul(acc, f);
            else
                acc = ga_mul(acc, invert_single_term(f, at));
        }
        return acc;
    }

    GroupAlgebraElement factor() {
        GroupAlgebraElement b = base();
        char c = peek();
        if (c != '^') return b;
        ++pos_;
        skip_ws();
        size_t at = pos_;
        bool neg = false;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
            neg = text_[pos_] == '-';
            ++pos_;
        }
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            throw ParseError("expected an integer exponent", pos_);
        long e = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            e = e * 10 + (text_[pos_++] - '0');
        GroupAlgebraElement basis = neg ? invert_single_term(b, at) : b;
        GroupAlgebraElement acc = ga_one(field_, rank_);
        for (long k = 0; k < e; ++k) acc = ga_mul(acc, basis);
        return acc;
    }

    GroupAlgebraElement base() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            GroupAlgebraElement inner = expr();
            if (peek() != ')') throw ParseError("missing ')'", pos_);
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (c >= 'a' && c <= 'z') return letter_or_symbol();
        if (c >= 'A' && c <= 'Z') {
            int idx = c - 'A' + 1;
            if (idx > rank_)
                throw ParseError(std::string("letter '") + c + "' outside alphabet of rank " +
                                     std::to_string(rank_),
                                 pos_);
            ++pos_;
            return ga_term(field_, Word{{-idx}, rank_}, field_->one());
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    GroupAlgebraElement number() {
        BigInt n = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            n = n * 10 + (text_[pos_++] - '0');
        return ga_term(field_, Word{{}, rank_}, field_->from_rat(BigRat(n)));
    }

    GroupAlgebraElement letter_or_symbol() {
        char c = text_[pos_];
        int idx = c - 'a' + 1;
        if (idx <= rank_) {
            ++pos_;
            return ga_term(field_, Word{{idx}, rank_}, field_->one());
        }
        // not a generator: field symbols w and t/tN
        if (c == 'w') {
            ++pos_;
            try {
                return ga_term(field_, Word{{}, rank_}, field_->w_gen());
            } catch (const DomainMismatch&) {
                throw ParseError("'w' needs a number field coefficient domain", pos_ - 1);
            }
        }
        if (c == 't') {
            size_t start = pos_++;
            long idx_t = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                idx_t = idx_t * 10 + (text_[pos_++] - '0');
            if (idx_t == 0) idx_t = 1;
            try {
                return ga_term(field_, Word{{}, rank_}, field_->t_var(static_cast<int>(idx_t)));
            } catch (const DomainMismatch&) {
                throw ParseError("'t' needs a rational function coefficient domain", start);
            }
        }
        throw ParseError(std::string("letter '") + c + "' outside alphabet of rank " +
                             std::to_string(rank_),
                         pos_);
    }

    GroupAlgebraElement invert_single_term(const GroupAlgebraElement& x, size_t at) {
        if (x.support.size() != 1)
            throw ParseError("division/negative power needs a single invertible term", at);
        const auto& [w, c] = *x.support.begin();
        return ga_term(field_, word_inv(w), field_->inv(c));
    }
};

} // namespace

GroupAlgebraElement parse_algebra(const std::string& text, FieldPtr F, int rank) {
    return AlgebraParser(text, std::move(F), rank).parse();
}

// ---------------------------------------------------------------------------
// Matrices.

GAMatrix ga_matrix(FieldPtr F, int rank, int rows, int cols) {
    GAMatrix m;
    m.field = std::move(F);
    m.rank = rank;
    m.rows = rows;
    m.cols = cols;
    m.entries.assign(static_cast<size_t>(rows) * cols, ga_zero(m.field, rank));
    return m;
}

GAMatrix mat_add(const GAMatrix& a, const GAMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw DomainMismatch("matrix addition with mismatched shapes");
    GAMatrix r = a;
    for (size_t i = 0; i < r.entries.size(); ++i) r.entries[i] = ga_add(a.entries[i], b.entries[i]);
    return r;
}

GAMatrix mat_mul(const GAMatrix& a, const GAMatrix& b) {
    if (a.cols != b.rows) throw DomainMismatch("matrix product with mismatched shapes");
    GAMatrix r = ga_matrix(a.field, a.rank, a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            if (a.at(i, k).is_zero()) continue;
            for (int j = 0; j < b.cols; ++j) {
                if (b.at(k, j).is_zero()) continue;
                r.at(i, j) = ga_add(r.at(i, j), ga_mul(a.at(i, k), b.at(k, j)));
            }
        }
    return r;
}

GAMatrix mat_conj_transpose(const GAMatrix& a) {
    GAMatrix r = ga_matrix(a.field, a.rank, a.cols, a.rows);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) r.at(j, i) = ga_star(a.at(i, j));
    return r;
}

std::size_t mat_max_word_length(const GAMatrix& a) {
    std::size_t n = 0;
    for (const auto& e : a.entries)
        for (const auto& [w, c] : e.support) n = std::max(n, w.length());
    return n;
}

GAMatrix mat_map_coefficients(const GAMatrix& a, FieldPtr target,
                              const std::function<FieldValue(const FieldValue&)>& f) {
    GAMatrix r = ga_matrix(target, a.rank, a.rows, a.cols);
    for (size_t idx = 0; idx < a.entries.size(); ++idx) {
        GroupAlgebraElement e = ga_zero(target, a.rank);
        for (const auto& [w, c] : a.entries[idx].support) {
            FieldValue v = f(c);
            if (!target->is_zero(v)) e.support.emplace(w, std::move(v));
        }
        r.entries[idx] = std::move(e);
    }
    return r;
}

CertifiedReal matrix_house_certified(const GAMatrix& B) {
    double best = 0, best_upper = 0;
    for (int j = 0; j < B.cols; ++j) {
        double col = 0, col_err = 0;
        for (int i = 0; i < B.rows; ++i) {
            for (const auto& [w, c] : B.at(i, j).support) {
                CertifiedReal h = house_certified(*B.field, c);
                col += h.value;
                col_err += h.error;
            }
        }
        best = std::max(best, col);
        best_upper = std::max(best_upper, col + col_err);
    }
    return {best, best_upper - best};
}

double matrix_house(const GAMatrix& B) {
    CertifiedReal c = matrix_house_certified(B);
    if (c.error > 1e-9 * std::max(1.0, c.value))
        throw RootIsolationFailed("matrix house certification exceeded tolerance");
    return c.value;
}

} // namespace ranklab
