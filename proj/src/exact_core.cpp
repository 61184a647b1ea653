#include "msa/exact_core.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace msa {

std::vector<Sequence> make_sequences(const std::vector<Seq>& raw) {
    std::vector<Sequence> out;
    out.reserve(raw.size());
    for (size_t j = 0; j < raw.size(); ++j) out.push_back(Sequence{static_cast<int>(j + 1), raw[j]});
    return out;
}

Alignment make_alignment(const std::vector<Sequence>& strings, std::vector<std::vector<int>> tuples) {
    Alignment a;
    a.tuples = std::move(tuples);
    a.unaligned.resize(strings.size());
    for (size_t j = 0; j < strings.size(); ++j) {
        std::vector<char> used(strings[j].size() + 1, 0);
        for (const auto& t : a.tuples) {
            int v = t[j];
            if (v >= 1 && v <= static_cast<int>(strings[j].size())) used[v] = 1;
        }
        for (int i = 1; i <= static_cast<int>(strings[j].size()); ++i)
            if (!used[i]) a.unaligned[j].push_back(i);
    }
    return a;
}

std::string check_alignment(const std::vector<Sequence>& strings, const Alignment& a) {
    const size_t m = strings.size();
    for (size_t t = 0; t < a.tuples.size(); ++t) {
        const auto& tup = a.tuples[t];
        if (tup.size() != m) return "tuple " + std::to_string(t) + " has wrong arity";
        for (size_t j = 0; j < m; ++j) {
            if (tup[j] < 1 || tup[j] > static_cast<int>(strings[j].size()))
                return "tuple " + std::to_string(t) + " index out of range";
            if (strings[j].at(tup[j]) != strings[0].at(tup[0]))
                return "tuple " + std::to_string(t) + " symbols differ";
            if (t > 0 && a.tuples[t - 1][j] >= tup[j]) return "tuple " + std::to_string(t) + " not increasing";
        }
    }
    if (a.unaligned.size() != m) return "unaligned sets missing";
    Alignment expect = make_alignment(strings, a.tuples);
    for (size_t j = 0; j < m; ++j)
        if (expect.unaligned[j] != a.unaligned[j]) return "unaligned set of string " + std::to_string(j + 1) + " wrong";
    return {};
}

Rational Rational::reduced() const {
    int64_t g = std::gcd(num, den);
    if (g == 0) return *this;
    Rational r{num / g, den / g};
    if (r.den < 0) r = {-r.num, -r.den};
    return r;
}

std::string Rational::str() const {
    Rational r = reduced();
    if (r.den == 1) return std::to_string(r.num);
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

bool operator==(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
}
bool operator<(const Rational& a, const Rational& b) {
    // denominators are positive by construction
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}
Rational operator+(const Rational& a, const Rational& b) {
    if (a.den == b.den) return {a.num + b.num, a.den};
    return Rational{a.num * b.den + b.num * a.den, a.den * b.den}.reduced();
}
Rational operator*(const Rational& a, int64_t k) { return {a.num * k, a.den}; }

namespace {

constexpr size_t kMaxCells = size_t{1} << 28;

struct Grid {
    std::vector<int> dims;
    std::vector<size_t> strides;
    size_t total = 1;

    explicit Grid(std::vector<int> d) : dims(std::move(d)), strides(dims.size()) {
        for (size_t j = dims.size(); j-- > 0;) {
            strides[j] = total;
            total *= static_cast<size_t>(dims[j]);
            if (total > kMaxCells) throw std::length_error("DP table too large");
        }
    }
    // advance a coordinate vector in linear order; returns false past the end
    bool next(std::vector<int>& c) const {
        for (size_t j = dims.size(); j-- > 0;) {
            if (++c[j] < dims[j]) return true;
            c[j] = 0;
        }
        return false;
    }
};

LcsResult lcs_table(const std::vector<Seq>& s, bool want_witness) {
    const size_t m = s.size();
    if (m < 2) throw std::invalid_argument("need at least two strings");
    std::vector<int> dims(m);
    for (size_t j = 0; j < m; ++j) dims[j] = static_cast<int>(s[j].size()) + 1;
    for (size_t j = 0; j < m; ++j)
        if (s[j].empty()) {
            LcsResult r;
            if (want_witness) r.witness = make_alignment(make_sequences(s), {});
            return r;
        }
    Grid g(dims);
    size_t diag = 0;
    for (size_t st : g.strides) diag += st;

    std::vector<int32_t> D(g.total, 0);
    std::vector<int> c(m, 0);
    size_t idx = 0;
    do {
        bool edge = false;
        for (int v : c) edge |= (v == 0);
        if (!edge) {
            Symbol a = s[0][c[0] - 1];
            bool eq = true;
            for (size_t j = 1; j < m && eq; ++j) eq = (s[j][c[j] - 1] == a);
            if (eq) {
                D[idx] = D[idx - diag] + 1;
            } else {
                int32_t best = 0;
                for (size_t j = 0; j < m; ++j) best = std::max(best, D[idx - g.strides[j]]);
                D[idx] = best;
            }
        }
        ++idx;
    } while (g.next(c));

    LcsResult r;
    r.length = D[g.total - 1];
    if (!want_witness) return r;

    std::vector<std::vector<int>> tuples;
    for (size_t j = 0; j < m; ++j) c[j] = dims[j] - 1;
    idx = g.total - 1;
    while (true) {
        bool edge = false;
        for (int v : c) edge |= (v == 0);
        if (edge || D[idx] == 0) break;
        Symbol a = s[0][c[0] - 1];
        bool eq = true;
        for (size_t j = 1; j < m && eq; ++j) eq = (s[j][c[j] - 1] == a);
        if (eq) {
            tuples.push_back(c);
            for (auto& v : c) --v;
            idx -= diag;
            continue;
        }
        for (size_t j = 0; j < m; ++j) {
            if (D[idx - g.strides[j]] == D[idx]) {
                --c[j];
                idx -= g.strides[j];
                break;
            }
        }
    }
    std::reverse(tuples.begin(), tuples.end());
    r.witness = make_alignment(make_sequences(s), std::move(tuples));
    return r;
}

std::vector<Seq> raw_of(const std::vector<Sequence>& strings) {
    std::vector<Seq> raw;
    raw.reserve(strings.size());
    for (const auto& s : strings) raw.push_back(s.symbols);
    return raw;
}

}  // namespace

LcsResult lcs_exact(const std::vector<Sequence>& strings) {
    if (strings.empty()) throw std::invalid_argument("empty sequence list");
    return lcs_table(raw_of(strings), true);
}

int lcs_length(const std::vector<Seq>& strings) { return lcs_table(strings, false).length; }

int alignment_distance_exact(const std::vector<Sequence>& strings) {
    if (strings.empty()) throw std::invalid_argument("empty sequence list");
    for (const auto& s : strings)
        if (s.size() != strings[0].size()) throw std::invalid_argument("unequal lengths");
    return static_cast<int>(strings[0].size()) - lcs_table(raw_of(strings), false).length;
}

Rational generalized_cost(const std::vector<Seq>& windows) {
    if (windows.empty()) throw std::invalid_argument("empty window list");
    const int64_t m = static_cast<int64_t>(windows.size());
    int64_t total = 0;
    for (const auto& w : windows) total += static_cast<int64_t>(w.size());
    int64_t L = m >= 2 ? lcs_length(windows) : static_cast<int64_t>(windows[0].size());
    return {total - m * L, m};
}

// Minimal candidates: a prefix (i_1..i_{m-1}) with equal symbols yields at most one
// minimal l-candidate, namely the first occurrence in s_m past `low` provided it
// stays below `high`. `low` comes from a prefix-min table of the previous level
// taken over all tuples strictly below in the first m-1 coordinates.
std::vector<CandidateLevel> candidate_levels(const std::vector<Sequence>& strings) {
    const size_t m = strings.size();
    if (m < 2) throw std::invalid_argument("need at least two strings");
    constexpr int kInf = 1 << 30;

    std::vector<int> dims(m - 1);
    for (size_t j = 0; j + 1 < m; ++j) dims[j] = static_cast<int>(strings[j].size()) + 1;
    Grid g(dims);

    std::map<Symbol, std::vector<int>> occ;  // positions in s_m
    const Sequence& last = strings[m - 1];
    for (int i = 1; i <= static_cast<int>(last.size()); ++i) occ[last.at(i)].push_back(i);

    std::vector<CandidateLevel> levels;
    levels.push_back({std::vector<int>(m, 0)});
    std::vector<int> prev(g.total, 0);  // prefix-min of level 0: the origin dominates everything

    std::vector<int> c(m - 1, 0);
    while (true) {
        CandidateLevel cur;
        std::vector<int> mark(g.total, kInf);
        std::fill(c.begin(), c.end(), 0);
        int high = kInf;
        size_t idx = 0;
        do {
            if (c.back() == 0) high = kInf;  // new (i_1..i_{m-2}) prefix
            bool edge = false;
            for (int v : c) edge |= (v == 0);
            if (!edge) {
                Symbol a = strings[0].at(c[0]);
                bool eq = true;
                for (size_t j = 1; j + 1 < m && eq; ++j) eq = (strings[j].at(c[j]) == a);
                size_t below = idx;
                for (size_t st : g.strides) below -= st;
                int low = eq ? prev[below] : kInf;
                if (low < kInf) {
                    auto it = occ.find(a);
                    if (it != occ.end()) {
                        auto p = std::upper_bound(it->second.begin(), it->second.end(), low);
                        if (p != it->second.end() && *p < high) {
                            high = *p;
                            mark[idx] = *p;
                            std::vector<int> tup(c);
                            tup.push_back(*p);
                            cur.push_back(std::move(tup));
                        }
                    }
                }
            }
            ++idx;
        } while (g.next(c));
        if (cur.empty()) break;

        // prefix-min sweep, one dimension at a time
        for (size_t d = 0; d < dims.size(); ++d) {
            std::fill(c.begin(), c.end(), 0);
            idx = 0;
            do {
                if (c[d] > 0) mark[idx] = std::min(mark[idx], mark[idx - g.strides[d]]);
                ++idx;
            } while (g.next(c));
        }
        prev = std::move(mark);
        levels.push_back(std::move(cur));
    }
    return levels;
}

int lcs_candidates(const std::vector<Sequence>& strings) {
    if (strings.empty()) throw std::invalid_argument("empty sequence list");
    return static_cast<int>(candidate_levels(strings).size()) - 1;
}

LcsResult lcs_candidates_witness(const std::vector<Sequence>& strings) {
    if (strings.empty()) throw std::invalid_argument("empty sequence list");
    auto levels = candidate_levels(strings);
    LcsResult r;
    r.length = static_cast<int>(levels.size()) - 1;
    std::vector<std::vector<int>> chain;
    if (r.length > 0) chain.push_back(levels.back().front());
    for (int l = r.length - 1; l >= 1; --l) {
        const auto& above = chain.back();
        for (const auto& t : levels[static_cast<size_t>(l)]) {
            bool below = true;
            for (size_t j = 0; j < t.size() && below; ++j) below = t[j] < above[j];
            if (below) {
                chain.push_back(t);
                break;
            }
        }
        if (chain.size() != static_cast<size_t>(r.length - l + 1)) throw std::logic_error("broken candidate chain");
    }
    std::reverse(chain.begin(), chain.end());
    r.witness = make_alignment(strings, std::move(chain));
    return r;
}

}  // namespace msa
