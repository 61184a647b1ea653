#include "msa/similarity_dp.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>

namespace msa {

namespace {

constexpr Symbol kSentinel = std::numeric_limits<Symbol>::min();
constexpr size_t kMaxEntries = size_t{1} << 28;

struct Move {
    uint32_t mask;
    int size;
    size_t offset;  // linear distance to the predecessor cell
};

// non-empty deletion subsets in lexicographic order of their sorted member lists
std::vector<Move> deletion_moves(const std::vector<size_t>& strides) {
    const int m = static_cast<int>(strides.size());
    std::vector<std::vector<int>> lists;
    for (uint32_t mask = 1; mask < (1u << m); ++mask) {
        std::vector<int> l;
        for (int j = 0; j < m; ++j)
            if (mask & (1u << j)) l.push_back(j);
        lists.push_back(l);
    }
    std::sort(lists.begin(), lists.end());
    std::vector<Move> moves;
    for (const auto& l : lists) {
        Move mv{0, static_cast<int>(l.size()), 0};
        for (int j : l) {
            mv.mask |= 1u << j;
            mv.offset += strides[j];
        }
        moves.push_back(mv);
    }
    return moves;
}

}  // namespace

int similarity_budget(const std::vector<Sequence>& strings, int d) {
    // cost <= d on s_1 means |sigma| >= n_1 - d; reduces to d*m for equal lengths
    int total = 0;
    for (const auto& s : strings) total += static_cast<int>(s.size());
    const int m = static_cast<int>(strings.size());
    return total - m * static_cast<int>(strings[0].size()) + m * d;
}

int16_t DpTable::at(const std::vector<int>& cell, int x) const {
    size_t idx = 0;
    for (size_t j = 0; j < cell.size(); ++j) idx += static_cast<size_t>(cell[j]) * strides[j];
    return value[idx * static_cast<size_t>(budget + 1) + static_cast<size_t>(x)];
}

DpTable fill_similarity(const std::vector<Sequence>& strings, const IndexSet& target, int d, Objective obj,
                        SimilarityOptions opts) {
    const size_t m = strings.size();
    if (m < 2) throw std::invalid_argument("need at least two strings");
    if (m > 16) throw std::invalid_argument("too many strings for the subset DP");
    int longest = 0;
    bool equal = true;
    for (const auto& s : strings) {
        longest = std::max(longest, static_cast<int>(s.size()));
        equal &= s.size() == strings[0].size();
    }
    if (d < 0 || d > longest) throw std::invalid_argument("budget d must lie in [0, n]");
    const int n1 = static_cast<int>(strings[0].size());

    DpTable t;
    t.objective = obj;
    t.budget = similarity_budget(strings, d);
    if (t.budget < 0) throw std::invalid_argument("budget below the length difference");
    t.target.assign(static_cast<size_t>(n1) + 2, 0);
    for (int i : target) {
        if (i < 1 || i > n1) throw std::invalid_argument("target index out of range");
        t.target[static_cast<size_t>(i)] = 1;
    }
    for (const auto& s : strings) {
        Seq x = s.symbols;
        x.push_back(kSentinel);
        t.strings.push_back(std::move(x));
        t.dims.push_back(static_cast<int>(s.size()) + 2);
    }
    t.strides.assign(m, 1);
    size_t cells = 1;
    for (size_t j = m; j-- > 0;) {
        t.strides[j] = cells;
        cells *= static_cast<size_t>(t.dims[j]);
    }
    const size_t width = static_cast<size_t>(t.budget) + 1;
    if (cells * width > kMaxEntries) throw std::length_error("similarity table too large");
    t.value.assign(cells * width, DpTable::kNone);
    t.choice.assign(cells * width, 0);

    const auto moves = deletion_moves(t.strides);
    size_t diag = 0;
    for (size_t st : t.strides) diag += st;
    const bool band = opts.band && equal;
    const bool maximize = obj == Objective::maximize;
    auto better = [&](int16_t v, int16_t best) {
        if (best == DpTable::kNone) return true;
        return maximize ? v > best : v < best;
    };

    for (size_t x = 0; x < width; ++x) t.value[x] = 0;
    std::vector<int> c(m, 0);
    for (size_t idx = 1; idx < cells; ++idx) {
        for (size_t j = m; j-- > 0;) {
            if (++c[j] < t.dims[j]) break;
            c[j] = 0;
        }
        if (band) {
            bool out = false;
            for (size_t j = 1; j < m; ++j) out |= std::abs(c[j] - c[0]) > d;
            if (out) continue;
        }
        bool all_pos = true;
        for (int v : c) all_pos &= v >= 1;
        bool match = all_pos;
        for (size_t j = 1; j < m && match; ++j) match = t.strings[j][c[j] - 1] == t.strings[0][c[0] - 1];
        const int16_t bonus = (c[0] >= 1 && c[0] <= n1 && t.target[static_cast<size_t>(c[0])]) ? 1 : 0;

        int16_t* out = &t.value[idx * width];
        uint32_t* why = &t.choice[idx * width];
        for (size_t x = 0; x < width; ++x) {
            int16_t best = DpTable::kNone;
            uint32_t pick = 0;
            if (match) {
                int16_t v = t.value[(idx - diag) * width + x];
                if (v != DpTable::kNone) best = v;
            }
            for (const auto& mv : moves) {
                if (static_cast<size_t>(mv.size) > x) continue;
                bool ok = true;
                for (size_t j = 0; j < m && ok; ++j)
                    if (mv.mask & (1u << j)) ok = c[j] >= 1 && c[j] <= t.dims[j] - 2;  // sentinels are never deleted
                if (!ok) continue;
                int16_t v = t.value[(idx - mv.offset) * width + x - static_cast<size_t>(mv.size)];
                if (v == DpTable::kNone) continue;
                if (mv.mask & 1u) v = static_cast<int16_t>(v + bonus);
                if (better(v, best)) {
                    best = v;
                    pick = mv.mask;
                }
            }
            out[x] = best;
            why[x] = pick;
        }
    }
    return t;
}

BacktrackResult backtrack(const DpTable& table, const std::vector<Sequence>& strings, const std::vector<int>& cell,
                          int x) {
    const size_t m = table.dims.size();
    if (cell.size() != m || x < 0 || x > table.budget) throw std::invalid_argument("bad backtrack entry");
    if (table.at(cell, x) == DpTable::kNone) throw std::invalid_argument("entry unreachable");
    const size_t width = static_cast<size_t>(table.budget) + 1;
    std::vector<int> c = cell;
    size_t idx = 0;
    for (size_t j = 0; j < m; ++j) idx += static_cast<size_t>(c[j]) * table.strides[j];
    BacktrackResult r;
    std::vector<std::vector<int>> tuples;
    while (idx != 0) {
        uint32_t pick = table.choice[idx * width + static_cast<size_t>(x)];
        if (pick == 0) {
            bool sentinel = c[0] == table.dims[0] - 1;
            if (!sentinel) tuples.push_back(c);
            for (size_t j = 0; j < m; ++j) {
                --c[j];
                idx -= table.strides[j];
            }
        } else {
            for (size_t j = 0; j < m; ++j)
                if (pick & (1u << j)) {
                    --c[j];
                    idx -= table.strides[j];
                    --x;
                    ++r.cumulative_cost;
                }
        }
    }
    std::reverse(tuples.begin(), tuples.end());
    for (const auto& tp : tuples) r.aligned_s1.push_back(tp[0]);
    r.sigma = make_alignment(strings, std::move(tuples));
    r.unaligned_s1 = r.sigma.unaligned[0];
    // the prefix below the entry cell is what was aligned or deleted
    const int top = std::min(cell[0], table.dims[0] - 2);
    r.unaligned_s1.erase(std::remove_if(r.unaligned_s1.begin(), r.unaligned_s1.end(), [&](int i) { return i > top; }),
                         r.unaligned_s1.end());
    return r;
}

IndexSet set_union(const std::vector<IndexSet>& sets) {
    IndexSet u;
    for (const auto& s : sets) u.insert(u.end(), s.begin(), s.end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    return u;
}

int intersection_size(const IndexSet& a, const IndexSet& b) {
    int k = 0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++k;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return k;
}

namespace {

SimilarityResult solve(const std::vector<Sequence>& strings, const IndexSet& target, int d, Objective obj,
                       SimilarityOptions opts) {
    if (strings.size() >= 2 && d >= 0 && similarity_budget(strings, d) < 0) return {};
    DpTable t = fill_similarity(strings, target, d, obj, opts);
    std::vector<int> final_cell(t.dims.size());
    for (size_t j = 0; j < final_cell.size(); ++j) final_cell[j] = t.dims[j] - 1;
    SimilarityResult r;
    int16_t v = t.at(final_cell, t.budget);
    if (v == DpTable::kNone) return r;
    auto b = backtrack(t, strings, final_cell, t.budget);
    r.feasible = true;
    r.sigma = std::move(b.sigma);
    r.aligned_s1 = std::move(b.aligned_s1);
    r.unaligned_s1 = std::move(b.unaligned_s1);
    r.cumulative_cost = b.cumulative_cost;
    r.overlap = intersection_size(r.unaligned_s1, target);
    if (r.overlap != v) throw std::logic_error("backtrack disagrees with table value");
    return r;
}

IndexSet normalized(IndexSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

}  // namespace

SimilarityResult max_del_similar(const std::vector<Sequence>& strings, const IndexSet& S, int d,
                                 SimilarityOptions opts) {
    return solve(strings, normalized(S), d, Objective::maximize, opts);
}

SimilarityResult min_del_similar(const std::vector<Sequence>& strings, const std::vector<IndexSet>& sets, int d,
                                 SimilarityOptions opts) {
    if (sets.empty()) throw std::invalid_argument("need at least one set");
    return solve(strings, set_union(sets), d, Objective::minimize, opts);
}

}  // namespace msa
