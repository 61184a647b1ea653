#include "msa/large_align.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace msa {

namespace {

std::vector<Sequence> pick(const std::vector<Sequence>& strings, const std::vector<int>& idx) {
    std::vector<Sequence> out;
    for (int i : idx) out.push_back(strings[static_cast<size_t>(i)]);
    return out;
}

bool equal_lengths(const std::vector<Sequence>& s) {
    for (const auto& x : s)
        if (x.size() != s[0].size()) return false;
    return true;
}

// n_1 - LCS(group) <= d, decided by the banded engine
bool distance_within(const std::vector<Sequence>& group, int d) {
    if (group.size() < 2) return true;
    if (d < 0) return false;
    if (equal_lengths(group)) return banded_distance(group, d).has_value();
    const int m = static_cast<int>(group.size());
    int hmax = m * d - m * static_cast<int>(group[0].size());
    std::vector<Seq> raw;
    for (const auto& s : group) {
        hmax += static_cast<int>(s.size());
        raw.push_back(s.symbols);
    }
    return hmax >= 0 && banded_cumulative(raw, hmax).has_value();
}

IndexSet complement(const IndexSet& u, int n) {
    IndexSet out;
    for (int i = 1; i <= n; ++i)
        if (!std::binary_search(u.begin(), u.end(), i)) out.push_back(i);
    return out;
}

// leftmost embedding of s_1 into every other string, if one exists
std::optional<Alignment> full_embedding(const std::vector<Sequence>& strings) {
    const size_t m = strings.size();
    std::vector<std::vector<int>> tuples(strings[0].size(), std::vector<int>(m));
    for (size_t i = 0; i < strings[0].size(); ++i) tuples[i][0] = static_cast<int>(i) + 1;
    for (size_t j = 1; j < m; ++j) {
        size_t k = 0;
        for (size_t i = 0; i < strings[0].size(); ++i) {
            while (k < strings[j].size() && strings[j].symbols[k] != strings[0].symbols[i]) ++k;
            if (k == strings[j].size()) return std::nullopt;
            tuples[i][j] = static_cast<int>(++k);
        }
    }
    return make_alignment(strings, std::move(tuples));
}

// smallest d with distance_within(group, d)
int group_distance(const std::vector<Sequence>& group) {
    if (group.size() < 2) return 0;
    std::vector<Seq> raw;
    for (const auto& s : group) raw.push_back(s.symbols);
    return static_cast<int>(group[0].size()) - lcs_length(raw);
}

std::pair<std::vector<int>, std::vector<int>> split_groups(int m) {
    const int half = (m + 1) / 2;
    std::pair<std::vector<int>, std::vector<int>> g{{}, {0}};
    for (int j = 0; j < half; ++j) g.first.push_back(j);
    for (int j = half; j < m; ++j) g.second.push_back(j);
    return g;
}

}  // namespace

Exact gap_threshold(const Exact& theta, int n) { return (2 - 3 * theta / 16) * theta * n; }

Alignment join_on_s1(const std::vector<Sequence>& strings, const std::vector<std::vector<int>>& groups,
                     const std::vector<Alignment>& parts, const IndexSet& keep) {
    const size_t m = strings.size();
    std::vector<std::map<int, const std::vector<int>*>> by_s1(groups.size());
    for (size_t g = 0; g < groups.size(); ++g)
        for (const auto& t : parts[g].tuples) by_s1[g][t[0]] = &t;
    std::vector<std::vector<int>> tuples;
    for (int i : keep) {
        std::vector<int> full(m, 0);
        for (size_t g = 0; g < groups.size(); ++g) {
            auto it = by_s1[g].find(i);
            if (it == by_s1[g].end()) throw std::logic_error("kept index is unaligned in a group");
            for (size_t k = 0; k < groups[g].size(); ++k) full[static_cast<size_t>(groups[g][k])] = (*it->second)[k];
        }
        tuples.push_back(std::move(full));
    }
    return make_alignment(strings, std::move(tuples));
}

CoverSet enumerate_alignments(const std::vector<Sequence>& group, const Exact& theta) {
    if (group.empty()) throw std::invalid_argument("empty group");
    const int n = static_cast<int>(group[0].size());
    const int d = static_cast<int>(floor_int(theta * n));
    if (!distance_within(group, d)) throw std::domain_error("group distance exceeds theta*n");

    CoverSet cover;
    if (group.size() == 1) {
        cover.members.push_back({{}, *full_embedding(group)});
        return cover;
    }
    auto lcs = lcs_exact(group);
    cover.members.push_back({lcs.witness.unaligned[0], lcs.witness});
    if (!(Exact(lcs.length) < n - 3 * theta * n / 4)) return cover;

    cover.entered_loop = true;
    for (int i = 2;; ++i) {
        std::vector<IndexSet> prev;
        for (const auto& mb : cover.members) prev.push_back(mb.unaligned);
        auto r = min_del_similar(group, prev, d);
        if (!r.feasible) throw std::logic_error("cost-theta*n alignment vanished");
        const int inter = intersection_size(r.unaligned_s1, set_union(prev));
        if (Exact(inter) >= theta * theta * n * (i - 1) / 4) break;
        cover.members.push_back({r.unaligned_s1, r.sigma});
        if (i > 4 * n + 8) throw std::logic_error("cover enumeration did not terminate");
    }
    return cover;
}

std::optional<Alignment> multi_align(const std::vector<Sequence>& strings, const Exact& theta) {
    const int m = static_cast<int>(strings.size());
    if (m < 2) throw std::invalid_argument("need at least two strings");
    if (theta <= 0 || theta > 1) throw std::invalid_argument("theta must lie in (0, 1]");
    const int n = static_cast<int>(strings[0].size());
    const auto [g1, g2] = split_groups(m);
    auto G1 = pick(strings, g1);
    auto G2 = pick(strings, g2);

    const int d = static_cast<int>(floor_int(theta * n));
    if (!distance_within(G1, d) || !distance_within(G2, d)) return std::nullopt;
    CoverSet cover = enumerate_alignments(G1, theta);
    const Exact limit = gap_threshold(theta, n);
    for (const auto& mb : cover.members) {
        auto r = max_del_similar(G2, mb.unaligned, d);
        if (!r.feasible) continue;
        IndexSet u = set_union({mb.unaligned, r.unaligned_s1});
        if (Exact(static_cast<int>(u.size())) > limit) continue;
        return join_on_s1(strings, {g1, g2}, {mb.sigma, r.sigma}, complement(u, n));
    }
    return std::nullopt;
}

GapVerdict gap_multi_align_dist(const std::vector<Sequence>& strings, const Exact& theta) {
    GapVerdict v;
    v.witness = multi_align(strings, theta);
    v.bit = v.witness.has_value();
    return v;
}

std::vector<Exact> large_align_grid(int n, const Exact& eps) {
    if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
    const Exact ratio = 1 + eps / 4;
    std::vector<Exact> grid{Exact(1)};
    Exact power = 1;
    while (power < n) {
        power *= ratio;
        grid.push_back(1 / power);
    }
    return grid;
}

namespace {

struct CachedGrid {
    std::vector<Exact> theta;
    std::vector<int64_t> floor_n;  // floor(theta * n)
};

// the exact powers grow long, so each (n, eps) grid is built once per process
const CachedGrid& cached_grid(int n, const Exact& eps) {
    static std::mutex mu;
    static std::map<std::pair<int, Exact>, CachedGrid> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, eps);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    CachedGrid g;
    g.theta = large_align_grid(n, eps);
    for (const auto& t : g.theta) g.floor_n.push_back(floor_int(t * n));
    return cache.emplace(key, std::move(g)).first->second;
}

}  // namespace

ApproxAlignment large_align(const std::vector<Sequence>& strings, const Exact& eps) {
    if (strings.size() < 2) throw std::invalid_argument("need at least two strings");
    const CachedGrid& cg = cached_grid(static_cast<int>(strings[0].size()), eps);
    const auto& grid = cg.theta;
    ApproxAlignment out;
    if (distance_within(strings, 0)) {
        out.witness = *full_embedding(strings);
        out.theta = 0;
        out.level = static_cast<int>(grid.size());
        return out;
    }
    // levels below both group distances are rejected by multi_align's first test
    const auto [g1, g2] = split_groups(static_cast<int>(strings.size()));
    const int dmin = std::max(group_distance(pick(strings, g1)), group_distance(pick(strings, g2)));
    for (int i = static_cast<int>(grid.size()) - 1; i >= 0; --i) {
        if (cg.floor_n[static_cast<size_t>(i)] < dmin) continue;
        auto w = multi_align(strings, grid[static_cast<size_t>(i)]);
        if (!w) continue;
        out.cost = static_cast<int>(w->unaligned[0].size());
        out.witness = std::move(*w);
        out.theta = grid[static_cast<size_t>(i)];
        out.level = i;
        return out;
    }
    throw std::logic_error("theta = 1 must always be accepted");
}

GroupAlignment group_align(const std::vector<Sequence>& strings, int c, const Exact& eps) {
    if (c < 2 || c % 2 != 0) throw std::invalid_argument("c must be even and at least 2");
    const int m = static_cast<int>(strings.size());
    if (m < 2) throw std::invalid_argument("need at least two strings");
    const int buckets = c / 2;
    const int rest = m - 1;
    GroupAlignment out;
    int next = 1;
    for (int b = 0; b < buckets; ++b) {
        int size = rest / buckets + (b < rest % buckets ? 1 : 0);
        if (size == 0) continue;
        std::vector<int> g{0};
        for (int k = 0; k < size; ++k) g.push_back(next++);
        out.groups.push_back(std::move(g));
    }
    std::vector<Alignment> parts;
    for (const auto& g : out.groups) {
        auto r = large_align(pick(strings, g), eps);
        out.group_deleted.push_back(r.witness.unaligned[0]);
        parts.push_back(std::move(r.witness));
    }
    out.deleted = set_union(out.group_deleted);
    out.cost = static_cast<int>(out.deleted.size());
    out.witness = join_on_s1(strings, out.groups, parts, complement(out.deleted, static_cast<int>(strings[0].size())));
    return out;
}

}  // namespace msa
