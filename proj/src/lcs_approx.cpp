#include "msa/lcs_approx.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace msa {

namespace {

// s_1 restricted to `keep`, with the map from restricted positions back to s_1.
struct Restricted {
    Sequence seq;
    std::vector<int> to_s1;  // 1-based restricted index -> s_1 index, slot 0 unused
};

Restricted restrict_to(const Sequence& s, const IndexSet& keep) {
    Restricted r{{s.id, {}}, {0}};
    for (int i : keep) {
        r.seq.symbols.push_back(s.at(i));
        r.to_s1.push_back(i);
    }
    return r;
}

// LCS of the restricted s_1 with the other strings, aligned over (s_1, others...) in original coordinates.
LcsWitness lcs_through(const Sequence& s1, const Restricted& head, const std::vector<Sequence>& others) {
    LcsWitness w;
    std::vector<std::vector<int>> tuples;
    if (others.empty()) {
        for (size_t k = 1; k < head.to_s1.size(); ++k) tuples.push_back({head.to_s1[k]});
    } else {
        std::vector<Sequence> call{head.seq};
        call.insert(call.end(), others.begin(), others.end());
        auto r = lcs_candidates_witness(call);
        tuples = std::move(r.witness.tuples);
        for (auto& t : tuples) t[0] = head.to_s1[static_cast<size_t>(t[0])];
    }
    for (const auto& t : tuples) {
        w.s1_indices.push_back(t[0]);
        w.symbols.push_back(s1.at(t[0]));
    }
    std::vector<Sequence> ctx{s1};
    ctx.insert(ctx.end(), others.begin(), others.end());
    w.alignment = make_alignment(ctx, std::move(tuples));
    return w;
}

IndexSet all_indices(int n) {
    IndexSet out;
    for (int i = 1; i <= n; ++i) out.push_back(i);
    return out;
}

}  // namespace

int64_t lcs_cover_cap(const Exact& lambda) { return ceil_int(Exact(2) / lambda); }

LcsCover enumerate_lcs(const std::vector<Sequence>& group, const Exact& lambda) {
    if (group.empty()) throw std::invalid_argument("empty group");
    if (lambda <= 0 || lambda > 1) throw std::invalid_argument("lambda must lie in (0, 1]");
    const int n = static_cast<int>(group[0].size());
    const std::vector<Sequence> rest(group.begin() + 1, group.end());

    LcsCover cover;
    IndexSet unused = all_indices(n);
    const int64_t cap = lcs_cover_cap(lambda);
    for (int k = 1; !unused.empty() && static_cast<int64_t>(cover.members.size()) < cap; ++k) {
        LcsWitness w = lcs_through(group[0], restrict_to(group[0], unused), rest);
        if (k == 1 && Exact(w.length()) < lambda * n) throw std::domain_error("group LCS below lambda*n");
        if (w.length() == 0 || Exact(w.length()) < lambda * n - lambda * lambda * n * (k - 1) / 2) break;
        IndexSet next;
        std::set_difference(unused.begin(), unused.end(), w.s1_indices.begin(), w.s1_indices.end(),
                            std::back_inserter(next));
        unused = std::move(next);
        cover.members.push_back(std::move(w));
    }
    return cover;
}

LcsGapVerdict gap_multi_lcs(const std::vector<Sequence>& strings, const Exact& lambda) {
    const int m = static_cast<int>(strings.size());
    if (m < 2) throw std::invalid_argument("need at least two strings");
    if (lambda <= 0 || lambda > 1) throw std::invalid_argument("lambda must lie in (0, 1]");
    const int n = static_cast<int>(strings[0].size());
    const int half = (m + 1) / 2;
    const std::vector<Sequence> g1(strings.begin(), strings.begin() + half);
    const std::vector<Sequence> g2(strings.begin() + half, strings.end());

    LcsGapVerdict v;
    LcsCover cover;
    try {
        cover = enumerate_lcs(g1, lambda);
    } catch (const std::domain_error&) {
        return v;  // LCS(G_1) bounds LCS of all strings
    }
    const Exact need = lambda * lambda * n / 2;
    for (const auto& mb : cover.members) {
        LcsWitness w = lcs_through(strings[0], restrict_to(strings[0], mb.s1_indices), g2);
        if (Exact(w.length()) < need) continue;
        // tuples from the G_2 call only carry s_1 and G_2; fill G_1 from the member
        std::vector<std::vector<int>> tuples;
        size_t p = 0;
        for (const auto& t : w.alignment.tuples) {
            while (mb.alignment.tuples[p][0] != t[0]) ++p;
            std::vector<int> full(static_cast<size_t>(m));
            for (int j = 0; j < half; ++j) full[static_cast<size_t>(j)] = mb.alignment.tuples[p][static_cast<size_t>(j)];
            for (int j = half; j < m; ++j) full[static_cast<size_t>(j)] = t[static_cast<size_t>(j - half + 1)];
            tuples.push_back(std::move(full));
        }
        w.alignment = make_alignment(strings, std::move(tuples));
        if (!v.witness || w.length() > v.witness->length()) v.witness = std::move(w);
    }
    v.bit = v.witness.has_value();
    return v;
}

std::vector<Exact> lcs_lambda_grid(int n, const Exact& eps) {
    if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
    const Exact step = 1 + (eps < Exact(5, 2) ? eps : Exact(5, 2)) / 5;
    std::vector<Exact> grid{Exact(1)};
    while (grid.back() * n > 1) grid.push_back(grid.back() / step);
    return grid;
}

LcsApprox multi_lcs_approx(const std::vector<Sequence>& strings, const Exact& eps) {
    if (strings.size() < 2) throw std::invalid_argument("need at least two strings");
    const int n = static_cast<int>(strings[0].size());
    LcsApprox out;
    out.witness.alignment = make_alignment(strings, {});
    out.lambda = 0;
    if (n == 0) return out;
    auto grid = lcs_lambda_grid(n, eps);
    for (size_t i = 0; i < grid.size(); ++i) {
        auto v = gap_multi_lcs(strings, grid[i]);
        if (!v.bit) continue;
        out.witness = std::move(*v.witness);
        out.lambda = grid[i];
        out.level = static_cast<int>(i);
        break;
    }
    return out;
}

}  // namespace msa
