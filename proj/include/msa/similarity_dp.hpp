#pragma once

#include <cstdint>
#include <vector>

#include "msa/exact_core.hpp"

namespace msa {

using IndexSet = std::vector<int>;  // sorted, 1-based indices into s_1

enum class Objective { maximize, minimize };

struct SimilarityOptions {
    // restrict states to |i_j - i_1| <= d; only applied to equal-length inputs
    bool band = false;
};

// D[i_1..i_m, x]: best overlap of s_1's unaligned prefix indices with the target
// at cumulative cost <= x. Every string carries a trailing sentinel that only
// matches itself, so the last cell is (n_1+1, ..., n_m+1).
struct DpTable {
    Objective objective = Objective::maximize;
    std::vector<Seq> strings;  // with sentinel
    std::vector<int> dims;
    std::vector<size_t> strides;
    int budget = 0;                 // X, see similarity_budget
    std::vector<int16_t> value;     // cell * (X+1) + x
    std::vector<uint32_t> choice;   // 0: match, otherwise deletion mask (bit j = string j+1)
    std::vector<char> target;       // membership of s_1 indices, 1-based

    static constexpr int16_t kNone = INT16_MIN;
    size_t cells() const { return value.size() / static_cast<size_t>(budget + 1); }
    int16_t at(const std::vector<int>& cell, int x) const;
};

// Cumulative budget X for an s_1-side budget d: sum_j n_j - m*n_1 + m*d (d*m for equal lengths).
int similarity_budget(const std::vector<Sequence>& strings, int d);

DpTable fill_similarity(const std::vector<Sequence>& strings, const IndexSet& target, int d, Objective obj,
                        SimilarityOptions opts = {});

struct BacktrackResult {
    IndexSet aligned_s1;    // L
    IndexSet unaligned_s1;  // L-bar
    Alignment sigma;
    int cumulative_cost = 0;
};

// Entry is a cell (one coordinate per string, sentinel positions allowed) and a budget x.
BacktrackResult backtrack(const DpTable& table, const std::vector<Sequence>& strings, const std::vector<int>& cell,
                          int x);

struct SimilarityResult {
    bool feasible = false;
    Alignment sigma;
    IndexSet aligned_s1;
    IndexSet unaligned_s1;
    int overlap = 0;
    int cumulative_cost = 0;
};

SimilarityResult max_del_similar(const std::vector<Sequence>& strings, const IndexSet& S, int d,
                                 SimilarityOptions opts = {});
SimilarityResult min_del_similar(const std::vector<Sequence>& strings, const std::vector<IndexSet>& sets, int d,
                                 SimilarityOptions opts = {});

IndexSet set_union(const std::vector<IndexSet>& sets);
int intersection_size(const IndexSet& a, const IndexSet& b);

}  // namespace msa
