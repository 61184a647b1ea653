#pragma once

#include <optional>
#include <vector>

#include "msa/exact_core.hpp"
#include "msa/rational.hpp"
#include "msa/similarity_dp.hpp"

namespace msa {

struct CoverMember {
    IndexSet unaligned;  // L_j = unaligned s_1 indices of sigma_j
    Alignment sigma;     // over the group's strings
};

struct CoverSet {
    std::vector<CoverMember> members;
    bool entered_loop = false;
};

// Throws std::domain_error when the group's distance exceeds theta*n.
CoverSet enumerate_alignments(const std::vector<Sequence>& group, const Exact& theta);

// Full-width witness: every tuple has one coordinate per input string.
std::optional<Alignment> multi_align(const std::vector<Sequence>& strings, const Exact& theta);

struct GapVerdict {
    bool bit = false;
    std::optional<Alignment> witness;
};

GapVerdict gap_multi_align_dist(const std::vector<Sequence>& strings, const Exact& theta);
// (2 - 3 theta / 16) * theta * n
Exact gap_threshold(const Exact& theta, int n);

struct ApproxAlignment {
    int cost = 0;  // |unaligned s_1|
    Alignment witness;
    Exact theta;   // operative sweep level
    int level = 0;
};

std::vector<Exact> large_align_grid(int n, const Exact& eps);
ApproxAlignment large_align(const std::vector<Sequence>& strings, const Exact& eps);

struct GroupAlignment {
    int cost = 0;
    Alignment witness;
    IndexSet deleted;                  // union of the groups' unaligned s_1 sets
    std::vector<std::vector<int>> groups;  // 0-based string indices, each starting with 0
    std::vector<IndexSet> group_deleted;
};

GroupAlignment group_align(const std::vector<Sequence>& strings, int c, const Exact& eps);

// Keep only tuples whose s_1 index lies in keep; merge per-group alignments that share s_1.
Alignment join_on_s1(const std::vector<Sequence>& strings, const std::vector<std::vector<int>>& groups,
                     const std::vector<Alignment>& parts, const IndexSet& keep);

}  // namespace msa
