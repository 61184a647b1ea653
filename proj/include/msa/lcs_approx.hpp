#pragma once

#include <optional>
#include <vector>

#include "msa/exact_core.hpp"
#include "msa/rational.hpp"
#include "msa/similarity_dp.hpp"

namespace msa {

// A common subsequence carried with its s_1 positions and a full alignment.
struct LcsWitness {
    Seq symbols;
    IndexSet s1_indices;
    Alignment alignment;  // one coordinate per string of the call
    int length() const { return static_cast<int>(symbols.size()); }
};

struct LcsCover {
    std::vector<LcsWitness> members;  // pairwise disjoint on s_1
};

// Throws std::domain_error when LCS(group) < lambda * n.
LcsCover enumerate_lcs(const std::vector<Sequence>& group, const Exact& lambda);
// Members admitted before the stop never exceed this count.
int64_t lcs_cover_cap(const Exact& lambda);

struct LcsGapVerdict {
    bool bit = false;
    std::optional<LcsWitness> witness;
};

LcsGapVerdict gap_multi_lcs(const std::vector<Sequence>& strings, const Exact& lambda);

struct LcsApprox {
    LcsWitness witness;
    Exact lambda;  // accepted sweep level, 0 when nothing was accepted
    int level = -1;
};

// 1, 1/(1+e'), 1/(1+e')^2, ... down to the first value <= 1/n, with e' = min(eps, 5/2)/5.
std::vector<Exact> lcs_lambda_grid(int n, const Exact& eps);
LcsApprox multi_lcs_approx(const std::vector<Sequence>& strings, const Exact& eps);

}  // namespace msa
