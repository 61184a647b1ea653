#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <limits>

#include "helpers.hpp"
#include "msa/similarity_dp.hpp"
#include "msa/testkit.hpp"

using namespace msa;

namespace {

// best overlap over every common alignment of cumulative cost <= d*m (equal lengths)
std::optional<int> brute_overlap(const std::vector<Sequence>& s, const IndexSet& target, int d, bool maximize) {
    const int n = static_cast<int>(s[0].size());
    std::optional<int> best;
    for (const auto& cs : brute_subsequences(s, {n - d, -1})) {
        IndexSet unaligned;
        for (int i = 1; i <= n; ++i)
            if (!std::binary_search(cs.s1_indices.begin(), cs.s1_indices.end(), i)) unaligned.push_back(i);
        int v = intersection_size(unaligned, target);
        if (!best || (maximize ? v > *best : v < *best)) best = v;
    }
    return best;
}

IndexSet random_set(std::mt19937_64& g, int n) {
    IndexSet s;
    for (int i = 1; i <= n; ++i)
        if (g() % 2) s.push_back(i);
    return s;
}

void check_result(const std::vector<Sequence>& s, const SimilarityResult& r, const IndexSet& target, int d) {
    const int m = static_cast<int>(s.size());
    CHECK(check_alignment(s, r.sigma).empty());
    CHECK(r.cumulative_cost <= d * m);
    int cum = 0;
    for (const auto& u : r.sigma.unaligned) cum += static_cast<int>(u.size());
    CHECK(cum == r.cumulative_cost);
    CHECK(r.unaligned_s1 == r.sigma.unaligned[0]);
    CHECK(r.aligned_s1.size() + r.unaligned_s1.size() == s[0].size());
    CHECK(intersection_size(r.unaligned_s1, target) == r.overlap);
}

}  // namespace

TEST_CASE("max_del_similar examples") {
    auto r = max_del_similar(S({"ab", "ab"}), {}, 1);
    CHECK(r.feasible);
    CHECK(r.overlap == 0);
    r = max_del_similar(S({"ab", "ab"}), {1}, 1);
    CHECK(r.overlap == 1);
    CHECK(r.unaligned_s1 == IndexSet{1});
    CHECK(r.sigma.tuples == std::vector<std::vector<int>>{{2, 2}});
    r = max_del_similar(S({"abc", "abc", "abc"}), {2}, 0);
    CHECK(r.overlap == 0);
    CHECK(r.sigma.tuples.size() == 3);
    CHECK_THROWS(max_del_similar(S({"ab", "ab"}), {}, -1));
    CHECK_THROWS(max_del_similar(S({"ab", "ab"}), {}, 3));
}

TEST_CASE("min_del_similar examples") {
    auto r = min_del_similar(S({"ab", "ab"}), {{1, 2}}, 0);
    CHECK(r.overlap == 0);
    r = min_del_similar(S({"ab", "ba"}), {{1}}, 1);
    CHECK(r.overlap == 0);
    CHECK(r.unaligned_s1 == IndexSet{2});
    r = min_del_similar(S({"abc", "axc"}), {{2}, {3}}, 1);
    CHECK(r.overlap == 1);
    CHECK(std::binary_search(r.unaligned_s1.begin(), r.unaligned_s1.end(), 2));
    CHECK_THROWS(min_del_similar(S({"ab", "ab"}), {}, 1));
}

TEST_CASE("infeasible budgets are reported") {
    auto r = max_del_similar(S({"aaa", "bbb"}), {1}, 1);
    CHECK_FALSE(r.feasible);
    r = min_del_similar(S({"aaa", "bbb"}), {{1}}, 3);
    CHECK(r.feasible);
    CHECK(r.overlap == 1);
}

TEST_CASE("backtrack examples") {
    auto s = S({"abcd", "abcd"});
    auto t = fill_similarity(s, {}, 0, Objective::maximize);
    auto b = backtrack(t, s, {5, 5}, 0);
    CHECK(b.aligned_s1 == IndexSet{1, 2, 3, 4});
    CHECK(b.unaligned_s1.empty());
    auto s2 = S({"ab", "ab"});
    auto t2 = fill_similarity(s2, {1}, 1, Objective::maximize);
    auto b2 = backtrack(t2, s2, {3, 3}, 2);
    CHECK(b2.unaligned_s1 == IndexSet{1});
    CHECK_THROWS(backtrack(fill_similarity(S({"aa", "bb"}), {}, 0, Objective::maximize), S({"aa", "bb"}), {3, 3}, 0));
}

TEST_CASE("predecessor links respect the cost order") {
    std::mt19937_64 g(21);
    for (int it = 0; it < 40; ++it) {
        int m = 2 + static_cast<int>(g() % 2);
        int n = 1 + static_cast<int>(g() % 5);
        auto s = random_strings(g, m, n, 2);
        int d = static_cast<int>(g() % (n + 1));
        auto t = fill_similarity(s, random_set(g, n), d, it % 2 ? Objective::maximize : Objective::minimize);
        const size_t width = static_cast<size_t>(t.budget) + 1;
        for (size_t idx = 1; idx < t.cells(); ++idx)
            for (size_t x = 0; x < width; ++x) {
                if (t.value[idx * width + x] == DpTable::kNone) continue;
                uint32_t pick = t.choice[idx * width + x];
                size_t pidx = idx;
                size_t px = x;
                for (int j = 0; j < m; ++j)
                    if (pick == 0 || (pick & (1u << j))) {
                        pidx -= t.strides[j];
                        if (pick != 0) --px;
                    }
                CHECK(px <= x);
                CHECK(t.value[pidx * width + px] != DpTable::kNone);
            }
    }
}

TEST_CASE("oracle equivalence and witness consistency") {
    std::mt19937_64 g(22);
    for (int it = 0; it < 200; ++it) {
        int m = 2 + static_cast<int>(g() % 2);
        int n = 1 + static_cast<int>(g() % 7);
        auto s = random_strings(g, m, n, 2 + static_cast<int>(g() % 2));
        int d = static_cast<int>(g() % (n + 1));
        IndexSet S1 = random_set(g, n);
        std::vector<IndexSet> sets{random_set(g, n), random_set(g, n)};

        auto mx = max_del_similar(s, S1, d);
        auto bmx = brute_overlap(s, S1, d, true);
        CHECK(mx.feasible == bmx.has_value());
        if (mx.feasible) {
            CHECK(mx.overlap == *bmx);
            check_result(s, mx, S1, d);
        }
        auto mn = min_del_similar(s, sets, d);
        auto bmn = brute_overlap(s, set_union(sets), d, false);
        CHECK(mn.feasible == bmn.has_value());
        if (mn.feasible) {
            CHECK(mn.overlap == *bmn);
            check_result(s, mn, set_union(sets), d);
        }
    }
}

TEST_CASE("overlap is monotone in the budget") {
    std::mt19937_64 g(23);
    for (int it = 0; it < 60; ++it) {
        int m = 2 + static_cast<int>(g() % 2);
        int n = 2 + static_cast<int>(g() % 6);
        auto s = random_strings(g, m, n, 2);
        IndexSet S1 = random_set(g, n);
        int prev_max = -1, prev_min = std::numeric_limits<int>::max();
        for (int d = 0; d <= n; ++d) {
            auto mx = max_del_similar(s, S1, d);
            auto mn = min_del_similar(s, {S1}, d);
            if (!mx.feasible) continue;
            CHECK(mx.overlap >= prev_max);
            CHECK(mn.overlap <= prev_min);
            prev_max = mx.overlap;
            prev_min = mn.overlap;
        }
    }
}

TEST_CASE("band fast path agrees with the full table") {
    std::mt19937_64 g(24);
    for (int it = 0; it < 150; ++it) {
        int m = 2 + static_cast<int>(g() % 3);
        int n = 1 + static_cast<int>(g() % 7);
        auto s = random_strings(g, m, n, 2 + static_cast<int>(g() % 2));
        int d = static_cast<int>(g() % (n + 1));
        IndexSet S1 = random_set(g, n);
        auto full = max_del_similar(s, S1, d);
        auto fast = max_del_similar(s, S1, d, {true});
        CHECK(full.feasible == fast.feasible);
        if (full.feasible) {
            CHECK(full.overlap == fast.overlap);
            CHECK(full.unaligned_s1 == fast.unaligned_s1);
            CHECK(full.sigma.tuples == fast.sigma.tuples);
        }
        auto fullm = min_del_similar(s, {S1}, d);
        auto fastm = min_del_similar(s, {S1}, d, {true});
        CHECK(fullm.feasible == fastm.feasible);
        if (fullm.feasible) {
            CHECK(fullm.overlap == fastm.overlap);
            CHECK(fullm.sigma.tuples == fastm.sigma.tuples);
        }
    }
}
