#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "msa/exact_core.hpp"
#include "msa/rational.hpp"

namespace msa {

struct Window {
    int seq = 1;    // 1-based string id
    int start = 1;  // 1-based
    int end = 0;    // inclusive; end = start - 1 is the empty window
    int length() const { return end - start + 1; }
    auto operator<=>(const Window&) const = default;
};

struct GridLayer {
    Exact tau;
    int h = 0;
    int l = 0;
    int gamma = 1;
    std::vector<Window> high;  // windows of length h (or truncated)
    std::vector<Window> low;   // windows of length l (or truncated)
};

struct WindowGrid {
    int d = 0;
    Exact theta;
    Exact eps;
    std::vector<GridLayer> layers;
    // distinct windows of all layers, ordered by start then length
    std::vector<Window> all() const;
};

// offset shifts starts so windows of a substring keep coordinates of the parent string
WindowGrid window_gen(int seq, int n, int d, const Exact& theta, const Exact& eps, int offset = 0);

bool verify_pseudorandom(const Seq& s, double p, int B);
Seq gen_pseudorandom(int n, int alphabet_size, uint64_t seed);

std::vector<Window> disjoint(std::vector<Window> windows);

struct CertifiedTuple {
    std::vector<Window> windows;  // windows[0] from s_1
    Rational c;
};

struct PipelineParams {
    double p = 0.5;
    int B = 16;
    double eps = 0.02;
    // desk-scale caps on the large-window phase: tuples per anchor combination and
    // anchor combinations per window; zero disables
    int large_tuple_cap = 16;
    int max_large_ell = 4;  // zero: every ell up to n / beta
    uint64_t seed = 0x5eed;
};

int pipeline_beta(int n, int B);
std::vector<Exact> unique_theta_grid(const PipelineParams& params, int beta);

struct MatchSets {
    int beta = 0;
    std::vector<Window> partition;                         // W_1^s
    std::vector<std::vector<std::vector<Window>>> within;  // [i][j-2]: W^s_{i,j}
    std::vector<std::vector<std::vector<Window>>> disjoint_sets;
    std::vector<bool> zeroed;
    // [i][j-2][theta index]
    std::vector<std::vector<std::vector<std::vector<Window>>>> slices;
};

struct UniqueMatchResult {
    MatchSets sets;
    std::vector<CertifiedTuple> tuples;
};

UniqueMatchResult find_unique_match(const std::vector<Sequence>& strings, const PipelineParams& params);

struct LargeWindowStats {
    int considered = 0;
    int discarded = 0;
    int trivial_branch = 0;
    int large_branch = 0;
    int truncated = 0;   // tuples or anchor combinations dropped by the caps
    int ell_skipped = 0; // windows above max_large_ell
    int certified = 0;   // windows with at least one LargeAlign certificate
};

std::vector<CertifiedTuple> approx_large_windows(const std::vector<Sequence>& strings, const PipelineParams& params,
                                                 const MatchSets& sets, LargeWindowStats* stats = nullptr);

struct Estimation {
    std::vector<CertifiedTuple> tuples;  // min c per distinct window tuple
    MatchSets sets;
    LargeWindowStats large;
    std::vector<char> unique_blocks;  // per beta-window: has a unique-match certificate
};

Estimation multi_window_estimation(const std::vector<Sequence>& strings, const PipelineParams& params);

struct Assembly {
    Rational value;
    std::vector<CertifiedTuple> chain;  // matched tuples in order
    bool reachable = false;
};

// Costs are in per-string units: a deleted symbol costs 1/m, matching adds c.
Assembly assemble_distance(const std::vector<CertifiedTuple>& S, const std::vector<Sequence>& strings);

struct PseudoDiagnostics {
    int beta = 0;
    int unique_windows = 0;
    int trivial_windows = 0;
    int large_cost_windows = 0;
    int uncertifiable_windows = 0;
    size_t certified_tuples = 0;
    LargeWindowStats large;
};

struct PseudoResult {
    Rational cost;
    Assembly assembly;
    Estimation estimation;
    PseudoDiagnostics diagnostics;
};

PseudoResult pseudo_align(const std::vector<Sequence>& strings, const PipelineParams& params);

}  // namespace msa
