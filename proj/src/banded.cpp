#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "msa/exact_core.hpp"
#include "msa/rng.hpp"

namespace msa {

namespace {

constexpr uint64_t kMod = (uint64_t{1} << 61) - 1;

uint64_t mulmod(uint64_t a, uint64_t b) {
    __uint128_t p = static_cast<__uint128_t>(a) * b;
    uint64_t lo = static_cast<uint64_t>(p & kMod);
    uint64_t hi = static_cast<uint64_t>(p >> 61);
    uint64_t r = lo + hi;
    return r >= kMod ? r - kMod : r;
}
uint64_t addmod(uint64_t a, uint64_t b) {
    uint64_t r = a + b;
    return r >= kMod ? r - kMod : r;
}
uint64_t submod(uint64_t a, uint64_t b) { return a >= b ? a - b : a + kMod - b; }

}  // namespace

HashSeeds HashSeeds::from_seed(uint64_t seed) {
    uint64_t x = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
    uint64_t y = splitmix64(x);
    return {x % (kMod - 1024) + 512, y % (kMod - 1024) + 512};
}

HashIndex::HashIndex(const Sequence& s, HashSeeds seeds) : n_(s.size()) {
    const size_t n = n_;
    std::vector<uint64_t> p1(n + 1, 0), p2(n + 1, 0), w1(n + 1, 1), w2(n + 1, 1);
    for (size_t i = 0; i < n; ++i) {
        uint64_t v = static_cast<uint64_t>(static_cast<uint32_t>(s.symbols[i])) + 1;
        p1[i + 1] = addmod(mulmod(p1[i], seeds.base1), v);
        p2[i + 1] = addmod(mulmod(p2[i], seeds.base2), v);
        w1[i + 1] = mulmod(w1[i], seeds.base1);
        w2[i + 1] = mulmod(w2[i], seeds.base2);
    }
    for (size_t len = 1; len <= n; len <<= 1) {
        std::vector<Fingerprint> lvl(n - len + 1);
        for (size_t i = 0; i + len <= n; ++i)
            lvl[i] = {submod(p1[i + len], mulmod(p1[i], w1[len])), submod(p2[i + len], mulmod(p2[i], w2[len]))};
        table_.push_back(std::move(lvl));
    }
}

Fingerprint HashIndex::at(int level, int start) const {
    return table_.at(static_cast<size_t>(level)).at(static_cast<size_t>(start - 1));
}

HashIndex preprocess_hashes(const Sequence& s, HashSeeds seeds) { return HashIndex(s, seeds); }

int equal_query(const std::vector<HashIndex>& idx, int i, const std::vector<int>& d) {
    if (idx.size() < 2 || d.size() + 1 != idx.size()) throw std::invalid_argument("diagonal arity mismatch");
    const int n1 = static_cast<int>(idx[0].length());
    if (i < 1 || i > n1 + 1) throw std::out_of_range("equal_query: i out of range");
    int best = n1 - i + 1;
    for (size_t j = 1; j < idx.size() && best > 0; ++j) {
        const int pos = i + d[j - 1];
        const int nj = static_cast<int>(idx[j].length());
        if (pos < 1 || pos > nj) {
            best = 0;
            break;
        }
        const int cap = std::min(best, nj - pos + 1);
        int len = 0;
        for (int lvl = std::min(idx[0].levels(), idx[j].levels()) - 1; lvl >= 0; --lvl) {
            int step = 1 << lvl;
            if (len + step <= cap && idx[0].at(lvl, i + len) == idx[j].at(lvl, pos + len)) len += step;
        }
        best = std::min(best, len);
    }
    return i + best - 1;
}

size_t encode_diagonal(const std::vector<int>& d, int k) {
    size_t code = 0;
    for (size_t j = d.size(); j-- > 0;) code = code * static_cast<size_t>(2 * k + 1) + static_cast<size_t>(d[j] + k);
    return code;
}

std::vector<int> decode_diagonal(size_t code, int k, int dims) {
    std::vector<int> d(static_cast<size_t>(dims));
    for (int j = 0; j < dims; ++j) {
        d[j] = static_cast<int>(code % static_cast<size_t>(2 * k + 1)) - k;
        code /= static_cast<size_t>(2 * k + 1);
    }
    return d;
}

// Wave h holds, per diagonal, the furthest row of s_1 reachable with cumulative
// cost at most h. Diagonal entry j-1 is the offset of s_j against s_1. Starting
// off the origin means deleting whole prefixes, which the waves charge one unit
// per symbol.
static std::optional<int> run_waves(const std::vector<Sequence>& strings, int band, int hmax, uint64_t hash_seed,
                                    std::vector<Wave>* trace) {
    const size_t m = strings.size();
    if (m < 2) throw std::invalid_argument("need at least two strings");
    const int n = static_cast<int>(strings[0].size());
    const int dims = static_cast<int>(m) - 1;

    std::vector<int> target(dims);
    for (int j = 0; j < dims; ++j) {
        target[j] = static_cast<int>(strings[j + 1].size()) - n;
        if (std::abs(target[j]) > band) return std::nullopt;
    }
    size_t count = 1;
    for (int j = 0; j < dims; ++j) {
        count *= static_cast<size_t>(2 * band + 1);
        if (count > (size_t{1} << 26)) throw std::length_error("band too wide");
    }

    HashSeeds seeds = HashSeeds::from_seed(hash_seed);
    std::vector<HashIndex> idx;
    idx.reserve(m);
    for (const auto& s : strings) idx.emplace_back(s, seeds);

    std::vector<int> len(dims);
    for (int j = 0; j < dims; ++j) len[j] = static_cast<int>(strings[j + 1].size());
    std::vector<std::vector<int>> diag(count);
    for (size_t c = 0; c < count; ++c) diag[c] = decode_diagonal(c, band, dims);

    auto inside = [&](int row, const std::vector<int>& d) {
        if (row < 0 || row > n) return false;
        for (int j = 0; j < dims; ++j)
            if (row + d[j] < 0 || row + d[j] > len[j]) return false;
        return true;
    };
    auto slide = [&](int row, const std::vector<int>& d) {
        if (row >= n) return row;
        for (int j = 0; j < dims; ++j)
            if (row + d[j] >= len[j]) return row;
        return equal_query(idx, row + 1, d);
    };

    const size_t zero = encode_diagonal(std::vector<int>(dims, 0), band);
    const size_t goal = encode_diagonal(target, band);
    std::vector<int> cur(count, -1);
    cur[zero] = slide(0, diag[zero]);
    if (trace) trace->push_back({0, band, cur});
    if (cur[goal] == n) return 0;

    std::vector<size_t> stride(dims, 1);
    for (int j = 1; j < dims; ++j) stride[j] = stride[j - 1] * static_cast<size_t>(2 * band + 1);
    size_t all_ones = 0;
    for (int j = 0; j < dims; ++j) all_ones += stride[j];

    for (int h = 1; h <= hmax; ++h) {
        std::vector<int> nxt(cur);
        for (size_t c = 0; c < count; ++c) {
            const auto& d = diag[c];
            int best = cur[c];
            // delete one symbol of s_{j+1}: the row stays, d[j] grows by one
            for (int j = 0; j < dims; ++j) {
                if (d[j] - 1 < -band) continue;
                int r = cur[c - stride[j]];
                if (r > best && inside(r, d)) best = r;
            }
            // delete one symbol of s_1: the row grows, every offset shrinks
            bool ok = true;
            for (int j = 0; j < dims; ++j) ok &= (d[j] + 1 <= band);
            if (ok) {
                int r = cur[c + all_ones];
                if (r >= 0 && r + 1 > best && inside(r + 1, d)) best = r + 1;
            }
            if (best > cur[c]) nxt[c] = slide(best, d);
        }
        cur = std::move(nxt);
        if (trace) trace->push_back({h, band, cur});
        if (cur[goal] == n) return h;
    }
    return std::nullopt;
}

std::optional<int> banded_distance(const std::vector<Sequence>& strings, int k, uint64_t hash_seed,
                                   std::vector<Wave>* trace) {
    if (k < 0) throw std::invalid_argument("k must be non-negative");
    if (strings.size() < 2) throw std::invalid_argument("need at least two strings");
    const int n = static_cast<int>(strings[0].size());
    for (const auto& s : strings)
        if (static_cast<int>(s.size()) != n) throw std::invalid_argument("unequal lengths");
    const int m = static_cast<int>(strings.size());
    const int band = std::min(k, n);
    auto h = run_waves(strings, band, band * m, hash_seed, trace);
    if (!h) return std::nullopt;
    if (*h % m != 0) throw std::logic_error("wave terminated off a multiple of m");
    return *h / m;
}

std::optional<int> banded_cumulative(const std::vector<Seq>& strings, int hmax, uint64_t hash_seed) {
    if (hmax < 0) return std::nullopt;
    int longest = 0;
    for (const auto& s : strings) longest = std::max(longest, static_cast<int>(s.size()));
    return run_waves(make_sequences(strings), std::min(hmax, longest), hmax, hash_seed, nullptr);
}

}  // namespace msa
