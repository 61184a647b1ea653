#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace msa {

using Symbol = int32_t;
using Seq = std::vector<Symbol>;

struct Sequence {
    int id = 0;
    Seq symbols;

    size_t size() const { return symbols.size(); }
    // 1-based access
    Symbol at(int i) const { return symbols[static_cast<size_t>(i - 1)]; }
};

std::vector<Sequence> make_sequences(const std::vector<Seq>& raw);

// Tuples are 1-based index vectors, one coordinate per string.
struct Alignment {
    std::vector<std::vector<int>> tuples;
    std::vector<std::vector<int>> unaligned;  // sorted, per string
};

Alignment make_alignment(const std::vector<Sequence>& strings, std::vector<std::vector<int>> tuples);
// Empty string on success, otherwise the first violated invariant.
std::string check_alignment(const std::vector<Sequence>& strings, const Alignment& a);

// Exact fraction; generalized costs keep m as the denominator.
struct Rational {
    int64_t num = 0;
    int64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    Rational reduced() const;
    std::string str() const;
};
bool operator==(const Rational& a, const Rational& b);
bool operator<(const Rational& a, const Rational& b);
inline bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
inline bool operator>(const Rational& a, const Rational& b) { return b < a; }
inline bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
Rational operator+(const Rational& a, const Rational& b);
Rational operator*(const Rational& a, int64_t k);

struct LcsResult {
    int length = 0;
    Alignment witness;
};

// m-dimensional DP. Ties prefer the match, then deleting from the lowest string.
LcsResult lcs_exact(const std::vector<Sequence>& strings);
int lcs_length(const std::vector<Seq>& strings);
int alignment_distance_exact(const std::vector<Sequence>& strings);
Rational generalized_cost(const std::vector<Seq>& windows);

// Minimal l-candidates. Frontier entries are full 1-based tuples; level 0 holds the origin.
using CandidateLevel = std::vector<std::vector<int>>;
std::vector<CandidateLevel> candidate_levels(const std::vector<Sequence>& strings);
int lcs_candidates(const std::vector<Sequence>& strings);
// Witness chained through the frontiers: each level picks the first candidate strictly below the next.
LcsResult lcs_candidates_witness(const std::vector<Sequence>& strings);

struct HashSeeds {
    uint64_t base1 = 0;
    uint64_t base2 = 0;
    static HashSeeds from_seed(uint64_t seed);
};

struct Fingerprint {
    uint64_t a = 0;
    uint64_t b = 0;
    bool operator==(const Fingerprint&) const = default;
};

class HashIndex {
public:
    HashIndex() = default;
    HashIndex(const Sequence& s, HashSeeds seeds);

    size_t length() const { return n_; }
    int levels() const { return static_cast<int>(table_.size()); }
    // Fingerprint of s[start, start + 2^level - 1], start 1-based.
    Fingerprint at(int level, int start) const;

private:
    size_t n_ = 0;
    std::vector<std::vector<Fingerprint>> table_;
};

HashIndex preprocess_hashes(const Sequence& s, HashSeeds seeds);

// Largest q with s_1[i,q] equal to s_j[i+d[j-2], q+d[j-2]] for every j >= 2; i-1 if none.
int equal_query(const std::vector<HashIndex>& idx, int i, const std::vector<int>& d);

struct Wave {
    int h = 0;
    int k = 0;
    // Indexed by encode_diagonal; -1 marks an unreachable diagonal.
    std::vector<int> rows;
};
size_t encode_diagonal(const std::vector<int>& d, int k);
std::vector<int> decode_diagonal(size_t code, int k, int dims);

// Returns the distance when it is at most k. When trace is set every wave is recorded.
std::optional<int> banded_distance(const std::vector<Sequence>& strings, int k, uint64_t hash_seed = 0x5eed,
                                   std::vector<Wave>* trace = nullptr);
// Strings may differ in length. Minimal cumulative deletion count (sum over all
// strings of unaligned symbols) when it is at most hmax.
std::optional<int> banded_cumulative(const std::vector<Seq>& strings, int hmax, uint64_t hash_seed = 0x5eed);

}  // namespace msa
