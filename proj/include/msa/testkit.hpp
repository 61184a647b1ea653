#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "msa/exact_core.hpp"

namespace msa {

struct CommonSubsequence {
    Seq symbols;
    std::vector<int> s1_indices;  // 1-based
};

struct BruteFilter {
    int min_len = 0;
    int max_cost = -1;  // |s_1| - length; negative disables
};

// Every common subsequence, one entry per embedding in s_1, ordered by s_1 index set.
std::vector<CommonSubsequence> brute_subsequences(const std::vector<Sequence>& strings, BruteFilter f = {});
// Second enumeration route (recursive over s_1 positions), same output order.
std::vector<CommonSubsequence> brute_subsequences_dfs(const std::vector<Sequence>& strings, BruteFilter f = {});
bool is_subsequence(const Seq& needle, const Seq& hay);

enum class Planting { none, common_core, bounded_distance, pseudorandom_base };

struct InstanceSpec {
    int m = 3;
    int n = 8;
    int alphabet = 4;
    uint64_t seed = 1;
    Planting planting = Planting::none;
    double lambda = 0.5;  // common_core target
    double theta = 0.25;  // bounded_distance target
    double p = 0.5;       // pseudorandom_base
    int B = 16;
    int edit_budget = 20;
};

struct Instance {
    InstanceSpec spec;
    std::vector<Sequence> strings;
    std::optional<int> lcs;       // realized where computable
    std::optional<int> distance;  // realized where computable (equal lengths)
    std::string note;
};

Instance gen_instance(const InstanceSpec& spec);
std::string planting_name(Planting p);
std::optional<Planting> parse_planting(const std::string& s);

struct AuditRecord {
    int id = 0;
    std::string algorithm;
    int64_t value = 0;
    int64_t oracle = 0;
    double ratio = 1.0;
    double bound = 0.0;
    bool violation = false;
    bool skipped = false;
};

struct OracleReport {
    std::string suite;
    std::vector<AuditRecord> records;
    int violations = 0;
    int skipped = 0;
    double max_ratio = 0.0;

    // one JSON object per line; a trailing summary line
    void write_lines(std::ostream& out) const;
};

struct AuditOutcome {
    std::optional<int64_t> value;   // algorithm output
    std::optional<int64_t> oracle;  // nullopt: oracle infeasible, instance skipped
    double bound = 0.0;             // limit on value: ceiling, or floor when lower is set
    bool lower = false;
};

OracleReport ratio_audit(const std::string& suite, const std::vector<Instance>& instances,
                         const std::function<AuditOutcome(const Instance&)>& run, int threads = 1);

}  // namespace msa
