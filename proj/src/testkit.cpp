#include "msa/testkit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "msa/pseudorandom.hpp"
#include "msa/rng.hpp"

namespace msa {

bool is_subsequence(const Seq& needle, const Seq& hay) {
    size_t k = 0;
    for (size_t i = 0; i < hay.size() && k < needle.size(); ++i)
        if (hay[i] == needle[k]) ++k;
    return k == needle.size();
}

namespace {

constexpr size_t kBruteLimit = 10;

void guard(const std::vector<Sequence>& strings) {
    if (strings.size() < 2) throw std::invalid_argument("need at least two strings");
    if (strings[0].size() > kBruteLimit) throw std::length_error("brute enumeration limited to n <= 10");
}

bool keep(const BruteFilter& f, int n1, int len) {
    if (len < f.min_len) return false;
    if (f.max_cost >= 0 && n1 - len > f.max_cost) return false;
    return true;
}

bool common(const std::vector<Sequence>& strings, const Seq& cand) {
    for (size_t j = 1; j < strings.size(); ++j)
        if (!is_subsequence(cand, strings[j].symbols)) return false;
    return true;
}

}  // namespace

std::vector<CommonSubsequence> brute_subsequences(const std::vector<Sequence>& strings, BruteFilter f) {
    guard(strings);
    const int n1 = static_cast<int>(strings[0].size());
    std::vector<CommonSubsequence> out;
    for (uint32_t mask = 0; mask < (1u << n1); ++mask) {
        CommonSubsequence cs;
        for (int i = 0; i < n1; ++i)
            if (mask & (1u << i)) {
                cs.symbols.push_back(strings[0].symbols[i]);
                cs.s1_indices.push_back(i + 1);
            }
        if (!keep(f, n1, static_cast<int>(cs.symbols.size()))) continue;
        if (common(strings, cs.symbols)) out.push_back(std::move(cs));
    }
    std::sort(out.begin(), out.end(),
              [](const CommonSubsequence& a, const CommonSubsequence& b) { return a.s1_indices < b.s1_indices; });
    return out;
}

std::vector<CommonSubsequence> brute_subsequences_dfs(const std::vector<Sequence>& strings, BruteFilter f) {
    guard(strings);
    const int n1 = static_cast<int>(strings[0].size());
    std::vector<CommonSubsequence> out;
    CommonSubsequence cur;
    // preorder over increasing index lists is already lexicographic
    auto rec = [&](auto&& self, int from) -> void {
        if (keep(f, n1, static_cast<int>(cur.symbols.size()))) out.push_back(cur);
        for (int i = from; i <= n1; ++i) {
            cur.symbols.push_back(strings[0].at(i));
            cur.s1_indices.push_back(i);
            if (common(strings, cur.symbols)) self(self, i + 1);
            cur.symbols.pop_back();
            cur.s1_indices.pop_back();
        }
    };
    rec(rec, 1);
    return out;
}

std::string planting_name(Planting p) {
    switch (p) {
        case Planting::none: return "none";
        case Planting::common_core: return "common-core";
        case Planting::bounded_distance: return "bounded-distance";
        case Planting::pseudorandom_base: return "pseudorandom-base";
    }
    return "none";
}

std::optional<Planting> parse_planting(const std::string& s) {
    for (Planting p : {Planting::none, Planting::common_core, Planting::bounded_distance, Planting::pseudorandom_base})
        if (planting_name(p) == s) return p;
    return std::nullopt;
}

namespace {

Seq random_seq(std::mt19937_64& g, int n, int alphabet) {
    std::uniform_int_distribution<int> sym(0, alphabet - 1);
    Seq s(static_cast<size_t>(n));
    for (auto& c : s) c = sym(g);
    return s;
}

Seq insert_random(std::mt19937_64& g, Seq s, int count, int alphabet) {
    std::uniform_int_distribution<int> sym(0, alphabet - 1);
    for (int t = 0; t < count; ++t) {
        std::uniform_int_distribution<size_t> at(0, s.size());
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(at(g)), sym(g));
    }
    return s;
}

Seq delete_random(std::mt19937_64& g, Seq s, int count) {
    for (int t = 0; t < count && !s.empty(); ++t) {
        std::uniform_int_distribution<size_t> at(0, s.size() - 1);
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(at(g)));
    }
    return s;
}

bool dp_feasible(const std::vector<Sequence>& strings) {
    double cells = 1;
    for (const auto& s : strings) cells *= static_cast<double>(s.size() + 1);
    return cells <= static_cast<double>(1 << 24);
}

}  // namespace

Instance gen_instance(const InstanceSpec& spec) {
    if (spec.m < 2 || spec.n < 1 || spec.alphabet < 1) throw std::invalid_argument("invalid instance spec");
    Instance inst;
    inst.spec = spec;
    Rng rng(spec.seed);
    auto core_g = rng.stream("core");
    std::vector<Seq> raw;
    std::optional<int> distance_cap;

    switch (spec.planting) {
        case Planting::none:
            for (int j = 0; j < spec.m; ++j) {
                auto g = rng.stream("string/" + std::to_string(j + 1));
                raw.push_back(random_seq(g, spec.n, spec.alphabet));
            }
            break;
        case Planting::common_core:
        case Planting::bounded_distance: {
            int core_len = 0;
            if (spec.planting == Planting::common_core) {
                if (!(spec.lambda > 0 && spec.lambda <= 1)) throw std::invalid_argument("lambda must be in (0,1]");
                core_len = static_cast<int>(std::ceil(spec.lambda * spec.n - 1e-9));
            } else {
                if (!(spec.theta >= 0 && spec.theta <= 1)) throw std::invalid_argument("theta must be in [0,1]");
                core_len = spec.n - static_cast<int>(std::floor(spec.theta * spec.n + 1e-9));
                distance_cap = spec.n - core_len;
            }
            Seq core = random_seq(core_g, core_len, spec.alphabet);
            for (int j = 0; j < spec.m; ++j) {
                auto g = rng.stream("string/" + std::to_string(j + 1));
                raw.push_back(insert_random(g, core, spec.n - core_len, spec.alphabet));
            }
            break;
        }
        case Planting::pseudorandom_base: {
            if (spec.B < 1 || spec.B > spec.n) throw std::invalid_argument("B must be in [1,n]");
            if (spec.edit_budget < 0) throw std::invalid_argument("edit budget must be non-negative");
            raw.push_back(gen_pseudorandom(spec.n, spec.alphabet, splitmix64(spec.seed ^ 0x9a5eULL)));
            int pairs = spec.edit_budget / 2;
            for (int j = 1; j < spec.m; ++j) {
                auto g = rng.stream("edits/" + std::to_string(j + 1));
                Seq s = delete_random(g, raw[0], pairs);
                raw.push_back(insert_random(g, std::move(s), pairs, spec.alphabet));
            }
            distance_cap = std::min(spec.n, (spec.m - 1) * pairs);
            inst.note = verify_pseudorandom(raw[0], spec.p, spec.B) ? "s1_pseudorandom=true" : "s1_pseudorandom=false";
            break;
        }
    }
    inst.strings = make_sequences(raw);
    if (dp_feasible(inst.strings)) {
        inst.lcs = lcs_exact(inst.strings).length;
        inst.distance = spec.n - *inst.lcs;
    } else if (distance_cap) {
        auto d = banded_distance(inst.strings, *distance_cap, spec.seed);
        if (!d) throw std::logic_error("planted distance exceeds its cap");
        inst.distance = d;
        inst.lcs = spec.n - *d;
    }
    return inst;
}

void OracleReport::write_lines(std::ostream& out) const {
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["suite"] = suite;
        j["id"] = r.id;
        j["algorithm"] = r.algorithm;
        j["value"] = r.value;
        j["oracle"] = r.oracle;
        j["ratio"] = r.ratio;
        j["bound"] = r.bound;
        j["violation"] = r.violation;
        j["skipped"] = r.skipped;
        out << j.dump() << '\n';
    }
    nlohmann::ordered_json s;
    s["suite"] = suite;
    s["summary"] = true;
    s["instances"] = records.size();
    s["violations"] = violations;
    s["skipped"] = skipped;
    s["max_ratio"] = max_ratio;
    out << s.dump() << '\n';
}

OracleReport ratio_audit(const std::string& suite, const std::vector<Instance>& instances,
                         const std::function<AuditOutcome(const Instance&)>& run, int threads) {
    OracleReport rep;
    rep.suite = suite;
    rep.records.resize(instances.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < instances.size(); i = next++) {
            AuditOutcome o = run(instances[i]);
            AuditRecord& r = rep.records[i];
            r.id = static_cast<int>(i);
            r.algorithm = suite;
            r.bound = o.bound;
            if (!o.value || !o.oracle) {
                r.skipped = true;
                continue;
            }
            r.value = *o.value;
            r.oracle = *o.oracle;
            if (r.oracle == 0)
                r.ratio = r.value == 0 ? 1.0 : std::numeric_limits<double>::infinity();
            else
                r.ratio = static_cast<double>(r.value) / static_cast<double>(r.oracle);
            // bound is a limit on value itself: a ceiling, or a floor when lower is set
            r.violation = o.lower ? (static_cast<double>(r.value) < o.bound - 1e-9)
                                  : (static_cast<double>(r.value) > o.bound + 1e-9);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < std::max(1, threads); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& r : rep.records) {
        if (r.skipped) {
            ++rep.skipped;
            continue;
        }
        if (r.violation) ++rep.violations;
        if (std::isfinite(r.ratio)) rep.max_ratio = std::max(rep.max_ratio, r.ratio);
    }
    return rep;
}

}  // namespace msa
