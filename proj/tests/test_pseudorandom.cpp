#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <set>

#include "helpers.hpp"
#include "msa/pseudorandom.hpp"
#include "msa/testkit.hpp"

using namespace msa;

namespace {

Seq window_symbols(const std::vector<Sequence>& s, const Window& w) {
    const auto& src = s[static_cast<size_t>(w.seq - 1)].symbols;
    return Seq(src.begin() + (w.start - 1), src.begin() + w.end);
}

Rational true_cost(const std::vector<Sequence>& s, const CertifiedTuple& t) {
    std::vector<Seq> raw;
    for (const auto& w : t.windows) raw.push_back(window_symbols(s, w));
    return generalized_cost(raw);
}

// s_1 pseudorandom, every other string with its own fresh block spliced over [from, to]
std::vector<Sequence> block_replaced(int n, int m, int from, int to, uint64_t seed) {
    std::vector<Seq> raw{gen_pseudorandom(n, 256, seed)};
    for (int j = 1; j < m; ++j) {
        Seq s = raw[0];
        Seq fresh = gen_pseudorandom(to - from + 1, 256, seed * 31 + static_cast<uint64_t>(j));
        std::copy(fresh.begin(), fresh.end(), s.begin() + (from - 1));
        raw.push_back(std::move(s));
    }
    return make_sequences(raw);
}

// every chain of tuples strictly increasing in all coordinates
Rational brute_assembly(const std::vector<CertifiedTuple>& S, const std::vector<Sequence>& s) {
    const int64_t m = static_cast<int64_t>(s.size());
    int64_t total = 0;
    for (const auto& x : s) total += static_cast<int64_t>(x.size());
    Rational best{total, m};
    std::function<void(int, Rational, int64_t)> rec = [&](int last, Rational acc, int64_t covered) {
        Rational v = acc + Rational{total - covered, m};
        if (v < best) best = v;
        for (size_t k = 0; k < S.size(); ++k) {
            bool ok = true;
            for (size_t j = 0; j < s.size() && ok && last >= 0; ++j)
                ok = S[static_cast<size_t>(last)].windows[j].end < S[k].windows[j].start;
            if (!ok) continue;
            int64_t len = 0;
            for (const auto& w : S[k].windows) len += w.length();
            rec(static_cast<int>(k), acc + S[k].c, covered + len);
        }
    };
    rec(-1, Rational{0, 1}, 0);
    return best;
}

}  // namespace

TEST_CASE("verify_pseudorandom examples") {
    Seq distinct(40);
    std::iota(distinct.begin(), distinct.end(), 0);
    CHECK(verify_pseudorandom(distinct, 1.0, 5));
    CHECK_FALSE(verify_pseudorandom(Seq(20, 0), 0.1, 3));
    CHECK_THROWS(verify_pseudorandom(Seq(4, 0), 0.5, 5));
    int ok = 0;
    for (uint64_t seed = 1; seed <= 100; ++seed) ok += verify_pseudorandom(gen_pseudorandom(512, 256, seed), 0.5, 16);
    CHECK(ok >= 95);
}

TEST_CASE("gen_pseudorandom determinism") {
    CHECK(gen_pseudorandom(8, 2, 1) == gen_pseudorandom(8, 2, 1));
    CHECK(gen_pseudorandom(64, 4, 1) != gen_pseudorandom(64, 4, 2));
    CHECK_THROWS(gen_pseudorandom(8, 1, 1));
    for (int c : gen_pseudorandom(200, 3, 9)) CHECK((c >= 0 && c < 3));
}

TEST_CASE("window_gen examples") {
    auto g0 = window_gen(1, 10, 4, Exact(0), Exact(1, 10));
    REQUIRE(g0.layers.size() == 1);
    CHECK(g0.layers[0].h == 4);
    CHECK(g0.layers[0].l == 4);
    CHECK(g0.layers[0].gamma == 1);
    CHECK(g0.layers[0].high.size() == 10);
    CHECK(g0.layers[0].high[0] == Window{1, 1, 4});
    CHECK(g0.layers[0].high.back() == Window{1, 10, 10});

    auto g = window_gen(1, 12, 4, Exact(1, 4), Exact(1));
    REQUIRE(g.layers.size() == 2);
    CHECK(g.layers[1].tau == Exact(1, 4));
    CHECK(g.layers[1].h == 5);
    CHECK(g.layers[1].l == 3);
    CHECK(g.layers[1].gamma == 1);

    auto off = window_gen(2, 6, 3, Exact(0), Exact(1, 10), 10);
    CHECK(off.layers[0].high.front() == Window{2, 11, 13});
}

TEST_CASE("window_gen ladder and geometry") {
    for (int d : {5, 16, 23, 40}) {
        for (Exact theta : {Exact(1, 8), Exact(1, 3), Exact(1)}) {
            for (Exact eps : {Exact(1, 50), Exact(1, 6), Exact(1)}) {
                const int n = 3 * d;
                auto g = window_gen(1, n, d, theta, eps);
                // independent ladder: tau_k = (1+eps)^k / d below theta, then theta
                std::vector<Exact> taus{Exact(0)};
                for (Exact t(1, d); t < theta; t *= 1 + eps) taus.push_back(t);
                taus.push_back(theta);
                REQUIRE(g.layers.size() == taus.size());
                int gamma = std::max<int>(1, static_cast<int>(floor_int(eps * theta * d)));
                for (size_t k = 0; k < taus.size(); ++k) {
                    const auto& L = g.layers[k];
                    CHECK(L.tau == taus[k]);
                    CHECK(L.h == floor_int(d + taus[k] * d));
                    CHECK(L.l == floor_int(d - taus[k] * d));
                    CHECK(L.gamma == gamma);
                }
                for (const auto& w : g.all()) {
                    CHECK(1 <= w.start);
                    CHECK(w.start <= w.end);
                    CHECK(w.end <= n);
                    CHECK((w.start - 1) % gamma == 0);
                    CHECK(w.length() <= floor_int(d + theta * d));
                    if (w.end < n) CHECK(w.length() >= floor_int(d - theta * d));
                }
            }
        }
    }
}

TEST_CASE("disjoint") {
    std::vector<Window> in{{1, 1, 3}, {1, 4, 6}, {1, 9, 9}};
    CHECK(disjoint(in) == in);
    CHECK(disjoint({{1, 2, 6}, {1, 7, 9}, {1, 1, 5}}) == std::vector<Window>{{1, 1, 5}, {1, 7, 9}});

    std::mt19937_64 g(51);
    for (int it = 0; it < 300; ++it) {
        std::vector<Window> ws;
        int k = 1 + static_cast<int>(g() % 12);
        for (int t = 0; t < k; ++t) {
            int s = 1 + static_cast<int>(g() % 30);
            ws.push_back({1, s, s + static_cast<int>(g() % 6)});
        }
        auto out = disjoint(ws);
        for (size_t a = 0; a < out.size(); ++a)
            for (size_t b = a + 1; b < out.size(); ++b) CHECK((out[a].end < out[b].start || out[b].end < out[a].start));
        for (const auto& w : ws) {
            bool overlaps = false;
            for (const auto& o : out) overlaps |= !(w.end < o.start || o.end < w.start);
            CHECK(overlaps);
        }
    }
}

TEST_CASE("beta and theta grid") {
    CHECK(pipeline_beta(512, 16) == 23);
    CHECK(pipeline_beta(100, 4) == 10);
    CHECK(pipeline_beta(100, 16) == 16);
    PipelineParams pp;
    auto grid = unique_theta_grid(pp, 23);
    CHECK(grid.front() == Exact(1, 8));
    CHECK(grid.back() == 0);
    CHECK(grid[grid.size() - 2] >= Exact(1, 23));
    CHECK(grid[grid.size() - 2] / (1 + Exact(1, 50)) < Exact(1, 23));
}

TEST_CASE("find_unique_match on identical copies") {
    Seq s1 = gen_pseudorandom(200, 256, 5);
    auto s = make_sequences({s1, s1, s1});
    auto um = find_unique_match(s, PipelineParams{});
    const auto& ms = um.sets;
    CHECK(ms.beta == 16);
    for (size_t i = 0; i < ms.partition.size(); ++i) {
        bool zero = false;
        for (const auto& t : um.tuples)
            if (t.windows[0] == ms.partition[i]) zero |= t.c == Rational{0, 1};
        CHECK(zero);
    }
    for (const auto& t : um.tuples) CHECK(true_cost(s, t) <= t.c);
}

TEST_CASE("find_unique_match on planted instances") {
    for (uint64_t seed = 1; seed <= 3; ++seed) {
        InstanceSpec spec{3, 300, 256, seed, Planting::pseudorandom_base};
        spec.edit_budget = 16;
        auto inst = gen_instance(spec);
        PipelineParams pp;
        auto um = find_unique_match(inst.strings, pp);
        const auto& ms = um.sets;
        std::set<size_t> blocks;
        for (const auto& t : um.tuples) {
            Exact g = to_exact(true_cost(inst.strings, t));
            Exact c = to_exact(t.c);
            CHECK(g <= c);
            auto it = std::find(ms.partition.begin(), ms.partition.end(), t.windows[0]);
            REQUIRE(it != ms.partition.end());
            blocks.insert(static_cast<size_t>(it - ms.partition.begin()));
        }
        CHECK(blocks.size() + 2 >= ms.partition.size());
        // each adversarial window is near at most one beta-window of s_1
        for (size_t j = 0; j + 1 < inst.strings.size(); ++j)
            for (size_t a = 0; a < ms.partition.size(); ++a)
                for (size_t b = a + 1; b < ms.partition.size(); ++b)
                    for (const auto& w : ms.disjoint_sets[a][j])
                        CHECK(std::find(ms.disjoint_sets[b][j].begin(), ms.disjoint_sets[b][j].end(), w) ==
                              ms.disjoint_sets[b][j].end());
    }
}

TEST_CASE("unique-match cost against the best substring") {
    // m = 2: the optimum for a block is the cheapest substring of s_2 around it
    PipelineParams pp;
    const Exact eps = exact_from_double(pp.eps);
    const Exact slack(1, 2 << 16);
    const Exact factor = (1 + eps) / (1 - 2 * eps);
    int blocks = 0;
    Exact worst(0);
    for (uint64_t seed = 1; seed <= 4; ++seed) {
        InstanceSpec spec{2, 200, 256, seed, Planting::pseudorandom_base};
        spec.edit_budget = 12;
        auto inst = gen_instance(spec);
        const auto& s = inst.strings;
        auto um = find_unique_match(s, pp);
        const auto& ms = um.sets;
        for (const auto& b : ms.partition) {
            std::optional<Exact> best_c;
            for (const auto& t : um.tuples)
                if (t.windows[0] == b && (!best_c || to_exact(t.c) < *best_c)) best_c = to_exact(t.c);
            if (!best_c) continue;
            ++blocks;
            Seq wb = window_symbols(s, b);
            const int n2 = static_cast<int>(s[1].size());
            Exact opt(b.length());
            for (int st = std::max(1, b.start - ms.beta); st <= std::min(n2, b.end + ms.beta); ++st)
                for (int en = st; en <= std::min(n2, b.end + ms.beta); ++en) {
                    Seq w(s[1].symbols.begin() + st - 1, s[1].symbols.begin() + en);
                    Exact c = to_exact(generalized_cost({wb, w}));
                    if (c < opt) opt = c;
                }
            CHECK(opt <= *best_c);
            // shapes at level theta hold lengths within theta*d, while a window of per-string
            // cost g may differ in length by up to m*g
            Exact floor_level(b.length(), ms.beta);
            Exact level = 2 * opt > floor_level ? 2 * opt : floor_level;
            CHECK(*best_c <= factor * level + slack);
            worst = std::max<Exact>(worst, *best_c / (opt > floor_level ? opt : floor_level));
            if (opt == 0) CHECK(*best_c == 0);
        }
    }
    CHECK(blocks > 30);
    MESSAGE("worst block ratio " << worst.convert_to<double>());
}

TEST_CASE("unique-match exclusivity by brute force") {
    // every window of s_j within p*beta/4 of two beta-windows would contradict pseudorandomness
    Seq s1 = gen_pseudorandom(96, 256, 17);
    REQUIRE(verify_pseudorandom(s1, 0.5, 10));
    PipelineParams pp;
    pp.B = 10;
    std::mt19937_64 g(52);
    Seq s2 = s1;
    for (int t = 0; t < 4; ++t) s2.erase(s2.begin() + static_cast<std::ptrdiff_t>(g() % s2.size()));
    auto s = make_sequences({s1, s2});
    auto um = find_unique_match(s, pp);
    const auto& ms = um.sets;
    const int beta = ms.beta;
    for (int st = 1; st <= static_cast<int>(s2.size()); ++st)
        for (int len = beta - 3; len <= beta + 3; ++len) {
            if (st + len - 1 > static_cast<int>(s2.size())) continue;
            Seq w(s2.begin() + st - 1, s2.begin() + st - 1 + len);
            int close = 0;
            for (const auto& b : ms.partition) {
                if (b.length() != beta) continue;
                Seq wb(s1.begin() + b.start - 1, s1.begin() + b.end);
                Rational c = generalized_cost({wb, w});
                close += to_exact(c) <= Exact(beta) / 8;
            }
            CHECK(close <= 1);
        }
}

TEST_CASE("approx_large_windows certificates") {
    // a middle block replaced in every other string: no unique match there
    const int n = 160;
    auto s = block_replaced(n, 3, 65, 80, 7);
    PipelineParams pp;
    pp.max_large_ell = 2;
    auto um = find_unique_match(s, pp);
    LargeWindowStats st;
    auto large = approx_large_windows(s, pp, um.sets, &st);
    CHECK(st.considered > 0);
    CHECK(st.large_branch > 0);
    bool covering = false;
    for (const auto& t : large) {
        CHECK(true_cost(s, t) <= t.c);
        covering |= t.windows[0].start <= 65 && t.windows[0].end >= 80;
    }
    CHECK(covering);
    // the prefix window is kept through its virtual left anchor
    bool prefix = false;
    for (const auto& t : large) prefix |= t.windows[0].start == 1;
    CHECK(prefix);
}

TEST_CASE("approx_large_windows trivial branch") {
    // m = 2, beta = 8: a long insertion between the anchors of one window forces the gap-sum branch
    Seq s1 = gen_pseudorandom(64, 256, 21);
    Seq pad = gen_pseudorandom(100, 256, 22);
    Seq s2(s1.begin(), s1.begin() + 28);
    s2.insert(s2.end(), pad.begin(), pad.end());
    s2.insert(s2.end(), s1.begin() + 28, s1.end());
    auto s = make_sequences({s1, s2});
    PipelineParams pp;
    pp.B = 8;
    pp.max_large_ell = 1;
    auto um = find_unique_match(s, pp);
    REQUIRE(um.sets.beta == 8);
    LargeWindowStats st;
    auto large = approx_large_windows(s, pp, um.sets, &st);
    CHECK(st.trivial_branch >= 1);
    bool trivial = false;
    for (const auto& t : large) {
        CHECK(true_cost(s, t) <= t.c);
        if (t.windows[0] == Window{1, 25, 32}) trivial |= t.c == Rational{8, 1};
    }
    CHECK(trivial);
}

TEST_CASE("assemble_distance examples") {
    auto s = S({"abcdef", "abcdef"});
    CertifiedTuple full{{{1, 1, 6}, {2, 1, 6}}, {0, 1}};
    auto a = assemble_distance({full}, s);
    CHECK(a.reachable);
    CHECK(a.value == Rational{0, 1});
    CHECK(a.chain.size() == 1);

    CertifiedTuple left{{{1, 1, 3}, {2, 1, 3}}, {1, 2}};
    CertifiedTuple right{{{1, 4, 6}, {2, 4, 6}}, {3, 2}};
    auto b = assemble_distance({left, right}, s);
    CHECK(b.value == Rational{2, 1});
    CHECK(b.chain.size() == 2);

    auto none = assemble_distance({}, s);
    CHECK(none.reachable);
    CHECK(none.value == Rational{6, 1});
}

TEST_CASE("assemble_distance matches brute force") {
    std::mt19937_64 g(53);
    for (int it = 0; it < 300; ++it) {
        const int m = 2 + static_cast<int>(g() % 3);
        std::vector<Seq> raw;
        for (int j = 0; j < m; ++j) raw.push_back(Seq(static_cast<size_t>(6 + g() % 5), 0));
        auto s = make_sequences(raw);
        std::vector<std::vector<Window>> pools(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j) {
            int nj = static_cast<int>(raw[static_cast<size_t>(j)].size());
            int k = 1 + static_cast<int>(g() % 12);
            for (int t = 0; t < k; ++t) {
                int st = 1 + static_cast<int>(g() % nj);
                int en = std::min(nj, st + static_cast<int>(g() % 4));
                pools[static_cast<size_t>(j)].push_back({j + 1, st, en});
            }
        }
        std::vector<CertifiedTuple> S;
        int count = 1 + static_cast<int>(g() % 9);
        for (int t = 0; t < count; ++t) {
            CertifiedTuple ct;
            for (int j = 0; j < m; ++j) {
                const auto& p = pools[static_cast<size_t>(j)];
                ct.windows.push_back(p[g() % p.size()]);
            }
            ct.c = Rational{static_cast<int64_t>(g() % 13), m};
            S.push_back(ct);
        }
        auto a = assemble_distance(S, s);
        REQUIRE(a.reachable);
        CHECK(a.value == brute_assembly(S, s));
        // the chain is monotone and its cost reproduces the value
        Rational sum{0, 1};
        int64_t covered = 0, total = 0;
        for (const auto& x : raw) total += static_cast<int64_t>(x.size());
        for (size_t k = 0; k < a.chain.size(); ++k) {
            sum = sum + a.chain[k].c;
            for (const auto& w : a.chain[k].windows) covered += w.length();
            if (k > 0)
                for (int j = 0; j < m; ++j)
                    CHECK(a.chain[k - 1].windows[static_cast<size_t>(j)].end < a.chain[k].windows[static_cast<size_t>(j)].start);
        }
        CHECK(sum + Rational{total - covered, m} == a.value);
    }
}

TEST_CASE("multi_window_estimation") {
    Seq s1 = gen_pseudorandom(150, 256, 8);
    auto same = make_sequences({s1, s1, s1});
    PipelineParams pp;
    pp.max_large_ell = 2;
    auto est = multi_window_estimation(same, pp);
    CHECK(est.tuples.size() < 200000);
    auto a = assemble_distance(est.tuples, same);
    CHECK(a.value == Rational{0, 1});
    std::set<std::vector<Window>> keys;
    for (const auto& t : est.tuples) {
        CHECK(keys.insert(t.windows).second);
        CHECK(true_cost(same, t) <= t.c);
    }
}

TEST_CASE("pseudo_align") {
    Seq s1 = gen_pseudorandom(120, 256, 9);
    auto same = make_sequences({s1, s1, s1});
    CHECK(pseudo_align(same, PipelineParams{}).cost == Rational{0, 1});

    PipelineParams bad;
    bad.eps = 0.5;
    CHECK_THROWS(pseudo_align(same, bad));
    bad = PipelineParams{};
    bad.p = 1.0;
    CHECK_THROWS(pseudo_align(same, bad));

    const Exact ratio = 2 - Exact(3, 2) / 512 + 89 * Exact(1, 50);
    for (uint64_t seed = 1; seed <= 2; ++seed) {
        InstanceSpec spec{3, 512, 256, seed, Planting::pseudorandom_base};
        spec.edit_budget = 24;
        auto inst = gen_instance(spec);
        REQUIRE(inst.distance);
        auto r = pseudo_align(inst.strings, PipelineParams{});
        Exact cost = to_exact(r.cost);
        CHECK(cost >= *inst.distance);
        CHECK(cost <= ratio * *inst.distance);
        for (const auto& t : r.estimation.tuples) CHECK(true_cost(inst.strings, t) <= t.c);
        CHECK(r.diagnostics.beta == 23);
        CHECK(r.diagnostics.uncertifiable_windows == 0);
    }
}
