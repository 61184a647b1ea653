#include "msa/pseudorandom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <tuple>
#include <cstdio>
#include <random>
#include <set>
#include <stdexcept>

#include "msa/large_align.hpp"
#include "msa/rng.hpp"

namespace msa {

namespace {

int lcs2(const Symbol* a, int la, const Symbol* b, int lb, std::vector<int>& row) {
    row.assign(static_cast<size_t>(lb) + 1, 0);
    for (int i = 1; i <= la; ++i) {
        int diag = 0;
        for (int j = 1; j <= lb; ++j) {
            int up = row[j];
            row[j] = a[i - 1] == b[j - 1] ? diag + 1 : std::max(up, row[j - 1]);
            diag = up;
        }
    }
    return row[lb];
}

// Window sizes and stride of P(., d, theta): tau runs over 0, 1/d, (1+eps)/d, ... below
// theta, then theta itself; tau*d = (1+eps)^k, so the ladder is shared by every d.
struct Shape {
    int gamma = 1;
    std::vector<int> lengths;  // sorted, distinct, >= 1
    int max_len = 0;
    std::vector<char> has;     // has[len]
};

class ShapeCache {
public:
    explicit ShapeCache(const Exact& eps) : eps_(eps), powers_{Exact(1)}, floors_{1}, ceils_{1} {}

    std::vector<std::pair<int, int>> layers(int d, const Exact& theta) {
        std::vector<std::pair<int, int>> out{{d, d}};
        if (theta <= 0) return out;
        const Exact bound = theta * d;
        while (powers_.back() < bound) {
            powers_.push_back(powers_.back() * (1 + eps_));
            floors_.push_back(floor_int(powers_.back()));
            ceils_.push_back(ceil_int(powers_.back()));
        }
        // powers are increasing: the ladder is the prefix strictly below the bound
        const size_t K = static_cast<size_t>(std::lower_bound(powers_.begin(), powers_.end(), bound) - powers_.begin());
        for (size_t k = 0; k < K; ++k) out.push_back({d + static_cast<int>(floors_[k]), d - static_cast<int>(ceils_[k])});
        out.push_back({static_cast<int>(floor_int(d + bound)), static_cast<int>(floor_int(d - bound))});
        return out;
    }

    int gamma(int d, const Exact& theta) const {
        return std::max<int>(1, static_cast<int>(floor_int(eps_ * theta * d)));
    }

    // tag identifies theta cheaply (its index in a fixed grid)
    const Shape& get(int d, int tag, const Exact& theta) {
        auto key = std::make_pair(d, tag);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        Shape sh;
        sh.gamma = gamma(d, theta);
        std::set<int> lens;
        for (auto [h, l] : layers(d, theta)) {
            if (h >= 1) lens.insert(h);
            if (l >= 1) lens.insert(l);
        }
        sh.lengths.assign(lens.begin(), lens.end());
        sh.max_len = sh.lengths.empty() ? 0 : sh.lengths.back();
        sh.has.assign(static_cast<size_t>(sh.max_len) + 1, 0);
        for (int l : sh.lengths) sh.has[static_cast<size_t>(l)] = 1;
        return cache_.emplace(key, std::move(sh)).first->second;
    }

private:
    Exact eps_;
    std::vector<Exact> powers_;
    std::vector<int64_t> floors_, ceils_;
    std::map<std::pair<int, int>, Shape> cache_;
};

// Is [start, end] emitted by P over the substring (offset, offset + n]?
bool in_shape(const Shape& sh, int offset, int n, int start, int end) {
    const int len = end - start + 1;
    if (len < 1 || start <= offset || end > offset + n) return false;
    if ((start - offset - 1) % sh.gamma != 0) return false;
    if (len <= sh.max_len && sh.has[static_cast<size_t>(len)]) return true;
    return end == offset + n && sh.max_len >= len;  // truncated at the end
}

Seq slice(const Sequence& s, const Window& w) {
    if (w.length() <= 0) return {};
    return Seq(s.symbols.begin() + (w.start - 1), s.symbols.begin() + w.end);
}

// |a| + |b| - 2 * (common symbol multiset) bounds the pairwise cumulative cost from below
int count_bound(Seq a, Seq b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    size_t i = 0, j = 0;
    int common = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++common;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return static_cast<int>(a.size() + b.size()) - 2 * common;
}

Exact exact_p(const PipelineParams& params) { return exact_from_double(params.p); }
Exact exact_eps(const PipelineParams& params) { return exact_from_double(params.eps); }

void validate(const std::vector<Sequence>& strings, const PipelineParams& params) {
    if (strings.size() < 2) throw std::invalid_argument("need at least two strings");
    if (strings[0].size() == 0) throw std::invalid_argument("s_1 is empty");
    if (!(params.p > 0 && params.p < 1)) throw std::invalid_argument("p must lie in (0, 1)");
    if (params.B < 1) throw std::invalid_argument("B must be at least 1");
    if (!(params.eps > 0) || exact_eps(params) > Exact(1, 6)) throw std::invalid_argument("epsilon must lie in (0, 1/6]");
    if (params.large_tuple_cap < 0 || params.max_large_ell < 0) throw std::invalid_argument("caps must be non-negative");
}

std::vector<Window> beta_partition(int n, int beta) {
    std::vector<Window> out;
    for (int s = 1; s <= n; s += beta) out.push_back({1, s, std::min(n, s + beta - 1)});
    return out;
}

using TupleKey = std::vector<Window>;

}  // namespace

std::vector<Window> WindowGrid::all() const {
    std::set<Window> uniq;
    for (const auto& layer : layers) {
        uniq.insert(layer.high.begin(), layer.high.end());
        uniq.insert(layer.low.begin(), layer.low.end());
    }
    return {uniq.begin(), uniq.end()};
}

WindowGrid window_gen(int seq, int n, int d, const Exact& theta, const Exact& eps, int offset) {
    if (d < 1) throw std::invalid_argument("d must be at least 1");
    if (theta < 0 || theta > 1) throw std::invalid_argument("theta must lie in [0, 1]");
    if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
    ShapeCache shapes(eps);
    WindowGrid g{d, theta, eps, {}};
    const int gamma = shapes.gamma(d, theta);
    auto sizes = shapes.layers(d, theta);
    Exact tau = 0;
    for (size_t k = 0; k < sizes.size(); ++k) {
        GridLayer layer;
        if (k + 1 == sizes.size() && k > 0) {
            tau = theta;
        } else if (k > 0) {
            tau = k == 1 ? Exact(1, d) : tau * (1 + eps);
        }
        layer.tau = tau;
        layer.h = sizes[k].first;
        layer.l = sizes[k].second;
        layer.gamma = gamma;
        for (int s = offset + 1; s <= offset + n; s += gamma) {
            if (layer.h >= 1) layer.high.push_back({seq, s, std::min(offset + n, s + layer.h - 1)});
            if (layer.l >= 1) layer.low.push_back({seq, s, std::min(offset + n, s + layer.l - 1)});
        }
        g.layers.push_back(std::move(layer));
    }
    return g;
}

bool verify_pseudorandom(const Seq& s, double p, int B) {
    const int n = static_cast<int>(s.size());
    if (B < 1 || B > n) throw std::invalid_argument("B must be in [1, n]");
    const int64_t need = ceil_int(exact_from_double(p) * B);  // B - LCS must reach this
    std::vector<int> row;
    for (int a = 0; a + B <= n; ++a)
        for (int b = a + B; b + B <= n; ++b)
            if (B - lcs2(&s[a], B, &s[b], B, row) < need) return false;
    return true;
}

Seq gen_pseudorandom(int n, int alphabet_size, uint64_t seed) {
    if (alphabet_size < 2) throw std::invalid_argument("alphabet size must be at least 2");
    if (n < 0) throw std::invalid_argument("negative length");
    auto g = Rng(seed).stream("pseudorandom");
    std::uniform_int_distribution<int> sym(0, alphabet_size - 1);
    Seq s(static_cast<size_t>(n));
    for (auto& c : s) c = sym(g);
    return s;
}

std::vector<Window> disjoint(std::vector<Window> windows) {
    std::sort(windows.begin(), windows.end(),
              [](const Window& a, const Window& b) { return std::tie(a.start, a.end) < std::tie(b.start, b.end); });
    std::vector<Window> out;
    for (const auto& w : windows) {
        if (w.length() < 1) continue;
        if (out.empty() || w.start > out.back().end) out.push_back(w);
    }
    return out;
}

int pipeline_beta(int n, int B) {
    if (n < 1 || B < 1) throw std::invalid_argument("n and B must be positive");
    int r = static_cast<int>(std::sqrt(static_cast<double>(n)));
    while (r * r < n) ++r;
    while (r > 1 && (r - 1) * (r - 1) >= n) --r;
    return std::max(B, r);
}

std::vector<Exact> unique_theta_grid(const PipelineParams& params, int beta) {
    auto grid = geometric_down(exact_p(params) / 4, exact_eps(params), Exact(1, beta));
    grid.push_back(0);
    return grid;
}

UniqueMatchResult find_unique_match(const std::vector<Sequence>& strings, const PipelineParams& params) {
    validate(strings, params);
    const int m = static_cast<int>(strings.size());
    const int n = static_cast<int>(strings[0].size());
    const Exact P = exact_p(params);
    const Exact E = exact_eps(params);
    const int beta = pipeline_beta(n, params.B);
    const auto grid = unique_theta_grid(params, beta);
    const size_t T = grid.size();
    const int64_t den = static_cast<int64_t>(m) << 16;
    ShapeCache shapes(E);

    UniqueMatchResult out;
    MatchSets& ms = out.sets;
    ms.beta = beta;
    ms.partition = beta_partition(n, beta);
    const size_t nb = ms.partition.size();

    // W-bar_{j,theta} for every theta at once: window -> membership per theta index
    std::vector<std::map<Window, std::vector<char>>> pool(static_cast<size_t>(m));
    for (int j = 1; j < m; ++j) {
        const int nj = static_cast<int>(strings[static_cast<size_t>(j)].size());
        auto& pj = pool[static_cast<size_t>(j)];
        for (size_t t = 0; t < T; ++t) {
            const Shape& sh = shapes.get(beta, static_cast<int>(t), grid[t]);
            for (int s = 1; s <= nj; s += sh.gamma)
                for (int len : sh.lengths) {
                    Window w{j + 1, s, std::min(nj, s + len - 1)};
                    auto& mark = pj[w];
                    if (mark.empty()) mark.assign(T, 0);
                    mark[t] = 1;
                }
        }
    }

    const int pair_cap = static_cast<int>(floor_int(P * beta / 2));  // generalized pairwise cost <= p*beta/4
    const Exact zero_limit = Exact(16 * m) / (P * E);
    ms.within.assign(nb, std::vector<std::vector<Window>>(static_cast<size_t>(m - 1)));
    ms.disjoint_sets = ms.within;
    ms.zeroed.assign(nb, false);
    ms.slices.assign(nb, std::vector<std::vector<std::vector<Window>>>(static_cast<size_t>(m - 1),
                                                                        std::vector<std::vector<Window>>(T)));
    // pairwise LCS with w_i, used to bound tuple costs from below
    std::vector<std::vector<std::map<Window, int>>> pair_lcs(nb, std::vector<std::map<Window, int>>(static_cast<size_t>(m)));

    for (size_t i = 0; i < nb; ++i) {
        const Seq wi = slice(strings[0], ms.partition[i]);
        int total = 0;
        for (int j = 1; j < m; ++j) {
            const auto& sj = strings[static_cast<size_t>(j)];
            auto& within = ms.within[i][static_cast<size_t>(j - 1)];
            for (const auto& [w, mark] : pool[static_cast<size_t>(j)]) {
                if (std::abs(w.length() - static_cast<int>(wi.size())) > pair_cap) continue;
                Seq ws = slice(sj, w);
                if (count_bound(wi, ws) > pair_cap) continue;
                auto pc = banded_cumulative({wi, ws}, pair_cap, params.seed);
                if (!pc) continue;
                within.push_back(w);
                pair_lcs[i][static_cast<size_t>(j)][w] = (static_cast<int>(wi.size() + ws.size()) - *pc) / 2;
            }
            ms.disjoint_sets[i][static_cast<size_t>(j - 1)] = disjoint(within);
            total += static_cast<int>(ms.disjoint_sets[i][static_cast<size_t>(j - 1)].size());
        }
        ms.zeroed[i] = Exact(total) >= zero_limit;
        if (ms.zeroed[i]) continue;
        for (int j = 1; j < m; ++j)
            for (const auto& w : ms.within[i][static_cast<size_t>(j - 1)]) {
                const auto& mark = pool[static_cast<size_t>(j)].at(w);
                for (size_t t = 0; t < T; ++t)
                    if (mark[t]) ms.slices[i][static_cast<size_t>(j - 1)][t].push_back(w);
            }
    }

    std::map<int, std::vector<int64_t>> caps;
    std::map<int, std::vector<Rational>> costs;
    for (size_t i = 0; i < nb; ++i) {
        if (ms.zeroed[i]) continue;
        const Window& w1 = ms.partition[i];
        const int len1 = w1.length();
        if (!caps.count(len1)) {
            auto& cp = caps[len1];
            auto& cv = costs[len1];
            for (size_t t = 0; t < T; ++t) {
                cp.push_back(floor_int(grid[t] * len1 * m));
                cv.push_back(grid[t] == 0 ? Rational{0, den} : ceil_rational(grid[t] * len1, den));
            }
        }
        const auto& cap = caps[len1];
        const auto& cost = costs[len1];
        bool empty = false;
        for (const auto& wj : ms.within[i]) empty |= wj.empty();
        if (empty) continue;

        std::vector<Window> chosen(static_cast<size_t>(m));
        chosen[0] = w1;
        std::vector<char> mask(T, 1);
        // partial lower bound: sum_j (|w_j| - L_1j) plus |w_1| - min_j L_1j
        std::function<void(int, int, int, std::vector<char>)> rec = [&](int j, int sum, int minL,
                                                                         std::vector<char> mk) {
            if (sum + (len1 - minL) > cap[0]) return;
            if (j == m) {
                std::vector<Seq> raw;
                for (const auto& w : chosen) raw.push_back(slice(strings[static_cast<size_t>(w.seq - 1)], w));
                int64_t hmax = -1;
                for (size_t t = 0; t < T; ++t)
                    if (mk[t]) hmax = std::max(hmax, cap[t]);
                if (hmax < sum + (len1 - minL)) return;
                auto C = banded_cumulative(raw, static_cast<int>(hmax), params.seed);
                if (!C) return;
                for (size_t t = T; t-- > 0;) {
                    if (!mk[t] || *C > cap[t]) continue;
                    out.tuples.push_back({chosen, cost[t]});
                    return;
                }
                return;
            }
            const auto& pj = pool[static_cast<size_t>(j)];
            for (const auto& w : ms.within[i][static_cast<size_t>(j - 1)]) {
                const auto& mark = pj.at(w);
                std::vector<char> next(T);
                bool any = false;
                for (size_t t = 0; t < T; ++t) any |= (next[t] = mk[t] && mark[t]);
                if (!any) continue;
                const int L = pair_lcs[i][static_cast<size_t>(j)].at(w);
                chosen[static_cast<size_t>(j)] = w;
                rec(j + 1, sum + w.length() - L, std::min(minL, L), std::move(next));
            }
        };
        rec(1, 0, len1, mask);
    }
    return out;
}

namespace {

struct Anchor {
    int left_end;     // e(w-bar); 0 for the virtual left anchor
    int left_start;   // s(w-bar)
    int right_start;  // s(w-bbar); n_j + 1 for the virtual right anchor
    int right_end;    // e(w-bbar)
};

std::vector<Anchor> anchors_for(const MatchSets& ms, size_t k, size_t q, size_t nb, int j, int nj) {
    std::vector<Window> left, right;
    if (k == 0) {
        left.push_back({j + 1, 0, 0});
    } else {
        left = ms.disjoint_sets[k - 1][static_cast<size_t>(j - 1)];
    }
    if (q == nb) {
        right.push_back({j + 1, nj + 1, nj + 1});
    } else {
        right = ms.disjoint_sets[q][static_cast<size_t>(j - 1)];
    }
    std::vector<Anchor> out;
    for (const auto& a : left)
        for (const auto& b : right)
            if (a.end < b.start) out.push_back({a.end, a.start, b.start, b.end});
    return out;
}

// Windows of the union of shapes inside [lo, hi], nearest first to the gap window (gs, ge).
std::vector<Window> nearest_windows(const std::vector<const Shape*>& shapes, int seq, int lo, int hi, int gs, int ge,
                                    int max_len, size_t want) {
    std::vector<Window> out;
    if (lo > hi) return out;
    const int offset = lo - 1, n = hi - lo + 1;
    const int span = 2 * (hi - lo + 2) + std::abs(gs - lo) + std::abs(ge - hi);
    for (int delta = 0; delta <= span && out.size() < want; ++delta)
        for (int ds = -delta; ds <= delta && out.size() < want; ++ds) {
            const int rest = delta - std::abs(ds);
            for (int sign : {-1, 1}) {
                if (rest == 0 && sign == 1) continue;
                Window w{seq, gs + ds, ge + sign * rest};
                if (w.length() < 1 || w.length() > max_len) continue;
                bool hit = false;
                for (const Shape* sh : shapes) hit = hit || in_shape(*sh, offset, n, w.start, w.end);
                if (hit && out.size() < want) out.push_back(w);
            }
        }
    return out;
}

// Cartesian product of per-string candidate lists ordered by total rank, at most cap entries.
std::vector<std::vector<Window>> ranked_product(const std::vector<std::vector<Window>>& lists, size_t cap,
                                                int* dropped) {
    std::vector<std::pair<int, std::vector<Window>>> all{{0, {}}};
    for (const auto& l : lists) {
        std::vector<std::pair<int, std::vector<Window>>> next;
        for (const auto& [r, pre] : all)
            for (size_t k = 0; k < l.size(); ++k) {
                auto v = pre;
                v.push_back(l[k]);
                next.push_back({r + static_cast<int>(k), std::move(v)});
            }
        all = std::move(next);
    }
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    if (cap > 0 && all.size() > cap) {
        *dropped += static_cast<int>(all.size() - cap);
        all.resize(cap);
    }
    std::vector<std::vector<Window>> out;
    for (auto& [r, v] : all) out.push_back(std::move(v));
    return out;
}

}  // namespace

std::vector<CertifiedTuple> approx_large_windows(const std::vector<Sequence>& strings, const PipelineParams& params,
                                                 const MatchSets& ms, LargeWindowStats* stats) {
    validate(strings, params);
    LargeWindowStats local;
    LargeWindowStats& st = stats ? *stats : local;
    const int m = static_cast<int>(strings.size());
    const int beta = ms.beta;
    const size_t nb = ms.partition.size();
    const Exact P = exact_p(params);
    const Exact E = exact_eps(params);
    const auto large_grid = geometric_down(Exact(1), E, P / 16);
    ShapeCache shapes(E);
    const size_t cap = static_cast<size_t>(params.large_tuple_cap);
    const size_t per_string =
        cap == 0 ? SIZE_MAX : static_cast<size_t>(std::ceil(std::pow(static_cast<double>(cap), 1.0 / (m - 1)) - 1e-9));

    std::map<TupleKey, Rational> certified;
    std::set<TupleKey> aligned;  // keys that already carry a LargeAlign certificate
    std::map<int, std::vector<const Shape*>> grid_shapes, trivial_shapes;
    const int max_ell = static_cast<int>(nb);
    for (int ell = 1; ell <= max_ell; ++ell) {
        for (size_t k = 0; k + static_cast<size_t>(ell) <= nb; ++k) {
            if (params.max_large_ell > 0 && ell > params.max_large_ell) {
                ++st.ell_skipped;
                continue;
            }
            ++st.considered;
            const size_t q = k + static_cast<size_t>(ell);
            Window wi{1, ms.partition[k].start, ms.partition[q - 1].end};
            const int len1 = wi.length();
            const int d = ell * beta;
            bool bad = false;
            for (size_t nbr : {k == 0 ? nb : k - 1, q}) {
                if (nbr == nb) continue;
                if (ms.zeroed[nbr]) bad = true;
                for (const auto& w : ms.within[nbr]) bad |= w.empty();
            }
            if (bad) {
                ++st.discarded;
                continue;
            }
            std::vector<std::vector<Anchor>> per_j;
            for (int j = 1; j < m; ++j)
                per_j.push_back(anchors_for(ms, k, q, nb, j, static_cast<int>(strings[static_cast<size_t>(j)].size())));
            // anchor combinations, in order
            std::vector<std::vector<Anchor>> combos{{}};
            for (const auto& opts : per_j) {
                std::vector<std::vector<Anchor>> next;
                for (const auto& c : combos)
                    for (const auto& a : opts) {
                        auto v = c;
                        v.push_back(a);
                        next.push_back(std::move(v));
                    }
                combos = std::move(next);
            }
            if (cap > 0 && combos.size() > cap) {
                st.truncated += static_cast<int>(combos.size() - cap);
                combos.resize(cap);
            }
            if (combos.empty()) {
                ++st.discarded;
                continue;
            }
            bool trivial_hit = false, large_hit = false;
            for (const auto& combo : combos) {
                int64_t gap_sum = 0;
                for (const auto& a : combo) gap_sum += a.right_start - a.left_end;
                const bool trivial = gap_sum >= int64_t{5} * ell * beta * m;
                auto& shs = trivial ? trivial_shapes[d] : grid_shapes[d];
                if (shs.empty()) {
                    if (trivial) {
                        shs.push_back(&shapes.get(d, 0, Exact(1)));
                    } else {
                        for (size_t t = 0; t < large_grid.size(); ++t)
                            shs.push_back(&shapes.get(d, static_cast<int>(t), large_grid[t]));
                    }
                }
                std::vector<std::vector<Window>> lists;
                for (int j = 1; j < m; ++j) {
                    const auto& a = combo[static_cast<size_t>(j - 1)];
                    const int nj = static_cast<int>(strings[static_cast<size_t>(j)].size());
                    const int lo = std::max(1, a.left_start - beta);
                    const int hi = std::min(nj, a.right_end + beta);
                    lists.push_back(nearest_windows(shs, j + 1, lo, hi, a.left_end + 1, a.right_start - 1,
                                                    trivial ? len1 : INT32_MAX, per_string));
                }
                for (auto& rest : ranked_product(lists, cap, &st.truncated)) {
                    TupleKey key{wi};
                    key.insert(key.end(), rest.begin(), rest.end());
                    Rational c;
                    if (trivial) {
                        c = Rational{len1, 1};
                        trivial_hit = true;
                    } else {
                        std::vector<Seq> raw;
                        for (const auto& w : key) raw.push_back(slice(strings[static_cast<size_t>(w.seq - 1)], w));
                        if (!aligned.insert(key).second) continue;
                        auto r = large_align(make_sequences(raw), E);
                        int64_t total = 0;
                        for (const auto& x : raw) total += static_cast<int64_t>(x.size());
                        c = Rational{total - m * static_cast<int64_t>(r.witness.tuples.size()), m};
                        large_hit = true;
                    }
                    auto it = certified.find(key);
                    if (it == certified.end() || c < it->second) certified[key] = c;
                }
            }
            st.trivial_branch += trivial_hit;
            st.large_branch += large_hit;
            st.certified += large_hit;
        }
    }
    std::vector<CertifiedTuple> out;
    for (auto& [key, c] : certified) out.push_back({key, c});
    return out;
}

Estimation multi_window_estimation(const std::vector<Sequence>& strings, const PipelineParams& params) {
    Estimation est;
    auto um = find_unique_match(strings, params);
    est.sets = std::move(um.sets);
    auto large = approx_large_windows(strings, params, est.sets, &est.large);
    est.unique_blocks.assign(est.sets.partition.size(), 0);
    for (const auto& t : um.tuples) {
        auto it = std::lower_bound(est.sets.partition.begin(), est.sets.partition.end(), t.windows[0]);
        est.unique_blocks[static_cast<size_t>(it - est.sets.partition.begin())] = 1;
    }
    std::map<TupleKey, Rational> best;
    for (const auto* part : {&um.tuples, &large})
        for (const auto& t : *part) {
            auto it = best.find(t.windows);
            if (it == best.end() || t.c < it->second) best[t.windows] = t.c;
        }
    for (auto& [key, c] : best) est.tuples.push_back({key, c});
    return est;
}

namespace {

// prefix-min over e_2..e_m of (key, tuple id); 1 or 2 dimensions use Fenwick trees
class Dominance {
public:
    explicit Dominance(const std::vector<int>& sizes) : sizes_(sizes) {
        if (sizes_.size() == 1) tree_.assign(static_cast<size_t>(sizes_[0]) + 1, kEmpty);
        if (sizes_.size() == 2)
            tree_.assign((static_cast<size_t>(sizes_[0]) + 1) * (static_cast<size_t>(sizes_[1]) + 1), kEmpty);
    }

    // coordinates are end positions in [0, size)
    void insert(const std::vector<int>& e, std::pair<int64_t, int> v) {
        if (sizes_.size() == 1) {
            for (int x = e[0] + 1; x <= sizes_[0]; x += x & -x) upd(idx(x, 0), v);
        } else if (sizes_.size() == 2) {
            for (int x = e[0] + 1; x <= sizes_[0]; x += x & -x)
                for (int y = e[1] + 1; y <= sizes_[1]; y += y & -y) upd(idx(x, y), v);
        } else {
            flat_.push_back({e, v});
        }
    }

    // min over inserted entries with e_j < bound_j for every j
    std::pair<int64_t, int> query(const std::vector<int>& bound) const {
        std::pair<int64_t, int> best = kEmpty;
        if (sizes_.size() == 1) {
            for (int x = std::min(bound[0], sizes_[0]); x > 0; x -= x & -x) best = std::min(best, tree_[idx(x, 0)]);
        } else if (sizes_.size() == 2) {
            for (int x = std::min(bound[0], sizes_[0]); x > 0; x -= x & -x)
                for (int y = std::min(bound[1], sizes_[1]); y > 0; y -= y & -y) best = std::min(best, tree_[idx(x, y)]);
        } else {
            for (const auto& [e, v] : flat_) {
                bool ok = true;
                for (size_t j = 0; j < e.size() && ok; ++j) ok = e[j] < bound[j];
                if (ok) best = std::min(best, v);
            }
        }
        return best;
    }

    static constexpr std::pair<int64_t, int> kEmpty{INT64_MAX, -1};

private:
    size_t idx(int x, int y) const {
        return sizes_.size() == 1 ? static_cast<size_t>(x)
                                  : static_cast<size_t>(x) * (static_cast<size_t>(sizes_[1]) + 1) + static_cast<size_t>(y);
    }
    void upd(size_t i, std::pair<int64_t, int> v) { tree_[i] = std::min(tree_[i], v); }

    std::vector<int> sizes_;
    std::vector<std::pair<int64_t, int>> tree_;
    std::vector<std::pair<std::vector<int>, std::pair<int64_t, int>>> flat_;
};

}  // namespace

Assembly assemble_distance(const std::vector<CertifiedTuple>& S, const std::vector<Sequence>& strings) {
    const size_t m = strings.size();
    if (m < 2) throw std::invalid_argument("need at least two strings");
    int64_t den = static_cast<int64_t>(m);
    for (const auto& t : S) {
        if (t.windows.size() != m) throw std::invalid_argument("tuple arity differs from string count");
        if (t.c.den <= 0) throw std::invalid_argument("non-positive denominator");
        den = std::lcm(den, t.c.den);
    }
    const int64_t unit = den / static_cast<int64_t>(m);  // one deleted symbol

    // tuples plus the zero-length terminal window at n_j + 1
    std::vector<const CertifiedTuple*> items;
    for (const auto& t : S) {
        bool ok = true;
        for (size_t j = 0; j < m; ++j) {
            const auto& w = t.windows[j];
            ok = ok && w.length() >= 1 && w.start >= 1 && w.end <= static_cast<int>(strings[j].size());
        }
        if (!ok) throw std::invalid_argument("window outside its string");
        items.push_back(&t);
    }
    CertifiedTuple terminal;
    for (size_t j = 0; j < m; ++j) {
        const int nj = static_cast<int>(strings[j].size());
        terminal.windows.push_back({static_cast<int>(j) + 1, nj + 1, nj});
    }
    terminal.c = Rational{0, 1};
    std::vector<size_t> order(items.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return items[a]->windows[0].start < items[b]->windows[0].start;
    });
    order.push_back(items.size());
    items.push_back(&terminal);

    std::vector<size_t> by_end(items.size() - 1);
    std::iota(by_end.begin(), by_end.end(), 0);
    std::stable_sort(by_end.begin(), by_end.end(), [&](size_t a, size_t b) {
        return items[a]->windows[0].end < items[b]->windows[0].end;
    });

    std::vector<int> sizes;
    for (size_t j = 1; j < m; ++j) sizes.push_back(static_cast<int>(strings[j].size()) + 1);
    Dominance dom(sizes);
    dom.insert(std::vector<int>(m - 1, 0), {0, -1});  // the origin

    std::vector<int64_t> value(items.size(), INT64_MAX);
    std::vector<int> pred(items.size(), -1);
    size_t ins = 0;
    for (size_t id : order) {
        const auto& t = *items[id];
        while (ins < by_end.size() && items[by_end[ins]]->windows[0].end < t.windows[0].start) {
            size_t e = by_end[ins++];
            if (value[e] == INT64_MAX) continue;
            int64_t key = value[e];
            std::vector<int> ends;
            for (size_t j = 0; j < m; ++j) key -= static_cast<int64_t>(items[e]->windows[j].end) * unit;
            for (size_t j = 1; j < m; ++j) ends.push_back(items[e]->windows[j].end);
            dom.insert(ends, {key, static_cast<int>(e)});
        }
        std::vector<int> bound;
        for (size_t j = 1; j < m; ++j) bound.push_back(t.windows[j].start);
        // the origin sits at e = 0 in s_1 too, and every window starts past it
        auto best = dom.query(bound);
        if (best.first == INT64_MAX) continue;
        int64_t lead = 0;
        for (size_t j = 0; j < m; ++j) lead += static_cast<int64_t>(t.windows[j].start - 1) * unit;
        value[id] = best.first + lead + t.c.num * (den / t.c.den);
        pred[id] = best.second;
    }

    Assembly a;
    const size_t last = items.size() - 1;
    a.reachable = value[last] != INT64_MAX;
    if (!a.reachable) return a;
    a.value = Rational{value[last], den}.reduced();
    for (int p = pred[last]; p >= 0; p = pred[static_cast<size_t>(p)]) a.chain.push_back(*items[static_cast<size_t>(p)]);
    std::reverse(a.chain.begin(), a.chain.end());
    return a;
}

PseudoResult pseudo_align(const std::vector<Sequence>& strings, const PipelineParams& params) {
    validate(strings, params);
    PseudoResult r;
    r.estimation = multi_window_estimation(strings, params);
    r.assembly = assemble_distance(r.estimation.tuples, strings);
    if (!r.assembly.reachable) throw std::logic_error("terminal state unreachable");
    r.cost = r.assembly.value;

    const auto& ms = r.estimation.sets;
    auto& dg = r.diagnostics;
    dg.beta = ms.beta;
    dg.certified_tuples = r.estimation.tuples.size();
    dg.large = r.estimation.large;
    dg.trivial_windows = dg.large.trivial_branch;
    dg.large_cost_windows = dg.large.certified;
    const size_t nb = ms.partition.size();
    std::vector<char> covered(nb, 0);
    for (const auto& t : r.estimation.tuples) {
        const Window& w = t.windows[0];
        for (size_t i = 0; i < nb; ++i)
            covered[i] |= ms.partition[i].start >= w.start && ms.partition[i].end <= w.end;
    }
    for (size_t i = 0; i < nb; ++i) {
        dg.unique_windows += r.estimation.unique_blocks[i];
        dg.uncertifiable_windows += !covered[i];
    }
    return r;
}

}  // namespace msa
