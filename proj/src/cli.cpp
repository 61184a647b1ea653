#include "msa/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "msa/large_align.hpp"
#include "msa/lcs_approx.hpp"
#include "msa/pseudorandom.hpp"
#include "msa/rational.hpp"
#include "msa/rng.hpp"
#include "msa/testkit.hpp"

namespace msa::cli {

using json = nlohmann::ordered_json;

std::vector<Sequence> read_sequences(std::istream& in, AlphabetMode mode) {
    std::vector<Seq> raw;
    std::map<std::string, Symbol> interned;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        Seq s;
        if (mode == AlphabetMode::bytes) {
            for (unsigned char c : line) s.push_back(c);
        } else {
            std::istringstream words(line);
            std::string w;
            while (words >> w) {
                auto it = interned.try_emplace(w, static_cast<Symbol>(interned.size())).first;
                s.push_back(it->second);
            }
        }
        raw.push_back(std::move(s));
    }
    while (!raw.empty() && raw.back().empty()) raw.pop_back();
    return make_sequences(raw);
}

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Job {
    std::string input;
    std::vector<std::string> inline_seqs;
    std::string alphabet = "bytes";
    uint64_t seed = 1;
    double eps = 0.1;
    double pseudo_eps = PipelineParams{}.eps;
    std::optional<double> theta;
    std::optional<double> lambda;
    std::optional<int> groups;
    std::string engine = "dp";
    std::optional<int> k;
    std::string check_witness;
    double p = 0.5;
    int B = 16;
    bool verify = false;
    int tuple_cap = PipelineParams{}.large_tuple_cap;
    int max_ell = PipelineParams{}.max_large_ell;
    // gen
    int m = 3;
    int n = 8;
    int alphabet_size = 4;
    std::string planting = "none";
    double gen_lambda = 0.5;
    double gen_theta = 0.25;
    int budget = 20;
    std::string emit = "text";
    // audit
    std::string suite = "engines";
    int count = 100;
    int threads = 1;
};

uint64_t default_seed() {
    if (const char* env = std::getenv("MSA_SEED")) {
        try {
            return std::stoull(env, nullptr, 0);
        } catch (const std::exception&) {
            throw InputError("MSA_SEED is not an integer");
        }
    }
    return 1;
}

std::vector<Sequence> load(const Job& job, std::istream& in) {
    if (job.alphabet != "bytes" && job.alphabet != "tokens") throw InputError("alphabet must be bytes or tokens");
    const AlphabetMode mode = job.alphabet == "bytes" ? AlphabetMode::bytes : AlphabetMode::tokens;
    std::vector<Sequence> s;
    if (!job.inline_seqs.empty()) {
        if (!job.input.empty()) throw InputError("give either --input or --seq, not both");
        std::string text;
        for (const auto& x : job.inline_seqs) text += x + "\n";
        std::istringstream ss(text);
        s = read_sequences(ss, mode);
    } else if (job.input.empty() || job.input == "-") {
        s = read_sequences(in, mode);
    } else {
        std::ifstream f(job.input);
        if (!f) throw InputError("cannot open " + job.input);
        s = read_sequences(f, mode);
    }
    if (s.size() < 2) throw InputError("need at least two sequences");
    return s;
}

void require_equal_lengths(const std::vector<Sequence>& s) {
    for (const auto& x : s)
        if (x.size() != s[0].size()) throw InputError("sequence length mismatch");
}

Exact positive(double v, const char* name) {
    if (!(v > 0)) throw InputError(std::string(name) + " must be positive");
    return exact_from_double(v);
}

Exact unit_interval(double v, const char* name) {
    if (!(v > 0 && v <= 1)) throw InputError(std::string(name) + " must lie in (0, 1]");
    return exact_from_double(v);
}

json tuples_json(const std::vector<std::vector<int>>& tuples) {
    json a = json::array();
    for (const auto& t : tuples) a.push_back(t);
    return a;
}

json window_json(const Window& w) { return json::array({w.seq, w.start, w.end}); }

json head(const std::string& command, json params) {
    json d;
    d["command"] = command;
    d["params"] = std::move(params);
    return d;
}

int finish(json& d, uint64_t seed, std::ostream& out, int code) {
    d["seed"] = seed;
    out << d.dump() << '\n';
    return code;
}

int cmd_exact(const Job& job, std::istream& in, std::ostream& out) {
    auto s = load(job, in);
    json params;
    params["engine"] = job.engine;
    if (job.k) params["k"] = *job.k;
    params["alphabet"] = job.alphabet;
    if (!job.check_witness.empty()) {
        // re-validate the witness of an earlier command's output against these strings
        std::ifstream f(job.check_witness);
        if (!f) throw InputError("cannot open " + job.check_witness);
        json prior;
        try {
            prior = json::parse(f);
        } catch (const json::exception&) {
            throw InputError("witness document is not valid JSON");
        }
        std::vector<std::vector<int>> tuples;
        try {
            tuples = prior.at("witness").get<std::vector<std::vector<int>>>();
        } catch (const json::exception&) {
            throw InputError("document has no tuple witness");
        }
        std::string why;
        for (const auto& t : tuples)
            if (t.size() != s.size()) why = "tuple arity does not match the input";
        if (why.empty()) why = check_alignment(s, make_alignment(s, tuples));
        params["check_witness"] = true;
        json d = head("exact", params);
        d["lcs_length"] = tuples.size();
        d["witness"] = tuples_json(tuples);
        d["diagnostics"] = json::object({{"witness_valid", why.empty()}, {"witness_error", why}});
        return finish(d, job.seed, out, why.empty() ? 0 : 1);
    }
    json d = head("exact", params);
    const bool equal = std::all_of(s.begin(), s.end(), [&](const Sequence& x) { return x.size() == s[0].size(); });
    const int n = static_cast<int>(s[0].size());
    if (job.engine == "dp" || job.engine == "candidates") {
        if (job.k) throw InputError("--k applies to the banded engine only");
        LcsResult r = job.engine == "dp" ? lcs_exact(s) : lcs_candidates_witness(s);
        d["distance"] = equal ? json(n - r.length) : json(nullptr);
        d["lcs_length"] = r.length;
        d["witness"] = tuples_json(r.witness.tuples);
        d["unaligned_s1"] = r.witness.unaligned[0];
        d["diagnostics"] = json::object({{"equal_lengths", equal}});
        return finish(d, job.seed, out, 0);
    }
    if (job.engine != "banded") throw InputError("engine must be dp, candidates, or banded");
    require_equal_lengths(s);
    const int k = job.k.value_or(n);
    if (k < 0) throw InputError("k must be non-negative");
    auto r = banded_distance(s, k, job.seed);
    d["distance"] = r ? json(*r) : json(nullptr);
    d["lcs_length"] = r ? json(n - *r) : json(nullptr);
    d["witness"] = nullptr;
    d["unaligned_s1"] = nullptr;
    d["diagnostics"] = json::object({{"k", k}, {"within_k", r.has_value()}});
    return finish(d, job.seed, out, r ? 0 : 1);
}

int cmd_align_approx(const Job& job, std::istream& in, std::ostream& out) {
    auto s = load(job, in);
    require_equal_lengths(s);
    const Exact eps = positive(job.eps, "epsilon");
    json params;
    params["epsilon"] = job.eps;
    if (job.theta) params["theta"] = *job.theta;
    if (job.groups) params["groups"] = *job.groups;
    json d = head("align-approx", params);
    const int n = static_cast<int>(s[0].size());
    if (job.theta) {
        if (job.groups) throw InputError("--theta and --groups are exclusive");
        const Exact theta = unit_interval(*job.theta, "theta");
        auto v = gap_multi_align_dist(s, theta);
        d["distance"] = v.witness ? json(v.witness->unaligned[0].size()) : json(nullptr);
        d["witness"] = v.witness ? tuples_json(v.witness->tuples) : json(nullptr);
        d["unaligned_s1"] = v.witness ? json(v.witness->unaligned[0]) : json(nullptr);
        d["diagnostics"] = json::object({{"gap_bit", v.bit}, {"threshold", gap_threshold(theta, n).convert_to<double>()}});
        return finish(d, job.seed, out, v.bit ? 0 : 1);
    }
    if (job.groups) {
        if (*job.groups < 2 || *job.groups % 2) throw InputError("groups must be even and at least 2");
        auto r = group_align(s, *job.groups, eps);
        d["distance"] = r.cost;
        d["witness"] = tuples_json(r.witness.tuples);
        d["unaligned_s1"] = r.deleted;
        json gs = json::array();
        for (size_t g = 0; g < r.groups.size(); ++g) {
            std::vector<int> ids;
            for (int j : r.groups[g]) ids.push_back(j + 1);
            gs.push_back(json::object({{"strings", ids}, {"deleted", r.group_deleted[g].size()}}));
        }
        d["diagnostics"] = json::object({{"groups", gs}});
        return finish(d, job.seed, out, 0);
    }
    auto r = large_align(s, eps);
    d["distance"] = r.cost;
    d["witness"] = tuples_json(r.witness.tuples);
    d["unaligned_s1"] = r.witness.unaligned[0];
    d["diagnostics"] = json::object({{"theta", r.theta.convert_to<double>()}, {"level", r.level}});
    return finish(d, job.seed, out, 0);
}

json lcs_witness_fields(json& d, const std::optional<LcsWitness>& w, int n) {
    d["lcs_length"] = w ? json(w->length()) : json(nullptr);
    d["witness"] = w ? tuples_json(w->alignment.tuples) : json(nullptr);
    if (!w) return d["unaligned_s1"] = nullptr;
    std::vector<int> un;
    for (int i = 1; i <= n; ++i)
        if (!std::binary_search(w->s1_indices.begin(), w->s1_indices.end(), i)) un.push_back(i);
    return d["unaligned_s1"] = un;
}

int cmd_lcs_approx(const Job& job, std::istream& in, std::ostream& out) {
    auto s = load(job, in);
    const Exact eps = positive(job.eps, "epsilon");
    json params;
    params["epsilon"] = job.eps;
    if (job.lambda) params["lambda"] = *job.lambda;
    json d = head("lcs-approx", params);
    const int n = static_cast<int>(s[0].size());
    if (job.lambda) {
        auto v = gap_multi_lcs(s, unit_interval(*job.lambda, "lambda"));
        lcs_witness_fields(d, v.witness, n);
        d["diagnostics"] = json::object({{"gap_bit", v.bit}});
        return finish(d, job.seed, out, v.bit ? 0 : 1);
    }
    auto r = multi_lcs_approx(s, eps);
    lcs_witness_fields(d, r.witness, n);
    d["diagnostics"] = json::object({{"lambda", r.lambda.convert_to<double>()}, {"level", r.level}});
    return finish(d, job.seed, out, 0);
}

PipelineParams pipeline_params(const Job& job) {
    PipelineParams pp;
    pp.p = job.p;
    pp.B = job.B;
    pp.eps = job.pseudo_eps;
    pp.large_tuple_cap = job.tuple_cap;
    pp.max_large_ell = job.max_ell;
    pp.seed = job.seed;
    if (!(job.p > 0 && job.p < 1)) throw InputError("p must lie in (0, 1)");
    if (job.B < 1) throw InputError("B must be at least 1");
    if (!(job.pseudo_eps > 0 && job.pseudo_eps <= 1.0 / 6)) throw InputError("epsilon must lie in (0, 1/6]");
    if (job.tuple_cap < 0 || job.max_ell < 0) throw InputError("caps must be non-negative");
    return pp;
}

int cmd_pseudo_align(const Job& job, std::istream& in, std::ostream& out) {
    auto s = load(job, in);
    PipelineParams pp = pipeline_params(job);
    json params;
    params["p"] = job.p;
    params["B"] = job.B;
    params["epsilon"] = job.pseudo_eps;
    params["verify"] = job.verify;
    params["tuple_cap"] = job.tuple_cap;
    params["max_ell"] = job.max_ell;
    json d = head("pseudo-align", params);
    std::optional<bool> pseudo;
    if (job.verify) pseudo = verify_pseudorandom(s[0].symbols, job.p, job.B);
    auto r = pseudo_align(s, pp);
    d["distance"] = r.cost.reduced().str();
    json chain = json::array();
    for (const auto& t : r.assembly.chain) {
        json ws = json::array();
        for (const auto& w : t.windows) ws.push_back(window_json(w));
        chain.push_back(json::object({{"windows", ws}, {"c", t.c.reduced().str()}}));
    }
    d["witness"] = chain;
    d["unaligned_s1"] = nullptr;
    const auto& dg = r.diagnostics;
    json diag;
    diag["distance_value"] = r.cost.value();
    diag["beta"] = dg.beta;
    diag["unique_windows"] = dg.unique_windows;
    diag["trivial_windows"] = dg.trivial_windows;
    diag["large_cost_windows"] = dg.large_cost_windows;
    diag["uncertifiable_windows"] = dg.uncertifiable_windows;
    diag["certified_tuples"] = dg.certified_tuples;
    diag["large_truncated"] = dg.large.truncated;
    diag["large_ell_skipped"] = dg.large.ell_skipped;
    diag["pseudorandom"] = pseudo ? json(*pseudo) : json(nullptr);
    d["diagnostics"] = diag;
    return finish(d, job.seed, out, pseudo && !*pseudo ? 1 : 0);
}

int cmd_check_pseudorandom(const Job& job, std::istream& in, std::ostream& out) {
    auto s = load(job, in);
    if (!(job.p > 0 && job.p < 1)) throw InputError("p must lie in (0, 1)");
    if (job.B < 1) throw InputError("B must be at least 1");
    json params;
    params["p"] = job.p;
    params["B"] = job.B;
    json d = head("check-pseudorandom", params);
    const bool ok = verify_pseudorandom(s[0].symbols, job.p, job.B);
    d["diagnostics"] = json::object({{"pseudorandom", ok}, {"length", s[0].size()}});
    return finish(d, job.seed, out, ok ? 0 : 1);
}

int cmd_gen(const Job& job, std::ostream& out) {
    auto planting = parse_planting(job.planting);
    if (!planting) throw InputError("unknown planting " + job.planting);
    InstanceSpec spec{job.m, job.n, job.alphabet_size, job.seed, *planting};
    spec.lambda = job.gen_lambda;
    spec.theta = job.gen_theta;
    spec.p = job.p;
    spec.B = job.B;
    spec.edit_budget = job.budget;
    Instance inst;
    try {
        inst = gen_instance(spec);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    const bool letters = job.alphabet_size <= 26;
    if (job.emit == "text") {
        for (const auto& s : inst.strings) {
            std::string line;
            for (size_t i = 0; i < s.size(); ++i) {
                if (letters) {
                    line += static_cast<char>('a' + s.symbols[i]);
                } else {
                    if (i) line += ' ';
                    line += std::to_string(s.symbols[i]);
                }
            }
            out << line << '\n';
        }
        return 0;
    }
    if (job.emit != "json") throw InputError("emit must be text or json");
    json params;
    params["m"] = job.m;
    params["n"] = job.n;
    params["alphabet_size"] = job.alphabet_size;
    params["planting"] = job.planting;
    json d = head("gen", params);
    d["distance"] = inst.distance ? json(*inst.distance) : json(nullptr);
    d["lcs_length"] = inst.lcs ? json(*inst.lcs) : json(nullptr);
    json strings = json::array();
    for (const auto& s : inst.strings) strings.push_back(s.symbols);
    d["diagnostics"] = json::object({{"strings", strings}, {"note", inst.note}});
    return finish(d, job.seed, out, 0);
}

int cmd_audit(const Job& job, std::ostream& out) {
    if (job.count < 1) throw InputError("count must be positive");
    if (job.threads < 1) throw InputError("threads must be positive");
    auto g = Rng(job.seed).stream("audit/" + job.suite);
    std::vector<Instance> insts;
    std::function<AuditOutcome(const Instance&)> run;
    auto add = [&](InstanceSpec spec) {
        spec.seed = g();
        insts.push_back(gen_instance(spec));
    };
    if (job.suite == "engines" || job.suite == "banded") {
        for (int i = 0; i < job.count; ++i)
            add({2 + static_cast<int>(g() % 3), 1 + static_cast<int>(g() % 8), 2 + static_cast<int>(g() % 3), 0,
                 Planting::none});
        if (job.suite == "engines") {
            run = [](const Instance& in) {
                AuditOutcome o;
                o.value = lcs_candidates(in.strings);
                o.oracle = lcs_exact(in.strings).length;
                o.bound = static_cast<double>(*o.oracle);
                return o;
            };
        } else {
            const uint64_t seed = job.seed;
            run = [seed](const Instance& in) {
                AuditOutcome o;
                const int n = static_cast<int>(in.strings[0].size());
                auto b = banded_distance(in.strings, n, seed);
                if (b) o.value = *b;
                o.oracle = alignment_distance_exact(in.strings);
                o.bound = static_cast<double>(*o.oracle);
                return o;
            };
        }
    } else if (job.suite == "large" || job.suite == "group") {
        const bool grouped = job.suite == "group";
        const int m = grouped ? 6 : 4, n = grouped ? 10 : 12;
        for (int i = 0; i < job.count; ++i) {
            InstanceSpec spec{m, n, 3, 0, Planting::bounded_distance};
            spec.theta = static_cast<double>(1 + g() % 6) / n;
            add(spec);
        }
        const Exact eps = positive(job.eps, "epsilon");
        run = [eps, grouped, n](const Instance& in) {
            AuditOutcome o;
            if (!in.distance) return o;
            const int a = *in.distance;
            o.oracle = a;
            const Exact theta(a, n);
            if (grouped) {
                o.value = group_align(in.strings, 4, eps).cost;
                o.bound = (4 * (1 - 3 * theta / 32 + eps) * a).convert_to<double>();
            } else {
                o.value = large_align(in.strings, eps).cost;
                o.bound = ((2 - 3 * theta / 16 + eps) * a).convert_to<double>();
            }
            return o;
        };
    } else if (job.suite == "lcs") {
        for (int i = 0; i < job.count; ++i) {
            InstanceSpec spec{3, 12, 3, 0, Planting::common_core};
            spec.lambda = static_cast<double>(2 + g() % 9) / 12;
            add(spec);
        }
        const Exact eps = positive(job.eps, "epsilon");
        run = [eps](const Instance& in) {
            AuditOutcome o;
            const int L = lcs_exact(in.strings).length;
            const int n = static_cast<int>(in.strings[0].size());
            o.oracle = L;
            o.value = multi_lcs_approx(in.strings, eps).witness.length();
            o.lower = true;
            o.bound = (Exact(L * L) / ((2 + eps) * n)).convert_to<double>();
            return o;
        };
    } else {
        throw InputError("suite must be engines, banded, large, group, or lcs");
    }
    auto rep = ratio_audit(job.suite, insts, run, job.threads);
    rep.write_lines(out);
    return rep.violations ? 1 : 0;
}

void add_input(CLI::App* sub, Job& job) {
    sub->add_option("-i,--input", job.input, "sequence file, one per line; - for stdin");
    sub->add_option("--seq", job.inline_seqs, "inline sequence (repeatable)");
    sub->add_option("--alphabet", job.alphabet, "bytes or tokens");
    sub->add_option("--seed", job.seed, "seed (default: MSA_SEED or 1)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
    Job job;
    try {
        job.seed = default_seed();
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    CLI::App app{"Multi-sequence LCS and alignment distance"};
    app.require_subcommand(1);

    auto* exact = app.add_subcommand("exact", "exact LCS and alignment distance");
    add_input(exact, job);
    exact->add_option("--engine", job.engine, "dp, candidates, or banded");
    exact->add_option("--k", job.k, "distance cap for the banded engine");
    exact->add_option("--check-witness", job.check_witness, "validate the witness of an earlier output document");

    auto* align = app.add_subcommand("align-approx", "approximate alignment distance");
    add_input(align, job);
    align->add_option("--epsilon", job.eps);
    align->add_option("--groups", job.groups, "even group count c");
    align->add_option("--theta", job.theta, "decide the gap problem at theta");

    auto* lcs = app.add_subcommand("lcs-approx", "approximate LCS");
    add_input(lcs, job);
    lcs->add_option("--epsilon", job.eps);
    lcs->add_option("--lambda", job.lambda, "decide the LCS gap problem at lambda");

    auto* pseudo = app.add_subcommand("pseudo-align", "windowed pipeline for a pseudorandom s_1");
    add_input(pseudo, job);
    pseudo->add_option("--p", job.p);
    pseudo->add_option("--B", job.B);
    pseudo->add_option("--epsilon", job.pseudo_eps);
    pseudo->add_flag("--verify", job.verify, "check s_1 first; exit 1 when it is not pseudorandom");
    pseudo->add_option("--tuple-cap", job.tuple_cap);
    pseudo->add_option("--max-ell", job.max_ell);

    auto* check = app.add_subcommand("check-pseudorandom", "check s_1 for (p, B)-pseudorandomness");
    add_input(check, job);
    check->add_option("--p", job.p);
    check->add_option("--B", job.B);

    auto* gen = app.add_subcommand("gen", "generate an instance");
    gen->add_option("--m", job.m);
    gen->add_option("--n", job.n);
    gen->add_option("--alphabet-size", job.alphabet_size);
    gen->add_option("--planting", job.planting, "none, common-core, bounded-distance, pseudorandom-base");
    gen->add_option("--lambda", job.gen_lambda);
    gen->add_option("--theta", job.gen_theta);
    gen->add_option("--p", job.p);
    gen->add_option("--B", job.B);
    gen->add_option("--budget", job.budget, "per-string edit budget");
    gen->add_option("--emit", job.emit, "text or json");
    gen->add_option("--seed", job.seed);

    auto* audit = app.add_subcommand("audit", "ratio audit against exact oracles");
    audit->add_option("--suite", job.suite, "engines, banded, large, group, lcs");
    audit->add_option("--count", job.count);
    audit->add_option("--epsilon", job.eps);
    audit->add_option("--threads", job.threads);
    audit->add_option("--seed", job.seed);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (exact->parsed()) return cmd_exact(job, in, out);
        if (align->parsed()) return cmd_align_approx(job, in, out);
        if (lcs->parsed()) return cmd_lcs_approx(job, in, out);
        if (pseudo->parsed()) return cmd_pseudo_align(job, in, out);
        if (check->parsed()) return cmd_check_pseudorandom(job, in, out);
        if (gen->parsed()) return cmd_gen(job, out);
        if (audit->parsed()) return cmd_audit(job, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace msa::cli
