#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "relzkp/commitment.hpp"
#include "relzkp/errors.hpp"
#include "relzkp/field.hpp"
#include "relzkp/graph.hpp"
#include "relzkp/rng.hpp"
#include "relzkp/spacetime.hpp"

namespace relzkp {

enum class RejectReason { timing, color_range, monochrome };

inline const char* to_string(RejectReason r) {
    switch (r) {
        case RejectReason::timing: return "timing";
        case RejectReason::color_range: return "color_range";
        case RejectReason::monochrome: return "monochrome";
    }
    return "?";
}

struct Verdict {
    bool accept = false;
    std::optional<RejectReason> reason{};

    static Verdict ok() { return {true, {}}; }
    static Verdict reject(RejectReason r) { return {false, r}; }

    std::string to_string() const {
        return accept ? "accept" : std::string("reject(") + relzkp::to_string(*reason) + ")";
    }
};

// Everything a verifier sees in one round.
struct RoundTranscript {
    std::uint64_t round_index = 0;
    std::vector<FieldElement> X;
    std::vector<FieldElement> A;
    Edge C{0, 0};
    std::array<FieldElement, 2> B_C{};
    RoundTimes times{};
    Verdict verdict{};

    nlohmann::json to_json(const Field& field) const {
        nlohmann::json x = nlohmann::json::array(), a = nlohmann::json::array();
        for (const auto& e : X) x.push_back(field.to_hex(e));
        for (const auto& e : A) a.push_back(field.to_hex(e));
        return {{"round_index", round_index},
                {"X", std::move(x)},
                {"A", std::move(a)},
                {"C", {C.first, C.second}},
                {"B_C", {field.to_hex(B_C[0]), field.to_hex(B_C[1])}},
                {"t1", times.t1},
                {"t2", times.t2},
                {"t3", times.t3},
                {"t4", times.t4},
                {"verdict", verdict.to_string()}};
    }

    static RoundTranscript from_json(const nlohmann::json& j, const Field& field) {
        RoundTranscript t;
        t.round_index = j.at("round_index").get<std::uint64_t>();
        for (const auto& h : j.at("X")) t.X.push_back(field.from_hex(h.get<std::string>()));
        for (const auto& h : j.at("A")) t.A.push_back(field.from_hex(h.get<std::string>()));
        t.C = make_edge(j.at("C")[0].get<VertexId>(), j.at("C")[1].get<VertexId>());
        t.B_C = {field.from_hex(j.at("B_C")[0].get<std::string>()),
                 field.from_hex(j.at("B_C")[1].get<std::string>())};
        t.times = {j.at("t1").get<double>(), j.at("t2").get<double>(), j.at("t3").get<double>(),
                   j.at("t4").get<double>()};
        std::string v = j.at("verdict").get<std::string>();
        if (v == "accept") {
            t.verdict = Verdict::ok();
        } else {
            for (RejectReason r : {RejectReason::timing, RejectReason::color_range, RejectReason::monochrome})
                if (v == std::string("reject(") + relzkp::to_string(r) + ")") t.verdict = Verdict::reject(r);
        }
        return t;
    }
};

// Per-round prover randomness: the color permutation and one key per vertex.
struct RoundKeys {
    ColorPermutation pi;
    std::vector<FieldElement> B;
};

inline RoundKeys draw_round_keys(const Field& field, VertexId num_vertices, SeededRng& rng) {
    RoundKeys keys;
    keys.pi = ColorPermutation::sample(rng);
    keys.B.reserve(num_vertices);
    for (VertexId i = 0; i < num_vertices; ++i) keys.B.push_back(field.sample_uniform(rng));
    return keys;
}

// Step 0: provers agree on fresh (pi, B) before the round.
inline RoundKeys round_prepare(const ColoredGraph& graph, const Field& field, SeededRng& rng) {
    if (!graph.has_witness()) throw NotAProver("round_prepare requires the witness coloring");
    return draw_round_keys(field, graph.num_vertices(), rng);
}

// Step 1: V1 draws one nonzero query element per vertex.
inline std::vector<FieldElement> verifier_query(const Field& field, VertexId num_vertices, SeededRng& rng) {
    std::vector<FieldElement> x;
    x.reserve(num_vertices);
    for (VertexId i = 0; i < num_vertices; ++i) x.push_back(field.sample_uniform_nonzero(rng));
    return x;
}

// Step 2: P1 commits a_k = x_k * pi(y_k) - b_k for every vertex.
inline std::vector<FieldElement> prover_commit(const Field& field, const Coloring& colors,
                                               const ColorPermutation& pi, const std::vector<FieldElement>& keys,
                                               const std::vector<FieldElement>& queries) {
    if (queries.size() != colors.size() || keys.size() != colors.size())
        throw ProtocolViolation("query/key length does not match vertex count");
    std::vector<FieldElement> a;
    a.reserve(colors.size());
    for (std::size_t k = 0; k < colors.size(); ++k)
        a.push_back(commit(field, queries[k], pi.apply(colors[k]), keys[k]));
    return a;
}

// Step 3: V2 draws a uniform challenge edge.
inline Edge verifier_challenge(const PublicGraph& graph, SeededRng& rng) {
    if (graph.edges.empty()) throw InvalidGraph("graph has no edges to challenge");
    return graph.edges[rng.uniform_below(graph.edges.size())];
}

// Step 4: P2 reveals exactly the two keys of the challenged edge.
inline std::array<FieldElement, 2> prover_reveal(const PublicGraph& graph, const std::vector<FieldElement>& keys,
                                                 Edge challenge) {
    if (!graph.has_edge(challenge)) throw ProtocolViolation("challenge is not an edge of the graph");
    return {keys[challenge.first], keys[challenge.second]};
}

// Step 5: timing gate, then decode both colors, then the proof check.
inline Verdict verifier_check(const Field& field, const RoundTranscript& t, double tau_ns, double skew_ns,
                              bool worst_case) {
    if (!timing_check(t.times, tau_ns, skew_ns, worst_case)) return Verdict::reject(RejectReason::timing);
    auto yi = reveal_verify(field, t.X[t.C.first], t.A[t.C.first], t.B_C[0]);
    auto yj = reveal_verify(field, t.X[t.C.second], t.A[t.C.second], t.B_C[1]);
    if (!yi || !yj) return Verdict::reject(RejectReason::color_range);
    if (*yi == *yj) return Verdict::reject(RejectReason::monochrome);
    return Verdict::ok();
}

enum class Mode {
    honest,
    cheat_one_bad_edge,    // fixed coloring with exactly one monochromatic edge
    cheat_random_coloring, // fresh uniform coloring every round
    cheat_relay,           // P2 fetches keys from P1 after seeing the challenge
    cheat_equivocate,      // P2 forges a key for a guessed query to flip a color
};

inline std::string to_string(Mode m) {
    switch (m) {
        case Mode::honest: return "honest";
        case Mode::cheat_one_bad_edge: return "cheat:one-bad-edge";
        case Mode::cheat_random_coloring: return "cheat:random-coloring";
        case Mode::cheat_relay: return "cheat:relay";
        case Mode::cheat_equivocate: return "cheat:equivocate";
    }
    return "?";
}

inline Mode parse_mode(const std::string& s) {
    for (Mode m : {Mode::honest, Mode::cheat_one_bad_edge, Mode::cheat_random_coloring, Mode::cheat_relay,
                   Mode::cheat_equivocate})
        if (s == to_string(m)) return m;
    throw ConfigError("unknown mode: " + s);
}

// Derive from the witness a coloring with exactly one monochromatic edge, by
// recoloring one endpoint of some edge to its partner's color. Returns the
// coloring and the offending edge.
inline std::optional<std::pair<Coloring, Edge>> find_one_bad_edge_coloring(const ColoredGraph& graph) {
    const Coloring& witness = graph.witness();
    const PublicGraph& g = graph.public_view();
    for (const Edge& e : g.edges) {
        for (int flip_first : {0, 1}) {
            Coloring c = witness;
            VertexId from = flip_first ? e.first : e.second;
            VertexId to = flip_first ? e.second : e.first;
            c[from] = c[to];
            std::size_t bad = 0;
            for (const Edge& other : g.edges)
                if (c[other.first] == c[other.second]) ++bad;
            if (bad == 1) return std::make_pair(std::move(c), e);
        }
    }
    return std::nullopt;
}

// Which message kinds each prover consumed; the information-flow partition
// requires P1 never sees the challenge and P2 never sees the query.
struct RoundAudit {
    bool p1_received_query = false;
    bool p1_received_challenge = false;
    bool p2_received_query = false;
    bool p2_received_challenge = false;
};

struct RunOptions {
    Field field = Field::preset(112);
    ColoredGraph graph;
    std::optional<std::uint64_t> k{};
    std::optional<std::uint64_t> m{};
    Mode mode = Mode::honest;
    SpacetimeConfig spacetime = SpacetimeConfig::reference();
    bool worst_case_timing = false;
    std::uint64_t seed = 0;
    std::string transcript_path{};  // empty: no transcript stream
    unsigned threads = 0;           // 0: hardware, capped by RELZKP_THREADS
};

struct RunReport {
    std::uint64_t rounds = 0;
    std::uint64_t accepts = 0;
    std::map<std::string, std::uint64_t> rejects_by_reason;
    std::uint64_t wall_time_ns = 0;
    bool overall_accept = false;
    std::vector<std::string> p1_received_kinds;
    std::vector<std::string> p2_received_kinds;
    nlohmann::json params;

    nlohmann::json to_json() const {
        nlohmann::json rejects = nlohmann::json::object();
        for (const auto& [reason, count] : rejects_by_reason) rejects[reason] = count;
        return {{"rounds", rounds},
                {"accepts", accepts},
                {"rejects_by_reason", std::move(rejects)},
                {"wall_time_ns", wall_time_ns},
                {"overall_accept", overall_accept},
                {"audit", {{"p1_received", p1_received_kinds}, {"p2_received", p2_received_kinds}}},
                {"params", params}};
    }
};

namespace stream {
// Labels for per-purpose seed streams; rounds fork from these by index, so
// outcomes are independent of thread scheduling.
inline constexpr std::uint64_t kProver = 0x50524f5645520001ull;
inline constexpr std::uint64_t kQuery = 0x5155455259000001ull;
inline constexpr std::uint64_t kChallenge = 0x4348414c4c000001ull;
inline constexpr std::uint64_t kTiming = 0x54494d494e470001ull;
inline constexpr std::uint64_t kSkew = 0x534b455700000001ull;

inline SeededRng per_round(std::uint64_t seed, std::uint64_t purpose, std::uint64_t round) {
    return SeededRng(derive_seed(derive_seed(seed, purpose), round));
}
}  // namespace stream

inline unsigned resolve_threads(unsigned requested) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned n = requested == 0 ? hw : requested;
    if (const char* env = std::getenv("RELZKP_THREADS")) {
        unsigned cap = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
        if (cap > 0 && cap < n) n = cap;
    }
    return n == 0 ? 1 : n;
}

// One protocol execution: resolves the round count and the provers' working
// coloring, then runs rounds (pure per-round function of the seed, so rounds
// may be sharded across threads and re-assembled in index order).
class ProtocolRun {
public:
    explicit ProtocolRun(RunOptions opts)
        : opts_(std::move(opts)),
          sim_(opts_.spacetime, SeededRng(opts_.seed).fork(stream::kSkew)) {
        if (opts_.k.has_value() == opts_.m.has_value())
            throw ConfigError("exactly one of k and m must be set");
        if (opts_.graph.num_vertices() == 0 || opts_.graph.num_edges() == 0)
            throw InvalidGraph("run requires a graph with at least one edge");
        total_rounds_ = opts_.k ? rounds_for_soundness_checked(opts_.graph.num_edges(), *opts_.k) : *opts_.m;

        switch (opts_.mode) {
            case Mode::honest:
            case Mode::cheat_relay:
                coloring_ = opts_.graph.witness();
                break;
            case Mode::cheat_one_bad_edge:
            case Mode::cheat_equivocate: {
                auto bad = find_one_bad_edge_coloring(opts_.graph);
                if (!bad) throw GenerationFailed("no one-bad-edge coloring found for this graph");
                coloring_ = std::move(bad->first);
                bad_edge_ = bad->second;
                break;
            }
            case Mode::cheat_random_coloring:
                break;  // drawn per round
        }
    }

    std::uint64_t total_rounds() const { return total_rounds_; }
    const RunOptions& options() const { return opts_; }
    const std::optional<Edge>& bad_edge() const { return bad_edge_; }
    const SpacetimeSimulator& simulator() const { return sim_; }

    struct RoundResult {
        RoundTranscript transcript;
        RoundAudit audit;
    };

    RoundResult round(std::uint64_t index) const {
        const Field& field = opts_.field;
        const VertexId n = opts_.graph.num_vertices();
        RoundResult res;
        RoundTranscript& t = res.transcript;
        t.round_index = index;

        SeededRng prover_rng = stream::per_round(opts_.seed, stream::kProver, index);
        Coloring round_colors;
        const Coloring* colors = &coloring_;
        if (opts_.mode == Mode::cheat_random_coloring) {
            round_colors.resize(n);
            for (auto& c : round_colors) c = static_cast<std::uint8_t>(prover_rng.uniform_below(3));
            colors = &round_colors;
        }
        RoundKeys keys = draw_round_keys(field, n, prover_rng);

        SeededRng query_rng = stream::per_round(opts_.seed, stream::kQuery, index);
        t.X = verifier_query(field, n, query_rng);

        res.audit.p1_received_query = true;
        t.A = prover_commit(field, *colors, keys.pi, keys.B, t.X);

        SeededRng challenge_rng = stream::per_round(opts_.seed, stream::kChallenge, index);
        t.C = verifier_challenge(opts_.graph.public_view(), challenge_rng);

        res.audit.p2_received_challenge = true;
        t.B_C = prover_reveal(opts_.graph.public_view(), keys.B, t.C);
        if (opts_.mode == Mode::cheat_equivocate && bad_edge_ && t.C == *bad_edge_) {
            // P2 wants the second endpoint to decode as a different color. The
            // key that works is b' = b + x * (emb(y) + emb(y')) for the true x,
            // which P2 cannot know; it guesses one uniformly.
            std::uint8_t committed = keys.pi.apply((*colors)[t.C.second]);
            std::uint8_t target = static_cast<std::uint8_t>((committed + 1) % 3);
            FieldElement guess = field.sample_uniform_nonzero(prover_rng);
            FieldElement diff = field.add(field.embed_color(committed), field.embed_color(target));
            t.B_C[1] = field.add(keys.B[t.C.second], field.mul(guess, diff));
        }

        SeededRng timing_rng = stream::per_round(opts_.seed, stream::kTiming, index);
        t.times = sim_.simulate_round(index, timing_rng, /*reveal_depends_on_query=*/opts_.mode == Mode::cheat_relay);

        t.verdict = verifier_check(field, t, opts_.spacetime.tau_ns, opts_.spacetime.clock_skew_ns,
                                   opts_.worst_case_timing);
        return res;
    }

    RunReport execute() const {
        const auto start = std::chrono::steady_clock::now();
        RunReport report;
        report.rounds = total_rounds_;
        report.params = params_json();

        std::ofstream transcript;
        const bool writing = !opts_.transcript_path.empty();
        if (writing) {
            transcript.open(opts_.transcript_path, std::ios::binary);
            if (!transcript) throw Error("cannot open " + opts_.transcript_path + " for writing");
        }

        const unsigned workers = resolve_threads(opts_.threads);
        const std::uint64_t chunk = 4096;
        std::vector<RoundOutcome> outcomes;
        RoundAudit audit;
        for (std::uint64_t lo = 0; lo < total_rounds_; lo += chunk) {
            const std::uint64_t hi = std::min(total_rounds_, lo + chunk);
            outcomes.assign(hi - lo, {});
            run_span(lo, hi, workers, writing, outcomes);
            for (std::uint64_t r = lo; r < hi; ++r) {
                const RoundOutcome& o = outcomes[r - lo];
                if (o.verdict.accept) {
                    ++report.accepts;
                } else {
                    ++report.rejects_by_reason[relzkp::to_string(*o.verdict.reason)];
                }
                merge(audit, o.audit);
                if (writing) transcript << o.line << '\n';
            }
        }
        if (writing) transcript.flush();

        if (audit.p1_received_query) report.p1_received_kinds.push_back("query");
        if (audit.p1_received_challenge) report.p1_received_kinds.push_back("challenge");
        if (audit.p2_received_query) report.p2_received_kinds.push_back("query");
        if (audit.p2_received_challenge) report.p2_received_kinds.push_back("challenge");
        report.overall_accept = report.accepts == report.rounds;
        report.wall_time_ns = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count());
        return report;
    }

private:
    struct RoundOutcome {
        Verdict verdict;
        RoundAudit audit;
        std::string line;
    };

    static void merge(RoundAudit& into, const RoundAudit& from) {
        into.p1_received_query |= from.p1_received_query;
        into.p1_received_challenge |= from.p1_received_challenge;
        into.p2_received_query |= from.p2_received_query;
        into.p2_received_challenge |= from.p2_received_challenge;
    }

    static std::uint64_t rounds_for_soundness_checked(std::uint64_t edges, std::uint64_t k) {
        if (k != 0 && edges > UINT64_MAX / k) throw ConfigError("k * |E| overflows");
        return k * edges;
    }

    void run_span(std::uint64_t lo, std::uint64_t hi, unsigned workers, bool serialize,
                  std::vector<RoundOutcome>& out) const {
        auto work = [&](std::uint64_t a, std::uint64_t b) {
            for (std::uint64_t r = a; r < b; ++r) {
                RoundResult res = round(r);
                RoundOutcome& o = out[r - lo];
                o.verdict = res.transcript.verdict;
                o.audit = res.audit;
                if (serialize) o.line = res.transcript.to_json(opts_.field).dump();
            }
        };
        const std::uint64_t n = hi - lo;
        if (workers <= 1 || n < 2 * workers) {
            work(lo, hi);
            return;
        }
        std::vector<std::thread> pool;
        const std::uint64_t per = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            std::uint64_t a = lo + w * per;
            std::uint64_t b = std::min(hi, a + per);
            if (a >= b) break;
            pool.emplace_back(work, a, b);
        }
        for (auto& th : pool) th.join();
    }

    nlohmann::json params_json() const {
        nlohmann::json p = {{"field_bits", opts_.field.width()},
                            {"num_vertices", opts_.graph.num_vertices()},
                            {"num_edges", opts_.graph.num_edges()},
                            {"m", total_rounds_},
                            {"mode", to_string(opts_.mode)},
                            {"seed", opts_.seed},
                            {"worst_case_timing", opts_.worst_case_timing},
                            {"spacetime", opts_.spacetime.to_json()}};
        if (opts_.k) p["k"] = *opts_.k;
        return p;
    }

    RunOptions opts_;
    SpacetimeSimulator sim_;
    std::uint64_t total_rounds_ = 0;
    Coloring coloring_;
    std::optional<Edge> bad_edge_{};
};

inline RunReport run_protocol(const RunOptions& opts) { return ProtocolRun(opts).execute(); }

}  // namespace relzkp
