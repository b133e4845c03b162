// Acceptance suite: one line per criterion, nonzero exit if any fail.
// Every tolerance is pinned in code next to the check it gates.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <nlohmann/json.hpp>

#include "field_oracle.hpp"
#include "relzkp/bounds.hpp"
#include "relzkp/commitment.hpp"
#include "relzkp/field.hpp"
#include "relzkp/graph.hpp"
#include "relzkp/protocol.hpp"
#include "relzkp/spacetime.hpp"
#include "relzkp/zksim.hpp"

using nlohmann::json;
using namespace relzkp;

namespace {

int g_failures = 0;

void criterion(int idx, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] %d. %-24s %s\n", pass ? "PASS" : "FAIL", idx, name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ColoredGraph full_scale_graph() {
    // pinned seed giving exactly 1114 edges on 100 vertices
    SeededRng rng(100);
    return generate_graph(100, 3.0 * 1114 / (100.0 * 99.0), rng);
}

ColoredGraph twenty_edge_graph() {
    SeededRng rng(13);
    return generate_graph(10, 3.0 * 20 / 90.0, rng);
}

ColoredGraph triangle() {
    return ColoredGraph(3, {{0, 1}, {0, 2}, {1, 2}}, Coloring{0, 1, 2});
}

void check_parameter_reproduction() {
    std::string cmd = std::string(RELZKP_CLI_PATH) +
                      " params --vertices 100 --edges 1114 --k 100 --epsilon-b 2^-32 --json"
                      " >acceptance_params.json 2>/dev/null";
    int rc = std::system(cmd.c_str());
    bool ran = WIFEXITED(rc) && WEXITSTATUS(rc) == 0;
    json j = ran ? json::parse(slurp("acceptance_params.json")) : json::object();
    std::remove("acceptance_params.json");

    bool n_ok = ran && j["N_bits"] == 112;
    bool m_ok = ran && j["m"] == 111400;
    double mib = ran ? j["resource_mib"].get<double>() : 0.0;
    bool res_ok = ran && std::abs(mib - 148.77) / 148.77 < 1e-3;  // within 0.1%
    char detail[160];
    std::snprintf(detail, sizeof detail, "N=%d m=%llu resource=%.3f MiB (target 148.77, tol 0.1%%)",
                  ran ? j["N_bits"].get<int>() : -1,
                  ran ? static_cast<unsigned long long>(j["m"].get<std::uint64_t>()) : 0ull, mib);
    criterion(1, "parameter reproduction", n_ok && m_ok && res_ok, detail);
}

void check_completeness() {
    auto start = std::chrono::steady_clock::now();
    ColoredGraph g = full_scale_graph();
    bool size_ok = g.num_vertices() == 100 && g.num_edges() == 1114;

    RunOptions opts;
    opts.field = Field::preset(112);
    opts.graph = g;
    opts.m = 111400;
    opts.seed = 2001;
    RunReport report = run_protocol(opts);
    double secs = seconds_since(start);

    bool ok = size_ok && report.rounds == 111400 && report.accepts == 111400 && report.overall_accept &&
              secs <= 300.0;  // five-minute budget
    char detail[160];
    std::snprintf(detail, sizeof detail, "|V|=%u |E|=%zu rounds=%llu rejects=%llu wall=%.1fs (limit 300s)",
                  g.num_vertices(), g.num_edges(), static_cast<unsigned long long>(report.rounds),
                  static_cast<unsigned long long>(report.rounds - report.accepts), secs);
    criterion(2, "completeness", ok, detail);
}

void check_soundness_statistics() {
    ColoredGraph g = twenty_edge_graph();
    bool graph_ok = g.num_edges() == 20;

    RunOptions opts;
    opts.field = Field::preset(112);
    opts.graph = g;
    opts.m = 20000;
    opts.mode = Mode::cheat_one_bad_edge;
    opts.seed = 2003;
    RunReport report = run_protocol(opts);

    const double rate = static_cast<double>(report.rounds - report.accepts) / 20000.0;
    const double sigma = std::sqrt(0.05 * 0.95 / 20000.0);  // ~0.00154
    bool rate_ok = std::abs(rate - 0.05) <= 3.0 * sigma;

    const double log_delta = log_soundness_after_rounds(1114, 111400);
    bool formula_ok = std::abs(log_delta - (-100.0)) / 100.0 < 1e-3;  // 0.1% in log space

    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "reject rate %.4f vs 1/20 (3 sigma = %.4f); ln delta_s = %.4f vs -100 (tol 0.1%%)", rate,
                  3.0 * sigma, log_delta);
    criterion(3, "soundness statistics", graph_ok && rate_ok && formula_ok, detail);
}

void check_perfect_hiding() {
    Field f = Field::preset(3);
    bool ok = true;
    for (std::uint64_t xv = 1; xv < 8 && ok; ++xv) {
        std::vector<std::map<std::uint64_t, int>> per_color(3);
        for (std::uint8_t y = 0; y < 3; ++y)
            for (std::uint64_t bv = 0; bv < 8; ++bv)
                ++per_color[y][f.to_u64(commit(f, f.from_u64(xv), y, f.from_u64(bv)))];
        for (std::uint8_t y = 0; y < 3 && ok; ++y) {
            ok = per_color[y].size() == 8;  // exactly uniform over the 8 keys
            for (const auto& [value, count] : per_color[y]) ok = ok && count == 1;
        }
        ok = ok && per_color[0] == per_color[1] && per_color[1] == per_color[2];
    }
    criterion(4, "perfect hiding", ok, "GF(2^3) exhaustive: uniform and color-independent, exact");
}

void check_zero_knowledge() {
    auto start = std::chrono::steady_clock::now();
    zksim::GridReport report = zksim::zk_grid(triangle(), Field::preset(3));
    double secs = seconds_since(start);
    bool ok = report.pairs == 343 * 3 && report.nonzero == 0 && report.max_tv == zksim::Rational{0, 1} &&
              secs <= 60.0;
    char detail[160];
    std::snprintf(detail, sizeof detail, "%llu pairs, %llu nonzero, max TV %s, wall %.1fs (limit 60s)",
                  static_cast<unsigned long long>(report.pairs), static_cast<unsigned long long>(report.nonzero),
                  report.max_tv.to_string().c_str(), secs);
    criterion(5, "zero-knowledge equality", ok, detail);
}

void check_timing_model() {
    SpacetimeConfig cfg = SpacetimeConfig::reference();
    SpacetimeSimulator sim(cfg, SeededRng(2005));
    SeededRng rng(2006);
    double min_diff = 1e18, max_diff = 0.0;
    bool all_pass = true;
    for (std::uint64_t r = 0; r < 100000; ++r) {
        RoundTimes t = sim.simulate_round(r, rng, false);
        double d14 = std::fabs(t.t1 - t.t4), d23 = std::fabs(t.t2 - t.t3);
        min_diff = std::min({min_diff, d14, d23});
        max_diff = std::max({max_diff, d14, d23});
        all_pass = all_pass && timing_check(t, cfg.tau_ns, cfg.clock_skew_ns, /*worst_case=*/true);
    }
    bool band_ok = min_diff >= 500.0 && max_diff <= 900.0;
    bool margin_ok = max_diff + 2.0 * cfg.clock_skew_ns < 1000.0;

    std::uint64_t relay_rejects = 0;
    const std::uint64_t relay_rounds = 10000;
    for (std::uint64_t r = 0; r < relay_rounds; ++r) {
        RoundTimes t = sim.simulate_round(r, rng, /*reveal_depends_on_query=*/true);
        if (!timing_check(t, cfg.tau_ns, cfg.clock_skew_ns, false)) ++relay_rejects;
    }
    bool relay_ok = relay_rejects == relay_rounds;

    ColoredGraph g = twenty_edge_graph();
    RunOptions opts;
    opts.field = Field::preset(112);
    opts.graph = g;
    opts.m = 300;
    opts.mode = Mode::cheat_relay;
    opts.seed = 2007;
    RunReport report = run_protocol(opts);
    relay_ok = relay_ok && report.accepts == 0 && report.rejects_by_reason.at("timing") == 300;

    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "10^5 rounds in [%.2f, %.2f] ns (band [500,900]); +2D max %.2f < 1000; relay rejected %llu/%llu",
                  min_diff, max_diff, max_diff + 60.0, static_cast<unsigned long long>(relay_rejects),
                  static_cast<unsigned long long>(relay_rounds));
    criterion(6, "timing model", all_pass && band_ok && margin_ok && relay_ok, detail);
}

void check_bound_identities() {
    bool eps_ok = binding_epsilon(3, 2, 112) < std::exp2(-32);

    int points = 0;
    double worst = 0.0;
    for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
        for (std::uint32_t d : {1u, 2u, 3u}) {
            for (std::uint32_t q_bits = 12; q_bits <= 40; q_bits += 7) {
                if (std::exp2(q_bits) < p) continue;
                GameBound b = chsh_parallel_quantum_upper_bits(p, q_bits, d);
                double lifted = std::pow(p, d) * (b.value - b.base);
                double eps = binding_epsilon(p, d, q_bits);
                worst = std::max(worst, std::abs(lifted - eps) / eps);
                ++points;
            }
        }
    }
    bool grid_ok = points >= 50 && worst <= 1e-12;

    double chsh = chsh_quantum_upper(3, 512).value;
    bool chsh_ok = std::abs(chsh - (1.0 / 3 + 0.5)) <= 1e-12;

    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "eps_b(3,2,112)=2^%.2f < 2^-32; identity over %d points worst rel err %.2e (tol 1e-12); "
                  "chsh(3,512)=%.12f",
                  log2_binding_epsilon(3, 2, 112), points, worst, chsh);
    criterion(7, "bound identities", eps_ok && grid_ok && chsh_ok, detail);
}

void check_field_correctness() {
    bool axioms_ok = true;
    for (std::uint32_t width : {3u, 4u}) {
        Field f = Field::preset(width);
        const std::uint64_t q = f.order_u64();
        for (std::uint64_t av = 0; av < q && axioms_ok; ++av) {
            FieldElement a = f.from_u64(av);
            if (!a.is_zero()) axioms_ok = axioms_ok && f.mul(a, f.inv(a)) == f.one();
            for (std::uint64_t bv = 0; bv < q && axioms_ok; ++bv) {
                FieldElement b = f.from_u64(bv);
                axioms_ok = axioms_ok && f.add(a, b) == f.add(b, a) && f.mul(a, b) == f.mul(b, a);
                for (std::uint64_t cv = 0; cv < q && axioms_ok; ++cv) {
                    FieldElement c = f.from_u64(cv);
                    axioms_ok = axioms_ok && f.add(f.add(a, b), c) == f.add(a, f.add(b, c)) &&
                                f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)) &&
                                f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c));
                }
            }
        }
    }

    Field f112 = Field::preset(112);
    SeededRng rng(2008);
    int oracle_checks = 0;
    bool oracle_ok = true;
    for (int i = 0; i < 10000; ++i) {
        FieldElement u = f112.sample_uniform(rng), v = f112.sample_uniform(rng);
        oracle_ok = oracle_ok && f112.mul(u, v) == test_oracle::oracle_mul(f112, u, v);
        ++oracle_checks;
    }

    char detail[160];
    std::snprintf(detail, sizeof detail, "GF(2^3)+GF(2^4) axioms exhaustive; %d/10000 oracle checks at N=112",
                  oracle_ok ? oracle_checks : 0);
    criterion(8, "field correctness", axioms_ok && oracle_ok, detail);
}

void check_determinism() {
    ColoredGraph g = twenty_edge_graph();
    RunOptions opts;
    opts.field = Field::preset(112);
    opts.graph = g;
    opts.m = 500;
    opts.seed = 2009;

    opts.transcript_path = "acceptance_run_a.jsonl";
    run_protocol(opts);
    opts.transcript_path = "acceptance_run_b.jsonl";
    run_protocol(opts);

    std::string a = slurp("acceptance_run_a.jsonl");
    std::string b = slurp("acceptance_run_b.jsonl");
    std::remove("acceptance_run_a.jsonl");
    std::remove("acceptance_run_b.jsonl");

    bool ok = !a.empty() && a == b;
    char detail[160];
    std::snprintf(detail, sizeof detail, "two 500-round runs, fnv64 %016llx vs %016llx, %zu bytes each",
                  static_cast<unsigned long long>(fnv1a(a)), static_cast<unsigned long long>(fnv1a(b)),
                  a.size());
    criterion(9, "determinism", ok, detail);
}

}  // namespace

int main() {
    check_parameter_reproduction();
    check_completeness();
    check_soundness_statistics();
    check_perfect_hiding();
    check_zero_knowledge();
    check_timing_model();
    check_bound_identities();
    check_field_correctness();
    check_determinism();

    if (g_failures == 0) {
        std::printf("acceptance: all 9 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return 1;
}
