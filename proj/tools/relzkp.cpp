// relzkp — two-prover relativistic zero-knowledge proofs for graph 3-coloring.
//
// Subcommands: gen-graph, params, run, attack, zk-test, bounds.
// Exit codes: 0 success (run: overall accept), 1 run/zk-test verdict failure,
// 2 usage or configuration error. All subcommands are deterministic given
// their flags and seed; progress goes to stderr, data to stdout or files.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include <nlohmann/json.hpp>

#include "relzkp/bounds.hpp"
#include "relzkp/commitment.hpp"
#include "relzkp/errors.hpp"
#include "relzkp/field.hpp"
#include "relzkp/graph.hpp"
#include "relzkp/protocol.hpp"
#include "relzkp/spacetime.hpp"
#include "relzkp/zksim.hpp"

namespace {

using nlohmann::json;
using namespace relzkp;

// Accepts "2^-32" or a plain value that is an exact power of two, keeping
// required_bits integral.
double parse_epsilon(const std::string& text) {
    double value = 0.0;
    if (text.rfind("2^", 0) == 0) {
        value = std::exp2(std::stod(text.substr(2)));
    } else {
        value = std::stod(text);
    }
    if (!(value > 0.0 && value <= 1.0)) throw ConfigError("epsilon-b must be in (0, 1]");
    int exp = 0;
    if (std::frexp(value, &exp) != 0.5) throw ConfigError("epsilon-b must be a power of two, e.g. 2^-32");
    return value;
}

void write_or_print(const json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out(path);
        if (!out) throw Error("cannot open " + path + " for writing");
        out << j.dump(2) << '\n';
    }
}

int cmd_gen_graph(std::uint32_t vertices, std::optional<double> edge_prob, std::uint64_t target_edges,
                  std::uint64_t seed, const std::string& out_path, bool strip_witness) {
    double p = edge_prob ? *edge_prob
                         : 3.0 * static_cast<double>(target_edges) /
                               (static_cast<double>(vertices) * (static_cast<double>(vertices) - 1));
    SeededRng rng(seed);
    ColoredGraph g = generate_graph(vertices, p, rng);
    g.save(out_path, /*include_witness=*/!strip_witness);
    std::cerr << "generated |V|=" << g.num_vertices() << " |E|=" << g.num_edges() << " p=" << p << " -> "
              << out_path << '\n';
    return 0;
}

int cmd_params(std::uint64_t vertices, std::uint64_t edges, std::uint64_t k, const std::string& epsilon_text,
               const std::string& json_path, bool as_json) {
    const double epsilon = parse_epsilon(epsilon_text);
    const std::uint32_t n_bits = required_bits(3, 2, epsilon);
    const std::uint64_t m = rounds_for_soundness(edges, k);
    const double log_delta = log_soundness_after_rounds(edges, m);
    const double eps_actual = binding_epsilon(3, 2, n_bits);
    const ResourceUsage res = resource_usage(n_bits, vertices, m);

    json j = {{"N_bits", n_bits},
              {"m", m},
              {"delta_s", soundness_after_rounds(edges, m)},
              {"log_delta_s", log_delta},
              {"epsilon_b_target", epsilon},
              {"epsilon_b", eps_actual},
              {"epsilon_b_log2", log2_binding_epsilon(3, 2, n_bits)},
              {"resource_bits", res.bits},
              {"resource_bytes", res.bytes},
              {"resource_mib", res.mebibytes},
              {"prior_work_rounds", prior_work_rounds(static_cast<double>(k), static_cast<double>(edges))}};
    if (as_json || !json_path.empty()) {
        write_or_print(j, json_path);
    } else {
        std::printf("%-18s %s\n", "quantity", "value");
        std::printf("%-18s %u\n", "N_bits", n_bits);
        std::printf("%-18s %llu\n", "m_rounds", static_cast<unsigned long long>(m));
        std::printf("%-18s %.6g  (ln = %.4f)\n", "delta_s", soundness_after_rounds(edges, m), log_delta);
        std::printf("%-18s %.6g  (2^%.4f)\n", "epsilon_b", eps_actual, log2_binding_epsilon(3, 2, n_bits));
        std::printf("%-18s %.0f\n", "resource_bytes", res.bytes);
        std::printf("%-18s %.2f\n", "resource_mib", res.mebibytes);
        std::printf("%-18s %.3g\n", "prior_work_rounds", j["prior_work_rounds"].get<double>());
    }
    return 0;
}

struct RunFlags {
    std::string config_path;
    std::string graph_path;
    std::optional<std::uint32_t> field_preset;
    std::string field_poly_hex;
    std::optional<std::uint32_t> field_bits;
    std::optional<std::uint64_t> k, m, seed;
    std::string mode;
    std::string profile;
    std::string transcript_path, report_path;
    bool worst_case = false;
    std::optional<unsigned> threads;
};

// Config file mirrors these field names; explicit flags win.
RunOptions resolve_run_options(const RunFlags& flags) {
    json cfg = json::object();
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) throw ConfigError("cannot open config " + flags.config_path);
        try {
            in >> cfg;
        } catch (const json::exception& e) {
            throw ConfigError(std::string("malformed config: ") + e.what());
        }
    }

    RunOptions opts;

    std::string graph_path = !flags.graph_path.empty() ? flags.graph_path : cfg.value("graph", "");
    if (graph_path.empty()) throw ConfigError("a graph file is required (--graph or config)");
    opts.graph = ColoredGraph::load(graph_path);

    if (flags.field_bits && !flags.field_poly_hex.empty()) {
        opts.field = Field(FieldSpec::from_hex(*flags.field_bits, flags.field_poly_hex));
        if (!opts.field.is_irreducible()) throw ConfigError("custom reduction polynomial is reducible");
    } else if (flags.field_preset) {
        opts.field = Field::preset(*flags.field_preset);
    } else if (cfg.contains("field_spec")) {
        opts.field = Field(FieldSpec::from_hex(cfg["field_spec"].at("width_bits").get<std::uint32_t>(),
                                               cfg["field_spec"].at("reduction_poly").get<std::string>()));
        if (!opts.field.is_irreducible()) throw ConfigError("custom reduction polynomial is reducible");
    } else if (cfg.contains("field_preset")) {
        opts.field = Field::preset(cfg["field_preset"].get<std::uint32_t>());
    }  // default preset 112 otherwise

    if (flags.k) opts.k = *flags.k;
    else if (cfg.contains("k")) opts.k = cfg["k"].get<std::uint64_t>();
    if (flags.m) opts.m = *flags.m;
    else if (cfg.contains("m")) opts.m = cfg["m"].get<std::uint64_t>();

    std::string mode = !flags.mode.empty() ? flags.mode : cfg.value("mode", "honest");
    opts.mode = parse_mode(mode);

    if (cfg.contains("spacetime")) opts.spacetime = SpacetimeConfig::from_json(cfg["spacetime"]);
    std::string profile = !flags.profile.empty() ? flags.profile
                          : cfg.contains("spacetime") ? ""
                                                      : cfg.value("spacetime_profile", "reference");
    if (!profile.empty()) opts.spacetime = SpacetimeConfig::profile(profile);

    if (flags.seed) opts.seed = *flags.seed;
    else if (cfg.contains("seed")) opts.seed = cfg["seed"].get<std::uint64_t>();
    else throw ConfigError("a seed is required (--seed or config); no ambient entropy is used");

    opts.worst_case_timing = flags.worst_case || cfg.value("worst_case_timing", false);
    opts.transcript_path = !flags.transcript_path.empty() ? flags.transcript_path : cfg.value("transcript_out", "");
    if (flags.threads) opts.threads = *flags.threads;
    else if (cfg.contains("threads")) opts.threads = cfg["threads"].get<unsigned>();
    return opts;
}

int cmd_run(const RunFlags& flags) {
    RunOptions opts = resolve_run_options(flags);
    std::string report_path = !flags.report_path.empty() ? flags.report_path : "";

    ProtocolRun run(opts);
    std::cerr << "running " << run.total_rounds() << " rounds, mode " << to_string(opts.mode) << ", field GF(2^"
              << opts.field.width() << ")\n";
    RunReport report = run.execute();
    write_or_print(report.to_json(), report_path);
    std::cerr << (report.overall_accept ? "ACCEPT" : "REJECT") << " (" << report.accepts << "/" << report.rounds
              << " rounds accepted, " << report.wall_time_ns / 1e9 << " s)\n";
    return report.overall_accept ? 0 : 1;
}

int cmd_zk_test(const std::string& graph_path, std::uint32_t field_bits, const std::string& json_path,
                bool verbose, std::optional<unsigned> threads) {
    ColoredGraph graph = ColoredGraph::load(graph_path);
    Field field = Field::preset(field_bits);
    zksim::PairSink sink;
    if (verbose) {
        sink = [&field](const std::vector<std::uint64_t>& x, Edge c, const zksim::Rational& tv) {
            std::cout << "X=[";
            for (std::size_t i = 0; i < x.size(); ++i) std::cout << (i ? "," : "") << x[i];
            std::cout << "] C=[" << c.first << "," << c.second << "] TV=" << tv.to_string() << '\n';
        };
    }
    zksim::GridReport report = zksim::zk_grid(graph, field, threads.value_or(0), sink);
    if (!json_path.empty()) write_or_print(report.to_json(), json_path);
    std::cout << (report.pass() ? "PASS" : "FAIL") << ": " << report.pairs << " (X,C) pairs, " << report.nonzero
              << " nonzero, max TV = " << report.max_tv.to_string() << '\n';
    return report.pass() ? 0 : 1;
}

int cmd_bounds(const std::string& game, double p, std::optional<double> q, std::optional<std::uint32_t> q_bits,
               std::uint64_t n, double s_projective, double input_dim, double omega, bool as_json) {
    json j;
    if (game == "chsh") {
        if (!q && !q_bits) throw ConfigError("chsh needs --Q or --q-bits");
        GameBound b = q ? chsh_quantum_upper(p, *q) : chsh_quantum_upper(p, std::exp2(*q_bits));
        j = {{"game", "chsh"}, {"P", p}, {"value", b.value}, {"base", b.base}, {"excess", b.excess},
             {"vacuous", b.vacuous}};
    } else if (game == "chsh-parallel") {
        if (!q && !q_bits) throw ConfigError("chsh-parallel needs --Q or --q-bits");
        GameBound b = q_bits ? chsh_parallel_quantum_upper_bits(p, *q_bits, n)
                             : chsh_parallel_quantum_upper(p, *q, n);
        j = {{"game", "chsh-parallel"}, {"P", p},        {"n", n},
             {"value", b.value},        {"base", b.base}, {"excess", b.excess},
             {"vacuous", b.vacuous},    {"regime_warning", b.regime_warning}};
    } else if (game == "coupled") {
        double lower = coupled_game_lower(omega, s_projective, input_dim);
        j = {{"game", "coupled"}, {"omega_star", omega}, {"S", s_projective}, {"I_B", input_dim},
             {"lower", lower}};
    } else {
        throw ConfigError("unknown game: " + game + " (chsh | chsh-parallel | coupled)");
    }
    if (as_json) {
        std::cout << j.dump(2) << '\n';
    } else {
        for (const auto& [key, value] : j.items()) std::cout << key << " = " << value << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-prover relativistic zero-knowledge proofs for graph 3-coloring"};
    app.require_subcommand(1);

    // gen-graph
    auto* gen = app.add_subcommand("gen-graph", "generate a three-colorable graph with its witness coloring");
    std::uint32_t gen_vertices = 100;
    std::optional<double> gen_p;
    std::uint64_t gen_target = 1114, gen_seed = 0;
    std::string gen_out = "graph.json";
    bool gen_public = false;
    gen->add_option("--vertices", gen_vertices, "number of vertices (>= 3)")->capture_default_str();
    gen->add_option("--edge-prob", gen_p, "bichromatic edge probability in (0,1); overrides --target-edges");
    gen->add_option("--target-edges", gen_target, "calibrate p so E[|E|] hits this")->capture_default_str();
    gen->add_option("--seed", gen_seed, "rng seed")->required();
    gen->add_option("--out", gen_out, "output file")->capture_default_str();
    gen->add_flag("--public", gen_public, "omit the witness coloring from the file");

    // params
    auto* params = app.add_subcommand("params", "commitment sizing, round counts and resource figures");
    std::uint64_t par_vertices = 100, par_edges = 1114, par_k = 100;
    std::string par_eps = "2^-32", par_json_path;
    bool par_json = false;
    params->add_option("--vertices", par_vertices, "|V|")->capture_default_str();
    params->add_option("--edges", par_edges, "|E|")->capture_default_str();
    params->add_option("--k", par_k, "soundness exponent, delta_s = e^-k")->capture_default_str();
    params->add_option("--epsilon-b", par_eps, "sum-binding target, e.g. 2^-32")->capture_default_str();
    params->add_flag("--json", par_json, "emit JSON to stdout");
    params->add_option("--json-out", par_json_path, "write JSON to a file");

    // run / attack
    RunFlags rf;
    auto add_run_flags = [&rf](CLI::App* cmd, bool with_mode) {
        cmd->add_option("--config", rf.config_path, "JSON config file; flags override its values");
        cmd->add_option("--graph", rf.graph_path, "graph file (from gen-graph)");
        cmd->add_option("--field-preset", rf.field_preset, "field width preset: 3,4,8,16,32,112");
        cmd->add_option("--field-bits", rf.field_bits, "custom field width (with --field-poly)");
        cmd->add_option("--field-poly", rf.field_poly_hex, "custom irreducible polynomial, hex");
        cmd->add_option("--k", rf.k, "soundness exponent; m = k|E|");
        cmd->add_option("--m", rf.m, "explicit round count (exactly one of --k/--m)");
        if (with_mode) cmd->add_option("--mode", rf.mode, "honest | cheat:one-bad-edge | cheat:random-coloring | cheat:relay | cheat:equivocate");
        cmd->add_option("--profile", rf.profile, "spacetime profile: reference | zero");
        cmd->add_option("--seed", rf.seed, "rng seed (required; runs use no ambient entropy)");
        cmd->add_option("--transcript", rf.transcript_path, "write one JSON line per round here");
        cmd->add_option("--report", rf.report_path, "write the run report here instead of stdout");
        cmd->add_flag("--worst-case-timing", rf.worst_case, "widen timing differences by 2*Delta");
        cmd->add_option("--threads", rf.threads, "worker threads (also capped by RELZKP_THREADS)");
    };
    auto* run = app.add_subcommand("run", "execute m protocol rounds and report the verdict");
    add_run_flags(run, true);
    auto* attack = app.add_subcommand("attack", "run with a cheating prover strategy");
    std::string attack_strategy;
    attack->add_option("strategy", attack_strategy, "one-bad-edge | random-coloring | relay | equivocate")
        ->required();
    add_run_flags(attack, false);

    // zk-test
    auto* zk = app.add_subcommand("zk-test", "exact real-vs-simulated view comparison on a tiny instance");
    std::string zk_graph, zk_json;
    std::uint32_t zk_bits = 3;
    bool zk_verbose = false;
    std::optional<unsigned> zk_threads;
    zk->add_option("--graph", zk_graph, "graph file with witness")->required();
    zk->add_option("--field-bits", zk_bits, "field preset width (enumeration needs <= 4)")->capture_default_str();
    zk->add_option("--json", zk_json, "write the machine-readable report here");
    zk->add_flag("--verbose", zk_verbose, "print every (X,C) TV distance");
    zk->add_option("--threads", zk_threads, "worker threads");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "non-local game bound calculators");
    std::string bounds_game = "chsh";
    double bounds_p = 3, bounds_s = 1, bounds_ib = 2, bounds_omega = 1.0;
    std::optional<double> bounds_q;
    std::optional<std::uint32_t> bounds_qbits;
    std::uint64_t bounds_n = 2;
    bool bounds_json = false;
    bounds->add_option("--game", bounds_game, "chsh | chsh-parallel | coupled")->capture_default_str();
    bounds->add_option("--P", bounds_p, "color/input alphabet size")->capture_default_str();
    bounds->add_option("--Q", bounds_q, "field size");
    bounds->add_option("--q-bits", bounds_qbits, "field size as log2");
    bounds->add_option("--n", bounds_n, "parallel repetitions")->capture_default_str();
    bounds->add_option("--S", bounds_s, "projectivity parameter")->capture_default_str();
    bounds->add_option("--IB", bounds_ib, "|I_B|, Bob's input dimension")->capture_default_str();
    bounds->add_option("--omega", bounds_omega, "omega* of the base game")->capture_default_str();
    bounds->add_flag("--json", bounds_json, "emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed())
            return cmd_gen_graph(gen_vertices, gen_p, gen_target, gen_seed, gen_out, gen_public);
        if (params->parsed())
            return cmd_params(par_vertices, par_edges, par_k, par_eps, par_json_path, par_json);
        if (run->parsed()) return cmd_run(rf);
        if (attack->parsed()) {
            rf.mode = "cheat:" + attack_strategy;
            return cmd_run(rf);
        }
        if (zk->parsed()) return cmd_zk_test(zk_graph, zk_bits, zk_json, zk_verbose, zk_threads);
        if (bounds->parsed())
            return cmd_bounds(bounds_game, bounds_p, bounds_q, bounds_qbits, bounds_n, bounds_s, bounds_ib,
                              bounds_omega, bounds_json);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
