#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "relzkp/errors.hpp"
#include "relzkp/rng.hpp"

namespace relzkp {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;  // normalized u < v
using Coloring = std::vector<std::uint8_t>;  // one of {0,1,2} per vertex

inline Edge make_edge(VertexId u, VertexId v) {
    if (u == v) throw InvalidGraph("self-loop");
    return u < v ? Edge{u, v} : Edge{v, u};
}

// Bijection on the color set {0,1,2}; exactly six exist.
struct ColorPermutation {
    std::array<std::uint8_t, 3> map{0, 1, 2};

    std::uint8_t apply(std::uint8_t color) const {
        if (color > 2) throw InvalidColoring("color must be in {0,1,2}");
        return map[color];
    }

    static const std::array<ColorPermutation, 6>& all() {
        static const std::array<ColorPermutation, 6> perms = {
            ColorPermutation{{0, 1, 2}}, ColorPermutation{{0, 2, 1}}, ColorPermutation{{1, 0, 2}},
            ColorPermutation{{1, 2, 0}}, ColorPermutation{{2, 0, 1}}, ColorPermutation{{2, 1, 0}}};
        return perms;
    }

    static ColorPermutation sample(SeededRng& rng) { return all()[rng.uniform_below(6)]; }

    friend bool operator==(const ColorPermutation&, const ColorPermutation&) = default;
};

inline Coloring apply_permutation(const Coloring& coloring, const ColorPermutation& pi) {
    Coloring out(coloring.size());
    for (std::size_t i = 0; i < coloring.size(); ++i) out[i] = pi.apply(coloring[i]);
    return out;
}

// Witness-free graph: everything a verifier is allowed to see.
struct PublicGraph {
    VertexId num_vertices = 0;
    std::vector<Edge> edges;  // sorted, deduplicated

    bool has_edge(Edge e) const { return std::binary_search(edges.begin(), edges.end(), e); }
};

inline void validate_coloring(const PublicGraph& g, const Coloring& coloring) {
    if (coloring.size() != g.num_vertices) throw InvalidColoring("coloring does not cover every vertex");
    for (std::uint8_t c : coloring)
        if (c > 2) throw InvalidColoring("color value out of range");
}

inline bool is_proper(const PublicGraph& g, const Coloring& coloring) {
    validate_coloring(g, coloring);
    for (const Edge& e : g.edges)
        if (coloring[e.first] == coloring[e.second]) return false;
    return true;
}

inline bool is_connected(const PublicGraph& g) {
    if (g.num_vertices == 0) return true;
    std::vector<std::vector<VertexId>> adj(g.num_vertices);
    for (const Edge& e : g.edges) {
        adj[e.first].push_back(e.second);
        adj[e.second].push_back(e.first);
    }
    std::vector<bool> seen(g.num_vertices, false);
    std::vector<VertexId> stack{0};
    seen[0] = true;
    VertexId reached = 1;
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (VertexId u : adj[v]) {
            if (!seen[u]) {
                seen[u] = true;
                ++reached;
                stack.push_back(u);
            }
        }
    }
    return reached == g.num_vertices;
}

// A graph plus (on the prover side) its secret proper coloring. Immutable
// after construction; the witness can be stripped for verifier-facing use.
class ColoredGraph {
public:
    ColoredGraph() = default;

    ColoredGraph(VertexId num_vertices, std::vector<Edge> edges, std::optional<Coloring> witness = {}) {
        graph_.num_vertices = num_vertices;
        for (Edge& e : edges) {
            if (e.first == e.second) throw InvalidGraph("self-loop");
            if (e.first > e.second) std::swap(e.first, e.second);
            if (e.second >= num_vertices) throw InvalidGraph("edge endpoint out of range");
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        graph_.edges = std::move(edges);
        if (witness) {
            if (!is_proper(graph_, *witness)) throw InvalidColoring("witness is not a proper coloring");
            witness_ = std::move(witness);
        }
    }

    VertexId num_vertices() const { return graph_.num_vertices; }
    const std::vector<Edge>& edges() const { return graph_.edges; }
    std::size_t num_edges() const { return graph_.edges.size(); }
    bool has_witness() const { return witness_.has_value(); }

    const Coloring& witness() const {
        if (!witness_) throw NotAProver("graph carries no witness");
        return *witness_;
    }

    const PublicGraph& public_view() const { return graph_; }

    ColoredGraph without_witness() const { return ColoredGraph(graph_.num_vertices, graph_.edges); }

    nlohmann::json to_json(bool include_witness = true) const {
        nlohmann::json j;
        j["version"] = 1;
        j["num_vertices"] = graph_.num_vertices;
        nlohmann::json edges = nlohmann::json::array();
        for (const Edge& e : graph_.edges) edges.push_back({e.first, e.second});
        j["edges"] = std::move(edges);
        if (include_witness && witness_) j["witness"] = *witness_;
        return j;
    }

    static ColoredGraph from_json(const nlohmann::json& j) {
        try {
            if (j.at("version").get<int>() != 1) throw InvalidGraph("unsupported graph file version");
            VertexId n = j.at("num_vertices").get<VertexId>();
            std::vector<Edge> edges;
            for (const auto& e : j.at("edges")) {
                if (!e.is_array() || e.size() != 2) throw InvalidGraph("edge must be a pair");
                edges.emplace_back(e[0].get<VertexId>(), e[1].get<VertexId>());
            }
            std::optional<Coloring> witness;
            if (j.contains("witness")) witness = j["witness"].get<Coloring>();
            return ColoredGraph(n, std::move(edges), std::move(witness));
        } catch (const nlohmann::json::exception& e) {
            throw InvalidGraph(std::string("malformed graph file: ") + e.what());
        }
    }

    void save(const std::string& path, bool include_witness = true) const {
        std::ofstream out(path);
        if (!out) throw Error("cannot open " + path + " for writing");
        out << to_json(include_witness).dump(2) << '\n';
    }

    static ColoredGraph load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error("cannot open " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw InvalidGraph(std::string("malformed graph file: ") + e.what());
        }
        return from_json(j);
    }

private:
    PublicGraph graph_;
    std::optional<Coloring> witness_;
};

// Modified No-Choice generation: color every vertex uniformly, connect each
// bichromatic pair independently with probability edge_prob, restart until
// connected. The witness coloring is attached to the result.
inline ColoredGraph generate_graph(VertexId num_vertices, double edge_prob, SeededRng& rng,
                                   int max_attempts = 10000) {
    if (!(edge_prob > 0.0 && edge_prob < 1.0)) throw InvalidParameter("edge probability must be in (0, 1)");
    if (num_vertices < 3) throw InvalidParameter("need at least 3 vertices");
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Coloring colors(num_vertices);
        for (auto& c : colors) c = static_cast<std::uint8_t>(rng.uniform_below(3));
        std::vector<Edge> edges;
        for (VertexId u = 0; u < num_vertices; ++u)
            for (VertexId v = u + 1; v < num_vertices; ++v)
                if (colors[u] != colors[v] && rng.uniform_unit() < edge_prob) edges.emplace_back(u, v);
        ColoredGraph g(num_vertices, std::move(edges), std::move(colors));
        if (is_connected(g.public_view())) return g;
    }
    throw GenerationFailed("no connected graph within " + std::to_string(max_attempts) + " attempts");
}

}  // namespace relzkp
