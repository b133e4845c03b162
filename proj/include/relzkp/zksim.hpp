#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "relzkp/commitment.hpp"
#include "relzkp/errors.hpp"
#include "relzkp/field.hpp"
#include "relzkp/graph.hpp"
#include "relzkp/protocol.hpp"
#include "relzkp/rng.hpp"

namespace relzkp::zksim {

// The classical registers a verifier sees in one round: query, commitments,
// challenge, revealed keys. No timestamps; the simulator lives in the ideal
// world without relativistic constraints.
struct View {
    std::vector<FieldElement> X;
    std::vector<FieldElement> A;
    Edge C{0, 0};
    std::array<FieldElement, 2> B_C{};
};

// Witness-free view generation: uniform commitments A', a uniformly permuted
// distinct color pair on the challenged edge, keys solved as B' = X*Y' - A'.
// Takes only the public graph, so it cannot read a witness even by mistake.
inline View simulate_view(const PublicGraph& graph, const Field& field, const std::vector<FieldElement>& queries,
                          Edge challenge, SeededRng& rng) {
    if (!graph.has_edge(challenge)) throw InvalidChallenge("challenge is not an edge of the graph");
    if (queries.size() != graph.num_vertices) throw InvalidQuery("query vector must cover every vertex");
    for (const auto& x : queries)
        if (x.is_zero()) throw InvalidQuery("query elements must be nonzero");

    View view;
    view.X = queries;
    view.C = challenge;
    view.A.reserve(graph.num_vertices);
    for (VertexId k = 0; k < graph.num_vertices; ++k) view.A.push_back(field.sample_uniform(rng));

    // Any uniformly drawn permutation applied to a fixed distinct pair gives a
    // uniform ordered pair of distinct colors; non-challenged vertices keep
    // color 0, whose keys are never revealed.
    ColorPermutation pi = ColorPermutation::sample(rng);
    std::uint8_t yi = pi.apply(0), yj = pi.apply(1);
    view.B_C[0] = field.add(field.mul(queries[challenge.first], field.embed_color(yi)), view.A[challenge.first]);
    view.B_C[1] = field.add(field.mul(queries[challenge.second], field.embed_color(yj)), view.A[challenge.second]);
    return view;
}

// Exact distribution over (A, B_C) for fixed (X, C), as integer counts over a
// common denominator. Keys pack one byte per element, so the enumeration
// guard (N <= 4, |V| <= 4) keeps everything inside 64 bits exactly.
struct Distribution {
    std::uint64_t denominator = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;  // packed key -> count, sorted
    std::uint32_t num_vertices = 0;
    std::uint32_t field_bits = 0;

    std::uint64_t total() const {
        std::uint64_t sum = 0;
        for (const auto& [key, count] : entries) sum += count;
        return sum;
    }
};

namespace detail {

inline void check_enumerable(const Field& field, VertexId num_vertices) {
    if (field.width() > 4 || num_vertices > 4)
        throw TooLargeToEnumerate("exact enumeration needs N <= 4 and |V| <= 4");
}

inline void check_inputs(const PublicGraph& graph, const std::vector<FieldElement>& queries, Edge challenge) {
    if (!graph.has_edge(challenge)) throw InvalidChallenge("challenge is not an edge of the graph");
    if (queries.size() != graph.num_vertices) throw InvalidQuery("query vector must cover every vertex");
    for (const auto& x : queries)
        if (x.is_zero()) throw InvalidQuery("query elements must be nonzero");
}

inline Distribution from_keys(std::vector<std::uint64_t>& keys, std::uint64_t denominator, VertexId n,
                              std::uint32_t bits) {
    std::sort(keys.begin(), keys.end());
    Distribution dist;
    dist.denominator = denominator;
    dist.num_vertices = n;
    dist.field_bits = bits;
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        dist.entries.emplace_back(keys[i], j - i);
        i = j;
    }
    return dist;
}

}  // namespace detail

// sigma_real for fixed (X, C): iterate all permutations pi and all key
// vectors B in F_Q^|V|, with A = X * Y_pi - B entry-wise.
inline Distribution enumerate_real_distribution(const ColoredGraph& graph, const Field& field,
                                                const std::vector<FieldElement>& queries, Edge challenge) {
    detail::check_enumerable(field, graph.num_vertices());
    detail::check_inputs(graph.public_view(), queries, challenge);
    const Coloring& witness = graph.witness();

    const VertexId n = graph.num_vertices();
    const std::uint64_t q = field.order_u64();
    std::uint64_t total = 1;
    for (VertexId k = 0; k < n; ++k) total *= q;

    std::vector<std::uint64_t> keys;
    keys.reserve(6 * total);
    for (const ColorPermutation& pi : ColorPermutation::all()) {
        // x_k * emb(pi(y_k)) is fixed per permutation; the B loop is pure XOR.
        std::vector<std::uint64_t> xy(n);
        for (VertexId k = 0; k < n; ++k)
            xy[k] = field.mul(queries[k], field.embed_color(pi.apply(witness[k]))).w[0];
        for (std::uint64_t b_index = 0; b_index < total; ++b_index) {
            std::uint64_t key = 0;
            std::uint64_t bi = 0, bj = 0;
            for (VertexId k = 0; k < n; ++k) {
                std::uint64_t b = (b_index >> (field.width() * k)) & (q - 1);
                std::uint64_t a = xy[k] ^ b;
                key |= a << (8 * k);
                if (k == challenge.first) bi = b;
                if (k == challenge.second) bj = b;
            }
            key |= bi << (8 * n);
            key |= bj << (8 * (n + 1));
            keys.push_back(key);
        }
    }
    return detail::from_keys(keys, 6 * total, n, field.width());
}

// sigma_sim for fixed (X, C): iterate the permutation used for the forged
// color pair and all commitment vectors A' in F_Q^|V|, keys solved per edge
// endpoint as B' = X * Y' + A'.
inline Distribution enumerate_sim_distribution(const PublicGraph& graph, const Field& field,
                                               const std::vector<FieldElement>& queries, Edge challenge) {
    detail::check_enumerable(field, graph.num_vertices);
    detail::check_inputs(graph, queries, challenge);

    const VertexId n = graph.num_vertices;
    const std::uint64_t q = field.order_u64();
    std::uint64_t total = 1;
    for (VertexId k = 0; k < n; ++k) total *= q;

    std::vector<std::uint64_t> keys;
    keys.reserve(6 * total);
    for (const ColorPermutation& pi : ColorPermutation::all()) {
        const std::uint64_t xy_i =
            field.mul(queries[challenge.first], field.embed_color(pi.apply(0))).w[0];
        const std::uint64_t xy_j =
            field.mul(queries[challenge.second], field.embed_color(pi.apply(1))).w[0];
        for (std::uint64_t a_index = 0; a_index < total; ++a_index) {
            std::uint64_t key = 0;
            for (VertexId k = 0; k < n; ++k) {
                std::uint64_t a = (a_index >> (field.width() * k)) & (q - 1);
                key |= a << (8 * k);
            }
            std::uint64_t ai = (a_index >> (field.width() * challenge.first)) & (q - 1);
            std::uint64_t aj = (a_index >> (field.width() * challenge.second)) & (q - 1);
            key |= (xy_i ^ ai) << (8 * n);
            key |= (xy_j ^ aj) << (8 * (n + 1));
            keys.push_back(key);
        }
    }
    return detail::from_keys(keys, 6 * total, n, field.width());
}

// Exact rational, kept reduced.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    static Rational make(std::uint64_t num, std::uint64_t den) {
        std::uint64_t g = std::gcd(num, den);
        if (g == 0) g = 1;
        return Rational{num / g, den / g};
    }

    bool is_zero() const { return num == 0; }
    std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

// (1/2) sum |p - q| over the joint support, exactly.
inline Rational tv_distance(const Distribution& a, const Distribution& b) {
    if (a.num_vertices != b.num_vertices || a.field_bits != b.field_bits)
        throw DomainMismatch("distributions live on different universes");
    if (a.denominator == 0 || b.denominator == 0) throw DomainMismatch("empty distribution");
    unsigned __int128 sum = 0;
    std::size_t i = 0, j = 0;
    while (i < a.entries.size() || j < b.entries.size()) {
        if (j >= b.entries.size() || (i < a.entries.size() && a.entries[i].first < b.entries[j].first)) {
            sum += static_cast<unsigned __int128>(a.entries[i].second) * b.denominator;
            ++i;
        } else if (i >= a.entries.size() || b.entries[j].first < a.entries[i].first) {
            sum += static_cast<unsigned __int128>(b.entries[j].second) * a.denominator;
            ++j;
        } else {
            unsigned __int128 pa = static_cast<unsigned __int128>(a.entries[i].second) * b.denominator;
            unsigned __int128 pb = static_cast<unsigned __int128>(b.entries[j].second) * a.denominator;
            sum += pa > pb ? pa - pb : pb - pa;
            ++i;
            ++j;
        }
    }
    if (sum == 0) return Rational{0, 1};
    // sum <= 2 * den_a * den_b <= 2 * (6 * 16^4)^2 under the enumeration guard,
    // so both numerator and denominator fit in 64 bits.
    std::uint64_t den = 2 * a.denominator * b.denominator;
    return Rational::make(static_cast<std::uint64_t>(sum), den);
}

struct GridFailure {
    std::vector<std::uint64_t> x_values;
    Edge challenge{0, 0};
    Rational tv;
};

struct GridReport {
    std::uint64_t pairs = 0;
    std::uint64_t nonzero = 0;
    Rational max_tv{0, 1};
    std::vector<GridFailure> failures;

    bool pass() const { return nonzero == 0; }

    nlohmann::json to_json() const {
        nlohmann::json fails = nlohmann::json::array();
        for (const auto& f : failures)
            fails.push_back({{"X", f.x_values}, {"C", {f.challenge.first, f.challenge.second}}, {"tv", f.tv.to_string()}});
        return {{"pairs", pairs},
                {"nonzero", nonzero},
                {"max_tv", max_tv.to_string()},
                {"pass", pass()},
                {"failures", std::move(fails)}};
    }
};

// Real-vs-simulated TV distance on every (query vector, challenge) pair of a
// tiny instance. Embarrassingly parallel over the query grid; a per-pair sink
// forces single-threaded, in-order evaluation.
using PairSink = std::function<void(const std::vector<std::uint64_t>&, Edge, const Rational&)>;

inline GridReport zk_grid(const ColoredGraph& graph, const Field& field, unsigned threads = 0,
                          const PairSink& on_pair = {}) {
    detail::check_enumerable(field, graph.num_vertices());
    if (graph.num_edges() == 0) throw InvalidGraph("graph has no edges");
    const VertexId n = graph.num_vertices();
    const std::uint64_t q = field.order_u64();

    std::uint64_t grid = 1;
    for (VertexId k = 0; k < n; ++k) grid *= (q - 1);
    std::uint64_t per_pair = 1;
    for (VertexId k = 0; k < n; ++k) per_pair *= q;
    // 12 enumeration passes of Q^|V| per (X, C) pair; cap the total work
    if (grid * graph.num_edges() > 2'000'000'000ull / (12 * per_pair))
        throw TooLargeToEnumerate("query grid too large for full enumeration");

    const unsigned workers = on_pair ? 1 : resolve_threads(threads);
    std::vector<GridReport> partial(workers);

    auto run_slice = [&](unsigned w) {
        GridReport& rep = partial[w];
        for (std::uint64_t g = w; g < grid; g += workers) {
            std::vector<FieldElement> x(n);
            std::vector<std::uint64_t> x_vals(n);
            std::uint64_t rest = g;
            for (VertexId k = 0; k < n; ++k) {
                x_vals[k] = 1 + rest % (q - 1);
                rest /= (q - 1);
                x[k] = field.from_u64(x_vals[k]);
            }
            for (const Edge& c : graph.edges()) {
                Distribution real = enumerate_real_distribution(graph, field, x, c);
                Distribution sim = enumerate_sim_distribution(graph.public_view(), field, x, c);
                Rational tv = tv_distance(real, sim);
                if (on_pair) on_pair(x_vals, c, tv);
                ++rep.pairs;
                if (!tv.is_zero()) {
                    ++rep.nonzero;
                    if (static_cast<double>(tv.num) / static_cast<double>(tv.den) >
                        static_cast<double>(rep.max_tv.num) / static_cast<double>(rep.max_tv.den))
                        rep.max_tv = tv;
                    if (rep.failures.size() < 32) rep.failures.push_back({x_vals, c, tv});
                }
            }
        }
    };

    if (workers <= 1) {
        run_slice(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_slice, w);
        for (auto& th : pool) th.join();
    }

    GridReport report;
    for (const GridReport& rep : partial) {
        report.pairs += rep.pairs;
        report.nonzero += rep.nonzero;
        if (static_cast<double>(rep.max_tv.num) / static_cast<double>(rep.max_tv.den) >
            static_cast<double>(report.max_tv.num) / static_cast<double>(report.max_tv.den))
            report.max_tv = rep.max_tv;
        for (const auto& f : rep.failures)
            if (report.failures.size() < 32) report.failures.push_back(f);
    }
    return report;
}

}  // namespace relzkp::zksim
