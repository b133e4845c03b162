#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "relzkp/zksim.hpp"

using namespace relzkp;
using namespace relzkp::zksim;

namespace {

ColoredGraph triangle() {
    return ColoredGraph(3, {{0, 1}, {0, 2}, {1, 2}}, Coloring{0, 1, 2});
}

std::vector<FieldElement> queries(const Field& f, std::initializer_list<std::uint64_t> values) {
    std::vector<FieldElement> out;
    for (std::uint64_t v : values) out.push_back(f.from_u64(v));
    return out;
}

}  // namespace

TEST_CASE("simulated views always decode to distinct colors on the challenge") {
    Field f = Field::preset(3);
    ColoredGraph g = triangle();
    SeededRng rng(41);
    for (int i = 0; i < 1000; ++i) {
        std::vector<FieldElement> x;
        for (int k = 0; k < 3; ++k) x.push_back(f.sample_uniform_nonzero(rng));
        Edge c = g.edges()[rng.uniform_below(3)];
        View view = simulate_view(g.public_view(), f, x, c, rng);

        auto yi = reveal_verify(f, view.X[c.first], view.A[c.first], view.B_C[0]);
        auto yj = reveal_verify(f, view.X[c.second], view.A[c.second], view.B_C[1]);
        REQUIRE(yi.has_value());
        REQUIRE(yj.has_value());
        CHECK(*yi != *yj);
    }
}

TEST_CASE("simulate_view validates its inputs") {
    Field f = Field::preset(3);
    ColoredGraph g = triangle();
    SeededRng rng(42);
    auto x = queries(f, {1, 2, 3});
    CHECK_THROWS_AS(simulate_view(g.public_view(), f, x, Edge{0, 0}, rng), InvalidChallenge);
    auto with_zero = queries(f, {1, 0, 3});
    CHECK_THROWS_AS(simulate_view(g.public_view(), f, with_zero, make_edge(0, 1), rng), InvalidQuery);
    auto short_x = queries(f, {1, 2});
    CHECK_THROWS_AS(simulate_view(g.public_view(), f, short_x, make_edge(0, 1), rng), InvalidQuery);
}

TEST_CASE("the simulator ignores any witness by construction") {
    Field f = Field::preset(3);
    ColoredGraph with = triangle();
    ColoredGraph without = with.without_witness();
    auto x = queries(f, {3, 5, 6});
    SeededRng rng_a(43), rng_b(43);
    View a = simulate_view(with.public_view(), f, x, make_edge(1, 2), rng_a);
    View b = simulate_view(without.public_view(), f, x, make_edge(1, 2), rng_b);
    CHECK(a.A == b.A);
    CHECK(a.B_C == b.B_C);
}

TEST_CASE("real enumeration: uniform commitment marginal, proper decoded pairs, exact weights") {
    Field f = Field::preset(3);
    ColoredGraph g = triangle();
    auto x = queries(f, {1, 3, 7});
    Edge c = make_edge(0, 1);
    Distribution real = enumerate_real_distribution(g, f, x, c);

    CHECK(real.denominator == 6 * 512);
    CHECK(real.total() == real.denominator);  // weights sum to one exactly

    // marginal over A: every one of the 512 vectors appears exactly 6 times
    std::map<std::uint64_t, std::uint64_t> a_marginal;
    for (const auto& [key, count] : real.entries) a_marginal[key & 0xFFFFFF] += count;
    CHECK(a_marginal.size() == 512);
    for (const auto& [a, count] : a_marginal) CHECK(count == 6);

    // every entry decodes the challenged pair to distinct colors
    for (const auto& [key, count] : real.entries) {
        FieldElement a0 = f.from_u64(key & 0xFF), a1 = f.from_u64((key >> 8) & 0xFF);
        FieldElement b0 = f.from_u64((key >> 24) & 0xFF), b1 = f.from_u64((key >> 32) & 0xFF);
        auto y0 = reveal_verify(f, x[0], a0, b0);
        auto y1 = reveal_verify(f, x[1], a1, b1);
        REQUIRE(y0.has_value());
        REQUIRE(y1.has_value());
        CHECK(*y0 != *y1);
    }
}

TEST_CASE("simulated enumeration mirrors the real one") {
    Field f = Field::preset(3);
    ColoredGraph g = triangle();
    auto x = queries(f, {2, 4, 5});
    for (const Edge& c : g.edges()) {
        Distribution real = enumerate_real_distribution(g, f, x, c);
        Distribution sim = enumerate_sim_distribution(g.public_view(), f, x, c);
        CHECK(sim.denominator == real.denominator);
        CHECK(sim.total() == sim.denominator);
        CHECK(tv_distance(real, sim) == Rational{0, 1});
        CHECK(real.entries == sim.entries);  // identical support and counts
    }
}

TEST_CASE("enumeration guards") {
    Field big = Field::preset(112);
    ColoredGraph g = triangle();
    auto x = queries(Field::preset(3), {1, 2, 3});
    CHECK_THROWS_AS(enumerate_real_distribution(g, big, x, make_edge(0, 1)), TooLargeToEnumerate);

    SeededRng rng(44);
    ColoredGraph five = generate_graph(5, 0.9, rng);
    Field f = Field::preset(3);
    std::vector<FieldElement> x5;
    for (int k = 0; k < 5; ++k) x5.push_back(f.sample_uniform_nonzero(rng));
    CHECK_THROWS_AS(enumerate_real_distribution(five, f, x5, five.edges()[0]), TooLargeToEnumerate);

    ColoredGraph no_witness = g.without_witness();
    CHECK_THROWS_AS(enumerate_real_distribution(no_witness, f, x, make_edge(0, 1)), NotAProver);
}

TEST_CASE("tv distance on hand-built distributions") {
    Distribution a{4, {{0, 2}, {1, 2}}, 3, 3};
    Distribution b{4, {{0, 2}, {1, 2}}, 3, 3};
    CHECK(tv_distance(a, b) == Rational{0, 1});

    Distribution disjoint{4, {{2, 4}}, 3, 3};
    CHECK(tv_distance(a, disjoint) == Rational{1, 1});

    Distribution half{4, {{0, 4}}, 3, 3};
    CHECK(tv_distance(a, half) == Rational{1, 2});

    Distribution other_universe{4, {{0, 4}}, 4, 3};
    CHECK_THROWS_AS(tv_distance(a, other_universe), DomainMismatch);

    // different denominators still compare exactly
    Distribution scaled{8, {{0, 4}, {1, 4}}, 3, 3};
    CHECK(tv_distance(a, scaled) == Rational{0, 1});
}

TEST_CASE("zk grid over the full triangle instance is exactly zero") {
    Field f = Field::preset(3);
    ColoredGraph g = triangle();
    GridReport report = zk_grid(g, f);
    CHECK(report.pairs == 343 * 3);
    CHECK(report.nonzero == 0);
    CHECK(report.max_tv == Rational{0, 1});
    CHECK(report.pass());
    CHECK(report.to_json()["pass"] == true);
}

TEST_CASE("zk grid guard rejects oversized instances") {
    Field f = Field::preset(4);
    SeededRng rng(45);
    ColoredGraph g = generate_graph(4, 0.9, rng);
    CHECK_THROWS_AS(zk_grid(g, f), TooLargeToEnumerate);
}
