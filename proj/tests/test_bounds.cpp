#include <catch2/catch_amalgamated.hpp>
#include <limits>

#include <cmath>
#include <cstdint>

#include "relzkp/bounds.hpp"

using namespace relzkp;

TEST_CASE("single CHSH game upper bound") {
    GameBound b = chsh_quantum_upper(3, 512);
    CHECK(b.value == Catch::Approx(1.0 / 3 + 0.5).epsilon(1e-12));
    CHECK_FALSE(b.vacuous);

    CHECK_THROWS_AS(chsh_quantum_upper(2, 2), InvalidParameter);  // needs Q > P
    CHECK_THROWS_AS(chsh_quantum_upper(1, 8), InvalidParameter);

    // decreasing in Q with limit 1/P
    double prev = std::numeric_limits<double>::infinity();
    for (double q = 8; q <= 1e12; q *= 4) {
        double cur = chsh_quantum_upper(3, q).value;
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(prev == Catch::Approx(1.0 / 3).margin(2e-3));

    // small Q gives a bound above 1; flagged, not clamped
    GameBound vac = chsh_quantum_upper(3, 4);
    CHECK(vac.vacuous);
    CHECK(vac.value > 1.0);
}

TEST_CASE("parallel CHSH game upper bound") {
    // n = 1 must reduce to the same expression instantiated directly
    for (double p : {2.0, 3.0, 5.0}) {
        for (double q : {64.0, 4096.0}) {
            GameBound b = chsh_parallel_quantum_upper(p, q, 1);
            double direct = 1.0 / p + 4.0 * std::cbrt(2.0 * (p - 1.0) / (p * q));
            CHECK(b.value == Catch::Approx(direct).epsilon(1e-12));
        }
    }

    GameBound two_fold = chsh_parallel_quantum_upper(3, std::exp2(30), 2);
    CHECK(two_fold.value == Catch::Approx(1.0 / 9 + 4.0 * std::cbrt(8.0 / (9.0 * std::exp2(30)))).epsilon(1e-12));
    CHECK(two_fold.value == Catch::Approx(0.11487).margin(5e-6));

    // with the P^n factor in the denominator both terms shrink as n grows
    // (for P = 3), and the whole bound is decreasing in Q for fixed n
    double prev_excess = std::numeric_limits<double>::infinity();
    double prev_base = std::numeric_limits<double>::infinity();
    for (std::uint64_t n = 1; n <= 12; ++n) {
        GameBound b = chsh_parallel_quantum_upper(3, 1e9, n);
        CHECK(b.excess < prev_excess);
        CHECK(b.base < prev_base);
        prev_excess = b.excess;
        prev_base = b.base;
    }
    double prev_value = std::numeric_limits<double>::infinity();
    for (double q = 16; q <= 1e12; q *= 16) {
        double cur = chsh_parallel_quantum_upper(3, q, 2).value;
        CHECK(cur < prev_value);
        prev_value = cur;
    }

    CHECK_THROWS_AS(chsh_parallel_quantum_upper(3, 2, 2), InvalidParameter);  // Q < P
    CHECK_THROWS_AS(chsh_parallel_quantum_upper(3, 8, 0), InvalidParameter);

    // regime flag: (P-1)/Q large relative to n
    CHECK(chsh_parallel_quantum_upper(3, 3, 1).regime_warning);
    CHECK_FALSE(chsh_parallel_quantum_upper(3, 1e6, 2).regime_warning);
}

TEST_CASE("cross-module identity with binding_epsilon") {
    // binding_epsilon(P,|D|,N) == P^|D| * (parallel bound - P^-|D|)
    int points = 0;
    for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
        for (std::uint32_t d : {1u, 2u, 3u}) {
            for (std::uint32_t q_bits = 12; q_bits <= 40; q_bits += 7) {
                if (std::exp2(q_bits) < p) continue;
                GameBound b = chsh_parallel_quantum_upper_bits(p, q_bits, d);
                double lifted = std::pow(p, d) * (b.value - b.base);
                double eps = binding_epsilon(p, d, q_bits);
                CHECK(lifted == Catch::Approx(eps).epsilon(1e-12));
                ++points;
            }
        }
    }
    CHECK(points >= 50);
}

TEST_CASE("coupled game lower bound") {
    CHECK(coupled_game_lower(0.5, 1, 2) == 0.0);
    CHECK(coupled_game_lower(1.0, 1, 2) == Catch::Approx(1.0 / 128).epsilon(1e-15));
    CHECK(coupled_game_lower(1.0, 2, 2) == Catch::Approx(1.0 / 256).epsilon(1e-15));
    CHECK(coupled_game_lower(0.1, 1, 2) < 0.0);  // may be negative, returned as-is
    CHECK_THROWS_AS(coupled_game_lower(1.5, 1, 2), InvalidParameter);
    CHECK_THROWS_AS(coupled_game_lower(0.5, 0, 2), InvalidParameter);
}

TEST_CASE("soundness after m rounds") {
    CHECK(soundness_after_rounds(1114, 0) == 1.0);
    CHECK(soundness_after_rounds(1, 1) == 0.0);
    CHECK(soundness_after_rounds(1, 5) == 0.0);

    // log-space value within 0.1% of -100
    double log_delta = log_soundness_after_rounds(1114, 111400);
    CHECK(std::abs(log_delta - (-100.0)) / 100.0 < 1e-3);

    // (1 - 1/|E|)^(k|E|) <= e^-k (1 + 1e-3)
    for (std::uint64_t edges : {10ull, 100ull, 1114ull, 10000ull}) {
        for (std::uint64_t k : {1ull, 10ull, 100ull}) {
            double delta = log_soundness_after_rounds(edges, k * edges);
            CHECK(delta <= -static_cast<double>(k) + std::log1p(1e-3));
        }
    }

    CHECK_THROWS_AS(soundness_after_rounds(0, 5), InvalidParameter);
}

TEST_CASE("round count for target soundness") {
    CHECK(rounds_for_soundness(1114, 100) == 111400);
    CHECK(rounds_for_soundness(1114, 0) == 0);
    CHECK(rounds_for_soundness(20, 3) == 60);
    CHECK_THROWS_AS(rounds_for_soundness(UINT64_MAX, 2), InvalidParameter);
}

TEST_CASE("resource accounting") {
    ResourceUsage r = resource_usage(112, 100, 111400);
    CHECK(r.bits == 112.0 * 100 * 111400);
    CHECK(r.bytes == Catch::Approx(1.5596e8).epsilon(1e-9));
    CHECK(std::abs(r.mebibytes - 148.77) / 148.77 < 1e-3);

    CHECK(resource_usage(112, 100, 0).bits == 0.0);

    // prior-work comparison k (11 |E|)^4 lands at ~2e18
    double prior = prior_work_rounds(100, 1114);
    double exact = 100.0 * 12254.0 * 12254.0 * 12254.0 * 12254.0;
    CHECK(prior == Catch::Approx(exact).epsilon(1e-12));
    CHECK(prior > 2.2e18);
    CHECK(prior < 2.3e18);
}
