#pragma once

#include <cmath>
#include <cstdint>

#include "relzkp/commitment.hpp"
#include "relzkp/errors.hpp"

namespace relzkp {

// A non-local game value bound: base guessing term plus the excess from the
// coupled-game argument. Bounds above 1 are reported vacuous, never clamped.
struct GameBound {
    double value = 0.0;
    double base = 0.0;    // 1/P^n
    double excess = 0.0;  // the 4*[...]^(1/3) term
    bool vacuous = false;
    bool regime_warning = false;  // n-fold bound used outside (P-1)/Q << n

    static GameBound make(double base, double excess, bool regime_warning = false) {
        GameBound b{base + excess, base, excess, false, regime_warning};
        b.vacuous = b.value > 1.0;
        return b;
    }
};

// Quantum value of the single CHSH_Q(P) game: 1/P + 4/Q^(1/3).
inline GameBound chsh_quantum_upper(double p, double q) {
    if (p < 2.0) throw InvalidParameter("need P >= 2");
    if (!(q > p)) throw InvalidParameter("need Q > P");
    return GameBound::make(1.0 / p, 4.0 / std::cbrt(q));
}

// Quantum value of the n-fold parallel game: 1/P^n + 4*[2n(P-1)/(P^n Q)]^(1/3).
inline GameBound chsh_parallel_quantum_upper(double p, double q, std::uint64_t n) {
    if (p < 2.0) throw InvalidParameter("need P >= 2");
    if (!(q >= p)) throw InvalidParameter("need Q >= P");
    if (n < 1) throw InvalidParameter("need n >= 1");
    double nn = static_cast<double>(n);
    double log2_base = -nn * std::log2(p);
    double log2_excess = 2.0 + (std::log2(2.0 * nn) + std::log2(p - 1.0) + log2_base - std::log2(q)) / 3.0;
    bool warn = (p - 1.0) / q > 0.01 * nn;
    return GameBound::make(std::exp2(log2_base), std::exp2(log2_excess), warn);
}

// Same bound with Q = 2^q_bits, evaluated in log space so widths past the
// double mantissa stay accurate.
inline GameBound chsh_parallel_quantum_upper_bits(double p, std::uint32_t q_bits, std::uint64_t n) {
    if (p < 2.0) throw InvalidParameter("need P >= 2");
    if (static_cast<double>(q_bits) < std::log2(p)) throw InvalidParameter("need Q >= P");
    if (n < 1) throw InvalidParameter("need n >= 1");
    double nn = static_cast<double>(n);
    double log2_base = -nn * std::log2(p);
    double log2_excess =
        2.0 + (std::log2(2.0 * nn) + std::log2(p - 1.0) + log2_base - static_cast<double>(q_bits)) / 3.0;
    bool warn = (p - 1.0) * std::exp2(-static_cast<double>(q_bits)) > 0.01 * nn;
    return GameBound::make(std::exp2(log2_base), std::exp2(log2_excess), warn);
}

// Coupled-game lower bound: (omega* - 1/|I_B|) / (64 S). May be negative.
inline double coupled_game_lower(double omega_star, double s_projective, double input_dim_b) {
    if (s_projective < 1.0 || input_dim_b < 1.0) throw InvalidParameter("need S >= 1 and |I_B| >= 1");
    if (!(omega_star >= 0.0 && omega_star <= 1.0)) throw InvalidParameter("omega* must be in [0, 1]");
    return (omega_star - 1.0 / input_dim_b) / (64.0 * s_projective);
}

// ln of (1 - 1/|E|)^m; -inf when a single-edge graph is challenged at all.
inline double log_soundness_after_rounds(std::uint64_t num_edges, std::uint64_t m) {
    if (num_edges < 1) throw InvalidParameter("need at least one edge");
    if (m == 0) return 0.0;
    return static_cast<double>(m) * std::log1p(-1.0 / static_cast<double>(num_edges));
}

inline double soundness_after_rounds(std::uint64_t num_edges, std::uint64_t m) {
    return std::exp(log_soundness_after_rounds(num_edges, m));
}

// m = k|E| rounds reach soundness e^-k.
inline std::uint64_t rounds_for_soundness(std::uint64_t num_edges, std::uint64_t k) {
    if (num_edges < 1) throw InvalidParameter("need at least one edge");
    if (k != 0 && num_edges > UINT64_MAX / k) throw InvalidParameter("round count overflows");
    return k * num_edges;
}

// Bits on the wire across a whole run: N |V| m.
struct ResourceUsage {
    double bits = 0.0;
    double bytes = 0.0;
    double mebibytes = 0.0;  // 2^20 bytes
};

inline ResourceUsage resource_usage(std::uint64_t n_bits, std::uint64_t num_vertices, std::uint64_t m) {
    ResourceUsage r;
    r.bits = static_cast<double>(n_bits) * static_cast<double>(num_vertices) * static_cast<double>(m);
    r.bytes = r.bits / 8.0;
    r.mebibytes = r.bytes / 1048576.0;
    return r;
}

// Round count of the earlier consistency-check construction: k (11|E|)^4.
inline double prior_work_rounds(double k, double num_edges) {
    double base = 11.0 * num_edges;
    return k * base * base * base * base;
}

}  // namespace relzkp
