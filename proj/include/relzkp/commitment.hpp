#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include <nlohmann/json.hpp>

#include "relzkp/errors.hpp"
#include "relzkp/field.hpp"

namespace relzkp {

// a = x*y - b over GF(2^N); with characteristic 2 the subtraction is XOR.
// The key b perfectly hides y: for fixed x, a is uniform whenever b is.
inline FieldElement commit(const Field& f, const FieldElement& x, std::uint8_t color, const FieldElement& b) {
    if (x.is_zero()) throw InvalidQuery("query element must be nonzero");
    return f.add(f.mul(x, f.embed_color(color)), b);
}

// Decode y* = (a + b) / x and accept only if it is the embedding of a color
// (and matches claimed_y when given). Returns the color, or nullopt = reject.
inline std::optional<std::uint8_t> reveal_verify(const Field& f, const FieldElement& x, const FieldElement& a,
                                                 const FieldElement& b,
                                                 std::optional<std::uint8_t> claimed_y = std::nullopt) {
    if (x.is_zero()) throw InvalidQuery("query element must be nonzero");
    FieldElement decoded = f.mul(f.add(a, b), f.inv(x));
    std::optional<std::uint8_t> color = f.decode_color(decoded);
    if (!color) return std::nullopt;
    if (claimed_y && *claimed_y != *color) return std::nullopt;
    return color;
}

// log2 of the sum-binding bound 4*[2|D|(P-1)P^(2|D|)]^(1/3) / Q^(1/3)
// with Q = 2^q_bits.
inline double log2_binding_epsilon(std::uint32_t p, std::uint32_t subset_size, std::uint32_t q_bits) {
    if (p < 2 || subset_size < 1) throw InvalidParameter("need P >= 2 and |D| >= 1");
    double d = static_cast<double>(subset_size);
    double lg = std::log2(2.0 * d) + std::log2(static_cast<double>(p - 1)) + 2.0 * d * std::log2(static_cast<double>(p));
    return 2.0 + (lg - static_cast<double>(q_bits)) / 3.0;
}

// Sum-binding parameter of the subset commitment at the given element width.
// Values above 1 mean the bound is vacuous at that size; callers must check.
inline double binding_epsilon(std::uint32_t p, std::uint32_t subset_size, std::uint32_t q_bits) {
    if (static_cast<double>(q_bits) <= std::log2(static_cast<double>(p)))
        throw InvalidParameter("need Q = 2^q_bits > P");
    return std::exp2(log2_binding_epsilon(p, subset_size, q_bits));
}

// Smallest N with N >= 7 + log|D| + log(P-1) + 2|D| log P - 3 log(epsilon_b).
// epsilon_b should be a dyadic power of two so the -3 log term is an exact
// integer; the remaining terms for P = 2 are integral as well.
inline std::uint32_t required_bits(std::uint32_t p, std::uint32_t subset_size, double epsilon_b) {
    if (p < 2 || subset_size < 1) throw InvalidParameter("need P >= 2 and |D| >= 1");
    if (!(epsilon_b > 0.0 && epsilon_b <= 1.0)) throw InvalidParameter("need 0 < epsilon_b <= 1");
    double d = static_cast<double>(subset_size);
    double bound = 7.0 + std::log2(d) + std::log2(static_cast<double>(p - 1)) +
                   2.0 * d * std::log2(static_cast<double>(p)) - 3.0 * std::log2(epsilon_b);
    return static_cast<std::uint32_t>(std::ceil(bound - 1e-9));
}

// Parameter block for one protocol instance's commitments.
struct CommitmentParams {
    std::uint32_t p = 3;            // color alphabet size
    std::uint32_t q_bits = 112;     // N = log Q
    std::uint32_t subset_size = 2;  // |D|, the challenged edge
    double epsilon_b = 0x1.0p-32;

    bool binding_certified() const {
        return static_cast<double>(q_bits) > std::log2(static_cast<double>(p)) &&
               q_bits >= required_bits(p, subset_size, epsilon_b);
    }

    nlohmann::json to_json() const {
        return {{"P", p}, {"Q_bits", q_bits}, {"subset_size", subset_size}, {"epsilon_b", epsilon_b}};
    }

    static CommitmentParams from_json(const nlohmann::json& j) {
        CommitmentParams out;
        out.p = j.at("P").get<std::uint32_t>();
        out.q_bits = j.at("Q_bits").get<std::uint32_t>();
        out.subset_size = j.at("subset_size").get<std::uint32_t>();
        out.epsilon_b = j.at("epsilon_b").get<double>();
        return out;
    }
};

}  // namespace relzkp
