#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relzkp/errors.hpp"
#include "relzkp/rng.hpp"

namespace relzkp {

// A polynomial over GF(2) of degree < 128, little-endian word order.
using Words = std::array<std::uint64_t, 2>;

namespace poly {

inline int degree(const Words& p) {
    if (p[1] != 0) return 127 - __builtin_clzll(p[1]);
    if (p[0] != 0) return 63 - __builtin_clzll(p[0]);
    return -1;
}

inline bool bit(const Words& p, unsigned i) {
    return (p[i >> 6] >> (i & 63)) & 1u;
}

inline Words shifted_left(const Words& p, unsigned k) {
    if (k == 0) return p;
    if (k >= 128) return {0, 0};
    if (k >= 64) return {0, p[0] << (k - 64)};
    return {p[0] << k, (p[1] << k) | (p[0] >> (64 - k))};
}

inline void xor_into(Words& a, const Words& b) {
    a[0] ^= b[0];
    a[1] ^= b[1];
}

// gcd of two nonzero polynomials over GF(2).
inline Words gcd(Words a, Words b) {
    while (b[0] != 0 || b[1] != 0) {
        int da = degree(a), db = degree(b);
        if (da < db) {
            std::swap(a, b);
            std::swap(da, db);
        }
        xor_into(a, shifted_left(b, static_cast<unsigned>(da - db)));
        if (degree(a) < degree(b)) std::swap(a, b);
    }
    return a;
}

}  // namespace poly

// One element of GF(2^N): the coefficient bits plus the field width it
// belongs to, so cross-field mixing is detectable.
struct FieldElement {
    Words w{0, 0};
    std::uint16_t width = 0;

    bool is_zero() const { return w[0] == 0 && w[1] == 0; }
    friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

// Width plus reduction polynomial. The polynomial has degree exactly
// width_bits (top bit set) and constant term 1.
struct FieldSpec {
    std::uint32_t width_bits = 0;
    Words reduction_poly{0, 0};

    // Hex of the polynomial as an integer, most significant digit first.
    std::string poly_hex() const;
    static FieldSpec from_hex(std::uint32_t width_bits, const std::string& hex);

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

// Arithmetic over GF(2^N) for 1 <= N <= 127. Elements are immutable values;
// all operations are pure and safe to share across threads.
class Field {
public:
    explicit Field(FieldSpec spec) : spec_(spec) {
        if (spec.width_bits < 1 || spec.width_bits > kMaxWidth)
            throw InvalidParameter("field width must be in [1, 127]");
        if (poly::degree(spec.reduction_poly) != static_cast<int>(spec.width_bits))
            throw InvalidParameter("reduction polynomial must have degree width_bits");
        if (!poly::bit(spec.reduction_poly, 0))
            throw InvalidParameter("reduction polynomial must have constant term 1");
        mask_ = make_mask(spec.width_bits);
    }

    static constexpr std::uint32_t kMaxWidth = 127;

    // Shipped presets with published irreducible polynomials:
    //   N=3    x^3 + x + 1
    //   N=4    x^4 + x + 1
    //   N=8    x^8 + x^4 + x^3 + x + 1
    //   N=16   x^16 + x^5 + x^3 + x + 1
    //   N=32   x^32 + x^7 + x^3 + x^2 + 1
    //   N=112  x^112 + x^5 + x^4 + x^3 + 1
    static Field preset(std::uint32_t width_bits);
    static const std::vector<std::uint32_t>& preset_widths();

    const FieldSpec& spec() const { return spec_; }
    std::uint32_t width() const { return spec_.width_bits; }
    std::size_t byte_size() const { return (spec_.width_bits + 7) / 8; }

    // Number of elements; only representable for N < 64.
    std::uint64_t order_u64() const {
        if (width() >= 64) throw InvalidParameter("order does not fit in 64 bits");
        return 1ull << width();
    }

    FieldElement zero() const { return element({0, 0}); }
    FieldElement one() const { return element({1, 0}); }

    FieldElement from_u64(std::uint64_t value) const {
        if (width() < 64 && value > mask_[0]) throw InvalidParameter("value exceeds field width");
        return element({value, 0});
    }

    std::uint64_t to_u64(const FieldElement& e) const {
        check(e);
        if (e.w[1] != 0) throw InvalidParameter("element exceeds 64 bits");
        return e.w[0];
    }

    FieldElement add(const FieldElement& u, const FieldElement& v) const {
        check(u);
        check(v);
        return element({u.w[0] ^ v.w[0], u.w[1] ^ v.w[1]});
    }

    // add == sub in characteristic 2.
    FieldElement sub(const FieldElement& u, const FieldElement& v) const { return add(u, v); }

    FieldElement mul(const FieldElement& u, const FieldElement& v) const {
        check(u);
        check(v);
        Prod acc = clmul(u.w, v.w);
        reduce(acc);
        return element({acc[0], acc[1]});
    }

    // Extended Euclidean algorithm over GF(2)[x].
    FieldElement inv(const FieldElement& u) const {
        check(u);
        if (u.is_zero()) throw DivisionByZero("inverse of zero");
        Words r0 = spec_.reduction_poly, r1 = u.w;
        Words s0{0, 0}, s1{1, 0};
        while (poly::degree(r1) > 0) {
            int shift = poly::degree(r0) - poly::degree(r1);
            if (shift < 0) {
                std::swap(r0, r1);
                std::swap(s0, s1);
                continue;
            }
            poly::xor_into(r0, poly::shifted_left(r1, static_cast<unsigned>(shift)));
            poly::xor_into(s0, poly::shifted_left(s1, static_cast<unsigned>(shift)));
            if (poly::degree(r0) < poly::degree(r1)) {
                std::swap(r0, r1);
                std::swap(s0, s1);
            }
        }
        // r1 == 1 since the reduction polynomial is irreducible and u != 0.
        return element(s1);
    }

    // Uniform over all 2^N elements: draw the needed words and mask.
    FieldElement sample_uniform(SeededRng& rng) const {
        Words w{0, 0};
        w[0] = rng.next_u64() & mask_[0];
        if (width() > 64) w[1] = rng.next_u64() & mask_[1];
        return element(w);
    }

    FieldElement sample_uniform_nonzero(SeededRng& rng) const {
        FieldElement e;
        do {
            e = sample_uniform(rng);
        } while (e.is_zero());
        return e;
    }

    // Little-endian byte encoding, ceil(N/8) bytes, unused high bits zero.
    void to_bytes(const FieldElement& e, std::uint8_t* out) const {
        check(e);
        for (std::size_t i = 0; i < byte_size(); ++i) out[i] = static_cast<std::uint8_t>(e.w[i >> 3] >> ((i & 7) * 8));
    }

    std::vector<std::uint8_t> to_bytes(const FieldElement& e) const {
        std::vector<std::uint8_t> out(byte_size());
        to_bytes(e, out.data());
        return out;
    }

    FieldElement from_bytes(const std::uint8_t* data, std::size_t len) const {
        if (len != byte_size()) throw EncodingError("element byte length mismatch");
        Words w{0, 0};
        for (std::size_t i = 0; i < len; ++i) w[i >> 3] |= static_cast<std::uint64_t>(data[i]) << ((i & 7) * 8);
        if ((w[0] & ~mask_[0]) != 0 || (w[1] & ~mask_[1]) != 0)
            throw EncodingError("stray bits above field width");
        return element(w);
    }

    FieldElement from_bytes(const std::vector<std::uint8_t>& data) const {
        return from_bytes(data.data(), data.size());
    }

    // Hex of the little-endian byte encoding (two lowercase digits per byte).
    std::string to_hex(const FieldElement& e) const {
        static const char* digits = "0123456789abcdef";
        std::vector<std::uint8_t> bytes = to_bytes(e);
        std::string out(bytes.size() * 2, '0');
        for (std::size_t i = 0; i < bytes.size(); ++i) {
            out[2 * i] = digits[bytes[i] >> 4];
            out[2 * i + 1] = digits[bytes[i] & 0xF];
        }
        return out;
    }

    FieldElement from_hex(const std::string& hex) const {
        if (hex.size() != byte_size() * 2) throw EncodingError("element hex length mismatch");
        std::vector<std::uint8_t> bytes(byte_size());
        for (std::size_t i = 0; i < bytes.size(); ++i)
            bytes[i] = static_cast<std::uint8_t>(hex_nibble(hex[2 * i]) << 4 | hex_nibble(hex[2 * i + 1]));
        return from_bytes(bytes);
    }

    // Colors {0,1,2} embedded as the elements with integer values 0, 1, 2.
    FieldElement embed_color(std::uint8_t color) const {
        if (color > 2) throw InvalidColoring("color must be in {0,1,2}");
        if (width() < 2) throw InvalidParameter("field too small to embed three colors");
        return element({color, 0});
    }

    std::optional<std::uint8_t> decode_color(const FieldElement& e) const {
        check(e);
        if (e.w[1] == 0 && e.w[0] <= 2) return static_cast<std::uint8_t>(e.w[0]);
        return std::nullopt;
    }

    // Rabin irreducibility criterion: x^(2^N) == x mod f, and for every prime
    // divisor q of N, gcd(x^(2^(N/q)) - x, f) == 1.
    bool is_irreducible() const {
        const std::uint32_t n = width();
        if (n == 1) return true;  // degree-1 with constant term 1 is x+1
        FieldElement x = element({2, 0});
        FieldElement t = x;
        std::uint32_t done = 0;
        std::vector<std::uint32_t> prime_divs = prime_divisors(n);
        for (std::uint32_t q : prime_divs) {
            std::uint32_t target = n / q;
            while (done < target) {
                t = mul(t, t);
                ++done;
            }
            Words diff{t.w[0] ^ x.w[0], t.w[1] ^ x.w[1]};
            if (diff[0] == 0 && diff[1] == 0) return false;  // proper factor of degree n/q
            Words g = poly::gcd(spec_.reduction_poly, diff);
            if (poly::degree(g) != 0) return false;
        }
        while (done < n) {
            t = mul(t, t);
            ++done;
        }
        return t == x;
    }

private:
    using Prod = std::array<std::uint64_t, 4>;

    static Words make_mask(std::uint32_t n) {
        Words m{0, 0};
        if (n >= 64) {
            m[0] = ~0ull;
            m[1] = (n == 64) ? 0 : (~0ull >> (128 - n));
        } else {
            m[0] = ~0ull >> (64 - n);
        }
        return m;
    }

    FieldElement element(Words w) const {
        return FieldElement{w, static_cast<std::uint16_t>(spec_.width_bits)};
    }

    void check(const FieldElement& e) const {
        if (e.width != spec_.width_bits)
            throw FieldSpecMismatch("element width " + std::to_string(e.width) + " vs field width " +
                                    std::to_string(spec_.width_bits));
    }

    static std::uint8_t hex_nibble(char c) {
        if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
        throw EncodingError("invalid hex digit");
    }

    // Carry-less 128x128 -> 254 bit multiply, 4-bit windowed.
    static Prod clmul(const Words& u, const Words& v) {
        // table[i] = i (*) v for the 16 nibble values; each fits in 3 words.
        std::array<std::array<std::uint64_t, 3>, 16> table{};
        table[1] = {v[0], v[1], 0};
        for (unsigned i = 2; i < 16; i += 2) {
            const auto& half = table[i / 2];
            table[i] = {half[0] << 1, (half[1] << 1) | (half[0] >> 63), (half[2] << 1) | (half[1] >> 63)};
            table[i + 1] = {table[i][0] ^ v[0], table[i][1] ^ v[1], table[i][2]};
        }
        Prod acc{0, 0, 0, 0};
        for (unsigned k = 0; k < 32; ++k) {
            unsigned nib = (u[k >> 4] >> ((k & 15) * 4)) & 0xF;
            if (nib == 0) continue;
            const auto& t = table[nib];
            unsigned word = k >> 4, bit = (k & 15) * 4;
            if (bit == 0) {
                for (unsigned j = 0; j < 3 && word + j < 4; ++j) acc[word + j] ^= t[j];
            } else {
                for (unsigned j = 0; j < 3; ++j) {
                    if (word + j < 4) acc[word + j] ^= t[j] << bit;
                    if (word + j + 1 < 4) acc[word + j + 1] ^= t[j] >> (64 - bit);
                }
            }
        }
        return acc;
    }

    void reduce(Prod& acc) const {
        const int n = static_cast<int>(width());
        for (int bit = 2 * n - 2; bit >= n; --bit) {
            if ((acc[bit >> 6] >> (bit & 63)) & 1u) {
                unsigned shift = static_cast<unsigned>(bit - n);
                unsigned word = shift >> 6, off = shift & 63;
                const Words& f = spec_.reduction_poly;
                if (off == 0) {
                    for (unsigned j = 0; j < 2 && word + j < 4; ++j) acc[word + j] ^= f[j];
                } else {
                    for (unsigned j = 0; j < 2; ++j) {
                        if (word + j < 4) acc[word + j] ^= f[j] << off;
                        if (word + j + 1 < 4) acc[word + j + 1] ^= f[j] >> (64 - off);
                    }
                }
            }
        }
        acc[0] &= mask_[0];
        acc[1] &= mask_[1];
    }

    static std::vector<std::uint32_t> prime_divisors(std::uint32_t n) {
        std::vector<std::uint32_t> out;
        for (std::uint32_t p = 2; p * p <= n; ++p) {
            if (n % p == 0) {
                out.push_back(p);
                while (n % p == 0) n /= p;
            }
        }
        if (n > 1) out.push_back(n);
        return out;
    }

    FieldSpec spec_;
    Words mask_{0, 0};
};

inline Field Field::preset(std::uint32_t width_bits) {
    switch (width_bits) {
        case 3:
            return Field(FieldSpec{3, {0xBull, 0}});
        case 4:
            return Field(FieldSpec{4, {0x13ull, 0}});
        case 8:
            return Field(FieldSpec{8, {0x11Bull, 0}});
        case 16:
            return Field(FieldSpec{16, {0x1002Bull, 0}});
        case 32:
            return Field(FieldSpec{32, {0x10000008Dull, 0}});
        case 112:
            return Field(FieldSpec{112, {0x39ull, 1ull << 48}});
        default:
            throw InvalidParameter("no preset for width " + std::to_string(width_bits));
    }
}

inline const std::vector<std::uint32_t>& Field::preset_widths() {
    static const std::vector<std::uint32_t> widths{3, 4, 8, 16, 32, 112};
    return widths;
}

inline std::string FieldSpec::poly_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    bool started = false;
    for (int nib = 31; nib >= 0; --nib) {
        unsigned v = (reduction_poly[nib >> 4] >> ((nib & 15) * 4)) & 0xF;
        if (!started && v == 0 && nib != 0) continue;
        started = true;
        out.push_back(digits[v]);
    }
    return out;
}

inline FieldSpec FieldSpec::from_hex(std::uint32_t width_bits, const std::string& hex) {
    if (hex.empty() || hex.size() > 32) throw EncodingError("polynomial hex length out of range");
    Words w{0, 0};
    for (char c : hex) {
        unsigned v;
        if (c >= '0' && c <= '9') v = static_cast<unsigned>(c - '0');
        else if (c >= 'a' && c <= 'f') v = static_cast<unsigned>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') v = static_cast<unsigned>(c - 'A' + 10);
        else throw EncodingError("invalid hex digit in polynomial");
        if (w[1] >> 60) throw EncodingError("polynomial exceeds 128 bits");
        w[1] = (w[1] << 4) | (w[0] >> 60);
        w[0] = (w[0] << 4) | v;
    }
    return FieldSpec{width_bits, w};
}

}  // namespace relzkp
