#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <vector>

#include "relzkp/errors.hpp"
#include "relzkp/field.hpp"

namespace relzkp::wire {

// Frame layout, fixed 18-byte header then the element payload:
//   bytes 0..3   magic "RZKP" (0x52 0x5A 0x4B 0x50)
//   byte  4      version (1)
//   bytes 5..12  round index, little-endian
//   byte  13     phase: 0 query, 1 commit, 2 challenge, 3 reveal
//   bytes 14..17 element count, little-endian
//   then count * ceil(N/8) bytes of little-endian field elements
// Timestamps never travel on the wire; each verifier trusts only its clock.
inline constexpr std::array<std::uint8_t, 4> kMagic{0x52, 0x5A, 0x4B, 0x50};
inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::size_t kHeaderSize = 18;
inline constexpr std::uint32_t kMaxElements = 1u << 20;

enum class Phase : std::uint8_t { query = 0, commit = 1, challenge = 2, reveal = 3 };

struct Frame {
    std::uint64_t round_index = 0;
    Phase phase = Phase::query;
    std::vector<FieldElement> elements;

    friend bool operator==(const Frame&, const Frame&) = default;
};

inline std::vector<std::uint8_t> encode(const Frame& frame, const Field& field) {
    if (frame.elements.size() > kMaxElements) throw FrameError("too many elements");
    const std::size_t ebytes = field.byte_size();
    std::vector<std::uint8_t> out(kHeaderSize + frame.elements.size() * ebytes);
    std::memcpy(out.data(), kMagic.data(), 4);
    out[4] = kVersion;
    for (int i = 0; i < 8; ++i) out[5 + i] = static_cast<std::uint8_t>(frame.round_index >> (8 * i));
    out[13] = static_cast<std::uint8_t>(frame.phase);
    const std::uint32_t count = static_cast<std::uint32_t>(frame.elements.size());
    for (int i = 0; i < 4; ++i) out[14 + i] = static_cast<std::uint8_t>(count >> (8 * i));
    std::uint8_t* p = out.data() + kHeaderSize;
    for (const FieldElement& e : frame.elements) {
        field.to_bytes(e, p);
        p += ebytes;
    }
    return out;
}

inline Frame decode(const std::uint8_t* data, std::size_t len, const Field& field) {
    if (len < kHeaderSize) throw FrameError("truncated header");
    if (std::memcmp(data, kMagic.data(), 4) != 0) throw FrameError("bad magic");
    if (data[4] != kVersion) throw FrameError("unsupported version");
    Frame frame;
    for (int i = 0; i < 8; ++i) frame.round_index |= static_cast<std::uint64_t>(data[5 + i]) << (8 * i);
    if (data[13] > 3) throw FrameError("unknown phase");
    frame.phase = static_cast<Phase>(data[13]);
    std::uint32_t count = 0;
    for (int i = 0; i < 4; ++i) count |= static_cast<std::uint32_t>(data[14 + i]) << (8 * i);
    if (count > kMaxElements) throw FrameError("element count too large");
    const std::size_t ebytes = field.byte_size();
    if (len != kHeaderSize + static_cast<std::size_t>(count) * ebytes) throw FrameError("length mismatch");
    frame.elements.reserve(count);
    const std::uint8_t* p = data + kHeaderSize;
    for (std::uint32_t i = 0; i < count; ++i, p += ebytes) {
        try {
            frame.elements.push_back(field.from_bytes(p, ebytes));
        } catch (const EncodingError& e) {
            throw FrameError(std::string("bad element encoding: ") + e.what());
        }
    }
    return frame;
}

inline Frame decode(const std::vector<std::uint8_t>& data, const Field& field) {
    return decode(data.data(), data.size(), field);
}

}  // namespace relzkp::wire
