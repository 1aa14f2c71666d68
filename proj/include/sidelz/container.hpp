#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sidelz/bitio.hpp"
#include "sidelz/fixed_lz.hpp"
#include "sidelz/symbols.hpp"
#include "sidelz/window_lz.hpp"

namespace sidelz {

// Layout (all integers big-endian):
//   "CLZSI1" | version | algorithm (1-4) | |A| | |B|      alphabet byte 0 means 256
//   algorithm 1, 3: L, N          (u32 each)
//   algorithm 2:    L, N, m       (u32 each)
//   algorithm 4:    n_w, K        (u32 each)
//   payload bit length (u64) | payload bytes, zero padded
//   CRC-32 of (everything above || side digest)
// The side digest is the CRC-32 of |Y| (u64) followed by one byte per Y symbol.
inline constexpr std::uint8_t container_version = 1;

struct ContainerHeader {
    std::uint8_t algorithm = 1;
    unsigned x_alphabet = 2;
    unsigned y_alphabet = 2;
    std::uint32_t phrase_length = 0;  // L
    std::uint32_t phrase_count = 0;   // N
    std::uint32_t m = 0;
    std::uint32_t window = 0;  // n_w
    std::uint32_t length = 0;  // K

    friend bool operator==(const ContainerHeader&, const ContainerHeader&) = default;

    std::uint64_t symbol_count() const noexcept;
    FixedParseConfig fixed_config() const;
    WindowConfig window_config() const;
};

struct Container {
    ContainerHeader header;
    Bitstream payload;
};

std::uint32_t side_digest(std::span<const Symbol> side);

// Throws InputError for an alphabet outside [2, 256] or an unknown algorithm.
std::vector<std::uint8_t> serialize_container(const Container& c, std::span<const Symbol> side);

// Throws CorruptStream for a bad magic, version, algorithm or size (including
// truncation), ChecksumMismatch when the checksum does not match `side`.
Container parse_container(std::span<const std::uint8_t> bytes, std::span<const Symbol> side);

// Header only, no checksum verification; lets a caller learn |B| before mapping the side file.
ContainerHeader peek_container_header(std::span<const std::uint8_t> bytes);

// Encode / decode dispatch by header.algorithm.
Container compress(const SymbolSequence& x, const SymbolSequence& y, ContainerHeader header);
SymbolSequence decompress(const Container& c, const SymbolSequence& y);

}  // namespace sidelz
