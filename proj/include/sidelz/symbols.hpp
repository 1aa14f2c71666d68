#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sidelz/bitio.hpp"

namespace sidelz {

using Symbol = std::uint32_t;

// A finite-alphabet sequence: every symbol lies in [0, alphabet_size).
class SymbolSequence {
public:
    SymbolSequence() = default;
    // Throws InputError if alphabet_size < 2 or a symbol is out of range.
    SymbolSequence(unsigned alphabet_size, std::vector<Symbol> symbols);

    unsigned alphabet_size() const noexcept { return alphabet_size_; }
    std::size_t size() const noexcept { return symbols_.size(); }
    bool empty() const noexcept { return symbols_.empty(); }
    Symbol operator[](std::size_t i) const noexcept { return symbols_[i]; }
    std::span<const Symbol> symbols() const noexcept { return symbols_; }
    const std::vector<Symbol>& vector() const noexcept { return symbols_; }

    SymbolSequence prefix(std::size_t length) const;

    friend bool operator==(const SymbolSequence&, const SymbolSequence&) = default;

private:
    unsigned alphabet_size_ = 2;
    std::vector<Symbol> symbols_;
};

// Source X together with its side information Y.
struct PairedSource {
    SymbolSequence x;
    SymbolSequence y;
};

// ceil(log2 x) for x >= 1.
constexpr unsigned ceil_log2(std::uint64_t x) noexcept {
    return x <= 1 ? 0u : static_cast<unsigned>(std::bit_width(x - 1));
}

// floor(log2 x) for x >= 1.
constexpr unsigned floor_log2(std::uint64_t x) noexcept {
    return static_cast<unsigned>(std::bit_width(x)) - 1u;
}

// ceil(length * log2(alphabet)), computed exactly: the smallest b with alphabet^length <= 2^b.
std::uint64_t raw_bit_width(unsigned alphabet, std::uint64_t length);

// Writes the phrase as its rank in the lexicographic order of A^len, first
// symbol most significant, using exactly raw_bit_width(alphabet, len) bits.
void write_raw_phrase(Bitstream& out, std::span<const Symbol> phrase, unsigned alphabet);

// Inverse of write_raw_phrase; appends `length` symbols to `out`.
// Throws CorruptStream if the rank is not below alphabet^length.
void read_raw_phrase(BitReader& in, unsigned alphabet, std::size_t length, std::vector<Symbol>& out);

}  // namespace sidelz
