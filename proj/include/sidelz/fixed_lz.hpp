#pragma once

#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "sidelz/bitio.hpp"
#include "sidelz/symbols.hpp"

namespace sidelz {

enum class FixedVariant : std::uint8_t { plain = 1, flagged = 2, adaptive = 3 };

struct FixedParseConfig {
    std::uint64_t phrase_length = 1;  // L
    std::uint64_t phrase_count = 0;   // N
    FixedVariant variant = FixedVariant::plain;
    unsigned m = 3;  // X-only match code parameter, variant 2 only
    unsigned x_alphabet = 2;
    unsigned y_alphabet = 2;

    // k = ceil(L log2 |A|).
    unsigned k() const;
    std::uint64_t total_length() const noexcept { return phrase_length * phrase_count; }

    // Throws InputError for L = 0, k or m above HkParameter::max_k, or alphabets < 2.
    void validate() const;
};

enum class PhraseCase : std::uint8_t {
    raw_first,
    xy_match,
    escape_raw,
    flag0_match,
    flag1_x_match,
    flag1_escape,
    adaptive_match,
    adaptive_escape,
};

std::string_view to_string(PhraseCase c) noexcept;

struct PhraseTrace {
    std::uint64_t index = 0;  // 1-based phrase index i
    PhraseCase tag = PhraseCase::raw_first;
    std::uint64_t n = 0;
    std::uint64_t p = 0;
    std::uint64_t r = 0;
    unsigned k_bar = 0;  // variant 3 only
    std::uint64_t emitted_bits = 0;
};

struct FixedEncoding {
    Bitstream code;
    std::vector<PhraseTrace> trace;
};

// Throws InputError on length mismatch (|X| = |Y| = N L) or alphabet mismatch.
FixedEncoding encode_fixed(const SymbolSequence& x, const SymbolSequence& y,
                           const FixedParseConfig& cfg);

// Throws CorruptStream / TruncatedStream on malformed input.
SymbolSequence decode_fixed(const Bitstream& code, const SymbolSequence& y,
                            const FixedParseConfig& cfg);

struct CaseLengths {
    std::uint64_t phrases = 0;
    std::uint64_t bits = 0;
};

std::map<PhraseCase, CaseLengths> phrase_lengths(const std::vector<PhraseTrace>& trace);

}  // namespace sidelz
