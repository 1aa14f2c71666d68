#pragma once

#include <cstdint>
#include <vector>

#include "sidelz/bitio.hpp"
#include "sidelz/symbols.hpp"

namespace sidelz {

struct WindowConfig {
    std::uint64_t window = 1;  // n_w
    std::uint64_t length = 2;  // K
    unsigned x_alphabet = 2;
    unsigned y_alphabet = 2;

    // Throws InputError unless 1 <= n_w < K < 2^32 and both alphabets are >= 2.
    void validate() const;
};

enum class WindowBranch : std::uint8_t { raw, position };

struct WindowPhraseTrace {
    std::uint64_t start = 0;  // u_i, 1-based
    std::uint64_t length = 0;
    std::uint64_t y_count = 0;
    WindowBranch branch = WindowBranch::raw;
    std::uint64_t emitted_bits = 0;

    friend bool operator==(const WindowPhraseTrace&, const WindowPhraseTrace&) = default;
};

struct WindowEncoding {
    Bitstream code;
    std::uint64_t header_bits = 0;  // the raw first window
    std::vector<WindowPhraseTrace> trace;
};

// Raw branch iff ceil(log2 c) >= ceil(l log2|A|) or l = 1.
bool window_raw_branch(std::uint64_t length, std::uint64_t y_count, unsigned x_alphabet);

WindowEncoding encode_window(const SymbolSequence& x, const SymbolSequence& y,
                             const WindowConfig& cfg);

// The optional trace receives the decoder's own (u, l, c, branch) sequence.
SymbolSequence decode_window(const Bitstream& code, const SymbolSequence& y,
                             const WindowConfig& cfg,
                             std::vector<WindowPhraseTrace>* trace = nullptr);

}  // namespace sidelz
