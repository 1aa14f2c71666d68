#include "sidelz/window_lz.hpp"

#include <string>

#include "sidelz/errors.hpp"
#include "sidelz/matching.hpp"
#include "sidelz/prefix_codes.hpp"

namespace sidelz {

void WindowConfig::validate() const {
    if (x_alphabet < 2 || y_alphabet < 2) {
        throw InputError("alphabet sizes must be at least 2");
    }
    if (window < 1 || window >= length) {
        throw InputError("window size must satisfy 1 <= n_w < K (n_w = " + std::to_string(window) +
                         ", K = " + std::to_string(length) + ")");
    }
    if (length >= (std::uint64_t{1} << 32)) {
        throw InputError("K must be below 2^32");
    }
}

bool window_raw_branch(std::uint64_t length, std::uint64_t y_count, unsigned x_alphabet) {
    return length == 1 || ceil_log2(y_count) >= raw_bit_width(x_alphabet, length);
}

namespace {

void check_side(const SymbolSequence& y, const WindowConfig& cfg) {
    cfg.validate();
    if (y.alphabet_size() != cfg.y_alphabet) {
        throw InputError("side information alphabet is " + std::to_string(y.alphabet_size()) +
                         ", expected " + std::to_string(cfg.y_alphabet));
    }
    if (y.size() != cfg.length) {
        throw InputError("length mismatch: |Y| = " + std::to_string(y.size()) + ", K = " +
                         std::to_string(cfg.length));
    }
}

}  // namespace

WindowEncoding encode_window(const SymbolSequence& x, const SymbolSequence& y,
                             const WindowConfig& cfg) {
    check_side(y, cfg);
    if (x.alphabet_size() != cfg.x_alphabet) {
        throw InputError("source alphabet is " + std::to_string(x.alphabet_size()) +
                         ", expected " + std::to_string(cfg.x_alphabet));
    }
    if (x.size() != y.size()) {
        throw InputError("length mismatch: |X| = " + std::to_string(x.size()) +
                         ", |Y| = " + std::to_string(y.size()));
    }

    WindowEncoding enc;
    Bitstream& out = enc.code;
    const auto xs = x.symbols();
    const std::size_t K = cfg.length;
    write_raw_phrase(out, xs.first(cfg.window), cfg.x_alphabet);
    enc.header_bits = out.bit_length();

    const WindowMatcher matcher(xs, y.symbols(), cfg.y_alphabet, cfg.window);
    for (std::size_t u = cfg.window; u < K;) {
        const WindowMatch m = matcher.query(u, K);
        const std::uint64_t before = out.bit_length();
        WindowPhraseTrace t;
        t.start = u + 1;
        t.length = m.length;
        t.y_count = m.y_count;
        g_encode(out, m.length);
        if (window_raw_branch(m.length, m.y_count, cfg.x_alphabet)) {
            t.branch = WindowBranch::raw;
            write_raw_phrase(out, xs.subspan(u, m.length), cfg.x_alphabet);
        } else {
            t.branch = WindowBranch::position;
            out.write_bits(m.rank - 1, ceil_log2(m.y_count));
        }
        t.emitted_bits = out.bit_length() - before;
        enc.trace.push_back(t);
        u += m.length;
    }
    return enc;
}

SymbolSequence decode_window(const Bitstream& code, const SymbolSequence& y,
                             const WindowConfig& cfg, std::vector<WindowPhraseTrace>* trace) {
    check_side(y, cfg);
    const std::size_t K = cfg.length;
    std::vector<Symbol> x;
    x.reserve(K);
    BitReader in(code);
    read_raw_phrase(in, cfg.x_alphabet, cfg.window, x);

    const WindowYIndex index(y.symbols(), cfg.window);
    while (x.size() < K) {
        const std::size_t u = x.size();
        const std::uint64_t before = in.position();
        const std::uint64_t l = g_decode(in);
        if (l > K - u) {
            throw CorruptStream("phrase at " + std::to_string(u + 1) + ": length " +
                                std::to_string(l) + " runs past K");
        }
        WindowPhraseTrace t;
        t.start = u + 1;
        t.length = l;
        if (l == 1) {
            // c only matters for the trace here: the branch is raw regardless.
            t.y_count = index.enumerate(u, 1).count;
            t.branch = WindowBranch::raw;
            read_raw_phrase(in, cfg.x_alphabet, 1, x);
        } else {
            const std::uint64_t c = index.enumerate(u, l).count;
            t.y_count = c;
            if (window_raw_branch(l, c, cfg.x_alphabet)) {
                t.branch = WindowBranch::raw;
                read_raw_phrase(in, cfg.x_alphabet, l, x);
            } else {
                t.branch = WindowBranch::position;
                const std::uint64_t rank = in.read_bits(ceil_log2(c)) + 1;
                if (rank > c) {
                    throw CorruptStream("phrase at " + std::to_string(u + 1) + ": rank " +
                                        std::to_string(rank) + " exceeds " + std::to_string(c) +
                                        " Y-matches");
                }
                const std::uint64_t offset = index.enumerate(u, l, 0, rank).selected_offset;
                for (std::uint64_t j = 0; j < l; ++j) {
                    x.push_back(x[u + j - offset]);
                }
            }
        }
        t.emitted_bits = in.position() - before;
        if (trace) {
            trace->push_back(t);
        }
    }
    if (!in.at_end()) {
        throw CorruptStream("trailing bits after the last phrase");
    }
    return SymbolSequence(cfg.x_alphabet, std::move(x));
}

}  // namespace sidelz
