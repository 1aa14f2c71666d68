#include "sidelz/fixed_lz.hpp"

#include <string>

#include "sidelz/errors.hpp"
#include "sidelz/matching.hpp"
#include "sidelz/prefix_codes.hpp"

namespace sidelz {

unsigned FixedParseConfig::k() const {
    return static_cast<unsigned>(raw_bit_width(x_alphabet, phrase_length));
}

void FixedParseConfig::validate() const {
    if (x_alphabet < 2 || y_alphabet < 2) {
        throw InputError("alphabet sizes must be at least 2");
    }
    if (phrase_length == 0) {
        throw InputError("phrase length L must be positive");
    }
    if (phrase_length > (std::uint64_t{1} << 32) ||
        raw_bit_width(x_alphabet, phrase_length) > HkParameter::max_k) {
        throw InputError("k = ceil(L log2|A|) exceeds " + std::to_string(HkParameter::max_k));
    }
    if (variant == FixedVariant::flagged && (m < 1 || m > HkParameter::max_k)) {
        throw InputError("m must lie in [1, " + std::to_string(HkParameter::max_k) + "], got " +
                         std::to_string(m));
    }
    if (variant != FixedVariant::plain && variant != FixedVariant::flagged &&
        variant != FixedVariant::adaptive) {
        throw InputError("unknown fixed-parse variant");
    }
}

std::string_view to_string(PhraseCase c) noexcept {
    switch (c) {
    case PhraseCase::raw_first: return "raw_first";
    case PhraseCase::xy_match: return "xy_match";
    case PhraseCase::escape_raw: return "escape_raw";
    case PhraseCase::flag0_match: return "flag0_match";
    case PhraseCase::flag1_x_match: return "flag1_x_match";
    case PhraseCase::flag1_escape: return "flag1_escape";
    case PhraseCase::adaptive_match: return "adaptive_match";
    case PhraseCase::adaptive_escape: return "adaptive_escape";
    }
    return "unknown";
}

namespace {

void check_inputs(const SymbolSequence& y, const FixedParseConfig& cfg) {
    cfg.validate();
    if (y.alphabet_size() != cfg.y_alphabet) {
        throw InputError("side information alphabet is " + std::to_string(y.alphabet_size()) +
                         ", expected " + std::to_string(cfg.y_alphabet));
    }
    if (y.size() != cfg.total_length()) {
        throw InputError("length mismatch: |Y| = " + std::to_string(y.size()) + ", N*L = " +
                         std::to_string(cfg.total_length()));
    }
}

// k_bar = ceil(log2(p + 1)) when p < 2^k - 1, else k.
unsigned adaptive_parameter(std::uint64_t p, unsigned k) {
    if (p < (std::uint64_t{1} << k) - 1) {
        return ceil_log2(p + 1);
    }
    return k;
}

void copy_from(std::vector<Symbol>& out, std::uint64_t offset, std::uint64_t len) {
    const std::size_t start = out.size();
    for (std::uint64_t j = 0; j < len; ++j) {
        out.push_back(out[start + j - offset]);
    }
}

}  // namespace

FixedEncoding encode_fixed(const SymbolSequence& x, const SymbolSequence& y,
                           const FixedParseConfig& cfg) {
    check_inputs(y, cfg);
    if (x.alphabet_size() != cfg.x_alphabet) {
        throw InputError("source alphabet is " + std::to_string(x.alphabet_size()) +
                         ", expected " + std::to_string(cfg.x_alphabet));
    }
    if (x.size() != y.size()) {
        throw InputError("length mismatch: |X| = " + std::to_string(x.size()) +
                         ", |Y| = " + std::to_string(y.size()));
    }

    FixedEncoding enc;
    if (cfg.phrase_count == 0) {
        return enc;
    }
    const std::size_t L = cfg.phrase_length;
    const HkParameter k(cfg.k());
    Bitstream& out = enc.code;
    const auto xs = x.symbols();
    enc.trace.reserve(cfg.phrase_count);

    auto raw = [&](std::size_t pos) { write_raw_phrase(out, xs.subspan(pos, L), cfg.x_alphabet); };

    PhraseTrace first;
    first.index = 1;
    raw(0);
    first.emitted_bits = out.bit_length();
    enc.trace.push_back(first);

    const FixedMatcher matcher(xs, y.symbols(), L);
    for (std::uint64_t i = 2; i <= cfg.phrase_count; ++i) {
        const std::size_t pos = (i - 1) * L;
        const RecurrenceResult rec = matcher.recurrence(pos);
        const std::uint64_t before = out.bit_length();
        PhraseTrace t;
        t.index = i;
        t.n = rec.n;
        t.p = rec.p;
        t.r = rec.r;

        switch (cfg.variant) {
        case FixedVariant::plain:
            if (rec.n >= 1 && rec.n < k.top()) {
                t.tag = PhraseCase::xy_match;
                hk_encode(out, k, rec.n);
            } else {
                t.tag = PhraseCase::escape_raw;
                hk_encode(out, k, k.top());
                raw(pos);
            }
            break;
        case FixedVariant::flagged: {
            const HkParameter m(cfg.m);
            if (rec.n >= 1 && rec.n <= k.top()) {
                t.tag = PhraseCase::flag0_match;
                out.write_bit(false);
                hk_encode(out, k, rec.n);
            } else if (rec.r >= 1 && rec.r < m.top()) {
                t.tag = PhraseCase::flag1_x_match;
                out.write_bit(true);
                hk_encode(out, m, rec.r);
            } else {
                t.tag = PhraseCase::flag1_escape;
                out.write_bit(true);
                hk_encode(out, m, m.top());
                raw(pos);
            }
            break;
        }
        case FixedVariant::adaptive: {
            const HkParameter kb(adaptive_parameter(rec.p, k.k));
            t.k_bar = kb.k;
            if (rec.n >= 1 && rec.n < kb.top()) {
                t.tag = PhraseCase::adaptive_match;
                hk_encode(out, kb, rec.n);
            } else {
                t.tag = PhraseCase::adaptive_escape;
                hk_encode(out, kb, kb.top());
                raw(pos);
            }
            break;
        }
        }
        t.emitted_bits = out.bit_length() - before;
        enc.trace.push_back(t);
    }
    return enc;
}

SymbolSequence decode_fixed(const Bitstream& code, const SymbolSequence& y,
                            const FixedParseConfig& cfg) {
    check_inputs(y, cfg);
    std::vector<Symbol> x;
    if (cfg.phrase_count == 0) {
        if (!code.empty()) {
            throw CorruptStream("trailing bits after the last phrase");
        }
        return SymbolSequence(cfg.x_alphabet, {});
    }
    const std::size_t L = cfg.phrase_length;
    const HkParameter k(cfg.k());
    x.reserve(cfg.total_length());
    BitReader in(code);

    read_raw_phrase(in, cfg.x_alphabet, L, x);
    const YPhraseIndex index(y.symbols(), L);

    auto copy_nth = [&](std::size_t pos, std::uint64_t n) {
        const auto offset = index.nth_y_match(pos, n);
        if (!offset) {
            throw CorruptStream("phrase " + std::to_string(pos / L + 1) + ": match count " +
                                std::to_string(n) + " exceeds the available Y-matches");
        }
        copy_from(x, *offset, L);
    };

    for (std::uint64_t i = 2; i <= cfg.phrase_count; ++i) {
        const std::size_t pos = (i - 1) * L;
        switch (cfg.variant) {
        case FixedVariant::plain: {
            const std::uint64_t n = hk_decode(in, k);
            if (n == k.top()) {
                read_raw_phrase(in, cfg.x_alphabet, L, x);
            } else {
                copy_nth(pos, n);
            }
            break;
        }
        case FixedVariant::flagged: {
            if (!in.read_bit()) {
                copy_nth(pos, hk_decode(in, k));
                break;
            }
            const HkParameter m(cfg.m);
            const std::uint64_t r = hk_decode(in, m);
            if (r == m.top()) {
                read_raw_phrase(in, cfg.x_alphabet, L, x);
            } else if (r > pos) {
                throw CorruptStream("phrase " + std::to_string(i) + ": X offset " +
                                    std::to_string(r) + " reaches before the start");
            } else {
                copy_from(x, r, L);
            }
            break;
        }
        case FixedVariant::adaptive: {
            const HkParameter kb(adaptive_parameter(index.y_match_count(pos), k.k));
            const std::uint64_t n = hk_decode(in, kb);
            if (n == kb.top()) {
                read_raw_phrase(in, cfg.x_alphabet, L, x);
            } else {
                copy_nth(pos, n);
            }
            break;
        }
        }
    }
    if (!in.at_end()) {
        throw CorruptStream("trailing bits after the last phrase");
    }
    return SymbolSequence(cfg.x_alphabet, std::move(x));
}

std::map<PhraseCase, CaseLengths> phrase_lengths(const std::vector<PhraseTrace>& trace) {
    std::map<PhraseCase, CaseLengths> out;
    for (const PhraseTrace& t : trace) {
        auto& e = out[t.tag];
        ++e.phrases;
        e.bits += t.emitted_bits;
    }
    return out;
}

}  // namespace sidelz
