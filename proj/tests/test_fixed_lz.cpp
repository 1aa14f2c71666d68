#include <doctest.h>

#include <random>

#include "sidelz/errors.hpp"
#include "sidelz/fixed_lz.hpp"
#include "sidelz/prefix_codes.hpp"
#include "closed_form.hpp"

using namespace sidelz;

namespace {

SymbolSequence seq(std::vector<Symbol> v, unsigned a = 2) { return SymbolSequence(a, std::move(v)); }

FixedParseConfig config(std::uint64_t L, std::uint64_t N, FixedVariant v, unsigned m = 3,
                        unsigned a = 2, unsigned b = 2) {
    FixedParseConfig c;
    c.phrase_length = L;
    c.phrase_count = N;
    c.variant = v;
    c.m = m;
    c.x_alphabet = a;
    c.y_alphabet = b;
    return c;
}

}  // namespace

TEST_CASE("variant 1: hand-traced encodings") {
    const auto cfg = config(2, 2, FixedVariant::plain);
    const auto a = encode_fixed(seq({0, 1, 0, 1}), seq({1, 0, 1, 0}), cfg);
    CHECK(a.code.to_string() == "0100");
    CHECK(a.trace[1].tag == PhraseCase::xy_match);
    CHECK(decode_fixed(a.code, seq({1, 0, 1, 0}), cfg) == seq({0, 1, 0, 1}));

    const auto b = encode_fixed(seq({0, 0, 1, 1}), seq({0, 0, 0, 0}), cfg);
    CHECK(b.code.to_string() == "001011");
    CHECK(b.trace[1].tag == PhraseCase::escape_raw);
    CHECK(decode_fixed(b.code, seq({0, 0, 0, 0}), cfg) == seq({0, 0, 1, 1}));
}

TEST_CASE("variant 3: adaptive parameter") {
    const auto cfg = config(2, 2, FixedVariant::adaptive);
    const auto a = encode_fixed(seq({0, 0, 1, 1}), seq({0, 0, 0, 0}), cfg);
    CHECK(a.code.bit_length() == 6);
    CHECK(a.trace[1].k_bar == 2);

    const auto b = encode_fixed(seq({0, 0, 1, 1}), seq({0, 1, 0, 0}), cfg);
    CHECK(b.code.to_string() == "0011");
    CHECK(b.trace[1].p == 0);
    CHECK(b.trace[1].k_bar == 0);
    CHECK(b.trace[1].tag == PhraseCase::adaptive_escape);
    CHECK(decode_fixed(b.code, seq({0, 1, 0, 0}), cfg) == seq({0, 0, 1, 1}));
}

TEST_CASE("n_i = 2^k: variant 1 escapes, variant 2 sends the count") {
    // L = 1, k = 1: the second Y-match is the first (X,Y)-match, so n = 2 = 2^k.
    const auto x = seq({1, 0, 1});
    const auto y = seq({0, 0, 0});
    const auto c1 = config(1, 3, FixedVariant::plain);
    const auto c2 = config(1, 3, FixedVariant::flagged, 1);
    const auto e1 = encode_fixed(x, y, c1);
    const auto e2 = encode_fixed(x, y, c2);
    REQUIRE(e1.trace[2].n == 2);
    CHECK(e1.trace[2].emitted_bits == 1 + 1);  // ceil(log2 2) + k
    CHECK(e2.trace[2].tag == PhraseCase::flag0_match);
    CHECK(e2.trace[2].emitted_bits == 1 + 1);  // ceil(log2 2) + 1
    CHECK(decode_fixed(e1.code, y, c1) == x);
    CHECK(decode_fixed(e2.code, y, c2) == x);
}

TEST_CASE("variant 2: X-only fallback and escape") {
    // Y never repeats in step with X, but X repeats at offset 2.
    const auto x = seq({0, 1, 0, 1, 0, 1});
    const auto y = seq({0, 0, 1, 1, 0, 1});
    const auto cfg = config(2, 3, FixedVariant::flagged, 2);
    const auto e = encode_fixed(x, y, cfg);
    CHECK(e.trace[1].tag == PhraseCase::flag1_x_match);
    CHECK(e.trace[1].r == 2);
    CHECK(e.trace[1].emitted_bits == 1 + 2 + 1);
    CHECK(decode_fixed(e.code, y, cfg) == x);

    const auto cfg1 = config(2, 3, FixedVariant::flagged, 1);
    const auto e1 = encode_fixed(x, y, cfg1);
    CHECK(e1.trace[1].tag == PhraseCase::flag1_escape);
    CHECK(e1.trace[1].emitted_bits == 1 + 1 + 2);
    CHECK(decode_fixed(e1.code, y, cfg1) == x);
}

TEST_CASE("non-binary source alphabet uses exact raw widths") {
    std::mt19937_64 rng(1);
    std::vector<Symbol> xv(60);
    std::vector<Symbol> yv(60);
    for (std::size_t i = 0; i < 60; ++i) {
        xv[i] = static_cast<Symbol>(rng() % 3);
        yv[i] = static_cast<Symbol>(rng() % 5);
    }
    for (auto v : {FixedVariant::plain, FixedVariant::flagged, FixedVariant::adaptive}) {
        const auto cfg = config(5, 12, v, 2, 3, 5);
        CHECK(cfg.k() == 8);  // 3^5 = 243 <= 256
        const auto e = encode_fixed(seq(xv, 3), seq(yv, 5), cfg);
        CHECK(e.trace[0].emitted_bits == 8);
        CHECK(decode_fixed(e.code, seq(yv, 5), cfg) == seq(xv, 3));
    }
}

TEST_CASE("round trip, closed-form lengths and per-phrase dominance on random inputs") {
    std::mt19937_64 rng(9);
    for (int round = 0; round < 300; ++round) {
        const std::uint64_t L = 1 + rng() % 6;
        const std::uint64_t N = 1 + rng() % 60;
        std::vector<Symbol> xv(L * N);
        std::vector<Symbol> yv(L * N);
        const unsigned stay = rng() % 10;
        for (std::size_t i = 0; i < xv.size(); ++i) {
            const bool keep = i > 0 && rng() % 10 < stay;
            yv[i] = keep ? yv[i - 1] : static_cast<Symbol>(rng() & 1);
            xv[i] = rng() % 4 == 0 ? static_cast<Symbol>(rng() & 1) : yv[i];
        }
        const auto x = seq(xv);
        const auto y = seq(yv);
        std::vector<std::vector<PhraseTrace>> traces;
        for (auto v : {FixedVariant::plain, FixedVariant::flagged, FixedVariant::adaptive}) {
            const auto cfg = config(L, N, v, 1 + rng() % 4);
            const auto e = encode_fixed(x, y, cfg);
            REQUIRE(decode_fixed(e.code, y, cfg) == x);
            std::uint64_t total = 0;
            for (const auto& t : e.trace) {
                REQUIRE(t.emitted_bits == closed_form::closed_form_length(t, cfg));
                total += t.emitted_bits;
            }
            REQUIRE(total == e.code.bit_length());
            traces.push_back(e.trace);
        }
        for (std::size_t i = 0; i < N; ++i) {
            REQUIRE(traces[2][i].emitted_bits <= traces[0][i].emitted_bits);
        }
    }
}

TEST_CASE("phrase_lengths aggregates by case") {
    const auto cfg = config(2, 2, FixedVariant::plain);
    const auto e = encode_fixed(seq({0, 0, 1, 1}), seq({0, 0, 0, 0}), cfg);
    const auto table = phrase_lengths(e.trace);
    CHECK(table.at(PhraseCase::raw_first).bits == 2);
    CHECK(table.at(PhraseCase::escape_raw).bits == 4);
    CHECK(table.at(PhraseCase::escape_raw).phrases == 1);
}

TEST_CASE("input and stream errors") {
    const auto cfg = config(2, 2, FixedVariant::plain);
    CHECK_THROWS_AS(encode_fixed(seq({0, 1, 0}), seq({1, 0, 1, 0}), cfg), InputError);
    CHECK_THROWS_AS(encode_fixed(seq({0, 1, 0, 1}), seq({1, 0, 1, 0}, 3), cfg), InputError);
    CHECK_THROWS_AS(decode_fixed(Bitstream::from_string("010"), seq({1, 0, 1, 0}), cfg),
                    TruncatedStream);
    // n = 2 but only one Y-match exists.
    CHECK_THROWS_AS(decode_fixed(Bitstream::from_string("01010"), seq({1, 0, 1, 0}), cfg),
                    CorruptStream);
    CHECK_THROWS_AS(decode_fixed(Bitstream::from_string("01001"), seq({1, 0, 1, 0}), cfg),
                    CorruptStream);
    CHECK_THROWS_AS(config(0, 2, FixedVariant::plain).validate(), InputError);
    CHECK_THROWS_AS(config(70000, 2, FixedVariant::plain).validate(), InputError);
    CHECK_THROWS_AS(config(2, 2, FixedVariant::flagged, 0).validate(), InputError);
}
