#include <doctest.h>

#include <random>

#include "sidelz/container.hpp"
#include "sidelz/errors.hpp"

using namespace sidelz;

namespace {

SymbolSequence seq(std::vector<Symbol> v, unsigned a = 2) { return SymbolSequence(a, std::move(v)); }

ContainerHeader fixed_header(std::uint8_t alg, std::uint32_t L, std::uint32_t N, std::uint32_t m = 0) {
    ContainerHeader h;
    h.algorithm = alg;
    h.phrase_length = L;
    h.phrase_count = N;
    h.m = m;
    return h;
}

}  // namespace

TEST_CASE("fixture payload lengths") {
    const auto y = seq({1, 0, 1, 0});
    const Container c = compress(seq({0, 1, 0, 1}), y, fixed_header(1, 2, 2));
    CHECK(c.payload.bit_length() == 4);

    ContainerHeader w;
    w.algorithm = 4;
    w.window = 4;
    w.length = 8;
    const auto z = seq(std::vector<Symbol>(8, 0));
    CHECK(compress(z, z, w).payload.bit_length() == 11);
}

TEST_CASE("serialize and parse round trip for every algorithm") {
    std::mt19937_64 rng(3);
    std::vector<Symbol> xv(120);
    std::vector<Symbol> yv(120);
    for (std::size_t i = 0; i < 120; ++i) {
        yv[i] = static_cast<Symbol>(rng() % 3);
        xv[i] = rng() % 3 == 0 ? static_cast<Symbol>(rng() % 256) : yv[i];
    }
    const auto x = seq(xv, 256);
    const auto y = seq(yv, 3);
    std::vector<ContainerHeader> headers{fixed_header(1, 4, 30), fixed_header(2, 4, 30, 3),
                                         fixed_header(3, 6, 20)};
    ContainerHeader w;
    w.algorithm = 4;
    w.window = 16;
    w.length = 120;
    headers.push_back(w);
    for (ContainerHeader h : headers) {
        h.x_alphabet = 256;
        h.y_alphabet = 3;
        const Container c = compress(x, y, h);
        const auto bytes = serialize_container(c, y.symbols());
        CHECK(bytes[8] == 0);  // |A| = 256 stored as 0
        CHECK(peek_container_header(bytes) == h);
        const Container back = parse_container(bytes, y.symbols());
        CHECK(back.header == h);
        CHECK(back.payload == c.payload);
        CHECK(decompress(back, y) == x);
    }
}

TEST_CASE("damage is detected") {
    const auto x = seq({0, 1, 1, 0, 1, 1, 0, 1});
    const auto y = seq({0, 1, 1, 0, 0, 1, 1, 0});
    const Container c = compress(x, y, fixed_header(3, 2, 4));
    const auto bytes = serialize_container(c, y.symbols());

    const auto other = seq({0, 1, 1, 0, 0, 1, 1, 1});
    CHECK_THROWS_AS(parse_container(bytes, other.symbols()), ChecksumMismatch);

    for (std::size_t cut = 0; cut < bytes.size(); ++cut) {
        const std::vector<std::uint8_t> head(bytes.begin(), bytes.begin() + static_cast<long>(cut));
        CHECK_THROWS_AS(parse_container(head, y.symbols()), CorruptStream);
    }
    auto longer = bytes;
    longer.push_back(0);
    CHECK_THROWS_AS(parse_container(longer, y.symbols()), CorruptStream);

    auto flipped = bytes;
    flipped[flipped.size() - 5] ^= 0x01;
    CHECK_THROWS_AS(parse_container(flipped, y.symbols()), ChecksumMismatch);

    auto magic = bytes;
    magic[0] = 'X';
    CHECK_THROWS_AS(parse_container(magic, y.symbols()), CorruptStream);
}

TEST_CASE("side digest depends on length and content") {
    const std::vector<Symbol> a{0, 1};
    const std::vector<Symbol> b{0, 1, 0};
    const std::vector<Symbol> c{1, 1};
    CHECK(side_digest(a) != side_digest(b));
    CHECK(side_digest(a) != side_digest(c));
    CHECK(side_digest(a) == side_digest(std::vector<Symbol>{0, 1}));
}

TEST_CASE("bad headers") {
    ContainerHeader h = fixed_header(7, 2, 2);
    CHECK_THROWS_AS(compress(seq({0, 1, 0, 1}), seq({0, 1, 0, 1}), h), InputError);
    h = fixed_header(1, 2, 2);
    h.x_alphabet = 1;
    Container c{h, Bitstream{}};
    CHECK_THROWS_AS(serialize_container(c, std::vector<Symbol>{0, 1, 0, 1}), InputError);
}
