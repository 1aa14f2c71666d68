#pragma once

#include <cstdint>

#include "sidelz/bitio.hpp"
#include "sidelz/symbols.hpp"

namespace sidelz {

// Parameter of the universal code h_k over [1 : 2^k].
//
// Codeword layout: the exponent e = floor(log2 n) (or e = k for n = 2^k) in
// prefix_width() = ceil(log2(1+k)) bits, followed, when e < k, by the low e
// bits of n. This gives
//     len(h_k(n)) = ceil(log2(1+k)) + floor(log2 n)   for n < 2^k
//     len(h_k(n)) = ceil(log2(1+k))                   for n = 2^k
// and the code is prefix-free. k = 0 is the degenerate code with the single
// empty codeword for n = 1.
//
// For k >= 64, 2^k does not fit in 64 bits; top() then returns UINT64_MAX as
// a stand-in for 2^k. Counts below 2^64 - 1 are encoded exactly.
struct HkParameter {
    static constexpr unsigned max_k = 1u << 16;

    // Throws DomainError for k > max_k.
    explicit HkParameter(unsigned k_);

    unsigned k;

    unsigned prefix_width() const noexcept { return ceil_log2(std::uint64_t{k} + 1); }
    std::uint64_t top() const noexcept { return k < 64 ? std::uint64_t{1} << k : ~std::uint64_t{0}; }
};

std::uint64_t hk_length(HkParameter k, std::uint64_t n);
void hk_encode(Bitstream& out, HkParameter k, std::uint64_t n);
Bitstream hk_encode(HkParameter k, std::uint64_t n);
std::uint64_t hk_decode(BitReader& in, HkParameter k);

// g: Elias-delta code over the positive integers.
std::uint64_t g_length(std::uint64_t n);
void g_encode(Bitstream& out, std::uint64_t n);
Bitstream g_encode(std::uint64_t n);
std::uint64_t g_decode(BitReader& in);

}  // namespace sidelz
