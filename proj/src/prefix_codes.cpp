#include "sidelz/prefix_codes.hpp"

#include <string>

#include "sidelz/errors.hpp"

namespace sidelz {

HkParameter::HkParameter(unsigned k_) : k(k_) {
    if (k > max_k) {
        throw DomainError("h_k: k = " + std::to_string(k) + " exceeds " + std::to_string(max_k));
    }
}

namespace {

void check_hk_domain(HkParameter k, std::uint64_t n) {
    if (n == 0 || n > k.top()) {
        throw DomainError("h_k: n = " + std::to_string(n) + " outside [1 : 2^" +
                          std::to_string(k.k) + "]");
    }
}

}  // namespace

std::uint64_t hk_length(HkParameter k, std::uint64_t n) {
    check_hk_domain(k, n);
    if (n == k.top()) {
        return k.prefix_width();
    }
    return k.prefix_width() + floor_log2(n);
}

void hk_encode(Bitstream& out, HkParameter k, std::uint64_t n) {
    check_hk_domain(k, n);
    if (n == k.top()) {
        out.write_bits(k.k, k.prefix_width());
        return;
    }
    const unsigned e = floor_log2(n);
    out.write_bits(e, k.prefix_width());
    out.write_bits(n & ((std::uint64_t{1} << e) - 1), e);
}

Bitstream hk_encode(HkParameter k, std::uint64_t n) {
    Bitstream out;
    hk_encode(out, k, n);
    return out;
}

std::uint64_t hk_decode(BitReader& in, HkParameter k) {
    const auto e = static_cast<unsigned>(in.read_bits(k.prefix_width()));
    if (e > k.k) {
        throw CorruptStream("h_k: exponent " + std::to_string(e) + " exceeds k = " +
                            std::to_string(k.k));
    }
    if (e == k.k) {
        return k.top();
    }
    return (std::uint64_t{1} << e) | in.read_bits(e);
}

std::uint64_t g_length(std::uint64_t n) {
    if (n == 0) {
        throw DomainError("g: zero is outside the domain");
    }
    const unsigned bits = floor_log2(n) + 1;
    return 2 * floor_log2(bits) + bits;
}

void g_encode(Bitstream& out, std::uint64_t n) {
    if (n == 0) {
        throw DomainError("g: zero is outside the domain");
    }
    const unsigned bits = floor_log2(n) + 1;
    const unsigned zeros = floor_log2(bits);
    out.write_bits(0, zeros);
    out.write_bits(bits, zeros + 1);
    out.write_bits(n ^ (std::uint64_t{1} << (bits - 1)), bits - 1);
}

Bitstream g_encode(std::uint64_t n) {
    Bitstream out;
    g_encode(out, n);
    return out;
}

std::uint64_t g_decode(BitReader& in) {
    unsigned zeros = 0;
    while (!in.read_bit()) {
        if (++zeros > 6) {
            throw CorruptStream("g: length prefix too long");
        }
    }
    const std::uint64_t bits = (std::uint64_t{1} << zeros) | in.read_bits(zeros);
    if (bits > 64) {
        throw CorruptStream("g: mantissa wider than 64 bits");
    }
    const auto mantissa_bits = static_cast<unsigned>(bits - 1);
    return (std::uint64_t{1} << mantissa_bits) | in.read_bits(mantissa_bits);
}

}  // namespace sidelz
