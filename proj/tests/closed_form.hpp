#pragma once

// Closed-form codeword lengths per phrase case, written from the length
// formula of h_k and each case's codeword layout.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "sidelz/fixed_lz.hpp"

namespace closed_form {

inline std::uint64_t ceil_log2_1p(std::uint64_t k) {
    return static_cast<std::uint64_t>(std::ceil(std::log2(1.0 + static_cast<double>(k))));
}

inline std::uint64_t floor_log2(std::uint64_t n) {
    return static_cast<std::uint64_t>(std::floor(std::log2(static_cast<double>(n))));
}

inline std::uint64_t closed_form_length(const sidelz::PhraseTrace& t,
                                        const sidelz::FixedParseConfig& cfg) {
    using sidelz::PhraseCase;
    const std::uint64_t k = cfg.k();
    const std::uint64_t m = cfg.m;
    switch (t.tag) {
    case PhraseCase::raw_first:
        return k;
    case PhraseCase::xy_match:
        return ceil_log2_1p(k) + floor_log2(t.n);
    case PhraseCase::escape_raw:  // no usable match
        return ceil_log2_1p(k) + k;
    case PhraseCase::flag0_match:
        return k < 64 && t.n == (std::uint64_t{1} << k) ? ceil_log2_1p(k) + 1
                                                        : ceil_log2_1p(k) + floor_log2(t.n) + 1;
    case PhraseCase::flag1_x_match:
        return ceil_log2_1p(m) + floor_log2(t.r) + 1;
    case PhraseCase::flag1_escape:
        return ceil_log2_1p(m) + k + 1;
    case PhraseCase::adaptive_match:
        return ceil_log2_1p(t.k_bar) + floor_log2(t.n);
    case PhraseCase::adaptive_escape:
        return ceil_log2_1p(t.k_bar) + k;
    }
    throw std::logic_error("unknown phrase case");
}

}  // namespace closed_form
