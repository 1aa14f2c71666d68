#include "sidelz/symbols.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <iterator>
#include <string>

#include "sidelz/errors.hpp"

namespace sidelz {

namespace mp = boost::multiprecision;

SymbolSequence::SymbolSequence(unsigned alphabet_size, std::vector<Symbol> symbols)
    : alphabet_size_(alphabet_size), symbols_(std::move(symbols)) {
    if (alphabet_size_ < 2) {
        throw InputError("alphabet size must be at least 2, got " + std::to_string(alphabet_size_));
    }
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (symbols_[i] >= alphabet_size_) {
            throw InputError("alphabet violation: symbol " + std::to_string(symbols_[i]) +
                             " at index " + std::to_string(i) + " is not below " +
                             std::to_string(alphabet_size_));
        }
    }
}

SymbolSequence SymbolSequence::prefix(std::size_t length) const {
    if (length > symbols_.size()) {
        throw InputError("prefix longer than sequence");
    }
    SymbolSequence out;
    out.alphabet_size_ = alphabet_size_;
    out.symbols_.assign(symbols_.begin(), symbols_.begin() + static_cast<std::ptrdiff_t>(length));
    return out;
}

namespace {

bool is_power_of_two(unsigned a) { return std::has_single_bit(a); }

// alphabet^length if it fits below 2^63, else 0.
std::uint64_t small_power(unsigned alphabet, std::uint64_t length) {
    std::uint64_t p = 1;
    for (std::uint64_t i = 0; i < length; ++i) {
        if (p > (std::uint64_t{1} << 63) / alphabet) {
            return 0;
        }
        p *= alphabet;
    }
    return p;
}

}  // namespace

std::uint64_t raw_bit_width(unsigned alphabet, std::uint64_t length) {
    if (alphabet < 2) {
        throw InputError("alphabet size must be at least 2");
    }
    if (is_power_of_two(alphabet)) {
        return length * floor_log2(alphabet);
    }
    if (const std::uint64_t p = small_power(alphabet, length); p != 0) {
        return ceil_log2(p);
    }
    const mp::cpp_int p = mp::pow(mp::cpp_int(alphabet), static_cast<unsigned>(length));
    return static_cast<std::uint64_t>(mp::msb(mp::cpp_int(p - 1))) + 1;
}

void write_raw_phrase(Bitstream& out, std::span<const Symbol> phrase, unsigned alphabet) {
    const std::uint64_t width = raw_bit_width(alphabet, phrase.size());
    if (is_power_of_two(alphabet)) {
        const unsigned b = floor_log2(alphabet);
        for (Symbol s : phrase) {
            out.write_bits(s, b);
        }
        return;
    }
    if (width <= 64) {
        std::uint64_t rank = 0;
        for (Symbol s : phrase) {
            rank = rank * alphabet + s;
        }
        out.write_bits(rank, static_cast<unsigned>(width));
        return;
    }
    mp::cpp_int rank = 0;
    for (Symbol s : phrase) {
        rank *= alphabet;
        rank += s;
    }
    std::vector<std::uint8_t> bytes;
    mp::export_bits(rank, std::back_inserter(bytes), 8);
    // export_bits drops leading zero bytes; left-pad to the full width.
    const std::uint64_t used = rank == 0 ? 0 : static_cast<std::uint64_t>(mp::msb(rank)) + 1;
    for (std::uint64_t i = used; i < width; ++i) {
        out.write_bit(false);
    }
    if (used == 0) {
        return;
    }
    const unsigned lead = static_cast<unsigned>(used % 8 == 0 ? 8 : used % 8);
    out.write_bits(bytes[0], lead);
    for (std::size_t i = 1; i < bytes.size(); ++i) {
        out.write_bits(bytes[i], 8);
    }
}

void read_raw_phrase(BitReader& in, unsigned alphabet, std::size_t length, std::vector<Symbol>& out) {
    const std::uint64_t width = raw_bit_width(alphabet, length);
    if (is_power_of_two(alphabet)) {
        const unsigned b = floor_log2(alphabet);
        for (std::size_t i = 0; i < length; ++i) {
            out.push_back(static_cast<Symbol>(in.read_bits(b)));
        }
        return;
    }
    const std::size_t base = out.size();
    out.resize(base + length);
    if (width <= 64) {
        std::uint64_t rank = in.read_bits(static_cast<unsigned>(width));
        for (std::size_t i = length; i-- > 0;) {
            out[base + i] = static_cast<Symbol>(rank % alphabet);
            rank /= alphabet;
        }
        if (rank != 0) {
            throw CorruptStream("raw phrase rank out of range");
        }
        return;
    }
    if (in.remaining() < width) {
        throw TruncatedStream("raw phrase: need " + std::to_string(width) + " bits");
    }
    std::vector<std::uint8_t> bytes;
    bytes.reserve(width / 8 + 1);
    const unsigned lead = static_cast<unsigned>(width % 8);
    if (lead != 0) {
        bytes.push_back(static_cast<std::uint8_t>(in.read_bits(lead)));
    }
    for (std::uint64_t i = 0; i < width / 8; ++i) {
        bytes.push_back(static_cast<std::uint8_t>(in.read_bits(8)));
    }
    mp::cpp_int rank;
    mp::import_bits(rank, bytes.begin(), bytes.end(), 8);
    for (std::size_t i = length; i-- > 0;) {
        out[base + i] = static_cast<Symbol>(static_cast<unsigned>(rank % alphabet));
        rank /= alphabet;
    }
    if (rank != 0) {
        throw CorruptStream("raw phrase rank out of range");
    }
}

}  // namespace sidelz
