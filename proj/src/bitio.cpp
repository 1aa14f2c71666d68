#include "sidelz/bitio.hpp"

#include <algorithm>

#include "sidelz/errors.hpp"

namespace sidelz {

Bitstream Bitstream::parse(std::vector<std::uint8_t> bytes, std::uint64_t bit_length) {
    if (bytes.size() != (bit_length + 7) / 8) {
        throw CorruptStream("bitstream: byte count " + std::to_string(bytes.size()) +
                            " does not match bit_length " + std::to_string(bit_length));
    }
    const unsigned tail = static_cast<unsigned>(bit_length % 8);
    if (tail != 0) {
        const std::uint8_t pad_mask = static_cast<std::uint8_t>(0xFFu >> tail);
        if ((bytes.back() & pad_mask) != 0) {
            throw CorruptStream("bitstream: nonzero padding bits");
        }
    }
    Bitstream s;
    s.bytes_ = std::move(bytes);
    s.bit_length_ = bit_length;
    return s;
}

Bitstream Bitstream::from_string(std::string_view bits) {
    Bitstream s;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw DomainError("bitstream: invalid bit character");
        }
        s.write_bit(c == '1');
    }
    return s;
}

void Bitstream::write_bit(bool bit) {
    const unsigned offset = static_cast<unsigned>(bit_length_ % 8);
    if (offset == 0) {
        bytes_.push_back(0);
    }
    if (bit) {
        bytes_.back() |= static_cast<std::uint8_t>(0x80u >> offset);
    }
    ++bit_length_;
}

void Bitstream::write_bits(std::uint64_t value, unsigned width) {
    if (width > 64) {
        throw DomainError("write_bits: width " + std::to_string(width) + " exceeds 64");
    }
    if (width < 64 && (value >> width) != 0) {
        throw DomainError("write_bits: value " + std::to_string(value) + " does not fit in " +
                          std::to_string(width) + " bits");
    }
    while (width > 0) {
        const unsigned offset = static_cast<unsigned>(bit_length_ % 8);
        if (offset == 0) {
            bytes_.push_back(0);
        }
        const unsigned room = 8 - offset;
        const unsigned take = std::min(room, width);
        const auto chunk = static_cast<unsigned>((value >> (width - take)) & ((1u << take) - 1u));
        bytes_.back() |= static_cast<std::uint8_t>(chunk << (room - take));
        bit_length_ += take;
        width -= take;
    }
}

void Bitstream::append(const Bitstream& other) {
    if (bit_length_ % 8 == 0) {
        bytes_.insert(bytes_.end(), other.bytes_.begin(), other.bytes_.end());
        bit_length_ += other.bit_length_;
        return;
    }
    const std::uint64_t full = other.bit_length_ / 8;
    for (std::uint64_t i = 0; i < full; ++i) {
        write_bits(other.bytes_[i], 8);
    }
    const unsigned tail = static_cast<unsigned>(other.bit_length_ % 8);
    if (tail != 0) {
        write_bits(static_cast<std::uint64_t>(other.bytes_[full] >> (8 - tail)), tail);
    }
}

bool Bitstream::bit(std::uint64_t index) const {
    if (index >= bit_length_) {
        throw TruncatedStream("bitstream: bit index out of range");
    }
    return ((bytes_[index / 8] >> (7 - index % 8)) & 1u) != 0;
}

std::string Bitstream::to_string() const {
    std::string out;
    out.reserve(bit_length_);
    for (std::uint64_t i = 0; i < bit_length_; ++i) {
        out.push_back(bit(i) ? '1' : '0');
    }
    return out;
}

std::uint64_t BitReader::read_bits(unsigned width) {
    if (width > 64) {
        throw DomainError("read_bits: width " + std::to_string(width) + " exceeds 64");
    }
    if (width > remaining()) {
        throw TruncatedStream("read_bits: need " + std::to_string(width) + " bits, " +
                              std::to_string(remaining()) + " remain");
    }
    const auto& bytes = stream_->bytes();
    std::uint64_t value = 0;
    while (width > 0) {
        const unsigned offset = static_cast<unsigned>(pos_ % 8);
        const unsigned room = 8 - offset;
        const unsigned take = std::min(room, width);
        const unsigned byte = bytes[pos_ / 8];
        const unsigned chunk = (byte >> (room - take)) & ((1u << take) - 1u);
        value = (value << take) | chunk;
        pos_ += take;
        width -= take;
    }
    return value;
}

bool BitReader::read_bit() {
    return read_bits(1) != 0;
}

}  // namespace sidelz
