#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sidelz {

// Append-only MSB-first bit buffer. Bytes are kept zero-padded to a byte
// boundary at all times, so bytes() is always a valid finalized image.
class Bitstream {
public:
    Bitstream() = default;

    // Inverse of finalize(): requires bytes.size() == ceil(bit_length / 8)
    // and zero padding bits. Throws CorruptStream otherwise.
    static Bitstream parse(std::vector<std::uint8_t> bytes, std::uint64_t bit_length);

    // Test helper: "0110" -> 4-bit stream. Any other character is rejected.
    static Bitstream from_string(std::string_view bits);

    // Appends the low `width` bits of value, most significant first.
    // Throws DomainError if width > 64 or value >= 2^width.
    void write_bits(std::uint64_t value, unsigned width);
    void write_bit(bool bit);
    void append(const Bitstream& other);

    std::uint64_t bit_length() const noexcept { return bit_length_; }
    bool empty() const noexcept { return bit_length_ == 0; }
    bool bit(std::uint64_t index) const;

    const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }
    std::vector<std::uint8_t> finalize() const { return bytes_; }

    std::string to_string() const;

    friend bool operator==(const Bitstream&, const Bitstream&) = default;

private:
    std::vector<std::uint8_t> bytes_;
    std::uint64_t bit_length_ = 0;
};

// Sequential cursor over a Bitstream. The stream must outlive the reader.
class BitReader {
public:
    explicit BitReader(const Bitstream& stream) noexcept : stream_(&stream) {}

    // Throws TruncatedStream when fewer than `width` bits remain, DomainError if width > 64.
    std::uint64_t read_bits(unsigned width);
    bool read_bit();

    std::uint64_t position() const noexcept { return pos_; }
    std::uint64_t remaining() const noexcept { return stream_->bit_length() - pos_; }
    bool at_end() const noexcept { return remaining() == 0; }

private:
    const Bitstream* stream_;
    std::uint64_t pos_ = 0;
};

}  // namespace sidelz
