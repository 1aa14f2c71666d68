#include "sidelz/container.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <string>

#include "sidelz/errors.hpp"

namespace sidelz {

namespace {

constexpr std::array<std::uint8_t, 6> kMagic{'C', 'L', 'Z', 'S', 'I', '1'};

std::uint32_t crc_update(std::uint32_t crc, const std::uint8_t* data, std::size_t len) {
    // zlib takes uInt lengths; feed large buffers in chunks.
    while (len > 0) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(len, 1u << 30));
        crc = static_cast<std::uint32_t>(::crc32(crc, data, chunk));
        data += chunk;
        len -= chunk;
    }
    return crc;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) {
        out.push_back(static_cast<std::uint8_t>(v >> shift));
    }
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) {
        out.push_back(static_cast<std::uint8_t>(v >> shift));
    }
}

class ByteCursor {
public:
    explicit ByteCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint64_t take(std::size_t width) {
        if (bytes_.size() - pos_ < width) {
            throw CorruptStream("container truncated in the header");
        }
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < width; ++i) {
            v = (v << 8) | bytes_[pos_++];
        }
        return v;
    }
    std::size_t position() const noexcept { return pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::uint8_t alphabet_byte(unsigned a) {
    if (a < 2 || a > 256) {
        throw InputError("alphabet size must lie in [2, 256] for the container, got " +
                         std::to_string(a));
    }
    return static_cast<std::uint8_t>(a == 256 ? 0 : a);
}

unsigned alphabet_from_byte(std::uint8_t b) {
    if (b == 1) {
        throw CorruptStream("container alphabet size 1");
    }
    return b == 0 ? 256u : b;
}

struct ParsedHeader {
    ContainerHeader header;
    std::uint64_t bit_length = 0;
    std::size_t size = 0;  // bytes up to and including the bit length field
};

ParsedHeader read_header(std::span<const std::uint8_t> bytes) {
    ByteCursor cur(bytes);
    if (bytes.size() < kMagic.size() || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
        throw CorruptStream("bad container magic");
    }
    cur.take(kMagic.size());
    if (cur.take(1) != container_version) {
        throw CorruptStream("unsupported container version");
    }
    ParsedHeader p;
    ContainerHeader& h = p.header;
    h.algorithm = static_cast<std::uint8_t>(cur.take(1));
    h.x_alphabet = alphabet_from_byte(static_cast<std::uint8_t>(cur.take(1)));
    h.y_alphabet = alphabet_from_byte(static_cast<std::uint8_t>(cur.take(1)));
    switch (h.algorithm) {
    case 1:
    case 3:
        h.phrase_length = static_cast<std::uint32_t>(cur.take(4));
        h.phrase_count = static_cast<std::uint32_t>(cur.take(4));
        break;
    case 2:
        h.phrase_length = static_cast<std::uint32_t>(cur.take(4));
        h.phrase_count = static_cast<std::uint32_t>(cur.take(4));
        h.m = static_cast<std::uint32_t>(cur.take(4));
        break;
    case 4:
        h.window = static_cast<std::uint32_t>(cur.take(4));
        h.length = static_cast<std::uint32_t>(cur.take(4));
        break;
    default:
        throw CorruptStream("unknown algorithm id " + std::to_string(h.algorithm));
    }
    p.bit_length = cur.take(8);
    p.size = cur.position();
    return p;
}

}  // namespace

std::uint64_t ContainerHeader::symbol_count() const noexcept {
    if (algorithm == 4) {
        return length;
    }
    return std::uint64_t{phrase_length} * phrase_count;
}

FixedParseConfig ContainerHeader::fixed_config() const {
    if (algorithm < 1 || algorithm > 3) {
        throw InputError("not a fixed-parse container");
    }
    FixedParseConfig cfg;
    cfg.phrase_length = phrase_length;
    cfg.phrase_count = phrase_count;
    cfg.variant = static_cast<FixedVariant>(algorithm);
    cfg.m = algorithm == 2 ? m : cfg.m;
    cfg.x_alphabet = x_alphabet;
    cfg.y_alphabet = y_alphabet;
    return cfg;
}

WindowConfig ContainerHeader::window_config() const {
    if (algorithm != 4) {
        throw InputError("not a window container");
    }
    WindowConfig cfg;
    cfg.window = window;
    cfg.length = length;
    cfg.x_alphabet = x_alphabet;
    cfg.y_alphabet = y_alphabet;
    return cfg;
}

std::uint32_t side_digest(std::span<const Symbol> side) {
    std::vector<std::uint8_t> buf;
    put_u64(buf, side.size());
    std::uint32_t crc = crc_update(static_cast<std::uint32_t>(::crc32(0, nullptr, 0)), buf.data(),
                                   buf.size());
    buf.clear();
    buf.reserve(std::min<std::size_t>(side.size(), 1 << 16));
    for (std::size_t i = 0; i < side.size(); ++i) {
        buf.push_back(static_cast<std::uint8_t>(side[i]));
        if (buf.size() == buf.capacity()) {
            crc = crc_update(crc, buf.data(), buf.size());
            buf.clear();
        }
    }
    return crc_update(crc, buf.data(), buf.size());
}

std::vector<std::uint8_t> serialize_container(const Container& c, std::span<const Symbol> side) {
    const ContainerHeader& h = c.header;
    std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
    out.push_back(container_version);
    if (h.algorithm < 1 || h.algorithm > 4) {
        throw InputError("unknown algorithm id " + std::to_string(h.algorithm));
    }
    out.push_back(h.algorithm);
    out.push_back(alphabet_byte(h.x_alphabet));
    out.push_back(alphabet_byte(h.y_alphabet));
    if (h.algorithm == 4) {
        put_u32(out, h.window);
        put_u32(out, h.length);
    } else {
        put_u32(out, h.phrase_length);
        put_u32(out, h.phrase_count);
        if (h.algorithm == 2) {
            put_u32(out, h.m);
        }
    }
    put_u64(out, c.payload.bit_length());
    out.insert(out.end(), c.payload.bytes().begin(), c.payload.bytes().end());

    std::vector<std::uint8_t> digest;
    put_u32(digest, side_digest(side));
    std::uint32_t crc = crc_update(static_cast<std::uint32_t>(::crc32(0, nullptr, 0)), out.data(),
                                   out.size());
    crc = crc_update(crc, digest.data(), digest.size());
    put_u32(out, crc);
    return out;
}

ContainerHeader peek_container_header(std::span<const std::uint8_t> bytes) {
    return read_header(bytes).header;
}

Container parse_container(std::span<const std::uint8_t> bytes, std::span<const Symbol> side) {
    const ParsedHeader p = read_header(bytes);
    const std::uint64_t payload_bytes = p.bit_length / 8 + (p.bit_length % 8 != 0);
    if (p.bit_length > std::uint64_t{1} << 60 || bytes.size() != p.size + payload_bytes + 4) {
        throw CorruptStream("container size does not match its payload length (truncated?)");
    }
    const std::size_t body = p.size + static_cast<std::size_t>(payload_bytes);
    std::vector<std::uint8_t> digest;
    put_u32(digest, side_digest(side));
    std::uint32_t crc = crc_update(static_cast<std::uint32_t>(::crc32(0, nullptr, 0)),
                                   bytes.data(), body);
    crc = crc_update(crc, digest.data(), digest.size());
    ByteCursor stored(bytes.subspan(body));
    if (stored.take(4) != crc) {
        throw ChecksumMismatch("checksum mismatch: container, payload and side information disagree");
    }
    Container c;
    c.header = p.header;
    c.payload = Bitstream::parse({bytes.begin() + static_cast<std::ptrdiff_t>(p.size),
                                  bytes.begin() + static_cast<std::ptrdiff_t>(body)},
                                 p.bit_length);
    return c;
}

Container compress(const SymbolSequence& x, const SymbolSequence& y, ContainerHeader header) {
    Container c;
    c.header = header;
    if (header.algorithm == 4) {
        c.payload = encode_window(x, y, header.window_config()).code;
    } else {
        c.payload = encode_fixed(x, y, header.fixed_config()).code;
    }
    return c;
}

SymbolSequence decompress(const Container& c, const SymbolSequence& y) {
    if (c.header.algorithm == 4) {
        return decode_window(c.payload, y, c.header.window_config());
    }
    return decode_fixed(c.payload, y, c.header.fixed_config());
}

}  // namespace sidelz
