#include "qsclab/bytes.hpp"

#include <stdexcept>

namespace qsclab::bytes {

std::string to_hex(const Bytes& data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

Bytes from_hex(const std::string& text) {
    if (text.size() % 2 != 0) throw std::invalid_argument("from_hex: odd length");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("from_hex: bad digit");
    };
    Bytes out(text.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>((nibble(text[2 * i]) << 4) | nibble(text[2 * i + 1]));
    return out;
}

void wipe(Bytes& data) {
    volatile std::uint8_t* p = data.data();
    for (std::size_t i = 0; i < data.size(); ++i) p[i] = 0;
}

Bytes cat(const std::vector<Bytes>& parts) {
    Bytes out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

void put_u32(Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

std::uint32_t get_u32(const Bytes& data, std::size_t offset) {
    if (offset + 4 > data.size()) throw std::out_of_range("get_u32: truncated");
    return static_cast<std::uint32_t>(data[offset]) |
           (static_cast<std::uint32_t>(data[offset + 1]) << 8) |
           (static_cast<std::uint32_t>(data[offset + 2]) << 16) |
           (static_cast<std::uint32_t>(data[offset + 3]) << 24);
}

Bytes pack_sections(const std::vector<Bytes>& sections) {
    Bytes out;
    put_u32(out, static_cast<std::uint32_t>(sections.size()));
    for (const auto& s : sections) {
        put_u32(out, static_cast<std::uint32_t>(s.size()));
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

std::optional<std::vector<Bytes>> unpack_sections(const Bytes& data) {
    if (data.size() < 4) return std::nullopt;
    const std::uint32_t count = get_u32(data, 0);
    if (count > 1u << 20) return std::nullopt;
    std::vector<Bytes> out;
    std::size_t pos = 4;
    for (std::uint32_t i = 0; i < count; ++i) {
        if (pos + 4 > data.size()) return std::nullopt;
        const std::uint32_t len = get_u32(data, pos);
        pos += 4;
        if (pos + len > data.size()) return std::nullopt;
        out.emplace_back(data.begin() + pos, data.begin() + pos + len);
        pos += len;
    }
    if (pos != data.size()) return std::nullopt;
    return out;
}

} // namespace qsclab::bytes
