#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qsclab {

using Bytes = std::vector<std::uint8_t>;

namespace bytes {

std::string to_hex(const Bytes& data);
Bytes from_hex(const std::string& text);

/// Overwrite with zeros (one-time key hygiene).
void wipe(Bytes& data);

Bytes cat(const std::vector<Bytes>& parts);

/// Length-prefixed framing: each section as u32-LE length + payload.
Bytes pack_sections(const std::vector<Bytes>& sections);
/// nullopt on any framing violation (truncation, trailing garbage).
std::optional<std::vector<Bytes>> unpack_sections(const Bytes& data);

void put_u32(Bytes& out, std::uint32_t v);
std::uint32_t get_u32(const Bytes& data, std::size_t offset);

} // namespace bytes
} // namespace qsclab
