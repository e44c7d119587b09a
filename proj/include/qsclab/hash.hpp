#pragma once

#include <array>

#include "qsclab/bytes.hpp"

namespace qsclab::crypto {

inline constexpr std::size_t kDigestLen = 32;
using Digest = std::array<std::uint8_t, kDigestLen>;

/// Fixed 256-bit hash plus one domain-separation tag byte per use.
struct HashConfig {
    std::string name = "sha256";
    std::uint8_t tag_kdf = 0x01;
    std::uint8_t tag_mac = 0x02;
    std::uint8_t tag_leaf = 0x03;
    std::uint8_t tag_node = 0x04;
    std::uint8_t tag_challenge = 0x05;

    void validate() const;  // throws unless all five tags are pairwise distinct
};

const HashConfig& default_hash();

Digest sha256(const Bytes& data);

/// H(tag || part_0 || part_1 || ...).
Digest tagged_hash(std::uint8_t tag, const std::vector<Bytes>& parts);

Bytes digest_bytes(const Digest& d);

/// Counter-mode expansion of key material into a keystream.
Bytes kdf_stream(const HashConfig& cfg, const Bytes& key, std::size_t out_len);

Digest mac(const HashConfig& cfg, const Bytes& key, const Bytes& data);

} // namespace qsclab::crypto
