#include "qsclab/hash.hpp"

#include <stdexcept>

#include <openssl/evp.h>

namespace qsclab::crypto {

void HashConfig::validate() const {
    const std::uint8_t tags[5] = {tag_kdf, tag_mac, tag_leaf, tag_node, tag_challenge};
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            if (tags[i] == tags[j])
                throw std::invalid_argument("HashConfig: domain tags must be pairwise distinct");
    if (name != "sha256") throw std::invalid_argument("HashConfig: unsupported hash " + name);
}

const HashConfig& default_hash() {
    static const HashConfig cfg = [] {
        HashConfig c;
        c.validate();
        return c;
    }();
    return cfg;
}

Digest sha256(const Bytes& data) {
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != kDigestLen)
        throw std::runtime_error("sha256: EVP_Digest failed");
    return out;
}

Digest tagged_hash(std::uint8_t tag, const std::vector<Bytes>& parts) {
    Bytes buf;
    buf.push_back(tag);
    for (const auto& p : parts) buf.insert(buf.end(), p.begin(), p.end());
    return sha256(buf);
}

Bytes digest_bytes(const Digest& d) { return Bytes(d.begin(), d.end()); }

Bytes kdf_stream(const HashConfig& cfg, const Bytes& key, std::size_t out_len) {
    Bytes out;
    out.reserve(out_len + kDigestLen);
    std::uint32_t counter = 0;
    while (out.size() < out_len) {
        Bytes ctr;
        bytes::put_u32(ctr, counter++);
        const Digest block = tagged_hash(cfg.tag_kdf, {key, ctr});
        out.insert(out.end(), block.begin(), block.end());
    }
    out.resize(out_len);
    return out;
}

Digest mac(const HashConfig& cfg, const Bytes& key, const Bytes& data) {
    return tagged_hash(cfg.tag_mac, {key, data});
}

} // namespace qsclab::crypto
