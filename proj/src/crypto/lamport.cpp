#include "qsclab/lamport.hpp"

#include <stdexcept>

namespace qsclab::crypto {

namespace {

Bytes u32_bytes(std::uint32_t v) {
    Bytes b;
    bytes::put_u32(b, v);
    return b;
}

Digest leaf_digest_of_vk(const HashConfig& cfg, const Bytes& vk) {
    return tagged_hash(cfg.tag_leaf, {vk});
}

Digest node_hash(const HashConfig& cfg, const Digest& l, const Digest& r) {
    return tagged_hash(cfg.tag_node, {digest_bytes(l), digest_bytes(r)});
}

Digest message_digest(const HashConfig& cfg, const Bytes& message) {
    return tagged_hash(cfg.tag_challenge, {message});
}

} // namespace

bool OtsKeypair::consistent(const HashConfig& cfg) const {
    if (sk.size() != 2 * kOtsBits * kDigestLen || vk.size() != sk.size()) return false;
    for (int i = 0; i < 2 * kOtsBits; ++i) {
        Bytes chunk(sk.begin() + i * kDigestLen, sk.begin() + (i + 1) * kDigestLen);
        const Digest h = tagged_hash(cfg.tag_leaf, {chunk});
        if (!std::equal(h.begin(), h.end(), vk.begin() + i * kDigestLen)) return false;
    }
    return true;
}

OtsKeypair ots_derive(const HashConfig& cfg, const Bytes& seed, std::uint32_t leaf_index) {
    OtsKeypair kp;
    kp.sk.resize(2 * kOtsBits * kDigestLen);
    kp.vk.resize(2 * kOtsBits * kDigestLen);
    for (int i = 0; i < kOtsBits; ++i) {
        for (int b = 0; b < 2; ++b) {
            const int slot = (i << 1) | b;
            const Digest secret = tagged_hash(
                cfg.tag_kdf, {seed, u32_bytes(leaf_index), u32_bytes(static_cast<std::uint32_t>(slot))});
            std::copy(secret.begin(), secret.end(), kp.sk.begin() + slot * kDigestLen);
            const Digest pub = tagged_hash(cfg.tag_leaf, {digest_bytes(secret)});
            std::copy(pub.begin(), pub.end(), kp.vk.begin() + slot * kDigestLen);
        }
    }
    return kp;
}

Bytes ots_sign(const HashConfig&, const OtsKeypair& kp, const Digest& msg_digest) {
    Bytes sig(kOtsBits * kDigestLen);
    for (int i = 0; i < kOtsBits; ++i) {
        const int bit = (msg_digest[i / 8] >> (7 - i % 8)) & 1;
        const int slot = (i << 1) | bit;
        std::copy(kp.sk.begin() + slot * kDigestLen, kp.sk.begin() + (slot + 1) * kDigestLen,
                  sig.begin() + i * kDigestLen);
    }
    return sig;
}

bool ots_verify(const HashConfig& cfg, const Bytes& vk, const Digest& msg_digest,
                const Bytes& sig) {
    if (vk.size() != 2 * kOtsBits * kDigestLen || sig.size() != kOtsBits * kDigestLen)
        return false;
    for (int i = 0; i < kOtsBits; ++i) {
        const int bit = (msg_digest[i / 8] >> (7 - i % 8)) & 1;
        const int slot = (i << 1) | bit;
        Bytes chunk(sig.begin() + i * kDigestLen, sig.begin() + (i + 1) * kDigestLen);
        const Digest h = tagged_hash(cfg.tag_leaf, {chunk});
        if (!std::equal(h.begin(), h.end(), vk.begin() + slot * kDigestLen)) return false;
    }
    return true;
}

MerkleSigKeypair::MerkleSigKeypair(const HashConfig& cfg, int depth, Rng& rng)
    : MerkleSigKeypair(cfg, depth, rng.bytes(kDigestLen), 0) {}

MerkleSigKeypair::MerkleSigKeypair(const HashConfig& cfg, int depth, Bytes seed,
                                   std::uint32_t next_leaf)
    : cfg_(&cfg), depth_(depth), seed_(std::move(seed)), next_leaf_(next_leaf) {
    if (depth < 0 || depth > 16)
        throw std::invalid_argument("MerkleSigKeypair: depth must be in 0..16");
    if (seed_.size() != kDigestLen)
        throw std::invalid_argument("MerkleSigKeypair: seed must be 32 bytes");
    const std::uint32_t leaves = 1u << depth_;
    leaf_digests_.resize(leaves);
    for (std::uint32_t i = 0; i < leaves; ++i) {
        const OtsKeypair kp = ots_derive(cfg, seed_, i);
        leaf_digests_[i] = leaf_digest_of_vk(cfg, kp.vk);
    }
    std::vector<Digest> level = leaf_digests_;
    while (level.size() > 1) {
        std::vector<Digest> up(level.size() / 2);
        for (std::size_t i = 0; i < up.size(); ++i)
            up[i] = node_hash(cfg, level[2 * i], level[2 * i + 1]);
        level = std::move(up);
    }
    root_ = level[0];
}

Bytes MerkleSigKeypair::sign(const Bytes& message) {
    if (next_leaf_ >= capacity()) throw LeafExhausted();
    const std::uint32_t leaf = next_leaf_++;
    const OtsKeypair kp = ots_derive(*cfg_, seed_, leaf);
    const Bytes ots_sig = ots_sign(*cfg_, kp, message_digest(*cfg_, message));
    Bytes path;
    std::vector<Digest> level = leaf_digests_;
    std::uint32_t idx = leaf;
    for (int d = 0; d < depth_; ++d) {
        const Digest& sibling = level[idx ^ 1];
        path.insert(path.end(), sibling.begin(), sibling.end());
        std::vector<Digest> up(level.size() / 2);
        for (std::size_t i = 0; i < up.size(); ++i)
            up[i] = node_hash(*cfg_, level[2 * i], level[2 * i + 1]);
        level = std::move(up);
        idx >>= 1;
    }
    return bytes::pack_sections({u32_bytes(leaf), ots_sig, kp.vk, path});
}

MerkleSigKeypair ds_keygen(const HashConfig& cfg, int depth, Rng& rng) {
    return MerkleSigKeypair(cfg, depth, rng);
}

Bytes ds_sign(MerkleSigKeypair& kp, const Bytes& message) { return kp.sign(message); }

bool ds_verify(const HashConfig& cfg, const Digest& root, const Bytes& message,
               const Bytes& signature) {
    auto sections = bytes::unpack_sections(signature);
    if (!sections || sections->size() != 4) return false;
    const Bytes& leaf_bytes = (*sections)[0];
    const Bytes& ots_sig = (*sections)[1];
    const Bytes& leaf_vk = (*sections)[2];
    const Bytes& path = (*sections)[3];
    if (leaf_bytes.size() != 4 || path.size() % kDigestLen != 0) return false;
    if (!ots_verify(cfg, leaf_vk, message_digest(cfg, message), ots_sig)) return false;
    std::uint32_t idx = bytes::get_u32(leaf_bytes, 0);
    Digest node = leaf_digest_of_vk(cfg, leaf_vk);
    const std::size_t depth = path.size() / kDigestLen;
    if (idx >= (1u << depth)) return false;
    for (std::size_t d = 0; d < depth; ++d) {
        Digest sibling;
        std::copy(path.begin() + d * kDigestLen, path.begin() + (d + 1) * kDigestLen,
                  sibling.begin());
        node = (idx & 1) ? node_hash(cfg, sibling, node) : node_hash(cfg, node, sibling);
        idx >>= 1;
    }
    return node == root;
}

} // namespace qsclab::crypto
