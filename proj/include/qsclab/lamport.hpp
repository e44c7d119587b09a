#pragma once

#include "qsclab/hash.hpp"
#include "qsclab/linalg.hpp"

namespace qsclab::crypto {

inline constexpr int kOtsBits = 256;

/// Lamport one-time pair: 256 x 2 secret 32-byte strings and their hashes.
struct OtsKeypair {
    Bytes sk;  // (i, b) -> 32 bytes at ((i << 1) | b) * 32
    Bytes vk;  // vk[i][b] = H(tag_leaf || sk[i][b])

    bool consistent(const HashConfig& cfg) const;
};

OtsKeypair ots_derive(const HashConfig& cfg, const Bytes& seed, std::uint32_t leaf_index);
Bytes ots_sign(const HashConfig& cfg, const OtsKeypair& kp, const Digest& msg_digest);
bool ots_verify(const HashConfig& cfg, const Bytes& vk, const Digest& msg_digest,
                const Bytes& sig);

struct LeafExhausted : std::runtime_error {
    LeafExhausted() : std::runtime_error("ds_sign: all one-time leaves consumed") {}
};

/// Stateful hash-based many-time signature: Lamport leaves under a Merkle
/// tree of the configured depth. One signer handle must be externally
/// serialized; verification is stateless.
class MerkleSigKeypair {
public:
    MerkleSigKeypair(const HashConfig& cfg, int depth, Rng& rng);
    /// Rebuild from a persisted seed and leaf counter.
    MerkleSigKeypair(const HashConfig& cfg, int depth, Bytes seed, std::uint32_t next_leaf);

    int depth() const { return depth_; }
    const Digest& root() const { return root_; }
    const Bytes& seed() const { return seed_; }
    std::uint32_t next_leaf() const { return next_leaf_; }
    std::uint32_t capacity() const { return 1u << depth_; }

    /// Consumes the next leaf; throws LeafExhausted past 2^depth signatures.
    Bytes sign(const Bytes& message);

private:
    const HashConfig* cfg_;
    int depth_;
    Bytes seed_;
    Digest root_{};
    std::vector<Digest> leaf_digests_;
    std::uint32_t next_leaf_ = 0;
};

MerkleSigKeypair ds_keygen(const HashConfig& cfg, int depth, Rng& rng);
Bytes ds_sign(MerkleSigKeypair& kp, const Bytes& message);
bool ds_verify(const HashConfig& cfg, const Digest& root, const Bytes& message,
               const Bytes& signature);

} // namespace qsclab::crypto
