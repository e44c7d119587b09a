#pragma once

#include <memory>

#include "qsclab/lamport.hpp"
#include "qsclab/pke.hpp"

namespace qsclab::crypto {

/// Public verify/encrypt half of a signcryption keypair.
struct ScVek {
    Digest ds_root{};
    Bytes pke_y;          // fixed-width group element
    std::string group;
    std::uint32_t n = 0;  // security parameter tag

    Bytes serialize() const;
    static ScVek deserialize(const Bytes& data);
    std::string fingerprint() const;
    bool operator==(const ScVek&) const = default;
};

/// Secret sign/decrypt half; carries its own vek.
struct ScSdk {
    std::shared_ptr<MerkleSigKeypair> signer;  // shared mutable leaf state
    mpz_class pke_x;
    ScVek vek;

    /// Persistence: seed, depth and leaf counter of the signer plus the
    /// decryption exponent and the attached vek.
    Bytes serialize() const;
    static ScSdk deserialize(const Bytes& data);
};

struct SCKeys {
    ScSdk sdk;
    ScVek vek;
};

struct ScParams {
    std::string group = "test64";
    int ds_depth = 6;
    std::uint32_t n = 64;
};

SCKeys sc_keygen(const ScParams& params, Rng& rng);

/// Encrypt-then-sign: flat sections (group element, body, MAC, signature),
/// with the signature covering e || vk_S || ek_R.
Bytes sc_sigenc(const ScSdk& sdk_s, const ScVek& vek_r, const Bytes& message, Rng& rng);
std::optional<Bytes> sc_verdec(const ScVek& vek_s, const ScSdk& sdk_r, const Bytes& ct);

/// Symmetric-key scheme built from two signcryption keypairs; the ciphertext
/// carries both public keys and decryption insists they match.
struct SharpSkeKey {
    SCKeys a;  // sender-role pair
    SCKeys b;  // receiver-role pair
};

SharpSkeKey sharp_ske_keygen(const ScParams& params, Rng& rng);
Bytes sharp_ske_enc(const SharpSkeKey& k, const Bytes& message, Rng& rng);
std::optional<Bytes> sharp_ske_dec(const SharpSkeKey& k, const Bytes& ct);

} // namespace qsclab::crypto
