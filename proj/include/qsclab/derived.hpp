#pragma once

#include <functional>

#include "qsclab/hybrid.hpp"

namespace qsclab::scheme {

/// Signature triple carved out of a signcryption scheme: the signing key is
/// (sdk_S, vek_R), the verification key (vek_S, sdk_R).
struct DerivedQs {
    QscScheme scheme;
    QscKeypair sender;
    QscKeypair receiver;

    HybridCiphertext sign(const sim::DensityState& rho, Rng& rng) const;
    sim::DensityState verify(const HybridCiphertext& ct) const;
};

DerivedQs derive_qs(const QscScheme& scheme, Rng& rng);

/// Public-key encryption triple from the same scheme with the roles swapped:
/// the encryption key is (sdk_S, vek_R), the decryption key (vek_S, sdk_R).
struct DerivedPkqe {
    QscScheme scheme;
    QscKeypair sender;    // part of the public encryption key
    QscKeypair receiver;  // its sdk is the secret decryption half

    HybridCiphertext enc(const sim::DensityState& rho, Rng& rng) const;
    sim::DensityState dec(const HybridCiphertext& ct) const;
    std::pair<Bytes, sim::KrausChannel> enc_parts(Rng& rng) const;
    sim::KrausChannel dec_channel(const Bytes& classical) const;
};

DerivedPkqe derive_pkqe(const QscScheme& scheme, Rng& rng);

/// Symmetric-key scheme from two keypairs of the signcryption scheme; the
/// ciphertext carries both public keys and decryption checks them.
struct SharpKey {
    QscKeypair a;
    QscKeypair b;
};

class SharpSkqe {
public:
    explicit SharpSkqe(QscParams params) : base_(params) {}

    const QscScheme& base() const { return base_; }
    SharpKey keygen(Rng& rng) const;
    HybridCiphertext enc(const SharpKey& k, const sim::DensityState& rho, Rng& rng) const;
    sim::DensityState dec(const SharpKey& k, const HybridCiphertext& ct) const;
    std::pair<Bytes, sim::KrausChannel> enc_parts(const SharpKey& k, Rng& rng) const;
    sim::KrausChannel dec_channel(const SharpKey& k, const Bytes& classical) const;

private:
    QscScheme base_;
};

/// Classical byte-level symmetric AE interface used by the generic hybrid.
struct ClassicalSke {
    std::function<Bytes(const Bytes& message, Rng& rng)> enc;
    std::function<std::optional<Bytes>(const Bytes& ct)> dec;
};

/// Key-encapsulation hybrids: encrypt a fresh trap-code key with the
/// classical scheme, the payload with the trap code.
class SkqeHybrid {
public:
    SkqeHybrid(ClassicalSke ske, const auth::TrapAuthScheme& qauth)
        : ske_(std::move(ske)), qauth_(qauth) {}

    HybridCiphertext enc(const sim::DensityState& rho, Rng& rng) const;
    sim::DensityState dec(const HybridCiphertext& ct) const;
    std::pair<Bytes, sim::KrausChannel> enc_parts(Rng& rng) const;
    sim::KrausChannel dec_channel(const Bytes& classical) const;

private:
    std::optional<auth::TrapAuthKey> decap(const Bytes& classical) const;
    ClassicalSke ske_;
    auth::TrapAuthScheme qauth_;
};

class PkqeHybrid {
public:
    PkqeHybrid(std::string group, const auth::TrapAuthScheme& qauth)
        : group_(std::move(group)), qauth_(qauth) {}

    crypto::PkeKeypair keygen(Rng& rng) const;
    HybridCiphertext enc(const mpz_class& y, const sim::DensityState& rho, Rng& rng) const;
    sim::DensityState dec(const mpz_class& x, const HybridCiphertext& ct) const;

private:
    std::string group_;
    auth::TrapAuthScheme qauth_;
};

/// The sharp transform of the hybrid signcryption scheme, byte-compatible
/// with SkqeHybrid over the sharp classical scheme.
ClassicalSke sharp_classical_ske(const crypto::SharpSkeKey& k);

} // namespace qsclab::scheme
