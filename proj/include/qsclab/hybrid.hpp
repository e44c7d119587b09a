#pragma once

#include "qsclab/signcrypt.hpp"
#include "qsclab/trap_auth.hpp"

namespace qsclab::scheme {

struct QscParams {
    int m = 1;  // message qubits
    int t = 1;  // trap qubits
    crypto::ScParams classical;
};

/// Signcryption keypair: the classical sdk/vek pair plus scheme parameters.
/// The sdk side carries the vek as well (and the vek carries n).
struct QscKeypair {
    crypto::SCKeys keys;
    QscParams params;

    const crypto::ScVek& vek() const { return keys.vek; }
};

/// Pair of a classical signcryption of the one-time key and the quantum
/// register carrying the authenticated payload. Detached (product-state)
/// form; inside games the quantum part lives in a simulation context and
/// only the classical bytes travel through this struct.
struct HybridCiphertext {
    Bytes classical;
    sim::DensityState quantum;
};

/// Hybrid quantum signcryption: classical signcryption encapsulates a fresh
/// trap-code key, the trap code carries the quantum payload.
class QscScheme {
public:
    explicit QscScheme(QscParams params);

    const QscParams& params() const { return params_; }
    const auth::TrapAuthScheme& qauth() const { return qauth_; }
    sim::RegisterLayout message_layout() const { return qauth_.message_layout(); }
    sim::RegisterLayout cipher_layout() const { return qauth_.cipher_layout(); }

    QscKeypair keygen(Rng& rng) const;

    HybridCiphertext sigenc(const QscKeypair& sender, const crypto::ScVek& receiver_vek,
                            const sim::DensityState& rho, Rng& rng) const;

    /// Reject-extended output; classical failure puts all weight on |bot>.
    sim::DensityState verdec(const crypto::ScVek& sender_vek, const QscKeypair& receiver,
                             const HybridCiphertext& ct) const;

    /// Channel forms for joint-state (in-context) use: the classical bytes are
    /// produced eagerly, the returned channel is the quantum half M -> C.
    std::pair<Bytes, sim::KrausChannel> sigenc_parts(const QscKeypair& sender,
                                                     const crypto::ScVek& receiver_vek,
                                                     Rng& rng) const;
    /// C -> M (+) |bot>. A bad classical part yields the all-reject channel.
    sim::KrausChannel verdec_channel(const crypto::ScVek& sender_vek,
                                     const QscKeypair& receiver,
                                     const Bytes& classical) const;

    /// Decapsulate only (classical layer): the one-time key, if valid.
    std::optional<auth::TrapAuthKey> decap(const crypto::ScVek& sender_vek,
                                           const QscKeypair& receiver,
                                           const Bytes& classical) const;

private:
    QscParams params_;
    auth::TrapAuthScheme qauth_;
};

} // namespace qsclab::scheme
