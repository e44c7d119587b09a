#pragma once

#include <map>

#include "qsclab/hybrid.hpp"

namespace qsclab::scheme {

inline constexpr std::size_t kMaxUserIdLen = 32;

/// Registered world: one keypair per identity plus the public lookup table.
class MultiUserWorld {
public:
    MultiUserWorld(const QscParams& base, const std::vector<std::string>& ids, Rng& rng);

    const std::vector<std::string>& ids() const { return ids_; }
    const crypto::ScVek& vek_of(const std::string& id) const;
    const QscKeypair& keypair_of(const std::string& id) const;  // secret side
    int id_index(const std::string& id) const;

    /// Dimension of the classical identity register (a power of two covering
    /// all (sender, receiver) pairs).
    int id_register_dim() const { return id_dim_; }
    int code_of(const std::string& sender, const std::string& receiver) const;

    const QscParams& base_params() const { return base_; }
    const auth::TrapAuthScheme& inner_auth() const { return inner_; }
    sim::RegisterLayout message_layout() const;
    sim::RegisterLayout cipher_layout() const;

private:
    QscParams base_;
    std::vector<std::string> ids_;
    std::map<std::string, QscKeypair> keys_;
    int id_dim_;
    auth::TrapAuthScheme inner_;
};

struct MuCiphertext {
    Bytes classical;
    sim::DensityState quantum;
};

struct MuVerdict {
    std::string sender;    // identity bound to the verification key used
    std::string receiver;  // identity bound to the decryption key used
    std::optional<sim::DensityState> plaintext;  // nullopt encodes the reject symbol
};

/// Signcrypt with the identity pair attached to the plaintext as a classical
/// basis register before inner authentication.
MuCiphertext mu_sigenc(const MultiUserWorld& world, const std::string& sender,
                       const std::string& receiver, const sim::DensityState& rho, Rng& rng);

/// Channel form: classical bytes plus the quantum map M -> C.
std::pair<Bytes, sim::KrausChannel> mu_sigenc_parts(const MultiUserWorld& world,
                                                    const std::string& sender,
                                                    const std::string& receiver, Rng& rng);

/// Verified decryption under (vek_sender, sdk_receiver); the measured ID pair
/// must match the keys used or the result is a reject.
MuVerdict mu_verdec(const MultiUserWorld& world, const std::string& sender,
                    const std::string& receiver, const MuCiphertext& ct, Rng& rng);

/// Channel form C -> M (+) |bot| with the identity check folded in.
sim::KrausChannel mu_verdec_channel(const MultiUserWorld& world, const std::string& sender,
                                    const std::string& receiver, const Bytes& classical);

} // namespace qsclab::scheme
