#include "qsclab/hybrid.hpp"

#include <stdexcept>

namespace qsclab::scheme {

using sim::DensityState;
using sim::KrausChannel;

namespace {
auth::TrapAuthScheme make_auth(const QscParams& p) {
    // t = 0 is the deliberately broken variant used by game falsifiers.
    return p.t == 0 ? auth::TrapAuthScheme::insecure_no_traps(p.m)
                    : auth::TrapAuthScheme(p.m, p.t);
}
} // namespace

QscScheme::QscScheme(QscParams params) : params_(params), qauth_(make_auth(params)) {}

QscKeypair QscScheme::keygen(Rng& rng) const {
    return QscKeypair{crypto::sc_keygen(params_.classical, rng), params_};
}

std::pair<Bytes, KrausChannel> QscScheme::sigenc_parts(const QscKeypair& sender,
                                                       const crypto::ScVek& receiver_vek,
                                                       Rng& rng) const {
    const auth::TrapAuthKey k = qauth_.keygen(rng);
    Bytes k_ser = k.serialize();
    const Bytes classical = crypto::sc_sigenc(sender.keys.sdk, receiver_vek, k_ser, rng);
    bytes::wipe(k_ser);  // one-time key leaves scope here
    return {classical, qauth_.enc_channel(k)};
}

HybridCiphertext QscScheme::sigenc(const QscKeypair& sender, const crypto::ScVek& receiver_vek,
                                   const sim::DensityState& rho, Rng& rng) const {
    auto [classical, enc] = sigenc_parts(sender, receiver_vek, rng);
    return HybridCiphertext{std::move(classical), enc.apply(rho.with_layout(message_layout()))};
}

std::optional<auth::TrapAuthKey> QscScheme::decap(const crypto::ScVek& sender_vek,
                                                  const QscKeypair& receiver,
                                                  const Bytes& classical) const {
    auto k_ser = crypto::sc_verdec(sender_vek, receiver.keys.sdk, classical);
    if (!k_ser) return std::nullopt;
    try {
        auto key = auth::TrapAuthKey::deserialize(*k_ser);
        if (key.m != params_.m || key.t != params_.t) return std::nullopt;
        return key;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

KrausChannel QscScheme::verdec_channel(const crypto::ScVek& sender_vek,
                                       const QscKeypair& receiver,
                                       const Bytes& classical) const {
    auto key = decap(sender_vek, receiver, classical);
    if (!key) return KrausChannel::reject_all(cipher_layout(), message_layout());
    return qauth_.dec_channel(*key);
}

DensityState QscScheme::verdec(const crypto::ScVek& sender_vek, const QscKeypair& receiver,
                               const HybridCiphertext& ct) const {
    return verdec_channel(sender_vek, receiver, ct.classical)
        .apply(ct.quantum.with_layout(cipher_layout()));
}

} // namespace qsclab::scheme
