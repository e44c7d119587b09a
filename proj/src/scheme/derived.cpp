#include "qsclab/derived.hpp"

namespace qsclab::scheme {

using sim::DensityState;
using sim::KrausChannel;

HybridCiphertext DerivedQs::sign(const sim::DensityState& rho, Rng& rng) const {
    return scheme.sigenc(sender, receiver.vek(), rho, rng);
}

sim::DensityState DerivedQs::verify(const HybridCiphertext& ct) const {
    return scheme.verdec(sender.vek(), receiver, ct);
}

DerivedQs derive_qs(const QscScheme& scheme, Rng& rng) {
    return DerivedQs{scheme, scheme.keygen(rng), scheme.keygen(rng)};
}

HybridCiphertext DerivedPkqe::enc(const sim::DensityState& rho, Rng& rng) const {
    return scheme.sigenc(sender, receiver.vek(), rho, rng);
}

sim::DensityState DerivedPkqe::dec(const HybridCiphertext& ct) const {
    return scheme.verdec(sender.vek(), receiver, ct);
}

std::pair<Bytes, KrausChannel> DerivedPkqe::enc_parts(Rng& rng) const {
    return scheme.sigenc_parts(sender, receiver.vek(), rng);
}

KrausChannel DerivedPkqe::dec_channel(const Bytes& classical) const {
    return scheme.verdec_channel(sender.vek(), receiver, classical);
}

DerivedPkqe derive_pkqe(const QscScheme& scheme, Rng& rng) {
    return DerivedPkqe{scheme, scheme.keygen(rng), scheme.keygen(rng)};
}

SharpKey SharpSkqe::keygen(Rng& rng) const {
    SharpKey k{base_.keygen(rng), base_.keygen(rng)};
    return k;
}

std::pair<Bytes, KrausChannel> SharpSkqe::enc_parts(const SharpKey& k, Rng& rng) const {
    auto [inner, chan] = base_.sigenc_parts(k.a, k.b.vek(), rng);
    Bytes classical = bytes::pack_sections(
        {inner, k.a.vek().serialize(), k.b.vek().serialize()});
    return {std::move(classical), std::move(chan)};
}

HybridCiphertext SharpSkqe::enc(const SharpKey& k, const sim::DensityState& rho, Rng& rng) const {
    auto [classical, chan] = enc_parts(k, rng);
    return HybridCiphertext{std::move(classical),
                            chan.apply(rho.with_layout(base_.message_layout()))};
}

KrausChannel SharpSkqe::dec_channel(const SharpKey& k, const Bytes& classical) const {
    auto sections = bytes::unpack_sections(classical);
    if (!sections || sections->size() != 3 || (*sections)[1] != k.a.vek().serialize() ||
        (*sections)[2] != k.b.vek().serialize())
        return KrausChannel::reject_all(base_.cipher_layout(), base_.message_layout());
    return base_.verdec_channel(k.a.vek(), k.b, (*sections)[0]);
}

sim::DensityState SharpSkqe::dec(const SharpKey& k, const HybridCiphertext& ct) const {
    return dec_channel(k, ct.classical).apply(ct.quantum.with_layout(base_.cipher_layout()));
}

std::optional<auth::TrapAuthKey> SkqeHybrid::decap(const Bytes& classical) const {
    auto k_ser = ske_.dec(classical);
    if (!k_ser) return std::nullopt;
    try {
        auto key = auth::TrapAuthKey::deserialize(*k_ser);
        if (key.m != qauth_.message_qubits() || key.t != qauth_.trap_qubits())
            return std::nullopt;
        return key;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::pair<Bytes, KrausChannel> SkqeHybrid::enc_parts(Rng& rng) const {
    const auth::TrapAuthKey k = qauth_.keygen(rng);
    Bytes k_ser = k.serialize();
    Bytes classical = ske_.enc(k_ser, rng);
    bytes::wipe(k_ser);
    return {std::move(classical), qauth_.enc_channel(k)};
}

HybridCiphertext SkqeHybrid::enc(const sim::DensityState& rho, Rng& rng) const {
    auto [classical, chan] = enc_parts(rng);
    return HybridCiphertext{std::move(classical),
                            chan.apply(rho.with_layout(qauth_.message_layout()))};
}

KrausChannel SkqeHybrid::dec_channel(const Bytes& classical) const {
    auto key = decap(classical);
    if (!key) return KrausChannel::reject_all(qauth_.cipher_layout(), qauth_.message_layout());
    return qauth_.dec_channel(*key);
}

sim::DensityState SkqeHybrid::dec(const HybridCiphertext& ct) const {
    return dec_channel(ct.classical).apply(ct.quantum.with_layout(qauth_.cipher_layout()));
}

crypto::PkeKeypair PkqeHybrid::keygen(Rng& rng) const {
    return crypto::pke_keygen(crypto::group_by_name(group_), rng);
}

HybridCiphertext PkqeHybrid::enc(const mpz_class& y, const sim::DensityState& rho,
                                 Rng& rng) const {
    const auto& cfg = crypto::default_hash();
    const auto& grp = crypto::group_by_name(group_);
    const auth::TrapAuthKey k = qauth_.keygen(rng);
    Bytes k_ser = k.serialize();
    Bytes classical = crypto::pke_enc(cfg, grp, y, k_ser, rng).to_bytes();
    bytes::wipe(k_ser);
    return HybridCiphertext{std::move(classical),
                            qauth_.enc_channel(k).apply(rho.with_layout(qauth_.message_layout()))};
}

sim::DensityState PkqeHybrid::dec(const mpz_class& x, const HybridCiphertext& ct) const {
    const auto& cfg = crypto::default_hash();
    const auto& grp = crypto::group_by_name(group_);
    auto reject = [&]() {
        return KrausChannel::reject_all(qauth_.cipher_layout(), qauth_.message_layout())
            .apply(ct.quantum.with_layout(qauth_.cipher_layout()));
    };
    auto pke_ct = crypto::PkeCiphertext::from_bytes(ct.classical);
    if (!pke_ct) return reject();
    auto k_ser = crypto::pke_dec(cfg, grp, x, *pke_ct);
    if (!k_ser) return reject();
    try {
        auto key = auth::TrapAuthKey::deserialize(*k_ser);
        return qauth_.dec_channel(key).apply(ct.quantum.with_layout(qauth_.cipher_layout()));
    } catch (const std::exception&) {
        return reject();
    }
}

ClassicalSke sharp_classical_ske(const crypto::SharpSkeKey& k) {
    ClassicalSke ske;
    ske.enc = [k](const Bytes& m, Rng& rng) { return crypto::sharp_ske_enc(k, m, rng); };
    ske.dec = [k](const Bytes& ct) { return crypto::sharp_ske_dec(k, ct); };
    return ske;
}

} // namespace qsclab::scheme
