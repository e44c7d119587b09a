#include "qsclab/signcrypt.hpp"

#include <stdexcept>

namespace qsclab::crypto {

Bytes ScVek::serialize() const {
    Bytes nb;
    bytes::put_u32(nb, n);
    return bytes::pack_sections({digest_bytes(ds_root), pke_y,
                                 Bytes(group.begin(), group.end()), nb});
}

ScVek ScVek::deserialize(const Bytes& data) {
    auto sections = bytes::unpack_sections(data);
    if (!sections || sections->size() != 4)
        throw std::invalid_argument("ScVek: malformed serialization");
    const auto& s = *sections;
    if (s[0].size() != kDigestLen || s[3].size() != 4)
        throw std::invalid_argument("ScVek: malformed fields");
    ScVek vek;
    std::copy(s[0].begin(), s[0].end(), vek.ds_root.begin());
    vek.pke_y = s[1];
    vek.group.assign(s[2].begin(), s[2].end());
    vek.n = bytes::get_u32(s[3], 0);
    (void)group_by_name(vek.group);
    if (vek.pke_y.size() != group_by_name(vek.group).element_bytes)
        throw std::invalid_argument("ScVek: group element width mismatch");
    return vek;
}

std::string ScVek::fingerprint() const {
    const Digest d = sha256(serialize());
    return bytes::to_hex(Bytes(d.begin(), d.begin() + 8));
}

Bytes ScSdk::serialize() const {
    Bytes depth, leaf;
    bytes::put_u32(depth, static_cast<std::uint32_t>(signer->depth()));
    bytes::put_u32(leaf, signer->next_leaf());
    const auto& grp = group_by_name(vek.group);
    return bytes::pack_sections(
        {signer->seed(), depth, leaf, element_bytes(grp, pke_x), vek.serialize()});
}

ScSdk ScSdk::deserialize(const Bytes& data) {
    auto sections = bytes::unpack_sections(data);
    if (!sections || sections->size() != 5)
        throw std::invalid_argument("ScSdk: malformed serialization");
    const auto& s = *sections;
    if (s[1].size() != 4 || s[2].size() != 4)
        throw std::invalid_argument("ScSdk: malformed fields");
    ScSdk sdk;
    sdk.vek = ScVek::deserialize(s[4]);
    const auto& grp = group_by_name(sdk.vek.group);
    sdk.pke_x = element_from_bytes(grp, s[3]);
    sdk.signer = std::make_shared<MerkleSigKeypair>(
        default_hash(), static_cast<int>(bytes::get_u32(s[1], 0)), s[0],
        bytes::get_u32(s[2], 0));
    if (sdk.signer->root() != sdk.vek.ds_root)
        throw std::invalid_argument("ScSdk: signer does not match the attached vek");
    return sdk;
}

SCKeys sc_keygen(const ScParams& params, Rng& rng) {
    const auto& cfg = default_hash();
    const auto& grp = group_by_name(params.group);
    SCKeys keys;
    keys.sdk.signer = std::make_shared<MerkleSigKeypair>(cfg, params.ds_depth, rng);
    auto pke = pke_keygen(grp, rng);
    keys.sdk.pke_x = pke.x;
    keys.vek.ds_root = keys.sdk.signer->root();
    keys.vek.pke_y = element_bytes(grp, pke.y);
    keys.vek.group = params.group;
    keys.vek.n = params.n;
    keys.sdk.vek = keys.vek;
    return keys;
}

Bytes sc_sigenc(const ScSdk& sdk_s, const ScVek& vek_r, const Bytes& message, Rng& rng) {
    const auto& cfg = default_hash();
    const auto& grp = group_by_name(vek_r.group);
    const mpz_class y = element_from_bytes(grp, vek_r.pke_y);
    const PkeCiphertext e = pke_enc(cfg, grp, y, message, rng);
    // Bind the key pair into the signed payload.
    const Bytes signed_payload =
        bytes::cat({e.to_bytes(), sdk_s.vek.serialize(), vek_r.pke_y});
    const Bytes sig = sdk_s.signer->sign(signed_payload);
    return bytes::pack_sections({e.u, e.body, e.mac, sig});
}

std::optional<Bytes> sc_verdec(const ScVek& vek_s, const ScSdk& sdk_r, const Bytes& ct) {
    const auto& cfg = default_hash();
    auto sections = bytes::unpack_sections(ct);
    if (!sections || sections->size() != 4) return std::nullopt;
    PkeCiphertext e{(*sections)[0], (*sections)[1], (*sections)[2]};
    const Bytes& sig = (*sections)[3];
    const Bytes signed_payload =
        bytes::cat({e.to_bytes(), vek_s.serialize(), sdk_r.vek.pke_y});
    if (!ds_verify(cfg, vek_s.ds_root, signed_payload, sig)) return std::nullopt;
    const auto& grp = group_by_name(sdk_r.vek.group);
    return pke_dec(cfg, grp, sdk_r.pke_x, e);
}

SharpSkeKey sharp_ske_keygen(const ScParams& params, Rng& rng) {
    SharpSkeKey k;
    k.a = sc_keygen(params, rng);
    k.b = sc_keygen(params, rng);
    return k;
}

Bytes sharp_ske_enc(const SharpSkeKey& k, const Bytes& message, Rng& rng) {
    const Bytes inner = sc_sigenc(k.a.sdk, k.b.vek, message, rng);
    return bytes::pack_sections({inner, k.a.vek.serialize(), k.b.vek.serialize()});
}

std::optional<Bytes> sharp_ske_dec(const SharpSkeKey& k, const Bytes& ct) {
    auto sections = bytes::unpack_sections(ct);
    if (!sections || sections->size() != 3) return std::nullopt;
    if ((*sections)[1] != k.a.vek.serialize() || (*sections)[2] != k.b.vek.serialize())
        return std::nullopt;
    return sc_verdec(k.a.vek, k.b.sdk, (*sections)[0]);
}

} // namespace qsclab::crypto
