#include "qsclab/pke.hpp"

#include <stdexcept>

namespace qsclab::crypto {

namespace {

// RFC 3526 group 14 modulus (2048-bit safe prime).
const char* kModp2048Hex =
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
    "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
    "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05"
    "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB"
    "9ED529077096966D670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
    "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9DE2BCBF695581718"
    "3995497CEA956AE515D2261898FA051015728E5A8AACAA68FFFFFFFFFFFFFFFF";

DhGroup make_group(std::string name, const mpz_class& p) {
    DhGroup g;
    g.name = std::move(name);
    g.p = p;
    g.q = (p - 1) / 2;
    g.g = 4;  // square of 2, generates the order-q subgroup
    g.element_bytes = (mpz_sizeinbase(p.get_mpz_t(), 2) + 7) / 8;
    return g;
}

mpz_class random_exponent(const DhGroup& grp, Rng& rng) {
    // Uniform in [1, q) by rejection over fixed-width strings.
    const std::size_t nbytes = (mpz_sizeinbase(grp.q.get_mpz_t(), 2) + 7) / 8;
    while (true) {
        Bytes raw = rng.bytes(nbytes);
        mpz_class v;
        mpz_import(v.get_mpz_t(), raw.size(), 1, 1, 1, 0, raw.data());
        if (v >= 1 && v < grp.q) return v;
    }
}

mpz_class powm(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
    mpz_class out;
    mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return out;
}

Bytes shared_key(const HashConfig& cfg, const DhGroup& grp, const mpz_class& u,
                 const mpz_class& s) {
    const Digest k = tagged_hash(cfg.tag_kdf, {element_bytes(grp, u), element_bytes(grp, s)});
    return digest_bytes(k);
}

} // namespace

const DhGroup& group_test64() {
    static const DhGroup g = make_group("test64", mpz_class("18446744073709550147"));
    return g;
}

const DhGroup& group_modp2048() {
    static const DhGroup g = make_group("modp2048", mpz_class(kModp2048Hex, 16));
    return g;
}

const DhGroup& group_by_name(const std::string& name) {
    if (name == "test64") return group_test64();
    if (name == "modp2048") return group_modp2048();
    throw std::invalid_argument("group_by_name: unknown group " + name);
}

Bytes element_bytes(const DhGroup& grp, const mpz_class& v) {
    Bytes out(grp.element_bytes, 0);
    std::size_t written = 0;
    mpz_export(out.data() + grp.element_bytes - ((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8),
               &written, 1, 1, 1, 0, v.get_mpz_t());
    return out;
}

mpz_class element_from_bytes(const DhGroup& grp, const Bytes& data) {
    if (data.size() != grp.element_bytes)
        throw std::invalid_argument("element_from_bytes: wrong width");
    mpz_class v;
    mpz_import(v.get_mpz_t(), data.size(), 1, 1, 1, 0, data.data());
    return v;
}

Bytes PkeCiphertext::to_bytes() const { return bytes::pack_sections({u, body, mac}); }

std::optional<PkeCiphertext> PkeCiphertext::from_bytes(const Bytes& data) {
    auto sections = bytes::unpack_sections(data);
    if (!sections || sections->size() != 3) return std::nullopt;
    return PkeCiphertext{(*sections)[0], (*sections)[1], (*sections)[2]};
}

PkeKeypair pke_keygen(const DhGroup& grp, Rng& rng) {
    PkeKeypair kp;
    kp.group = grp.name;
    kp.x = random_exponent(grp, rng);
    kp.y = powm(grp.g, kp.x, grp.p);
    return kp;
}

PkeCiphertext pke_enc(const HashConfig& cfg, const DhGroup& grp, const mpz_class& y,
                      const Bytes& message, Rng& rng) {
    if (message.size() > kMaxPkeMessage)
        throw std::invalid_argument("pke_enc: message exceeds the configured maximum");
    const mpz_class r = random_exponent(grp, rng);
    const mpz_class u = powm(grp.g, r, grp.p);
    const mpz_class s = powm(y, r, grp.p);
    const Bytes key = shared_key(cfg, grp, u, s);
    const Bytes stream = kdf_stream(cfg, key, message.size());
    PkeCiphertext ct;
    ct.u = element_bytes(grp, u);
    ct.body.resize(message.size());
    for (std::size_t i = 0; i < message.size(); ++i) ct.body[i] = message[i] ^ stream[i];
    ct.mac = digest_bytes(mac(cfg, key, bytes::cat({ct.u, ct.body})));
    return ct;
}

std::optional<Bytes> pke_dec(const HashConfig& cfg, const DhGroup& grp, const mpz_class& x,
                             const PkeCiphertext& ct) {
    if (ct.u.size() != grp.element_bytes || ct.mac.size() != kDigestLen) return std::nullopt;
    mpz_class u;
    try {
        u = element_from_bytes(grp, ct.u);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    // Subgroup membership: 1 < u < p and u^q = 1.
    if (u <= 1 || u >= grp.p) return std::nullopt;
    if (powm(u, grp.q, grp.p) != 1) return std::nullopt;
    const mpz_class s = powm(u, x, grp.p);
    const Bytes key = shared_key(cfg, grp, u, s);
    const Digest expect = mac(cfg, key, bytes::cat({ct.u, ct.body}));
    if (!std::equal(expect.begin(), expect.end(), ct.mac.begin())) return std::nullopt;
    const Bytes stream = kdf_stream(cfg, key, ct.body.size());
    Bytes out(ct.body.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = ct.body[i] ^ stream[i];
    return out;
}

} // namespace qsclab::crypto
