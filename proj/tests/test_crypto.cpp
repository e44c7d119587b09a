#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsclab/signcrypt.hpp"

using namespace qsclab;
using namespace qsclab::crypto;

namespace {
Bytes msg(const std::string& s) { return Bytes(s.begin(), s.end()); }
} // namespace

TEST_CASE("hash config tags distinct") {
    CHECK_NOTHROW(default_hash().validate());
    HashConfig bad;
    bad.tag_mac = bad.tag_kdf;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("sections framing") {
    const std::vector<Bytes> parts = {msg("a"), msg(""), msg("hello")};
    auto packed = bytes::pack_sections(parts);
    auto back = bytes::unpack_sections(packed);
    REQUIRE(back.has_value());
    CHECK(*back == parts);

    auto truncated = packed;
    truncated.pop_back();
    CHECK(!bytes::unpack_sections(truncated).has_value());
    truncated = packed;
    truncated.push_back(0);
    CHECK(!bytes::unpack_sections(truncated).has_value());
}

TEST_CASE("lamport ots") {
    const auto& cfg = default_hash();
    auto kp = ots_derive(cfg, Bytes(32, 0x42), 7);
    CHECK(kp.consistent(cfg));

    const Digest d = tagged_hash(cfg.tag_challenge, {msg("payload")});
    auto sig = ots_sign(cfg, kp, d);
    CHECK(ots_verify(cfg, kp.vk, d, sig));

    Digest d2 = d;
    d2[0] ^= 0x80;
    CHECK(!ots_verify(cfg, kp.vk, d2, sig));
}

TEST_CASE("merkle signatures") {
    const auto& cfg = default_hash();
    Rng rng(1234);
    auto kp = ds_keygen(cfg, 3, rng);

    auto sig = ds_sign(kp, msg("first"));
    CHECK(ds_verify(cfg, kp.root(), msg("first"), sig));
    CHECK(!ds_verify(cfg, kp.root(), msg("farst"), sig));

    // Path length equals the depth for every signature.
    for (int i = 1; i < 8; ++i) {
        auto s = ds_sign(kp, msg("m" + std::to_string(i)));
        auto sections = bytes::unpack_sections(s);
        REQUIRE(sections.has_value());
        CHECK((*sections)[3].size() == 3 * kDigestLen);
        CHECK(ds_verify(cfg, kp.root(), msg("m" + std::to_string(i)), s));
    }
    CHECK_THROWS_AS(ds_sign(kp, msg("overflow")), LeafExhausted);
}

TEST_CASE("pke roundtrip and rejection") {
    const auto& cfg = default_hash();
    const auto& grp = group_test64();
    Rng rng(55);
    auto kp = pke_keygen(grp, rng);

    const Bytes m = rng.bytes(32);
    auto ct = pke_enc(cfg, grp, element_from_bytes(grp, element_bytes(grp, kp.y)), m, rng);
    auto dec = pke_dec(cfg, grp, kp.x, ct);
    REQUIRE(dec.has_value());
    CHECK(*dec == m);

    // Truncated ciphertext fails framing or MAC.
    auto short_ct = ct;
    short_ct.body.pop_back();
    CHECK(!pke_dec(cfg, grp, kp.x, short_ct).has_value());

    // Bad group element.
    auto bad = ct;
    bad.u = Bytes(grp.element_bytes, 0x00);
    CHECK(!pke_dec(cfg, grp, kp.x, bad).has_value());

    // Randomized: repeated encryptions differ.
    for (int i = 0; i < 100; ++i) {
        auto c2 = pke_enc(cfg, grp, kp.y, m, rng);
        CHECK(c2.to_bytes() != ct.to_bytes());
    }
}

TEST_CASE("pke on the 2048-bit group") {
    const auto& cfg = default_hash();
    const auto& grp = group_modp2048();
    CHECK(grp.element_bytes == 256);
    Rng rng(56);
    auto kp = pke_keygen(grp, rng);
    const Bytes m = rng.bytes(48);
    auto ct = pke_enc(cfg, grp, kp.y, m, rng);
    auto dec = pke_dec(cfg, grp, kp.x, ct);
    REQUIRE(dec.has_value());
    CHECK(*dec == m);
}

TEST_CASE("signcryption roundtrip and key binding") {
    ScParams params;
    params.ds_depth = 3;
    Rng rng(77);
    auto alice = sc_keygen(params, rng);
    auto bob = sc_keygen(params, rng);
    auto carol = sc_keygen(params, rng);

    const Bytes m = rng.bytes(40);
    auto ct = sc_sigenc(alice.sdk, bob.vek, m, rng);
    auto dec = sc_verdec(alice.vek, bob.sdk, ct);
    REQUIRE(dec.has_value());
    CHECK(*dec == m);

    // Wrong claimed sender: signature check fails.
    CHECK(!sc_verdec(carol.vek, bob.sdk, ct).has_value());

    // A ciphertext re-signed by another party does not verify under alice.
    auto sections = bytes::unpack_sections(ct);
    REQUIRE(sections.has_value());
    Bytes e = bytes::pack_sections({(*sections)[0], (*sections)[1], (*sections)[2]});
    const Bytes payload = bytes::cat({e, carol.vek.serialize(), bob.vek.pke_y});
    Bytes resig = carol.sdk.signer->sign(payload);
    Bytes forged = bytes::pack_sections({(*sections)[0], (*sections)[1], (*sections)[2], resig});
    CHECK(!sc_verdec(alice.vek, bob.sdk, forged).has_value());
    // (The same bytes do verify under carol's key, as a re-signcryption.)
    CHECK(sc_verdec(carol.vek, bob.sdk, forged).has_value());
}

TEST_CASE("unforgeability falsifier: random bit flips always reject") {
    ScParams params;
    params.ds_depth = 1;
    Rng rng(99);
    auto alice = sc_keygen(params, rng);
    auto bob = sc_keygen(params, rng);
    auto ct = sc_sigenc(alice.sdk, bob.vek, msg("forgery target"), rng);

    int rejected = 0;
    const int trials = 1000;
    for (int i = 0; i < trials; ++i) {
        Bytes mutated = ct;
        const std::size_t bit = rng.below(mutated.size() * 8);
        mutated[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        if (!sc_verdec(alice.vek, bob.sdk, mutated).has_value()) ++rejected;
    }
    CHECK(rejected == trials);
}

TEST_CASE("determinism: same seed, same bytes") {
    ScParams params;
    params.ds_depth = 2;
    auto run = [&]() {
        Rng rng(2024);
        auto a = sc_keygen(params, rng);
        auto b = sc_keygen(params, rng);
        auto ct = sc_sigenc(a.sdk, b.vek, msg("repeatable"), rng);
        return std::make_pair(a.vek.serialize(), ct);
    };
    auto r1 = run();
    auto r2 = run();
    CHECK(r1.first == r2.first);
    CHECK(r1.second == r2.second);
}

TEST_CASE("vek serialization roundtrip") {
    ScParams params;
    params.ds_depth = 1;
    Rng rng(5);
    auto keys = sc_keygen(params, rng);
    auto rt = ScVek::deserialize(keys.vek.serialize());
    CHECK(rt == keys.vek);
    CHECK(keys.vek.fingerprint().size() == 16);
}

TEST_CASE("sharp symmetric scheme checks its appended keys") {
    ScParams params;
    params.ds_depth = 2;
    Rng rng(31);
    auto k = sharp_ske_keygen(params, rng);
    auto ct = sharp_ske_enc(k, msg("sym payload"), rng);
    auto dec = sharp_ske_dec(k, ct);
    REQUIRE(dec.has_value());
    CHECK(*dec == msg("sym payload"));

    // Swap the appended public keys: reject.
    auto sections = bytes::unpack_sections(ct);
    REQUIRE(sections.has_value());
    auto swapped = bytes::pack_sections({(*sections)[0], (*sections)[2], (*sections)[1]});
    CHECK(!sharp_ske_dec(k, swapped).has_value());
}
