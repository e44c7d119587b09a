#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "qsclab/derived.hpp"
#include "qsclab/multiuser.hpp"

using namespace qsclab;
using namespace qsclab::linalg;
using namespace qsclab::scheme;
using sim::DensityState;
using sim::KrausChannel;
using sim::RegisterLayout;

namespace {

QscParams small_params() {
    QscParams p;
    p.m = 1;
    p.t = 1;
    p.classical.group = "test64";
    p.classical.ds_depth = 3;
    return p;
}

} // namespace

TEST_CASE("keygen basics") {
    QscScheme scheme(small_params());
    Rng r1(1), r2(2);
    auto a = scheme.keygen(r1);
    auto b = scheme.keygen(r2);
    CHECK(a.vek().serialize() != b.vek().serialize());
    // sdk carries the vek
    CHECK(a.keys.sdk.vek == a.keys.vek);
    // the same keypair serves both the sender and the receiver role
    Rng rng(3);
    auto ct = scheme.sigenc(a, b.vek(), DensityState::basis(scheme.message_layout(), 0), rng);
    auto out = scheme.verdec(a.vek(), b, ct);
    CHECK(out.reject_weight() < 1e-12);
}

TEST_CASE("sigenc verdec roundtrip as a channel") {
    QscScheme scheme(small_params());
    Rng rng(10);
    auto s = scheme.keygen(rng);
    auto r = scheme.keygen(rng);

    auto [classical, enc] = scheme.sigenc_parts(s, r.vek(), rng);
    auto dec = scheme.verdec_channel(s.vek(), r, classical);
    auto roundtrip = compose(dec, enc);
    CHECK(channel_distance(roundtrip, KrausChannel::embed(scheme.message_layout())) < 1e-9);

    // Distinct classical parts across calls (fresh key and fresh randomness).
    auto [classical2, enc2] = scheme.sigenc_parts(s, r.vek(), rng);
    CHECK(classical != classical2);
}

TEST_CASE("plaintext entangled with a held side register survives") {
    QscScheme scheme(small_params());
    Rng rng(11);
    auto s = scheme.keygen(rng);
    auto r = scheme.keygen(rng);

    auto bell = sim::bell_pair(2, "M", "B");
    auto [classical, enc] = scheme.sigenc_parts(s, r.vek(), rng);
    RegisterLayout side = RegisterLayout::single("B", 2);
    auto joint_ct = tensor_id(enc, side).apply(bell.with_layout(
        RegisterLayout({{"M", 2}, {"B", 2}})));
    auto dec = tensor_id(scheme.verdec_channel(s.vek(), r, classical), side);
    auto out = dec.apply(joint_ct);

    // Compare with the embedded original joint state.
    Mat expected = Mat::Zero(6, 6);
    const Mat bellm = bell.matrix();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const int mi = i / 2, bi = i % 2, mj = j / 2, bj = j % 2;
            expected(mi * 2 + bi, mj * 2 + bj) = bellm(i, j);
        }
    CHECK(sim::one_norm_distance(out.matrix(), expected) < 1e-9);
}

TEST_CASE("verdec rejections") {
    QscScheme scheme(small_params());
    Rng rng(12);
    auto s = scheme.keygen(rng);
    auto r = scheme.keygen(rng);
    auto rho = DensityState::basis(scheme.message_layout(), 0);

    auto ct = scheme.sigenc(s, r.vek(), rho, rng);

    // Honest: accept weight ~ 1.
    CHECK(scheme.verdec(s.vek(), r, ct).reject_weight() < 1e-9);

    // Any tampering of the classical part rejects outright.
    auto bad = ct;
    bad.classical[bad.classical.size() / 2] ^= 0x01;
    CHECK(scheme.verdec(s.vek(), r, bad).reject_weight() == doctest::Approx(1.0));

    // Known-identity trap key: flipping the trap qubit rejects for sure.
    auth::TrapAuthKey id_key{cliff::CliffordElement::identity(2), 1, 1};
    Bytes classical = crypto::sc_sigenc(s.keys.sdk, r.vek(), id_key.serialize(), rng);
    auto quantum = scheme.qauth().enc(id_key, rho);
    auto flipped = sim::apply_unitary(quantum.with_layout(RegisterLayout({{"D", 2}, {"T", 2}})),
                                      kPauliX, {"T"});
    HybridCiphertext forged{classical, flipped.with_layout(scheme.cipher_layout())};
    CHECK(scheme.verdec(s.vek(), r, forged).reject_weight() == doctest::Approx(1.0));
}

TEST_CASE("bot monotonicity over the first 256 classical bit positions") {
    QscScheme scheme(small_params());
    Rng rng(13);
    auto s = scheme.keygen(rng);
    auto r = scheme.keygen(rng);
    auto ct = scheme.sigenc(s, r.vek(), DensityState::basis(scheme.message_layout(), 0), rng);
    for (int bit = 0; bit < 256; ++bit) {
        auto bad = ct;
        bad.classical[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        CHECK(scheme.verdec(s.vek(), r, bad).reject_weight() == doctest::Approx(1.0));
    }
}

TEST_CASE("one-time key freshness across many signcryptions") {
    QscParams p;
    p.m = 2;
    p.t = 2;
    p.classical.ds_depth = 0;
    QscScheme scheme(p);
    Rng rng(14);
    std::set<Bytes> seen;
    for (int i = 0; i < 10000; ++i) {
        auto key = scheme.qauth().keygen(rng);
        CHECK(seen.insert(key.serialize()).second);
    }
}

TEST_CASE("key-averaged ciphertext carries no plaintext information") {
    // Exact Clifford average of the quantum part alone, by enumeration.
    auth::TrapAuthScheme qauth(1, 1);
    auto keys = qauth.all_keys();
    auto avg_ct = [&](const DensityState& rho) {
        Mat acc = Mat::Zero(4, 4);
        for (const auto& k : keys) acc += qauth.enc(k, rho).matrix();
        return Mat(acc / static_cast<double>(keys.size()));
    };
    auto rho0 = DensityState::basis(qauth.message_layout(), 0);
    Rng rng(15);
    auto rho1 = DensityState(qauth.message_layout(), random_density(2, rng));
    CHECK(sim::one_norm_distance(avg_ct(rho0), avg_ct(rho1)) < 1e-9);
}

TEST_CASE("derived signature scheme") {
    QscScheme scheme(small_params());
    Rng rng(16);
    auto qs = derive_qs(scheme, rng);

    auto rho = DensityState::basis(scheme.message_layout(), 1);
    auto ct = qs.sign(rho, rng);
    auto out = qs.verify(ct);
    CHECK(out.reject_weight() < 1e-9);
    CHECK(sim::one_norm_distance(out, sim::embed_reject(rho)) < 1e-9);

    // Wrong verification key (different sender): reject.
    auto other = derive_qs(scheme, rng);
    auto ct2 = qs.sign(rho, rng);
    CHECK(scheme.verdec(other.sender.vek(), qs.receiver, ct2).reject_weight() ==
          doctest::Approx(1.0));

    // Forged classical part: reject.
    auto forged = qs.sign(rho, rng);
    forged.classical[0] ^= 0xff;
    CHECK(qs.verify(forged).reject_weight() == doctest::Approx(1.0));
}

TEST_CASE("derived public-key encryption scheme") {
    auto params = small_params();
    params.classical.ds_depth = 7;  // this test issues ~100 encryptions
    QscScheme scheme(params);
    Rng rng(17);
    auto pkqe = derive_pkqe(scheme, rng);

    auto rho = DensityState::basis(scheme.message_layout(), 0);
    auto ct = pkqe.enc(rho, rng);
    auto out = pkqe.dec(ct);
    CHECK(out.reject_weight() < 1e-9);
    CHECK(sim::one_norm_distance(out, sim::embed_reject(rho)) < 1e-9);

    // Decrypting under a different receiver keypair fails almost surely.
    int rejects = 0;
    for (int i = 0; i < 100; ++i) {
        auto wrong = derive_pkqe(scheme, rng);
        auto c = pkqe.enc(rho, rng);
        auto o = scheme.verdec(pkqe.sender.vek(), wrong.receiver, c);
        if (o.reject_weight() > 0.999) ++rejects;
    }
    CHECK(rejects >= 99);
}

TEST_CASE("sharp scheme roundtrip and key checks") {
    SharpSkqe sharp(small_params());
    Rng rng(18);
    auto k = sharp.keygen(rng);
    auto rho = DensityState::basis(sharp.base().message_layout(), 1);
    auto ct = sharp.enc(k, rho, rng);
    auto out = sharp.dec(k, ct);
    CHECK(out.reject_weight() < 1e-9);

    // Swap the appended public keys: reject.
    auto sections = bytes::unpack_sections(ct.classical);
    REQUIRE(sections.has_value());
    auto swapped = ct;
    swapped.classical = bytes::pack_sections({(*sections)[0], (*sections)[2], (*sections)[1]});
    CHECK(sharp.dec(k, swapped).reject_weight() == doctest::Approx(1.0));
}

TEST_CASE("sharp of hybrid equals hybrid of classical sharp") {
    // Both sides run on identical seed streams and must agree byte-for-byte
    // on the classical part and exactly on the quantum channels.
    const QscParams qp = small_params();
    const std::uint64_t seed = 20240601;

    // Side 1: sharp transform of the hybrid signcryption scheme.
    Rng rng1(seed);
    SharpSkqe sharp(qp);
    auto k1 = sharp.keygen(rng1);
    auto [cl1, chan1] = sharp.enc_parts(k1, rng1);

    // Side 2: generic symmetric hybrid over the sharp classical scheme.
    Rng rng2(seed);
    auto kcl = crypto::sharp_ske_keygen(qp.classical, rng2);
    auth::TrapAuthScheme qauth(qp.m, qp.t);
    SkqeHybrid hyb(sharp_classical_ske(kcl), qauth);
    auto [cl2, chan2] = hyb.enc_parts(rng2);

    CHECK(cl1 == cl2);
    CHECK(channel_distance(chan1, chan2) < 1e-12);

    // Effective roundtrip channels agree as well.
    auto dec1 = sharp.dec_channel(k1, cl1);
    auto dec2 = hyb.dec_channel(cl2);
    CHECK(channel_distance(compose(dec1, chan1), compose(dec2, chan2)) < 1e-9);
}

TEST_CASE("generic hybrids roundtrip and reject tampering") {
    auth::TrapAuthScheme qauth(1, 1);
    Rng rng(19);

    PkqeHybrid pk("test64", qauth);
    auto keys = pk.keygen(rng);
    auto rho = DensityState::basis(qauth.message_layout(), 0);
    auto ct = pk.enc(keys.y, rho, rng);
    CHECK(pk.dec(keys.x, ct).reject_weight() < 1e-9);
    auto bad = ct;
    bad.classical[6] ^= 0x40;
    CHECK(pk.dec(keys.x, bad).reject_weight() == doctest::Approx(1.0));

    auto kcl = crypto::sharp_ske_keygen(small_params().classical, rng);
    SkqeHybrid sk(sharp_classical_ske(kcl), qauth);
    auto ct2 = sk.enc(rho, rng);
    CHECK(sk.dec(ct2).reject_weight() < 1e-9);
    auto bad2 = ct2;
    bad2.classical[10] ^= 0x01;
    CHECK(sk.dec(bad2).reject_weight() == doctest::Approx(1.0));
}

TEST_CASE("multi-user world") {
    Rng rng(20);
    auto params = small_params();
    params.classical.ds_depth = 7;  // ~100 signcryptions from one sender below
    MultiUserWorld world(params, {"alice", "bob", "carol", "dave"}, rng);
    CHECK(world.id_register_dim() == 16);

    auto rho = DensityState::basis(world.message_layout(), 1);
    auto ct = mu_sigenc(world, "alice", "bob", rho, rng);
    auto verdict = mu_verdec(world, "alice", "bob", ct, rng);
    REQUIRE(verdict.plaintext.has_value());
    CHECK(verdict.sender == "alice");
    CHECK(verdict.receiver == "bob");
    CHECK(sim::one_norm_distance(*verdict.plaintext, rho) < 1e-9);

    // Wrong claimed sender: reject.
    auto ct2 = mu_sigenc(world, "alice", "bob", rho, rng);
    CHECK(!mu_verdec(world, "carol", "bob", ct2, rng).plaintext.has_value());

    // Replay redirected to a third user's key: reject (statistics over 100).
    int rejects = 0;
    for (int i = 0; i < 100; ++i) {
        auto c = mu_sigenc(world, "alice", "bob", rho, rng);
        if (!mu_verdec(world, "alice", "carol", c, rng).plaintext.has_value()) ++rejects;
    }
    CHECK(rejects >= 99);

    CHECK_THROWS(mu_sigenc(world, "alice", "alice", rho, rng));
    CHECK_THROWS(world.vek_of("nobody"));
}
