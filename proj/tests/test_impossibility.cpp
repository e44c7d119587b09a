#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsclab/characterize.hpp"
#include "qsclab/impossibility.hpp"
#include "qsclab/trap_auth.hpp"

using namespace qsclab;
using namespace qsclab::linalg;
using namespace qsclab::attacks;
using sim::DensityState;
using sim::KrausChannel;
using sim::RegisterLayout;
using sim::TwoOutcomeMeasurement;

namespace {

TwoOutcomeMeasurement meas_z() { return {basis_proj(2, 1), RegisterLayout::single("M", 2)}; }
TwoOutcomeMeasurement meas_x() {
    Mat p(2, 2);
    p << 0.5, 0.5, 0.5, 0.5;
    return {p, RegisterLayout::single("M", 2)};
}

std::vector<int> all_keys(const ToyQS& qs) {
    std::vector<int> keys;
    for (int i = 0; i < qs.key_count(); ++i) keys.push_back(i);
    return keys;
}

} // namespace

TEST_CASE("reflection attack basics") {
    auto qs = make_keyed_unitary_toy();

    // Trivial projector: the attack is the identity channel.
    auto id_attack = build_reflection_attack(qs, 0, Mat::Zero(2, 2));
    CHECK(channel_distance(id_attack, KrausChannel::identity(qs.cipher_layout())) < 1e-12);

    // Involution: applying the attack twice is the identity channel.
    auto refl = build_reflection_attack(qs, 1, basis_proj(2, 0));
    CHECK(channel_distance(compose(refl, refl), KrausChannel::identity(qs.cipher_layout())) <
          1e-10);

    // A valid signed state stays valid under the reflection.
    Rng rng(5);
    for (int key : all_keys(qs)) {
        auto attack = build_reflection_attack(qs, key, basis_proj(2, 0));
        const Vec psi = haar_state(2, rng);
        const Mat signed_state =
            qs.sign_channel(key).apply_matrix((psi * psi.adjoint()).eval());
        const Mat attacked = attack.apply_matrix(signed_state);
        const Mat out = qs.verify_channel(key).apply_matrix(attacked);
        CHECK(out(2, 2).real() < 1e-9);  // accepts
    }
}

TEST_CASE("swap attack flips the signed outcome") {
    auto qs = make_keyed_unitary_toy();
    const auto keys = all_keys(qs);

    // u0 == u1: the identity attack; no observable shift.
    auto same = [&](int k) { return build_swap_attack(qs, k, kPauliI, kPauliI); };
    auto rep_same = run_attack(qs, meas_z(), same, keys, DensityState::basis(qs.message_layout(), 0));
    CHECK(rep_same.advantage <= 1e-9);

    // Preparations |0> and |1>: the attack turns Sign(|0>) into Sign(|1>).
    auto swap = [&](int k) { return build_swap_attack(qs, k, kPauliI, kPauliX); };
    auto psi0 = DensityState::basis(qs.message_layout(), 0);
    auto rep = run_attack(qs, meas_z(), swap, keys, psi0);
    CHECK(rep.outcome_prob_before <= 1e-9);
    CHECK(rep.outcome_prob_after >= 0.999);
    CHECK(rep.accept_prob_after >= 0.999);
    CHECK(std::abs(rep.accept_prob_after - rep.accept_prob_before) <= 1e-3);

    // The attacked-and-reverified state equals the signature of |1>.
    for (int key : keys) {
        const Mat s0 = qs.sign_channel(key).apply_matrix(psi0.matrix());
        const Mat attacked = build_swap_attack(qs, key, kPauliI, kPauliX).apply_matrix(s0);
        const Mat s1 = qs.sign_channel(key).apply_matrix(basis_proj(2, 1));
        CHECK(trace_norm_hermitian(attacked - s1) <= 1e-6);
    }
}

TEST_CASE("commutator gap") {
    auto psi0 = DensityState::basis(RegisterLayout::single("M", 2), 0);

    // Commuting pair: zero gap.
    auto gap_zz = commutator_gap(meas_z(), meas_z(), psi0);
    CHECK(gap_zz.sequential_one_norm == doctest::Approx(0.0).epsilon(1e-12));

    // Z then X on |0>: the two orders differ by exactly 1 in the 1-norm.
    auto gap_zx = commutator_gap(meas_z(), meas_x(), psi0);
    CHECK(gap_zx.sequential_one_norm == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(gap_zx.squared_norm_diff == doctest::Approx(0.25).epsilon(1e-9));

    // Symmetric in the measurement arguments.
    auto gap_xz = commutator_gap(meas_x(), meas_z(), psi0);
    CHECK(gap_xz.sequential_one_norm == doctest::Approx(gap_zx.sequential_one_norm));

    // Invariant under simultaneous conjugation of both projectors and state.
    Rng rng(9);
    const Mat u = complete_isometry(haar_state(2, rng));
    TwoOutcomeMeasurement mz2{u * meas_z().projector * u.adjoint(), meas_z().layout};
    TwoOutcomeMeasurement mx2{u * meas_x().projector * u.adjoint(), meas_x().layout};
    auto psi_rot = sim::apply_unitary(psi0, u, {"M"});
    auto gap_rot = commutator_gap(mz2, mx2, psi_rot);
    CHECK(gap_rot.sequential_one_norm ==
          doctest::Approx(gap_zx.sequential_one_norm).epsilon(1e-9));
}

TEST_CASE("correctness residuals per measurement") {
    auto qs = make_keyed_unitary_toy();
    auto res = check_correct_for(qs, {meas_z(), meas_x()}, all_keys(qs));
    REQUIRE(res.size() == 2);
    CHECK(res[0] <= 1e-9);
    CHECK(res[1] <= 1e-9);

    // Basis-copy scheme: Z outcomes survive, X outcomes do not.
    auto dephasing = make_basis_copy_toy();
    auto res2 = check_correct_for(dephasing, {meas_z(), meas_x()}, all_keys(dephasing));
    CHECK(res2[0] <= 1e-9);
    CHECK(res2[1] > 0.1);

    CHECK(check_correct_for(qs, {}, all_keys(qs)).empty());
}

TEST_CASE("security falsifier") {
    auto qs = make_keyed_unitary_toy();
    const auto keys = all_keys(qs);

    // Identity attack on the correct scheme: simulable with p ~ 1.
    auto idat = [&](int) { return KrausChannel::identity(qs.cipher_layout()); };
    auto fit_id = falsify_security(qs, meas_z(), idat, keys);
    CHECK(fit_id.epsilon <= 1e-6);
    CHECK(fit_id.p == doctest::Approx(1.0).epsilon(1e-3));

    // Ancilla-flip attack: everything rejects, simulable with p ~ 0.
    auto botat = [&](int k) {
        const auto& key = qs.key(k);
        const Mat ua = key.verify_dilation.adjoint() * kron(Mat::Identity(2, 2), kPauliX) *
                       key.verify_dilation;
        return KrausChannel::unitary(ua, qs.cipher_layout());
    };
    auto fit_bot = falsify_security(qs, meas_z(), botat, keys);
    CHECK(fit_bot.epsilon <= 1e-6);
    CHECK(fit_bot.p == doctest::Approx(0.0).epsilon(1e-3));

    // Swap attack: no mixture of identity and reject explains it.
    auto swap = [&](int k) { return build_swap_attack(qs, k, kPauliI, kPauliX); };
    auto fit_swap = falsify_security(qs, meas_z(), swap, keys);
    CHECK(fit_swap.epsilon >= 0.99);
}

TEST_CASE("falsifier epsilon shrinks with more sampled keys") {
    auto qs = make_keyed_unitary_toy();
    // Fixed (key-independent) attack: X on the data qubit of the ciphertext.
    auto fixed = [&](int) {
        return KrausChannel::unitary(kron(kPauliX, Mat::Identity(2, 2)), qs.cipher_layout());
    };
    Rng rng(31);
    auto sample = [&](int count) {
        std::vector<int> keys;
        for (int i = 0; i < count; ++i)
            keys.push_back(static_cast<int>(rng.below(qs.key_count())));
        return falsify_security(qs, meas_z(), fixed, keys).epsilon;
    };
    const double e1 = sample(1);
    const double e10 = sample(10);
    const double e100 = sample(100);
    CHECK(e1 >= e10 - 0.05);
    CHECK(e10 >= e100 - 0.05);
}

TEST_CASE("theorem check on the toy schemes") {
    auto qs = make_keyed_unitary_toy();
    const auto keys = all_keys(qs);
    auto psi0 = DensityState::basis(qs.message_layout(), 0);

    // Commuting pair: nothing to witness, inequality trivially holds.
    auto rep_comm = verify_thm_imp1(qs, meas_z(), meas_z(), psi0, keys);
    CHECK(rep_comm.best_attack.advantage <= 1e-9);
    CHECK(rep_comm.inequality_holds);
    CHECK(!rep_comm.witnessed);

    // Z/X pair: the reflection through one measurement moves the other.
    auto rep = verify_thm_imp1(qs, meas_z(), meas_x(), psi0, keys);
    CHECK(rep.gap.sequential_one_norm == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.residual_m0 <= 1e-9);
    CHECK(rep.residual_m1 <= 1e-9);
    CHECK(rep.best_attack.advantage >= 0.9);
    CHECK(rep.best_attack.advantage <= 1.0 + 1e-12);
    CHECK(rep.inequality_holds);
    CHECK(rep.witnessed);
    CHECK(rep.falsified_epsilon >= 0.9);
}

TEST_CASE("characterization of a normal-form scheme") {
    // enc: conjugation by a fixed unitary with a |0> ancilla; dec inverts and
    // traces the ancilla (never rejects).
    Rng rng(17);
    const Mat v = complete_isometry(haar_state(4, rng).rowwise().replicate(1));
    REQUIRE(is_unitary(v, 1e-9));
    RegisterLayout m2 = RegisterLayout::single("M", 2);
    RegisterLayout c4 = RegisterLayout::single("C", 4);

    Mat iso = Mat::Zero(4, 2);
    for (int m = 0; m < 2; ++m) iso.col(m) = v.col(m * 2);
    KrausChannel enc({iso}, m2, c4);
    std::vector<Mat> dec_ops;
    for (int t = 0; t < 2; ++t) {
        Mat k = Mat::Zero(2, 4);
        for (int m = 0; m < 2; ++m) k.row(m) = v.col(m * 2 + t).adjoint();
        dec_ops.push_back(std::move(k));
    }
    KrausChannel dec(dec_ops, c4, m2);

    auto ch = characterize_encryption(enc, dec);
    CHECK(ch.fit_error <= 1e-8);
    CHECK(is_unitary(ch.unitary_v, 1e-8));
    CHECK(std::abs(ch.sigma.trace().real() - 1.0) <= 1e-8);
    // The auxiliary state is pure (the |0> ancilla in some basis).
    Eigen::SelfAdjointEigenSolver<Mat> es(ch.sigma);
    CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK((ch.support_projector * ch.sigma * ch.support_projector).trace().real() >=
          1.0 - std::max(ch.cutoff, 1e-8));
}

TEST_CASE("characterization of the trap scheme at fixed keys") {
    auth::TrapAuthScheme scheme(1, 1);
    Rng rng(23);
    for (int trial = 0; trial < 4; ++trial) {
        auto key = scheme.keygen(rng);
        auto ch = characterize_encryption(scheme.enc_channel(key), scheme.dec_channel(key));
        CHECK(ch.fit_error <= 1e-6);
        CHECK(is_unitary(ch.unitary_v, 1e-8));
        CHECK(std::abs(ch.sigma.trace().real() - 1.0) <= 1e-8);
        CHECK((ch.support_projector * ch.sigma * ch.support_projector).trace().real() >=
              1.0 - std::max(ch.cutoff, 1e-8));
    }
}

TEST_CASE("characterization of each randomness branch of a mixed scheme") {
    // Encryption that applies X^r for classical randomness r and a fixed
    // Clifford; each branch is characterized separately.
    auth::TrapAuthScheme scheme(1, 1);
    Rng rng(29);
    auto key = scheme.keygen(rng);
    const Mat u = key.clifford.unitary();
    RegisterLayout m2 = RegisterLayout::single("M", 2);
    RegisterLayout c4 = RegisterLayout::single("C", 4);
    for (int r = 0; r < 2; ++r) {
        const Mat pre = r == 0 ? Mat(Mat::Identity(4, 4)) : kron(kPauliX, kPauliI);
        Mat iso = Mat::Zero(4, 2);
        for (int m = 0; m < 2; ++m) iso.col(m) = (u * pre).col(m * 2);
        KrausChannel enc({iso}, m2, c4);
        std::vector<Mat> dec_ops;
        for (int t = 0; t < 2; ++t) {
            Mat k = Mat::Zero(2, 4);
            for (int m = 0; m < 2; ++m) k.row(m) = (u * pre).col(m * 2 + t).adjoint();
            dec_ops.push_back(std::move(k));
        }
        KrausChannel dec(dec_ops, c4, m2);
        auto ch = characterize_encryption(enc, dec);
        CHECK(ch.fit_error <= 1e-6);
    }
}
