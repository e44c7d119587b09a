#include "qsclab/adversaries.hpp"

#include <stdexcept>

namespace qsclab::games::adversaries {

using namespace qsclab::linalg;
using sim::KrausChannel;
using sim::RegisterLayout;

Mat pauli_of(char p) {
    switch (p) {
        case 'X': return kPauliX;
        case 'Y': return kPauliY;
        case 'Z': return kPauliZ;
        default: throw std::invalid_argument("pauli_of: expected X, Y or Z");
    }
}

namespace {

/// Projector onto a fixed pure state, embedded into the extended register.
Mat state_pass_projector_ext(const Vec& psi) {
    const long d = psi.size();
    Mat p = Mat::Zero(d + 1, d + 1);
    p.topLeftCorner(d, d) = psi * psi.adjoint();
    return p;
}

} // namespace

OutsiderAdversary passive_forwarder() {
    return [](OutsiderEnv& env) {
        const int d = env.message_dim();
        const Vec psi = haar_state(d, env.rng());
        env.ctx().add_state("advM", sim::DensityState::pure(RegisterLayout::single("M", d), psi));
        auto ct = env.oracle_sigenc("advM");
        auto out = env.oracle_verdec(ct);
        if (env.measure_reject(out) == 1) return Verdict::ideal;
        const int match = env.measure(state_pass_projector_ext(psi), {out});
        env.ctx().discard(out);
        return match == 1 ? Verdict::real : Verdict::ideal;
    };
}

OutsiderAdversary pauli_tamperer(char pauli, int rounds) {
    const Mat p = pauli_of(pauli);
    return [p, rounds](OutsiderEnv& env) {
        bool any_accept = false;
        for (int round = 0; round < rounds; ++round) {
            const int d = env.message_dim();
            const std::string m = "advM" + std::to_string(round);
            env.ctx().add_basis(m, d, 0);
            auto ct = env.oracle_sigenc(m);
            const int dc = env.cipher_dim();
            env.ctx().apply_unitary(kron(p, Mat::Identity(dc / 2, dc / 2)), {ct.quantum});
            auto out = env.oracle_verdec(ct);
            if (env.measure_reject(out) == 0) any_accept = true;
            env.ctx().discard(out);
        }
        return any_accept ? Verdict::real : Verdict::ideal;
    };
}

OutsiderAdversary classical_bit_forger() {
    return [](OutsiderEnv& env) {
        env.ctx().add_basis("advM", env.message_dim(), 0);
        auto ct = env.oracle_sigenc("advM");
        const std::size_t bit = env.rng().below(ct.classical.size() * 8);
        ct.classical[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        auto out = env.oracle_verdec(ct);
        const int rejected = env.measure_reject(out);
        env.ctx().discard(out);
        return rejected == 1 ? Verdict::ideal : Verdict::real;
    };
}

OutsiderAdversary garbage_resender() {
    return [](OutsiderEnv& env) {
        env.ctx().add_basis("advM", env.message_dim(), 0);
        auto ct = env.oracle_sigenc("advM");
        env.ctx().discard(ct.quantum);
        env.ctx().add_state("garbage",
                            sim::DensityState::maximally_mixed(
                                RegisterLayout::single("C", env.cipher_dim())));
        CtHandle forged{env.rng().bytes(ct.classical.size()), "garbage", ct.serial};
        auto out = env.oracle_verdec(forged);
        const int rejected = env.measure_reject(out);
        env.ctx().discard(out);
        return rejected == 1 ? Verdict::ideal : Verdict::real;
    };
}

OutsiderAdversary entangled_probe() {
    return [](OutsiderEnv& env) {
        const int d = env.message_dim();
        env.ctx().add_bell("probeM", "probeB", d);
        auto ct = env.oracle_sigenc("probeM");
        auto out = env.oracle_verdec(ct);
        if (env.measure_reject(out) == 1) return Verdict::ideal;
        const int match = env.measure(bell_pass_projector_ext(d), {out, "probeB"});
        env.ctx().discard(out);
        env.ctx().discard("probeB");
        return match == 1 ? Verdict::real : Verdict::ideal;
    };
}

CcaAdversary challenge_replayer() {
    CcaAdversary adv;
    adv.name = "challenge-replayer";
    adv.prepare_challenge = [](CcaEnv& env) {
        env.ctx().add_basis("chal", env.message_dim(), 0);
        return std::string("chal");
    };
    adv.guess = [](CcaEnv& env, const CtHandle& challenge) {
        auto out = env.oracle_dec(challenge);
        const int d = env.message_dim();
        const int zero = env.measure(state_pass_projector_ext(basis_vec(d, 0)), {out});
        env.ctx().discard(out);
        return zero == 1 ? 0 : 1;
    };
    return adv;
}

CcaAdversary coin_guesser() {
    CcaAdversary adv;
    adv.name = "coin-guesser";
    adv.prepare_challenge = [](CcaEnv& env) {
        env.ctx().add_basis("chal", env.message_dim(), 0);
        return std::string("chal");
    };
    adv.guess = [](CcaEnv& env, const CtHandle&) { return env.rng().bit() ? 1 : 0; };
    return adv;
}

CcaAdversary decrypt_compare() {
    CcaAdversary adv;
    adv.name = "decrypt-compare";
    adv.prepare_challenge = [](CcaEnv& env) {
        env.ctx().add_basis("chal", env.message_dim(), 0);
        return std::string("chal");
    };
    adv.guess = [](CcaEnv& env, const CtHandle& challenge) {
        auto out = env.oracle_dec(challenge);
        const int d = env.message_dim();
        const int zero = env.measure(state_pass_projector_ext(basis_vec(d, 0)), {out});
        env.ctx().discard(out);
        return zero == 1 ? 0 : 1;
    };
    return adv;
}

OneTimeAdversary onetime_identity() {
    OneTimeAdversary adv;
    adv.name = "identity";
    adv.prepare = [](SimContext& ctx, Rng& rng) {
        const Vec psi = haar_state(2, rng);
        ctx.add_state("M", sim::DensityState::pure(RegisterLayout::single("M", 2), psi));
        return std::make_pair(std::string("M"), std::optional<std::string>{});
    };
    adv.attack = [](const crypto::ScVek&, const crypto::ScVek&, const RegisterLayout& cipher,
                    Rng&) { return KrausChannel::identity(cipher); };
    return adv;
}

OneTimeAdversary onetime_pauli(char pauli) {
    const Mat p = pauli_of(pauli);
    OneTimeAdversary adv;
    adv.name = std::string("pauli-") + pauli;
    adv.prepare = [](SimContext& ctx, Rng& rng) {
        const Vec psi = haar_state(2, rng);
        ctx.add_state("M", sim::DensityState::pure(RegisterLayout::single("M", 2), psi));
        return std::make_pair(std::string("M"), std::optional<std::string>{});
    };
    adv.attack = [p](const crypto::ScVek&, const crypto::ScVek&, const RegisterLayout& cipher,
                     Rng&) {
        const long d = cipher.total_dim();
        return KrausChannel::unitary(kron(p, Mat::Identity(d / 2, d / 2)), cipher);
    };
    return adv;
}

OneTimeAdversary onetime_garbage() {
    OneTimeAdversary adv;
    adv.name = "discard-and-resend-garbage";
    adv.prepare = [](SimContext& ctx, Rng&) {
        ctx.add_basis("M", 2, 0);
        return std::make_pair(std::string("M"), std::optional<std::string>{});
    };
    adv.attack = [](const crypto::ScVek&, const crypto::ScVek&, const RegisterLayout& cipher,
                    Rng&) { return KrausChannel::completely_depolarizing(cipher); };
    adv.classical_tamper = [](const Bytes& classical, Rng& rng) {
        return rng.bytes(classical.size());
    };
    return adv;
}

OneTimeAdversary onetime_side_only() {
    OneTimeAdversary adv;
    adv.name = "side-register-only";
    adv.prepare = [](SimContext& ctx, Rng&) {
        ctx.add_bell("M", "B", 2);
        return std::make_pair(std::string("M"), std::optional<std::string>("B"));
    };
    adv.attack = [](const crypto::ScVek&, const crypto::ScVek&, const RegisterLayout& cipher,
                    Rng&) {
        // Hadamard on B, identity on the ciphertext.
        const long dc = cipher.total_dim();
        const Mat u = kron(Mat::Identity(dc, dc), kHadamard);
        return KrausChannel::unitary(u, concat(cipher, RegisterLayout::single("B", 2)));
    };
    return adv;
}

MultiUserAdversary mu_honest_replayer() {
    MultiUserAdversary adv;
    adv.name = "honest-replayer";
    adv.choose_pair = [](const scheme::MultiUserWorld& world, Rng&) {
        return std::make_pair(world.ids()[0], world.ids()[1]);
    };
    adv.play = [](OutsiderEnv& env, const scheme::MultiUserWorld&, const std::string&,
                  const std::string&) {
        const int d = env.message_dim();
        const Vec psi = haar_state(d, env.rng());
        env.ctx().add_state("advM", sim::DensityState::pure(RegisterLayout::single("M", d), psi));
        auto ct = env.oracle_sigenc("advM");
        auto out = env.oracle_verdec(ct);
        if (env.measure_reject(out) == 1) return Verdict::ideal;
        Mat pass = Mat::Zero(d + 1, d + 1);
        pass.topLeftCorner(d, d) = psi * psi.adjoint();
        const int match = env.measure(pass, {out});
        env.ctx().discard(out);
        return match == 1 ? Verdict::real : Verdict::ideal;
    };
    return adv;
}

MultiUserAdversary mu_third_party_forger() {
    MultiUserAdversary adv;
    adv.name = "third-party-forger";
    adv.choose_pair = [](const scheme::MultiUserWorld& world, Rng&) {
        return std::make_pair(world.ids()[0], world.ids()[1]);
    };
    adv.play = [](OutsiderEnv& env, const scheme::MultiUserWorld& world, const std::string& s,
                  const std::string& r) {
        // Forge using a third user's secret key, submit to the (s, r) oracle.
        std::string third;
        for (const auto& id : world.ids())
            if (id != s && id != r) {
                third = id;
                break;
            }
        auto rho = sim::DensityState::basis(world.message_layout(), 0);
        auto forged = scheme::mu_sigenc(world, third, r, rho, env.rng());
        env.ctx().add_state("forgedC", forged.quantum);
        CtHandle handle{forged.classical, "forgedC", 0};
        auto out = env.oracle_verdec(handle);
        const int rejected = env.measure_reject(out);
        env.ctx().discard(out);
        return rejected == 1 ? Verdict::ideal : Verdict::real;
    };
    return adv;
}

} // namespace qsclab::games::adversaries
