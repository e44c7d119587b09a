#include "qsclab/multiuser.hpp"

#include <stdexcept>

namespace qsclab::scheme {

using namespace qsclab::linalg;
using sim::DensityState;
using sim::KrausChannel;
using sim::RegisterLayout;

namespace {

int id_register_qubits(std::size_t user_count) {
    const std::size_t pairs = user_count * user_count;
    int bits = 0;
    while ((1u << bits) < pairs) ++bits;
    return bits;
}

} // namespace

MultiUserWorld::MultiUserWorld(const QscParams& base, const std::vector<std::string>& ids,
                               Rng& rng)
    : base_(base),
      ids_(ids),
      id_dim_(1 << id_register_qubits(ids.size())),
      inner_(base.m + id_register_qubits(ids.size()), base.t) {
    if (ids_.empty()) throw std::invalid_argument("MultiUserWorld: no identities");
    for (const auto& id : ids_) {
        if (id.empty() || id.size() > kMaxUserIdLen)
            throw std::invalid_argument("MultiUserWorld: identity length out of range");
        QscScheme scheme(base_);
        if (!keys_.emplace(id, scheme.keygen(rng)).second)
            throw std::invalid_argument("MultiUserWorld: duplicate identity " + id);
    }
}

const crypto::ScVek& MultiUserWorld::vek_of(const std::string& id) const {
    return keypair_of(id).vek();
}

const QscKeypair& MultiUserWorld::keypair_of(const std::string& id) const {
    auto it = keys_.find(id);
    if (it == keys_.end()) throw std::invalid_argument("MultiUserWorld: unknown identity " + id);
    return it->second;
}

int MultiUserWorld::id_index(const std::string& id) const {
    for (std::size_t i = 0; i < ids_.size(); ++i)
        if (ids_[i] == id) return static_cast<int>(i);
    throw std::invalid_argument("MultiUserWorld: unknown identity " + id);
}

int MultiUserWorld::code_of(const std::string& sender, const std::string& receiver) const {
    return id_index(sender) * static_cast<int>(ids_.size()) + id_index(receiver);
}

RegisterLayout MultiUserWorld::message_layout() const {
    return RegisterLayout::single("M", 1 << base_.m);
}

RegisterLayout MultiUserWorld::cipher_layout() const { return inner_.cipher_layout(); }

std::pair<Bytes, KrausChannel> mu_sigenc_parts(const MultiUserWorld& world,
                                               const std::string& sender,
                                               const std::string& receiver, Rng& rng) {
    if (sender == receiver)
        throw std::invalid_argument("mu_sigenc: self-sends are not supported");
    const auto& inner = world.inner_auth();
    const auth::TrapAuthKey k = inner.keygen(rng);
    Bytes k_ser = k.serialize();
    const Bytes classical = crypto::sc_sigenc(world.keypair_of(sender).keys.sdk,
                                              world.vek_of(receiver), k_ser, rng);
    bytes::wipe(k_ser);

    // Attach the identity register |code> behind the payload, then encode.
    const int code = world.code_of(sender, receiver);
    const long dm = world.message_layout().total_dim();
    const long did = world.id_register_dim();
    const auto enc = inner.enc_channel(k);
    Mat attach = Mat::Zero(dm * did, dm);
    for (long a = 0; a < dm; ++a) attach(a * did + code, a) = 1.0;
    std::vector<Mat> ops;
    for (const auto& op : enc.kraus_ops()) ops.push_back(op * attach);
    return {classical,
            KrausChannel(std::move(ops), world.message_layout(), world.cipher_layout())};
}

MuCiphertext mu_sigenc(const MultiUserWorld& world, const std::string& sender,
                       const std::string& receiver, const sim::DensityState& rho, Rng& rng) {
    auto [classical, chan] = mu_sigenc_parts(world, sender, receiver, rng);
    return MuCiphertext{std::move(classical),
                        chan.apply(rho.with_layout(world.message_layout()))};
}

KrausChannel mu_verdec_channel(const MultiUserWorld& world, const std::string& sender,
                               const std::string& receiver, const Bytes& classical) {
    const auto& inner = world.inner_auth();
    const RegisterLayout msg = world.message_layout();
    auto k_ser = crypto::sc_verdec(world.vek_of(sender), world.keypair_of(receiver).keys.sdk,
                                   classical);
    auto reject = [&]() { return KrausChannel::reject_all(world.cipher_layout(), msg); };
    if (!k_ser) return reject();
    std::optional<auth::TrapAuthKey> key;
    try {
        key = auth::TrapAuthKey::deserialize(*k_ser);
    } catch (const std::exception&) {
        return reject();
    }
    if (key->m != inner.message_qubits() || key->t != inner.trap_qubits()) return reject();

    // Inner decode gives (M, ID) + bot; keep only the identity-matching
    // accept rows, everything else (wrong IDs, tripped traps) is routed to
    // |bot> by the completion.
    const long dm = msg.total_dim();
    const long did = world.id_register_dim();
    const long dt = 1L << inner.trap_qubits();
    const int code = world.code_of(sender, receiver);
    const Mat udag = key->clifford.unitary().adjoint();
    Mat keep = Mat::Zero(dm + 1, world.cipher_layout().total_dim());
    for (long a = 0; a < dm; ++a) keep.row(a) = udag.row((a * did + code) * dt);
    return KrausChannel::with_reject_completion({std::move(keep)}, world.cipher_layout(),
                                                msg.extended());
}

MuVerdict mu_verdec(const MultiUserWorld& world, const std::string& sender,
                    const std::string& receiver, const MuCiphertext& ct, Rng& rng) {
    auto chan = mu_verdec_channel(world, sender, receiver, ct.classical);
    auto out = chan.apply(ct.quantum.with_layout(world.cipher_layout()));
    MuVerdict verdict{sender, receiver, std::nullopt};
    // Sample the accept/reject branch to produce a definite outcome.
    const double p_rej = out.reject_weight();
    if (rng.uniform() < p_rej) return verdict;
    const long dm = world.message_layout().total_dim();
    Mat acc = out.matrix().topLeftCorner(dm, dm);
    const double tr = acc.trace().real();
    if (tr <= 1e-12) return verdict;
    verdict.plaintext = sim::DensityState(world.message_layout(), acc / tr);
    return verdict;
}

} // namespace qsclab::scheme
