#include "qsclab/trap_auth.hpp"

#include <stdexcept>

#include "qsclab/bytes.hpp"

namespace qsclab::auth {

using namespace qsclab::linalg;
using sim::KrausChannel;
using sim::RegisterLayout;

namespace {
constexpr std::uint8_t kKeyVersion = 1;
} // namespace

std::vector<std::uint8_t> TrapAuthKey::serialize() const {
    std::vector<std::uint8_t> out = {kKeyVersion, static_cast<std::uint8_t>(m),
                                     static_cast<std::uint8_t>(t)};
    const auto body = clifford.serialize();
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

TrapAuthKey TrapAuthKey::deserialize(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 4) throw std::invalid_argument("TrapAuthKey: truncated");
    if (bytes[0] != kKeyVersion) throw std::invalid_argument("TrapAuthKey: unknown version");
    const int m = bytes[1];
    const int t = bytes[2];
    std::vector<std::uint8_t> body(bytes.begin() + 3, bytes.end());
    auto clifford = cliff::CliffordElement::deserialize(body);
    if (clifford.qubits() != m + t)
        throw std::invalid_argument("TrapAuthKey: tableau size does not match m+t");
    return TrapAuthKey{std::move(clifford), m, t};
}

std::string TrapAuthKey::hex() const { return bytes::to_hex(serialize()); }

TrapAuthKey TrapAuthKey::from_hex(const std::string& text) {
    return deserialize(bytes::from_hex(text));
}

TrapAuthScheme::TrapAuthScheme(int m, int t) : TrapAuthScheme(m, t, false) {}

TrapAuthScheme::TrapAuthScheme(int m, int t, bool allow_no_traps) : m_(m), t_(t) {
    if (m_ < 1) throw std::invalid_argument("TrapAuthScheme: need at least one message qubit");
    if (t_ < 1 && !allow_no_traps)
        throw std::invalid_argument("TrapAuthScheme: need at least one trap qubit");
    if (t_ < 0 || m_ + t_ > 8)
        throw std::invalid_argument("TrapAuthScheme: m+t must stay within the 8-qubit cap");
}

TrapAuthScheme TrapAuthScheme::insecure_no_traps(int m) { return TrapAuthScheme(m, 0, true); }

RegisterLayout TrapAuthScheme::message_layout() const {
    return RegisterLayout::single("M", 1 << m_);
}

RegisterLayout TrapAuthScheme::cipher_layout() const {
    return RegisterLayout::single("C", 1 << (m_ + t_));
}

RegisterLayout TrapAuthScheme::output_layout() const { return message_layout().extended(); }

TrapAuthKey TrapAuthScheme::keygen(Rng& rng) const {
    return TrapAuthKey{cliff::random_clifford(m_ + t_, rng), m_, t_};
}

std::vector<TrapAuthKey> TrapAuthScheme::all_keys() const {
    if (!enumerable())
        throw std::invalid_argument("TrapAuthScheme: exact enumeration needs m+t <= 2");
    std::vector<TrapAuthKey> keys;
    for (auto& c : cliff::enumerate_clifford_group(m_ + t_))
        keys.push_back(TrapAuthKey{std::move(c), m_, t_});
    return keys;
}

KrausChannel TrapAuthScheme::enc_channel(const TrapAuthKey& k) const {
    if (k.m != m_ || k.t != t_) throw std::invalid_argument("enc_channel: key size mismatch");
    const long dm = 1L << m_;
    const long dt = 1L << t_;
    const Mat u = k.clifford.unitary();
    // isometry |a>_M -> C_k (|a> (x) |0^t>)
    Mat iso = Mat::Zero(dm * dt, dm);
    for (long a = 0; a < dm; ++a) iso.col(a) = u.col(a * dt);
    return KrausChannel({iso}, message_layout(), cipher_layout());
}

KrausChannel TrapAuthScheme::dec_channel(const TrapAuthKey& k) const {
    if (k.m != m_ || k.t != t_) throw std::invalid_argument("dec_channel: key size mismatch");
    const long dm = 1L << m_;
    const long dt = 1L << t_;
    const Mat udag = k.clifford.unitary().adjoint();
    // Accept branch: all traps read 0, trap register discarded; any nonzero
    // trap pattern is routed to |bot> by the completion.
    Mat acc = Mat::Zero(dm + 1, dm * dt);
    for (long a = 0; a < dm; ++a) acc.row(a) = udag.row(a * dt);
    return KrausChannel::with_reject_completion({std::move(acc)}, cipher_layout(),
                                                output_layout());
}

sim::DensityState TrapAuthScheme::enc(const TrapAuthKey& k, const sim::DensityState& rho) const {
    return enc_channel(k).apply(rho.with_layout(message_layout()));
}

sim::DensityState TrapAuthScheme::dec(const TrapAuthKey& k, const sim::DensityState& sigma) const {
    return dec_channel(k).apply(sigma.with_layout(cipher_layout()));
}

KrausChannel average_effective_channel(
    const std::function<KrausChannel(std::size_t)>& enc_of,
    const std::function<KrausChannel(std::size_t)>& dec_of,
    const sim::KrausChannel& attack, std::size_t key_count) {
    if (key_count == 0) throw std::invalid_argument("average_effective_channel: no keys");
    Mat mean;
    RegisterLayout in, out;
    for (std::size_t i = 0; i < key_count; ++i) {
        const auto eff = compose(dec_of(i), compose(attack, enc_of(i)));
        Mat j = choi(eff);
        if (i == 0) {
            mean = std::move(j);
            in = eff.in_layout();
            out = eff.out_layout();
        } else {
            mean += j;
        }
    }
    mean /= static_cast<double>(key_count);
    return channel_from_choi(mean, in, out);
}

KrausChannel effective_channel(const TrapAuthScheme& scheme, const sim::KrausChannel& attack,
                               const std::vector<TrapAuthKey>& keys) {
    if (keys.empty()) throw std::invalid_argument("effective_channel: empty key list");
    const long dc = scheme.cipher_layout().total_dim();
    const long attack_dim = attack.in_layout().total_dim();
    if (attack.in_layout().total_dim() != attack.out_layout().total_dim())
        throw std::invalid_argument("effective_channel: attack must preserve its space");
    if (attack_dim % dc != 0)
        throw std::invalid_argument("effective_channel: attack layout incompatible with cipher");
    const long db = attack_dim / dc;

    auto enc_of = [&](std::size_t i) {
        auto e = scheme.enc_channel(keys[i]);
        if (db == 1) return e;
        return tensor_id(e, RegisterLayout::single("B", static_cast<int>(db)));
    };
    auto dec_of = [&](std::size_t i) {
        auto d = scheme.dec_channel(keys[i]);
        if (db == 1) return d;
        return tensor_id(d, RegisterLayout::single("B", static_cast<int>(db)));
    };
    // With no side register the decoder's extended output keeps its layout.
    if (db == 1) {
        auto dec_flat = [&](std::size_t i) {
            auto d = scheme.dec_channel(keys[i]);
            return KrausChannel(d.kraus_ops(), d.in_layout(),
                                flatten_extended(d.out_layout()), d.trace_class());
        };
        return average_effective_channel(enc_of, dec_flat, attack, keys.size());
    }
    return average_effective_channel(enc_of, dec_of, attack, keys.size());
}

DnsFit dns_fit(const sim::KrausChannel& eff, long m_dim) {
    const long din = eff.in_dim();
    const long dout = eff.out_dim();
    if (din % m_dim != 0)
        throw std::invalid_argument("dns_fit: input dim not divisible by plaintext dim");
    const long b = din / m_dim;
    if (dout != (m_dim + 1) * b)
        throw std::invalid_argument("dns_fit: output is not (plaintext+bot) x side");
    const long d = m_dim;
    const long dbig = m_dim + 1;
    const Mat j = choi(eff);

    auto row_of = [&](long im, long ib, long om, long ob) {
        return (im * b + ib) * (dbig * b) + om * b + ob;
    };

    // Accept block: project the (M_in, M_out) factors onto |phi+>.
    Mat j_acc = Mat::Zero(b * b, b * b);
    for (long ib = 0; ib < b; ++ib)
        for (long ob = 0; ob < b; ++ob)
            for (long jb = 0; jb < b; ++jb)
                for (long pb = 0; pb < b; ++pb) {
                    cplx acc = 0;
                    for (long im = 0; im < d; ++im)
                        for (long jm = 0; jm < d; ++jm)
                            acc += j(row_of(im, ib, im, ob), row_of(jm, jb, jm, pb));
                    j_acc(ib * b + ob, jb * b + pb) = acc / static_cast<double>(d);
                }

    // Reject block: bot-bot output, traced over the plaintext input.
    Mat j_rej = Mat::Zero(b * b, b * b);
    for (long ib = 0; ib < b; ++ib)
        for (long ob = 0; ob < b; ++ob)
            for (long jb = 0; jb < b; ++jb)
                for (long pb = 0; pb < b; ++pb) {
                    cplx acc = 0;
                    for (long im = 0; im < d; ++im)
                        acc += j(row_of(im, ib, d, ob), row_of(im, jb, d, pb));
                    j_rej(ib * b + ob, jb * b + pb) = acc;
                }

    // Rebuild the simulator Choi and take the trace norm of the remainder.
    Mat j_sim = Mat::Zero(j.rows(), j.cols());
    for (long im = 0; im < d; ++im)
        for (long jm = 0; jm < d; ++jm)
            for (long ib = 0; ib < b; ++ib)
                for (long ob = 0; ob < b; ++ob)
                    for (long jb = 0; jb < b; ++jb)
                        for (long pb = 0; pb < b; ++pb) {
                            const cplx acc_term = j_acc(ib * b + ob, jb * b + pb) /
                                                  static_cast<double>(d);
                            j_sim(row_of(im, ib, im, ob), row_of(jm, jb, jm, pb)) += acc_term;
                            if (im == jm) {
                                j_sim(row_of(im, ib, d, ob), row_of(im, jb, d, pb)) +=
                                    j_rej(ib * b + ob, jb * b + pb) / static_cast<double>(d);
                            }
                        }

    const double residual = trace_norm_hermitian(j - j_sim);
    const RegisterLayout side = RegisterLayout::single("B", static_cast<int>(b));
    DnsFit fit{j_acc.trace().real(), channel_from_choi(j_acc, side, side),
               channel_from_choi(j_rej, side, side), residual};
    return fit;
}

} // namespace qsclab::auth
