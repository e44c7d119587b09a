#pragma once

#include <functional>

#include "qsclab/channel.hpp"
#include "qsclab/clifford.hpp"

namespace qsclab::auth {

/// One-time authentication key: a Clifford on m message qubits plus t traps.
struct TrapAuthKey {
    cliff::CliffordElement clifford;
    int m;
    int t;

    /// [version u8][m u8][t u8][tableau + phase bits]
    std::vector<std::uint8_t> serialize() const;
    static TrapAuthKey deserialize(const std::vector<std::uint8_t>& bytes);
    std::string hex() const;
    static TrapAuthKey from_hex(const std::string& text);

    bool operator==(const TrapAuthKey&) const = default;
};

/// Clifford trap-code scheme: Enc_k(rho) = C_k (rho (x) |0^t><0^t|) C_k^dag,
/// Dec_k undoes C_k and rejects unless every trap measures 0.
class TrapAuthScheme {
public:
    TrapAuthScheme(int m, int t);

    /// Trap-free variant (never rejects); deliberately insecure, used as a
    /// counterexample target by the game falsifiers.
    static TrapAuthScheme insecure_no_traps(int m);

    int message_qubits() const { return m_; }
    int trap_qubits() const { return t_; }
    int total_qubits() const { return m_ + t_; }
    bool enumerable() const { return total_qubits() <= 2; }

    sim::RegisterLayout message_layout() const;        // single block "M"
    sim::RegisterLayout cipher_layout() const;         // single block "C"
    sim::RegisterLayout output_layout() const;         // "M" reject-extended

    TrapAuthKey keygen(Rng& rng) const;
    std::vector<TrapAuthKey> all_keys() const;         // enumerable sizes only

    sim::KrausChannel enc_channel(const TrapAuthKey& k) const;
    sim::KrausChannel dec_channel(const TrapAuthKey& k) const;

    sim::DensityState enc(const TrapAuthKey& k, const sim::DensityState& rho) const;
    sim::DensityState dec(const TrapAuthKey& k, const sim::DensityState& sigma) const;

private:
    TrapAuthScheme(int m, int t, bool allow_no_traps);
    int m_;
    int t_;
};

/// Best decomposition of an effective map into id_M (x) acc + |bot><bot| (x) rej,
/// read off the corresponding Choi blocks.
struct DnsFit {
    double p_acc;
    sim::KrausChannel acc_channel;
    sim::KrausChannel rej_channel;
    double residual;
};

/// Key-averaged effective map E_k[dec_k o attack o enc_k]. The attack acts on
/// the ciphertext together with an optional adversary side register B (the
/// attack's input layout must be cipher (+) side). Exact average over `keys`.
sim::KrausChannel effective_channel(const TrapAuthScheme& scheme,
                                    const sim::KrausChannel& attack,
                                    const std::vector<TrapAuthKey>& keys);

/// Generic keyed-channel average used by the trap scheme and by game probes.
sim::KrausChannel average_effective_channel(
    const std::function<sim::KrausChannel(std::size_t)>& enc_of,
    const std::function<sim::KrausChannel(std::size_t)>& dec_of,
    const sim::KrausChannel& attack, std::size_t key_count);

/// `eff` must map (M (+) B) to ((M + bot) (+) B) with the plaintext block
/// first; m_dim is the plaintext dimension (block size m_dim + 1 on output).
DnsFit dns_fit(const sim::KrausChannel& eff, long m_dim);

} // namespace qsclab::auth
