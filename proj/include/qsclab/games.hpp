#pragma once

#include <functional>
#include <map>

#include "qsclab/derived.hpp"
#include "qsclab/multiuser.hpp"
#include "qsclab/sim_context.hpp"

namespace qsclab::games {

enum class Verdict { real, ideal, win, rej, cheat };
std::string verdict_name(Verdict v);

struct OracleCall {
    std::string oracle;
    std::string note;
};

struct GameOutcome {
    Verdict verdict;
    std::vector<OracleCall> transcript;
    std::uint64_t seed = 0;
    bool saw_reject = false;         // some decrypt output collapsed to |bot>
    bool cheat_before_coin = false;  // replay detection fired pre-coin
};

struct GameConfig {
    scheme::QscParams params;
    int max_oracle_calls = 64;
    /// Strengthened variant: adversary-selected oracle key parameters
    /// (off by default).
    bool allow_adversary_keys = false;
};

struct OracleBudgetExceeded : std::runtime_error {
    OracleBudgetExceeded() : std::runtime_error("oracle budget exceeded") {}
};

/// Two-sided Hoeffding radius sqrt(ln(2/alpha) / (2 trials)).
double hoeffding_radius(int trials, double alpha);

struct AdvantageEstimate {
    double p_a = 0;
    double p_b = 0;
    double estimate = 0;
    double radius = 0;
    int trials = 0;
    double alpha = 0;
    std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// Outsider games (two-user, many-time), symmetric-key analogues included.
// ---------------------------------------------------------------------------

/// Ciphertext handle inside a game: classical bytes plus the label of the
/// quantum register living in the game's context.
struct CtHandle {
    Bytes classical;
    std::string quantum;
    int serial = 0;
};

/// Oracle surface shared by the real and ideal worlds. The adversary drives
/// this interface and finally returns a real/ideal guess.
class OutsiderEnv {
public:
    virtual ~OutsiderEnv() = default;

    SimContext& ctx() { return ctx_; }
    Rng& rng() { return *rng_; }
    const scheme::QscParams& params() const { return cfg_->params; }
    int cipher_dim() const { return 1 << (cfg_->params.m + cfg_->params.t); }
    int message_dim() const { return 1 << cfg_->params.m; }

    virtual CtHandle oracle_sigenc(const std::string& plaintext_label) = 0;
    /// Consumes the handle's quantum register; returns the label of the
    /// reject-extended output register (dimension message_dim + 1).
    virtual std::string oracle_verdec(const CtHandle& ct) = 0;

    /// Strengthened variant (config flag): the adversary supplies the key
    /// parameters of an oracle call. Disabled by default.
    virtual CtHandle oracle_sigenc_as(const scheme::QscKeypair& sender,
                                      const crypto::ScVek& receiver_vek,
                                      const std::string& plaintext_label);
    virtual std::string oracle_verdec_as(const crypto::ScVek& sender_vek,
                                         const scheme::QscKeypair& receiver,
                                         const CtHandle& ct);

    /// Sample the accept-vs-reject instrument on a verdec output register.
    /// Returns 1 when the register collapsed to |bot>.
    int measure_reject(const std::string& out_label);

    /// Adversary-side projective test (logged); outcome 1 = projector fired.
    int measure(const Mat& projector, const std::vector<std::string>& on);

    const std::vector<OracleCall>& transcript() const { return transcript_; }
    bool saw_reject() const { return saw_reject_; }

protected:
    OutsiderEnv(const GameConfig& cfg, Rng& rng);
    void charge_budget();
    void log(const std::string& oracle, const std::string& note);
    std::string fresh(const std::string& stem);

    const GameConfig* cfg_;
    Rng* rng_;
    SimContext ctx_;
    std::vector<OracleCall> transcript_;
    int used_calls_ = 0;
    int label_counter_ = 0;
    bool saw_reject_ = false;
};

using OutsiderAdversary = std::function<Verdict(OutsiderEnv&)>;

GameOutcome run_out_real(const GameConfig& cfg, const OutsiderAdversary& adv,
                         std::uint64_t seed);
GameOutcome run_out_ideal(const GameConfig& cfg, const OutsiderAdversary& adv,
                          std::uint64_t seed);

/// Symmetric-key analogues: the oracles wrap Enc_k / Dec_k of the sharp
/// symmetric scheme under a single hidden key.
GameOutcome run_qae_real(const GameConfig& cfg, const OutsiderAdversary& adv,
                         std::uint64_t seed);
GameOutcome run_wqae_ideal(const GameConfig& cfg, const OutsiderAdversary& adv,
                           std::uint64_t seed);

// ---------------------------------------------------------------------------
// Multi-user outsider games.
// ---------------------------------------------------------------------------

struct MultiUserAdversary {
    std::string name;
    /// Sees the full public table, names a (sender, receiver) target pair.
    std::function<std::pair<std::string, std::string>(const scheme::MultiUserWorld&, Rng&)>
        choose_pair;
    /// Plays the remaining two-user game; receives the world (the harness has
    /// already handed over all non-target secret keys by exposing it) plus
    /// the standard oracle surface for the chosen pair.
    std::function<Verdict(OutsiderEnv&, const scheme::MultiUserWorld&,
                          const std::string& s, const std::string& r)>
        play;
};

GameOutcome run_m_out_real(const GameConfig& cfg, const std::vector<std::string>& ids,
                           const MultiUserAdversary& adv, std::uint64_t seed);
GameOutcome run_m_out_ideal(const GameConfig& cfg, const std::vector<std::string>& ids,
                            const MultiUserAdversary& adv, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Insider games on the derived public-key scheme.
// ---------------------------------------------------------------------------

class CcaEnv {
public:
    CcaEnv(const GameConfig& cfg, Rng& rng, const scheme::DerivedPkqe& pkqe);
    virtual ~CcaEnv() = default;

    SimContext& ctx() { return ctx_; }
    Rng& rng() { return *rng_; }
    int message_dim() const { return 1 << cfg_->params.m; }

    /// Encryption under the public key (the adversary holds ek).
    CtHandle encrypt(const std::string& plaintext_label);
    /// Decryption oracle; pre-challenge this is plain Dec in both games.
    virtual std::string oracle_dec(const CtHandle& ct) = 0;

    int measure_reject(const std::string& out_label);
    int measure(const Mat& projector, const std::vector<std::string>& on);
    const std::vector<OracleCall>& transcript() const { return transcript_; }

protected:
    void charge_budget();
    void log(const std::string& oracle, const std::string& note);
    std::string fresh(const std::string& stem);

    const GameConfig* cfg_;
    Rng* rng_;
    const scheme::DerivedPkqe* pkqe_;
    SimContext ctx_;
    std::vector<OracleCall> transcript_;
    int used_calls_ = 0;
    int label_counter_ = 0;
};

struct CcaAdversary {
    std::string name;
    /// Phase 1: prepare the challenge register (may keep side registers in
    /// the context, may query the decryption oracle). Returns the label.
    std::function<std::string(CcaEnv&)> prepare_challenge;
    /// Phase 2: given the challenge ciphertext handle, output a guess bit.
    std::function<int(CcaEnv&, const CtHandle&)> guess;
};

/// Coin b; challenge is Enc(M) (b=0) or Enc(tau) (b=1); win iff guess == b.
GameOutcome run_qcca2_test(const GameConfig& cfg, const CcaAdversary& adv, std::uint64_t seed);
/// Challenge replaced by a Bell half; replay detection aborts with cheat;
/// otherwise a fair coin decides cheat/rej.
GameOutcome run_qwcca2_fake(const GameConfig& cfg, const CcaAdversary& adv, std::uint64_t seed);

// ---------------------------------------------------------------------------
// One-time outsider experiment with the effective-map probe.
// ---------------------------------------------------------------------------

struct OneTimeAdversary {
    std::string name;
    /// Prepare the plaintext (and optional side register) in the context;
    /// returns (plaintext label, optional side label).
    std::function<std::pair<std::string, std::optional<std::string>>(SimContext&, Rng&)> prepare;
    /// Attack channel on the ciphertext (+ side) registers.
    std::function<sim::KrausChannel(const crypto::ScVek& vek_s, const crypto::ScVek& vek_r,
                                    const sim::RegisterLayout& cipher, Rng&)>
        attack;
    /// Optional tampering of the classical ciphertext part (identity if unset).
    std::function<Bytes(const Bytes&, Rng&)> classical_tamper;
};

struct OneTimeOutsiderResult {
    GameOutcome outcome;
    sim::DensityState final_output;  // reject-extended plaintext register
    std::optional<auth::DnsFit> probe;  // enumerable sizes, cipher-only attacks
};

OneTimeOutsiderResult run_one_time_outsider(const GameConfig& cfg, const OneTimeAdversary& adv,
                                            std::uint64_t seed, bool probe_effective_map);

// ---------------------------------------------------------------------------
// Advantage estimation and reports.
// ---------------------------------------------------------------------------

AdvantageEstimate estimate_advantage(const std::function<GameOutcome(std::uint64_t)>& game_a,
                                     const std::function<GameOutcome(std::uint64_t)>& game_b,
                                     int trials, double alpha, std::uint64_t seed);

struct GameReport {
    std::string game;
    int trials = 0;
    double estimate = 0;
    double radius = 0;
    std::uint64_t seed = 0;
    std::map<std::string, int> per_outcome_counts;
    bool bounds_hold = true;
    std::string bound_note;

    std::string to_json() const;
};

/// Per-trial seed derivation (splitmix-style) used by every runner.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

} // namespace qsclab::games
