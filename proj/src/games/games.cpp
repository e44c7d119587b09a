#include "qsclab/games.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace qsclab::games {

using namespace qsclab::linalg;
using scheme::QscScheme;
using sim::KrausChannel;

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::real: return "real";
        case Verdict::ideal: return "ideal";
        case Verdict::win: return "win";
        case Verdict::rej: return "rej";
        case Verdict::cheat: return "cheat";
    }
    return "?";
}

double hoeffding_radius(int trials, double alpha) {
    if (trials < 1 || alpha <= 0 || alpha >= 1)
        throw std::invalid_argument("hoeffding_radius: bad arguments");
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * trials));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Outsider environments.
// ---------------------------------------------------------------------------

OutsiderEnv::OutsiderEnv(const GameConfig& cfg, Rng& rng) : cfg_(&cfg), rng_(&rng) {}

void OutsiderEnv::charge_budget() {
    if (++used_calls_ > cfg_->max_oracle_calls) throw OracleBudgetExceeded();
}

void OutsiderEnv::log(const std::string& oracle, const std::string& note) {
    transcript_.push_back({oracle, note});
}

std::string OutsiderEnv::fresh(const std::string& stem) {
    return stem + std::to_string(label_counter_++);
}

CtHandle OutsiderEnv::oracle_sigenc_as(const scheme::QscKeypair&, const crypto::ScVek&,
                                       const std::string&) {
    throw std::runtime_error("adversary-selected oracle keys are disabled in this game");
}

std::string OutsiderEnv::oracle_verdec_as(const crypto::ScVek&, const scheme::QscKeypair&,
                                          const CtHandle&) {
    throw std::runtime_error("adversary-selected oracle keys are disabled in this game");
}

int OutsiderEnv::measure_reject(const std::string& out_label) {
    const int d = ctx_.dim_of(out_label);
    Mat proj = Mat::Zero(d, d);
    proj(d - 1, d - 1) = 1.0;  // reject direction of an extended register
    if (d == message_dim()) proj.setZero();
    const int outcome = ctx_.measure(proj, {out_label}, *rng_);
    if (outcome == 1) saw_reject_ = true;
    log("measure", outcome == 1 ? "reject" : "accept");
    return outcome;
}

int OutsiderEnv::measure(const Mat& projector, const std::vector<std::string>& on) {
    const int outcome = ctx_.measure(projector, on, *rng_);
    log("measure", "outcome=" + std::to_string(outcome));
    return outcome;
}

namespace {

/// Keyed wire shared by the real worlds (public-key and symmetric-key).
struct Wire {
    std::function<std::pair<Bytes, KrausChannel>(Rng&)> enc_parts;
    std::function<KrausChannel(const Bytes&)> dec_channel;
};

class RealOutsiderEnv final : public OutsiderEnv {
public:
    RealOutsiderEnv(const GameConfig& cfg, Rng& rng, Wire wire)
        : OutsiderEnv(cfg, rng), wire_(std::move(wire)) {}

    CtHandle oracle_sigenc(const std::string& plaintext_label) override {
        charge_budget();
        auto [classical, enc] = wire_.enc_parts(*rng_);
        const std::string ct = fresh("ct");
        ctx_.apply(enc, {plaintext_label}, {ct});
        log("sigenc", plaintext_label + "->" + ct);
        return CtHandle{std::move(classical), ct, used_calls_};
    }

    std::string oracle_verdec(const CtHandle& ct) override {
        charge_budget();
        const std::string out = fresh("out");
        ctx_.apply(wire_.dec_channel(ct.classical), {ct.quantum}, {out});
        log("verdec", ct.quantum + "->" + out);
        return out;
    }

private:
    Wire wire_;
};

class IdealOutsiderEnv final : public OutsiderEnv {
public:
    IdealOutsiderEnv(const GameConfig& cfg, Rng& rng, Wire wire)
        : OutsiderEnv(cfg, rng), wire_(std::move(wire)) {}

    CtHandle oracle_sigenc(const std::string& plaintext_label) override {
        charge_budget();
        const int d = message_dim();
        const std::string mp = fresh("Mp");
        const std::string ms = fresh("Ms");
        ctx_.add_bell(mp, ms, d);
        // The submitted plaintext register is moved into the store untouched.
        const std::string stored = fresh("stored");
        ctx_.rename(plaintext_label, stored);
        store_.push_back({ms, stored, false});
        auto [classical, enc] = wire_.enc_parts(*rng_);
        const std::string ct = fresh("ct");
        ctx_.apply(enc, {mp}, {ct});
        log("sigenc", plaintext_label + "->" + ct + " (entangled trap stored)");
        return CtHandle{std::move(classical), ct, used_calls_};
    }

    std::string oracle_verdec(const CtHandle& ct) override {
        charge_budget();
        const int d = message_dim();
        const std::string v = fresh("dec");
        ctx_.apply(wire_.dec_channel(ct.classical), {ct.quantum}, {v});
        // Insertion-order scan; first Bell pass wins.
        const Mat pass = bell_pass_projector_ext(d);
        for (auto& entry : store_) {
            const int outcome = ctx_.measure(pass, {v, entry.bell_half}, *rng_);
            if (outcome == 1) {
                ctx_.discard(v);
                const std::string out = fresh("out");
                if (!entry.handed_over) {
                    // Return the stored plaintext, embedded to the extended dim.
                    ctx_.apply(KrausChannel::embed(sim::RegisterLayout::single("M", d)),
                               {entry.stored}, {out});
                    entry.handed_over = true;
                } else {
                    ctx_.add_state(out, sim::make_reject(sim::RegisterLayout::single("M", d)));
                }
                log("verdec", "replay matched; stored plaintext returned");
                return out;
            }
        }
        ctx_.discard(v);
        const std::string out = fresh("out");
        ctx_.add_state(out, sim::make_reject(sim::RegisterLayout::single("M", d)));
        log("verdec", "no match; reject");
        return out;
    }

    std::size_t store_size() const { return store_.size(); }

private:
    struct Entry {
        std::string bell_half;
        std::string stored;
        bool handed_over;
    };
    Wire wire_;
    std::vector<Entry> store_;
};

Wire qsc_wire(const QscScheme& scheme, const scheme::QscKeypair& s,
              const scheme::QscKeypair& r) {
    Wire w;
    w.enc_parts = [&scheme, &s, &r](Rng& rng) { return scheme.sigenc_parts(s, r.vek(), rng); };
    w.dec_channel = [&scheme, &s, &r](const Bytes& classical) {
        return scheme.verdec_channel(s.vek(), r, classical);
    };
    return w;
}

GameOutcome finish(Verdict verdict, const OutsiderEnv& env, std::uint64_t seed) {
    GameOutcome out;
    out.verdict = verdict;
    out.transcript = env.transcript();
    out.seed = seed;
    out.saw_reject = env.saw_reject();
    return out;
}

} // namespace

GameOutcome run_out_real(const GameConfig& cfg, const OutsiderAdversary& adv,
                         std::uint64_t seed) {
    Rng rng(seed);
    QscScheme scheme(cfg.params);
    auto s = scheme.keygen(rng);
    auto r = scheme.keygen(rng);
    RealOutsiderEnv env(cfg, rng, qsc_wire(scheme, s, r));
    const Verdict verdict = adv(env);
    return finish(verdict, env, seed);
}

GameOutcome run_out_ideal(const GameConfig& cfg, const OutsiderAdversary& adv,
                          std::uint64_t seed) {
    Rng rng(seed);
    QscScheme scheme(cfg.params);
    auto s = scheme.keygen(rng);
    auto r = scheme.keygen(rng);
    IdealOutsiderEnv env(cfg, rng, qsc_wire(scheme, s, r));
    const Verdict verdict = adv(env);
    return finish(verdict, env, seed);
}

GameOutcome run_qae_real(const GameConfig& cfg, const OutsiderAdversary& adv,
                         std::uint64_t seed) {
    Rng rng(seed);
    scheme::SharpSkqe skqe(cfg.params);
    auto key = skqe.keygen(rng);
    Wire w;
    w.enc_parts = [&skqe, key](Rng& r) { return skqe.enc_parts(key, r); };
    w.dec_channel = [&skqe, key](const Bytes& c) { return skqe.dec_channel(key, c); };
    RealOutsiderEnv env(cfg, rng, std::move(w));
    const Verdict verdict = adv(env);
    return finish(verdict, env, seed);
}

GameOutcome run_wqae_ideal(const GameConfig& cfg, const OutsiderAdversary& adv,
                           std::uint64_t seed) {
    Rng rng(seed);
    scheme::SharpSkqe skqe(cfg.params);
    auto key = skqe.keygen(rng);
    Wire w;
    w.enc_parts = [&skqe, key](Rng& r) { return skqe.enc_parts(key, r); };
    w.dec_channel = [&skqe, key](const Bytes& c) { return skqe.dec_channel(key, c); };
    IdealOutsiderEnv env(cfg, rng, std::move(w));
    const Verdict verdict = adv(env);
    return finish(verdict, env, seed);
}

GameOutcome run_m_out_real(const GameConfig& cfg, const std::vector<std::string>& ids,
                           const MultiUserAdversary& adv, std::uint64_t seed) {
    Rng rng(seed);
    scheme::MultiUserWorld world(cfg.params, ids, rng);
    auto [s, r] = adv.choose_pair(world, rng);
    if (s == r) throw std::invalid_argument("run_m_out_real: sender == receiver not allowed");
    Wire w;
    w.enc_parts = [&world, s, r](Rng& rr) { return mu_sigenc_parts(world, s, r, rr); };
    w.dec_channel = [&world, s, r](const Bytes& c) {
        return mu_verdec_channel(world, s, r, c);
    };
    RealOutsiderEnv env(cfg, rng, std::move(w));
    const Verdict verdict = adv.play(env, world, s, r);
    return finish(verdict, env, seed);
}

GameOutcome run_m_out_ideal(const GameConfig& cfg, const std::vector<std::string>& ids,
                            const MultiUserAdversary& adv, std::uint64_t seed) {
    Rng rng(seed);
    scheme::MultiUserWorld world(cfg.params, ids, rng);
    auto [s, r] = adv.choose_pair(world, rng);
    if (s == r) throw std::invalid_argument("run_m_out_ideal: sender == receiver not allowed");
    Wire w;
    w.enc_parts = [&world, s, r](Rng& rr) { return mu_sigenc_parts(world, s, r, rr); };
    w.dec_channel = [&world, s, r](const Bytes& c) {
        return mu_verdec_channel(world, s, r, c);
    };
    IdealOutsiderEnv env(cfg, rng, std::move(w));
    const Verdict verdict = adv.play(env, world, s, r);
    return finish(verdict, env, seed);
}

// ---------------------------------------------------------------------------
// Insider (derived public-key) games.
// ---------------------------------------------------------------------------

CcaEnv::CcaEnv(const GameConfig& cfg, Rng& rng, const scheme::DerivedPkqe& pkqe)
    : cfg_(&cfg), rng_(&rng), pkqe_(&pkqe) {}

void CcaEnv::charge_budget() {
    if (++used_calls_ > cfg_->max_oracle_calls) throw OracleBudgetExceeded();
}

void CcaEnv::log(const std::string& oracle, const std::string& note) {
    transcript_.push_back({oracle, note});
}

std::string CcaEnv::fresh(const std::string& stem) {
    return stem + std::to_string(label_counter_++);
}

CtHandle CcaEnv::encrypt(const std::string& plaintext_label) {
    charge_budget();
    auto [classical, enc] = pkqe_->enc_parts(*rng_);
    const std::string ct = fresh("ct");
    ctx_.apply(enc, {plaintext_label}, {ct});
    log("enc", plaintext_label + "->" + ct);
    return CtHandle{std::move(classical), ct, used_calls_};
}

int CcaEnv::measure_reject(const std::string& out_label) {
    const int d = ctx_.dim_of(out_label);
    Mat proj = Mat::Zero(d, d);
    proj(d - 1, d - 1) = 1.0;
    if (d == message_dim()) proj.setZero();
    const int outcome = ctx_.measure(proj, {out_label}, *rng_);
    log("measure", outcome == 1 ? "reject" : "accept");
    return outcome;
}

int CcaEnv::measure(const Mat& projector, const std::vector<std::string>& on) {
    const int outcome = ctx_.measure(projector, on, *rng_);
    log("measure", "outcome=" + std::to_string(outcome));
    return outcome;
}

namespace {

class TestCcaEnv final : public CcaEnv {
public:
    using CcaEnv::CcaEnv;
    std::string oracle_dec(const CtHandle& ct) override {
        charge_budget();
        const std::string out = fresh("dec");
        ctx_.apply(pkqe_->dec_channel(ct.classical), {ct.quantum}, {out});
        log("dec", ct.quantum + "->" + out);
        return out;
    }
};

struct CheatDetected {};

class FakeCcaEnv final : public CcaEnv {
public:
    using CcaEnv::CcaEnv;

    void arm(const std::string& bell_half) { bell_half_ = bell_half; }

    std::string oracle_dec(const CtHandle& ct) override {
        charge_budget();
        const std::string out = fresh("dec");
        ctx_.apply(pkqe_->dec_channel(ct.classical), {ct.quantum}, {out});
        log("dec", ct.quantum + "->" + out);
        if (bell_half_.has_value()) {
            const int d = message_dim();
            const int outcome = ctx_.measure(bell_pass_projector_ext(d), {out, *bell_half_},
                                             *rng_);
            if (outcome == 1) {
                log("dec", "challenge replay detected");
                throw CheatDetected{};
            }
        }
        return out;
    }

private:
    std::optional<std::string> bell_half_;
};

} // namespace

GameOutcome run_qcca2_test(const GameConfig& cfg, const CcaAdversary& adv, std::uint64_t seed) {
    Rng rng(seed);
    QscScheme scheme(cfg.params);
    auto pkqe = scheme::derive_pkqe(scheme, rng);
    TestCcaEnv env(cfg, rng, pkqe);
    const int b = rng.bit() ? 1 : 0;

    const std::string m = adv.prepare_challenge(env);
    CtHandle challenge{{}, "", 0};
    if (b == 0) {
        auto [classical, enc] = pkqe.enc_parts(rng);
        env.ctx().apply(enc, {m}, {"challengeC"});
        challenge = CtHandle{std::move(classical), "challengeC", 0};
    } else {
        env.ctx().discard(m);
        env.ctx().add_state("tau", sim::DensityState::maximally_mixed(
                                       sim::RegisterLayout::single("M", 1 << cfg.params.m)));
        auto [classical, enc] = pkqe.enc_parts(rng);
        env.ctx().apply(enc, {"tau"}, {"challengeC"});
        challenge = CtHandle{std::move(classical), "challengeC", 0};
    }
    const int guess = adv.guess(env, challenge);
    GameOutcome out;
    out.verdict = guess == b ? Verdict::win : Verdict::rej;
    out.transcript = env.transcript();
    out.seed = seed;
    return out;
}

GameOutcome run_qwcca2_fake(const GameConfig& cfg, const CcaAdversary& adv, std::uint64_t seed) {
    Rng rng(seed);
    QscScheme scheme(cfg.params);
    auto pkqe = scheme::derive_pkqe(scheme, rng);
    FakeCcaEnv env(cfg, rng, pkqe);

    const std::string m = adv.prepare_challenge(env);
    env.ctx().discard(m);
    const int d = 1 << cfg.params.m;
    env.ctx().add_bell("Mp", "Ms", d);
    auto [classical, enc] = pkqe.enc_parts(rng);
    env.ctx().apply(enc, {"Mp"}, {"challengeC"});
    env.arm("Ms");
    CtHandle challenge{std::move(classical), "challengeC", 0};

    GameOutcome out;
    out.seed = seed;
    try {
        (void)adv.guess(env, challenge);
    } catch (const CheatDetected&) {
        out.verdict = Verdict::cheat;
        out.cheat_before_coin = true;
        out.transcript = env.transcript();
        return out;
    }
    out.transcript = env.transcript();
    out.verdict = rng.bit() ? Verdict::cheat : Verdict::rej;
    return out;
}

// ---------------------------------------------------------------------------
// One-time outsider experiment.
// ---------------------------------------------------------------------------

OneTimeOutsiderResult run_one_time_outsider(const GameConfig& cfg, const OneTimeAdversary& adv,
                                            std::uint64_t seed, bool probe_effective_map) {
    Rng rng(seed);
    QscScheme scheme(cfg.params);
    auto s = scheme.keygen(rng);
    auto r = scheme.keygen(rng);

    SimContext ctx;
    auto [m_label, b_label] = adv.prepare(ctx, rng);
    auto [classical, enc] = scheme.sigenc_parts(s, r.vek(), rng);
    ctx.apply(enc, {m_label}, {"C"});

    const auto attack =
        adv.attack(s.vek(), r.vek(), scheme.cipher_layout(), rng);
    const bool cipher_only = attack.in_dim() == scheme.cipher_layout().total_dim();
    std::vector<std::string> attack_regs = {"C"};
    if (!cipher_only) {
        if (!b_label) throw std::invalid_argument("one-time attack needs the side register");
        attack_regs.push_back(*b_label);
    }
    std::vector<std::string> attack_out = attack_regs;
    ctx.apply(attack, attack_regs, attack_out);

    Bytes tampered_classical =
        adv.classical_tamper ? adv.classical_tamper(classical, rng) : classical;
    ctx.apply(scheme.verdec_channel(s.vek(), r, tampered_classical), {"C"}, {"out"});

    OneTimeOutsiderResult result{GameOutcome{}, ctx.peek({"out"}), std::nullopt};
    result.outcome.seed = seed;
    const int d = 1 << cfg.params.m;
    Mat rej_proj = Mat::Zero(d + 1, d + 1);
    rej_proj(d, d) = 1.0;
    const int rejected = ctx.measure(rej_proj, {"out"}, rng);
    result.outcome.saw_reject = rejected == 1;
    result.outcome.verdict = rejected == 1 ? Verdict::rej : Verdict::win;

    if (probe_effective_map && cipher_only && scheme.qauth().enumerable()) {
        auto keys = scheme.qauth().all_keys();
        auto eff = auth::effective_channel(scheme.qauth(), attack, keys);
        result.probe = auth::dns_fit(eff, d);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Estimation and reports.
// ---------------------------------------------------------------------------

AdvantageEstimate estimate_advantage(const std::function<GameOutcome(std::uint64_t)>& game_a,
                                     const std::function<GameOutcome(std::uint64_t)>& game_b,
                                     int trials, double alpha, std::uint64_t seed) {
    if (trials < 10) throw std::invalid_argument("estimate_advantage: need at least 10 trials");
    int real_a = 0, real_b = 0;
    for (int i = 0; i < trials; ++i) {
        if (game_a(derive_seed(seed, 2 * i)).verdict == Verdict::real) ++real_a;
        if (game_b(derive_seed(seed, 2 * i + 1)).verdict == Verdict::real) ++real_b;
    }
    AdvantageEstimate est;
    est.p_a = static_cast<double>(real_a) / trials;
    est.p_b = static_cast<double>(real_b) / trials;
    est.estimate = std::abs(est.p_a - est.p_b);
    est.radius = hoeffding_radius(trials, alpha);
    est.trials = trials;
    est.alpha = alpha;
    est.seed = seed;
    return est;
}

std::string GameReport::to_json() const {
    nlohmann::json j;
    j["game"] = game;
    j["trials"] = trials;
    j["estimate"] = estimate;
    j["radius"] = radius;
    j["seed"] = seed;
    j["per_outcome_counts"] = per_outcome_counts;
    j["bounds_hold"] = bounds_hold;
    if (!bound_note.empty()) j["bound_note"] = bound_note;
    return j.dump(2);
}

} // namespace qsclab::games
