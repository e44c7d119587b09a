// Command-line front end: key management, file-based signcryption of
// product-state messages, the experiment runner, and attack demonstrations.
//
// Exit codes: 0 success / bounds hold, 1 usage error, 2 cryptographic
// reject, 3 malformed input, 4 asserted bounds violated.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsclab/adversaries.hpp"
#include "qsclab/impossibility.hpp"
#include "qsclab/state_io.hpp"

using namespace qsclab;
using nlohmann::json;
namespace fs = std::filesystem;
namespace advs = games::adversaries;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitReject = 2;
constexpr int kExitMalformed = 3;
constexpr int kExitBounds = 4;

struct MalformedInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << text;
}

std::string read_text(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw MalformedInput("cannot open: " + path);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

void write_key_file(const std::string& path, const std::string& kind, const Bytes& payload) {
    write_text(path, "qsclab-" + kind + "-v1\n" + bytes::to_hex(payload) + "\n");
}

Bytes read_key_file(const std::string& path, const std::string& kind) {
    std::istringstream in(read_text(path));
    std::string header, hex;
    std::getline(in, header);
    std::getline(in, hex);
    if (header != "qsclab-" + kind + "-v1")
        throw MalformedInput("unexpected key header in " + path + ": " + header);
    return bytes::from_hex(hex);
}

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t value) {
    if (opt->count() > 0) return value;
    if (const char* env = std::getenv("QSC_LAB_SEED")) return std::strtoull(env, nullptr, 10);
    throw CLI::ValidationError("--seed", "a seed is required (flag or QSC_LAB_SEED)");
}

scheme::QscParams make_params(int m, int t, const std::string& group, int ds_depth) {
    scheme::QscParams p;
    p.m = m;
    p.t = t;
    p.classical.group = group;
    p.classical.ds_depth = ds_depth;
    return p;
}

void emit_report(const std::string& out_path, const json& j) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) std::cout << text;
    else write_text(out_path, text);
}

// ---------------------------------------------------------------------------

int cmd_keygen(std::uint64_t seed, const scheme::QscParams& params,
               const std::vector<std::string>& ids, const std::string& out_prefix) {
    Rng rng(seed);
    if (ids.empty()) {
        scheme::QscScheme scheme(params);
        auto kp = scheme.keygen(rng);
        write_key_file(out_prefix + ".sdk", "sdk", kp.keys.sdk.serialize());
        write_key_file(out_prefix + ".vek", "vek", kp.keys.vek.serialize());
        std::cout << "vek fingerprint: " << kp.keys.vek.fingerprint() << "\n";
        return kExitOk;
    }
    scheme::MultiUserWorld world(params, ids, rng);
    fs::create_directories(out_prefix);
    json table;
    for (const auto& id : ids) {
        const auto& kp = world.keypair_of(id);
        write_key_file(out_prefix + "/" + id + ".sdk", "sdk", kp.keys.sdk.serialize());
        write_key_file(out_prefix + "/" + id + ".vek", "vek", kp.keys.vek.serialize());
        table[id] = bytes::to_hex(kp.keys.vek.serialize());
        std::cout << id << " vek fingerprint: " << kp.keys.vek.fingerprint() << "\n";
    }
    write_text(out_prefix + "/registry.json", table.dump(2) + "\n");
    return kExitOk;
}

int cmd_signcrypt(std::uint64_t seed, int m, int t, const std::string& in_path,
                  const std::string& sdk_path, const std::string& vek_path,
                  const std::string& out_path) {
    auto input = sim::load_state(in_path);
    // Product-state transport only: refuse states that cannot be certified
    // as unentangled with anything else (purity check).
    if (input.purity() < 1.0 - 1e-6)
        throw MalformedInput("input state is mixed; only product (pure) messages travel as files");
    if (input.layout().base_dim() != (1L << m))
        throw MalformedInput("input state dimension does not match --m");

    auto sdk = crypto::ScSdk::deserialize(read_key_file(sdk_path, "sdk"));
    auto vek = crypto::ScVek::deserialize(read_key_file(vek_path, "vek"));
    scheme::QscParams params = make_params(m, t, sdk.vek.group, sdk.signer->depth());
    scheme::QscScheme scheme(params);
    scheme::QscKeypair sender{crypto::SCKeys{sdk, sdk.vek}, params};

    Rng rng(seed);
    auto ct = scheme.sigenc(sender, vek,
                            input.with_layout(scheme.message_layout()), rng);
    json j;
    j["m"] = m;
    j["traps"] = t;
    j["classical"] = bytes::to_hex(ct.classical);
    j["quantum_state"] = json::parse(sim::state_to_json(ct.quantum));
    write_text(out_path, j.dump(2) + "\n");
    // Stateful signatures: persist the consumed leaf counter.
    write_key_file(sdk_path, "sdk", sdk.serialize());
    std::cout << "signcrypted " << in_path << " -> " << out_path << "\n";
    return kExitOk;
}

int cmd_unsigncrypt(std::uint64_t seed, const std::string& in_path, const std::string& vek_path,
                    const std::string& sdk_path, const std::string& out_path) {
    json j;
    try {
        j = json::parse(read_text(in_path));
    } catch (const json::exception& e) {
        throw MalformedInput(std::string("ciphertext parse: ") + e.what());
    }
    int m = 1, t = 1;
    Bytes classical;
    std::optional<sim::DensityState> quantum;
    try {
        m = j.at("m").get<int>();
        t = j.at("traps").get<int>();
        classical = bytes::from_hex(j.at("classical").get<std::string>());
        quantum = sim::state_from_json(j.at("quantum_state").dump());
    } catch (const std::exception& e) {
        throw MalformedInput(std::string("ciphertext fields: ") + e.what());
    }

    auto vek = crypto::ScVek::deserialize(read_key_file(vek_path, "vek"));
    auto sdk = crypto::ScSdk::deserialize(read_key_file(sdk_path, "sdk"));
    scheme::QscParams params = make_params(m, t, sdk.vek.group, sdk.signer->depth());
    scheme::QscScheme scheme(params);
    scheme::QscKeypair receiver{crypto::SCKeys{sdk, sdk.vek}, params};
    if (quantum->layout().total_dim() != scheme.cipher_layout().total_dim())
        throw MalformedInput("quantum register size does not match m + traps");

    scheme::HybridCiphertext ct{std::move(classical),
                                quantum->with_layout(scheme.cipher_layout())};
    auto out = scheme.verdec(vek, receiver, ct);
    // Sample the accept/reject branch for a definite outcome.
    Rng rng(seed);
    const long d = 1L << m;
    const double p_rej = out.reject_weight();
    if (rng.uniform() < p_rej) {
        std::cerr << "verified decryption rejected (p_rej = " << p_rej << ")\n";
        return kExitReject;
    }
    Mat acc = out.matrix().topLeftCorner(d, d);
    const double tr = acc.trace().real();
    if (tr <= 1e-12) {
        std::cerr << "verified decryption rejected (no accept weight)\n";
        return kExitReject;
    }
    sim::DensityState plain(sim::RegisterLayout::single("M", static_cast<int>(d)), acc / tr);
    sim::save_state(plain, out_path);
    std::cout << "unsigncrypted " << in_path << " -> " << out_path << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct GameSpec {
    std::string game;
    std::string adversary;
    int trials = 100;
    double alpha = 0.01;
    std::uint64_t seed = 0;
    int jobs = 1;
    scheme::QscParams params;
    std::vector<std::string> ids = {"alice", "bob", "carol", "dave"};
    bool expect_distinguish = false;
};

games::OutsiderAdversary outsider_adversary(const std::string& name) {
    if (name == "passive") return advs::passive_forwarder();
    if (name == "pauli-x") return advs::pauli_tamperer('X');
    if (name == "pauli-y") return advs::pauli_tamperer('Y');
    if (name == "pauli-z") return advs::pauli_tamperer('Z');
    if (name == "classical-forger") return advs::classical_bit_forger();
    if (name == "garbage") return advs::garbage_resender();
    if (name == "entangled-probe") return advs::entangled_probe();
    throw CLI::ValidationError("--adversary", "unknown outsider adversary: " + name);
}

games::CcaAdversary cca_adversary(const std::string& name) {
    if (name == "replayer") return advs::challenge_replayer();
    if (name == "coin") return advs::coin_guesser();
    if (name == "decrypt-compare") return advs::decrypt_compare();
    throw CLI::ValidationError("--adversary", "unknown insider adversary: " + name);
}

/// Runs `fn` over trial indices, in parallel when jobs > 1; results land in
/// per-index slots so the merge order is deterministic.
template <typename Fn>
std::vector<games::GameOutcome> run_trials(int trials, int jobs, Fn fn) {
    std::vector<games::GameOutcome> out(trials);
    if (jobs <= 1) {
        for (int i = 0; i < trials; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= trials) return;
            out[i] = fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return out;
}

int cmd_game(const GameSpec& spec, const std::string& out_path) {
    games::GameConfig cfg;
    cfg.params = spec.params;
    json j;
    j["game"] = spec.game;
    j["adversary"] = spec.adversary;
    j["trials"] = spec.trials;
    j["seed"] = spec.seed;
    j["alpha"] = spec.alpha;
    j["oracle_call_cap"] = cfg.max_oracle_calls;
    const double radius = games::hoeffding_radius(spec.trials, spec.alpha);
    j["radius"] = radius;
    std::map<std::string, int> counts;
    bool bounds_hold = true;
    std::string bound_note;

    if (spec.game == "outsider-advantage" || spec.game == "qae-advantage" ||
        spec.game == "m-outsider-advantage") {
        std::function<games::GameOutcome(std::uint64_t)> real_game, ideal_game;
        if (spec.game == "outsider-advantage") {
            auto adv = outsider_adversary(spec.adversary);
            real_game = [=](std::uint64_t s) { return games::run_out_real(cfg, adv, s); };
            ideal_game = [=](std::uint64_t s) { return games::run_out_ideal(cfg, adv, s); };
        } else if (spec.game == "qae-advantage") {
            auto adv = outsider_adversary(spec.adversary);
            real_game = [=](std::uint64_t s) { return games::run_qae_real(cfg, adv, s); };
            ideal_game = [=](std::uint64_t s) { return games::run_wqae_ideal(cfg, adv, s); };
        } else {
            auto adv = spec.adversary == "mu-forger" ? advs::mu_third_party_forger()
                                                     : advs::mu_honest_replayer();
            auto ids = spec.ids;
            real_game = [=](std::uint64_t s) { return games::run_m_out_real(cfg, ids, adv, s); };
            ideal_game = [=](std::uint64_t s) {
                return games::run_m_out_ideal(cfg, ids, adv, s);
            };
        }
        auto est = games::estimate_advantage(real_game, ideal_game, spec.trials, spec.alpha,
                                             spec.seed);
        j["estimate"] = est.estimate;
        j["p_real_world"] = est.p_a;
        j["p_ideal_world"] = est.p_b;
        if (spec.expect_distinguish) {
            bounds_hold = est.estimate > est.radius;
            bound_note = "estimate > radius (distinguisher expected)";
        } else {
            bounds_hold = est.estimate <= est.radius;
            bound_note = "estimate <= radius";
        }
    } else if (spec.game == "out-real" || spec.game == "out-ideal" ||
               spec.game == "qae-real" || spec.game == "wqae-ideal") {
        auto adv = outsider_adversary(spec.adversary);
        auto runner = [&](std::uint64_t s) {
            if (spec.game == "out-real") return games::run_out_real(cfg, adv, s);
            if (spec.game == "out-ideal") return games::run_out_ideal(cfg, adv, s);
            if (spec.game == "qae-real") return games::run_qae_real(cfg, adv, s);
            return games::run_wqae_ideal(cfg, adv, s);
        };
        auto outs = run_trials(spec.trials, spec.jobs, [&](int i) {
            return runner(games::derive_seed(spec.seed, i));
        });
        int rejects = 0;
        for (const auto& o : outs) {
            counts[games::verdict_name(o.verdict)]++;
            if (o.saw_reject) ++rejects;
        }
        j["reject_frequency"] = static_cast<double>(rejects) / spec.trials;
        j["estimate"] = j["reject_frequency"].get<double>();
        if (spec.adversary == "classical-forger" || spec.adversary == "garbage") {
            bounds_hold = rejects >= static_cast<int>(0.999 * spec.trials);
            bound_note = "reject frequency >= 0.999";
        } else if (spec.adversary == "passive") {
            bounds_hold = rejects <= static_cast<int>(0.001 * spec.trials);
            bound_note = "reject frequency <= 0.001";
        } else {
            bound_note = "report only";
        }
    } else if (spec.game == "qcca2-test" || spec.game == "qwcca2-fake") {
        auto adv = cca_adversary(spec.adversary);
        auto outs = run_trials(spec.trials, spec.jobs, [&](int i) {
            const auto s = games::derive_seed(spec.seed, i);
            return spec.game == "qcca2-test" ? games::run_qcca2_test(cfg, adv, s)
                                             : games::run_qwcca2_fake(cfg, adv, s);
        });
        int wins = 0, cheats = 0, precoin = 0;
        for (const auto& o : outs) {
            counts[games::verdict_name(o.verdict)]++;
            if (o.verdict == games::Verdict::win) ++wins;
            if (o.verdict == games::Verdict::cheat) ++cheats;
            if (o.cheat_before_coin) ++precoin;
        }
        j["win_frequency"] = static_cast<double>(wins) / spec.trials;
        j["cheat_frequency"] = static_cast<double>(cheats) / spec.trials;
        j["cheat_before_coin_frequency"] = static_cast<double>(precoin) / spec.trials;
        j["estimate"] = spec.game == "qcca2-test" ? j["win_frequency"].get<double>()
                                                  : j["cheat_frequency"].get<double>();
        if (spec.game == "qwcca2-fake" && spec.adversary == "replayer") {
            bounds_hold = precoin >= static_cast<int>(0.999 * spec.trials);
            bound_note = "cheat before the coin >= 0.999";
        } else if (spec.game == "qwcca2-fake") {
            bounds_hold = std::abs(j["cheat_frequency"].get<double>() - 0.5) <= radius;
            bound_note = "cheat frequency within radius of 1/2";
        } else {
            bounds_hold = j["win_frequency"].get<double>() >= 0.5 - radius;
            bound_note = "win frequency >= 1/2 - radius";
        }
    } else if (spec.game == "one-time-outsider") {
        games::OneTimeAdversary otadv;
        if (spec.adversary == "identity") otadv = advs::onetime_identity();
        else if (spec.adversary == "garbage") otadv = advs::onetime_garbage();
        else if (spec.adversary == "pauli-x") otadv = advs::onetime_pauli('X');
        else throw CLI::ValidationError("--adversary", "unknown one-time adversary");
        int rejects = 0;
        std::optional<auth::DnsFit> probe;
        for (int i = 0; i < spec.trials; ++i) {
            auto res = games::run_one_time_outsider(cfg, otadv,
                                                    games::derive_seed(spec.seed, i), i == 0);
            counts[games::verdict_name(res.outcome.verdict)]++;
            if (res.outcome.saw_reject) ++rejects;
            if (i == 0) probe = res.probe;
        }
        j["reject_frequency"] = static_cast<double>(rejects) / spec.trials;
        j["estimate"] = j["reject_frequency"].get<double>();
        if (probe) {
            j["probe_p_acc"] = probe->p_acc;
            j["probe_residual"] = probe->residual;
        }
        if (spec.adversary == "identity") {
            bounds_hold = probe && probe->p_acc >= 1.0 - 1e-6 && probe->residual <= 1e-6;
            bound_note = "effective map probe is identity-or-reject";
        } else if (spec.adversary == "garbage") {
            bounds_hold = rejects >= static_cast<int>(0.999 * spec.trials);
            bound_note = "reject frequency >= 0.999";
        } else {
            bound_note = "report only";
        }
    } else {
        throw CLI::ValidationError("--game", "unknown game: " + spec.game);
    }

    j["per_outcome_counts"] = counts;
    j["bounds_hold"] = bounds_hold;
    j["bound_note"] = bound_note;
    emit_report(out_path, j);
    return bounds_hold ? kExitOk : kExitBounds;
}

int cmd_attack_demo(const std::string& demo, const std::string& out_path) {
    auto qs = attacks::make_keyed_unitary_toy();
    std::vector<int> keys;
    for (int i = 0; i < qs.key_count(); ++i) keys.push_back(i);

    sim::TwoOutcomeMeasurement mz{linalg::basis_proj(2, 1), sim::RegisterLayout::single("M", 2)};
    Mat px(2, 2);
    px << 0.5, 0.5, 0.5, 0.5;
    sim::TwoOutcomeMeasurement mx{px, sim::RegisterLayout::single("M", 2)};
    const auto& m1 = demo == "commuting" ? mz : mx;

    auto psi0 = sim::DensityState::basis(qs.message_layout(), 0);
    auto rep = attacks::verify_thm_imp1(qs, mz, m1, psi0, keys);

    // The headline attack: swap the signed |0> for a signed |1>.
    auto swap = [&](int k) {
        return attacks::build_swap_attack(qs, k, linalg::kPauliI, linalg::kPauliX);
    };
    auto swap_rep = attacks::run_attack(qs, mz, swap, keys, psi0);
    auto swap_fit = attacks::falsify_security(qs, mz, swap, keys);

    json j;
    j["demo"] = demo;
    j["commutator_gap_one_norm"] = rep.gap.sequential_one_norm;
    j["commutator_gap_squared_diff"] = rep.gap.squared_norm_diff;
    j["correctness_residuals"] = {rep.residual_m0, rep.residual_m1};
    j["reflection_advantage"] = rep.best_attack.advantage;
    j["reflection_ordering"] = rep.best_ordering;
    j["swap_accept_prob_before"] = swap_rep.accept_prob_before;
    j["swap_accept_prob_after"] = swap_rep.accept_prob_after;
    j["swap_outcome_prob_before"] = swap_rep.outcome_prob_before;
    j["swap_outcome_prob_after"] = swap_rep.outcome_prob_after;
    j["swap_advantage"] = swap_rep.advantage;
    j["falsified_epsilon"] = swap_fit.epsilon;
    const double advantage = demo == "commuting" ? rep.best_attack.advantage
                                                 : swap_rep.advantage;
    j["advantage"] = advantage;
    const bool witnessed = demo == "commuting"
                               ? rep.witnessed
                               : (swap_rep.advantage >= 0.99 &&
                                  swap_rep.accept_prob_after >= 0.999 &&
                                  swap_fit.epsilon >= 0.99);
    j["theorem_witnessed"] = witnessed;
    emit_report(out_path, j);
    std::cout << "theorem witnessed: " << (witnessed ? "yes" : "no") << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qsclab: signcryption of quantum registers, security games and attacks"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    int m = 1, t = 1, ds_depth = 6, trials = 100, jobs = 1;
    double alpha = 0.01;
    std::string group = "test64", out, in, sdk_path, vek_path, game_name, adversary = "passive";
    std::vector<std::string> ids;
    bool expect_distinguish = false;
    std::string demo = "swap";

    auto add_common = [&](CLI::App* cmd) {
        auto* opt = cmd->add_option("--seed", seed, "deterministic run seed");
        cmd->add_option("--m", m, "message qubits")->check(CLI::Range(1, 7));
        cmd->add_option("--traps", t, "trap qubits")->check(CLI::Range(0, 7));
        cmd->add_option("--ds-depth", ds_depth, "hash-signature tree depth");
        cmd->add_option("--group", group, "classical group")
            ->check(CLI::IsMember({"test64", "modp2048"}));
        cmd->add_option("--out", out, "output path");
        return opt;
    };

    auto* kg = app.add_subcommand("keygen", "generate a signcryption keypair");
    auto* kg_seed = add_common(kg);
    kg->add_option("--ids", ids, "register identities (multi-user mode)")->delimiter(',');

    auto* sc = app.add_subcommand("signcrypt", "signcrypt a product-state message file");
    auto* sc_seed = add_common(sc);
    sc->add_option("--in", in, "input state file")->required();
    sc->add_option("--sender-sdk", sdk_path, "sender secret key file")->required();
    sc->add_option("--receiver-vek", vek_path, "receiver public key file")->required();

    auto* usc = app.add_subcommand("unsigncrypt", "verify and decrypt a ciphertext file");
    auto* usc_seed = add_common(usc);
    usc->add_option("--in", in, "ciphertext file")->required();
    usc->add_option("--sender-vek", vek_path, "sender public key file")->required();
    usc->add_option("--receiver-sdk", sdk_path, "receiver secret key file")->required();

    auto* gm = app.add_subcommand("game", "run a security experiment");
    auto* gm_seed = add_common(gm);
    gm->add_option("--game", game_name, "experiment name")->required();
    gm->add_option("--adversary", adversary, "built-in adversary name");
    gm->add_option("--trials", trials, "number of trials");
    gm->add_option("--alpha", alpha, "confidence parameter")->check(CLI::Range(1e-9, 0.999999));
    gm->add_option("--jobs", jobs, "parallel trial workers")->check(CLI::Range(1, 64));
    gm->add_option("--ids", ids, "identities for multi-user games")->delimiter(',');
    gm->add_flag("--expect-distinguish", expect_distinguish,
                 "assert the adversary separates the two worlds");

    auto* ad = app.add_subcommand("attack-demo", "synthesize and run the forging attack");
    ad->add_option("--demo", demo, "swap | commuting")
        ->check(CLI::IsMember({"swap", "commuting"}));
    ad->add_option("--out", out, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (kg->parsed()) {
            const auto s = resolve_seed(kg_seed, seed);
            if (out.empty()) throw CLI::ValidationError("--out", "output prefix required");
            return cmd_keygen(s, make_params(m, t, group, ds_depth), ids, out);
        }
        if (sc->parsed()) {
            const auto s = resolve_seed(sc_seed, seed);
            if (out.empty()) throw CLI::ValidationError("--out", "output path required");
            return cmd_signcrypt(s, m, t, in, sdk_path, vek_path, out);
        }
        if (usc->parsed()) {
            const auto s = resolve_seed(usc_seed, seed);
            if (out.empty()) throw CLI::ValidationError("--out", "output path required");
            return cmd_unsigncrypt(s, in, vek_path, sdk_path, out);
        }
        if (gm->parsed()) {
            GameSpec spec;
            spec.seed = resolve_seed(gm_seed, seed);
            spec.game = game_name;
            spec.adversary = adversary;
            spec.trials = trials;
            spec.alpha = alpha;
            spec.jobs = jobs;
            spec.params = make_params(m, t, group, ds_depth);
            if (!ids.empty()) spec.ids = ids;
            spec.expect_distinguish = expect_distinguish;
            return cmd_game(spec, out);
        }
        if (ad->parsed()) return cmd_attack_demo(demo, out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const MalformedInput& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return kExitMalformed;
    } catch (const std::invalid_argument& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return kExitMalformed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
