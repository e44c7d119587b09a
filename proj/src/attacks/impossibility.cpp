#include "qsclab/impossibility.hpp"

#include <stdexcept>

namespace qsclab::attacks {

using namespace qsclab::linalg;
using sim::DensityState;
using sim::KrausChannel;
using sim::RegisterLayout;
using sim::TwoOutcomeMeasurement;

namespace {

/// Lift an operator on the message space to the reject-extended space
/// (zero on the reject direction) when needed.
Mat lift_to_ext(const Mat& p, long m_dim) {
    if (p.rows() == m_dim + 1) return p;
    if (p.rows() == m_dim) return sim::embed_op(p);
    throw std::invalid_argument("lift_to_ext: operator dimension mismatch");
}

/// Measurement channel of a measurement given on M or on M + bot, as a map
/// from the extended space to the 2-dim outcome register.
KrausChannel outcome_channel_ext(const TwoOutcomeMeasurement& m, long m_dim) {
    const Mat p = lift_to_ext(m.projector, m_dim);
    TwoOutcomeMeasurement ext(p, RegisterLayout::single("Mx", static_cast<int>(m_dim) + 1));
    return measurement_channel(ext);
}

KrausChannel dilated_conjugation(const ToyQS& qs, int key, const Mat& mid_on_m) {
    const auto& k = qs.key(key);
    const long dc = qs.cipher_dim();
    const int e1 = qs.e1_dim();
    const Mat lifted = kron(mid_on_m, Mat::Identity(qs.e2_dim(), qs.e2_dim()));
    const Mat ua = k.verify_dilation.adjoint() * lifted * k.verify_dilation;
    // Channel on C: attach |0>_{E1}, conjugate, trace E1.
    std::vector<Mat> ops;
    for (int e = 0; e < e1; ++e) {
        Mat op = Mat::Zero(dc, dc);
        for (long r = 0; r < dc; ++r)
            for (long c = 0; c < dc; ++c) op(r, c) = ua(r * e1 + e, c * e1 + 0);
        ops.push_back(std::move(op));
    }
    return KrausChannel(std::move(ops), qs.cipher_layout(), qs.cipher_layout());
}

} // namespace

KrausChannel build_reflection_attack(const ToyQS& qs, int key, const Mat& p0_on_m) {
    if (p0_on_m.rows() != qs.m_dim())
        throw std::invalid_argument("build_reflection_attack: projector must act on M");
    if (!is_projector(p0_on_m, 1e-9))
        throw std::invalid_argument("build_reflection_attack: not a projector");
    return dilated_conjugation(qs, key, sim::reflection(p0_on_m));
}

KrausChannel build_swap_attack(const ToyQS& qs, int key, const Mat& u0, const Mat& u1) {
    if (u0.rows() != qs.m_dim() || u1.rows() != qs.m_dim())
        throw std::invalid_argument("build_swap_attack: preparation unitaries must act on M");
    if (!is_unitary(u0, 1e-9) || !is_unitary(u1, 1e-9))
        throw std::invalid_argument("build_swap_attack: inputs must be unitary");
    return dilated_conjugation(qs, key, u1 * u0.adjoint());
}

CommutatorGap commutator_gap(const TwoOutcomeMeasurement& m0, const TwoOutcomeMeasurement& m1,
                             const DensityState& psi) {
    // Joint distribution with the outcome-register slot tied to the
    // measurement index, for both application orders.
    const auto d01 = sequential_measure(psi, m0, m1);  // (r0, r1)
    const auto d10 = sequential_measure(psi, m1, m0);  // (r1, r0)
    double one_norm = 0;
    for (int r0 = 0; r0 < 2; ++r0)
        for (int r1 = 0; r1 < 2; ++r1)
            one_norm += std::abs(d01[2 * r0 + r1] - d10[2 * r1 + r0]);

    // Proof quantity |...|AB|psi>|^2 - |BA|psi>|^2|, maximized over the
    // choice of outcome projector on each side.
    const Mat rho = psi.matrix();
    const long d = psi.dim();
    const Mat id = Mat::Identity(d, d);
    double sq = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const Mat pa = a == 0 ? Mat(id - m0.projector) : m0.projector;
            const Mat pb = b == 0 ? Mat(id - m1.projector) : m1.projector;
            const double t1 = (pb * pa * rho * pa * pb).trace().real();
            const double t2 = (pa * pb * rho * pb * pa).trace().real();
            sq = std::max(sq, std::abs(t1 - t2));
        }
    return CommutatorGap{one_norm, sq};
}

std::vector<double> check_correct_for(const ToyQS& qs,
                                      const std::vector<TwoOutcomeMeasurement>& measurements,
                                      const std::vector<int>& keys) {
    std::vector<double> residuals;
    const long d = qs.m_dim();
    const auto embed = KrausChannel::embed(qs.message_layout());
    for (const auto& m : measurements) {
        const auto n = outcome_channel_ext(m, d);
        const Mat target = choi(compose(n, KrausChannel(embed.kraus_ops(), embed.in_layout(),
                                                        flatten_extended(embed.out_layout()))));
        double acc = 0;
        for (int k : keys) {
            auto ver = qs.verify_channel(k);
            auto flat = KrausChannel(ver.kraus_ops(), ver.in_layout(),
                                     flatten_extended(ver.out_layout()));
            const Mat j = choi(compose(n, compose(flat, qs.sign_channel(k))));
            acc += sim::choi_distance(j, target);
        }
        residuals.push_back(acc / static_cast<double>(keys.size()));
    }
    return residuals;
}

AttackReport run_attack(const ToyQS& qs, const TwoOutcomeMeasurement& target,
                        const std::function<KrausChannel(int key)>& attack_of,
                        const std::vector<int>& keys, const DensityState& psi) {
    const long d = qs.m_dim();
    const Mat p1 = lift_to_ext(target.projector, d);
    Mat before = Mat::Zero(d + 1, d + 1);
    Mat after = Mat::Zero(d + 1, d + 1);
    for (int k : keys) {
        const Mat signed_state = qs.sign_channel(k).apply_matrix(psi.matrix());
        auto ver = qs.verify_channel(k);
        before += ver.apply_matrix(signed_state);
        after += ver.apply_matrix(attack_of(k).apply_matrix(signed_state));
    }
    before /= static_cast<double>(keys.size());
    after /= static_cast<double>(keys.size());
    AttackReport rep;
    rep.accept_prob_before = 1.0 - before(d, d).real();
    rep.accept_prob_after = 1.0 - after(d, d).real();
    rep.outcome_prob_before = (p1 * before).trace().real();
    rep.outcome_prob_after = (p1 * after).trace().real();
    rep.advantage = std::abs(rep.outcome_prob_after - rep.outcome_prob_before);
    return rep;
}

SecurityFalsification falsify_security(const ToyQS& qs, const TwoOutcomeMeasurement& target,
                                       const std::function<KrausChannel(int key)>& attack_of,
                                       const std::vector<int>& keys) {
    const long d = qs.m_dim();
    const auto n = outcome_channel_ext(target, d);

    Mat j_eff;
    bool first = true;
    for (int k : keys) {
        auto ver = qs.verify_channel(k);
        auto flat = KrausChannel(ver.kraus_ops(), ver.in_layout(),
                                 flatten_extended(ver.out_layout()));
        const auto chain = compose(n, compose(flat, compose(attack_of(k), qs.sign_channel(k))));
        Mat j = choi(chain);
        if (first) {
            j_eff = std::move(j);
            first = false;
        } else {
            j_eff += j;
        }
    }
    j_eff /= static_cast<double>(keys.size());

    const auto embed = KrausChannel::embed(qs.message_layout());
    const Mat j_id = choi(compose(n, KrausChannel(embed.kraus_ops(), embed.in_layout(),
                                                  flatten_extended(embed.out_layout()))));
    const auto rej = KrausChannel::reject_all(qs.message_layout(), qs.message_layout());
    const Mat j_rej = choi(compose(n, KrausChannel(rej.kraus_ops(), rej.in_layout(),
                                                   flatten_extended(rej.out_layout()))));

    auto eps_of = [&](double p) {
        return trace_norm_hermitian(j_eff - p * j_id - (1.0 - p) * j_rej);
    };
    // Convex in p: golden-section search on [0, 1].
    double lo = 0.0, hi = 1.0;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = eps_of(x1), f2 = eps_of(x2);
    for (int iter = 0; iter < 80; ++iter) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = eps_of(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = eps_of(x2);
        }
    }
    const double p_best = 0.5 * (lo + hi);
    double best = eps_of(p_best);
    double arg = p_best;
    for (double p : {0.0, 1.0}) {
        const double e = eps_of(p);
        if (e < best) {
            best = e;
            arg = p;
        }
    }
    return SecurityFalsification{best, arg};
}

Imp1Report verify_thm_imp1(const ToyQS& qs, const TwoOutcomeMeasurement& m0,
                           const TwoOutcomeMeasurement& m1, const DensityState& psi,
                           const std::vector<int>& keys) {
    Imp1Report rep;
    rep.gap = commutator_gap(m0, m1, psi);
    auto residuals = check_correct_for(qs, {m0, m1}, keys);
    rep.residual_m0 = residuals[0];
    rep.residual_m1 = residuals[1];

    const long d = qs.m_dim();
    const Mat id = Mat::Identity(d, d);
    const Mat p0 = id - m0.projector;  // outcome-0 projector
    const Mat p1 = id - m1.projector;

    // Ordering 0: reflect through m0's outcome-0 subspace, read m1.
    auto attack0 = [&](int k) { return build_reflection_attack(qs, k, p0); };
    auto rep0 = run_attack(qs, m1, attack0, keys, psi);
    // Ordering 1: the roles swapped.
    auto attack1 = [&](int k) { return build_reflection_attack(qs, k, p1); };
    auto rep1 = run_attack(qs, m0, attack1, keys, psi);

    if (rep0.advantage >= rep1.advantage) {
        rep.best_attack = rep0;
        rep.best_ordering = 0;
    } else {
        rep.best_attack = rep1;
        rep.best_ordering = 1;
    }
    rep.best_attack.gap = rep.gap.sequential_one_norm;

    const auto& target = rep.best_ordering == 0 ? m1 : m0;
    const std::function<KrausChannel(int)> best_attack_of =
        rep.best_ordering == 0 ? std::function<KrausChannel(int)>(attack0)
                               : std::function<KrausChannel(int)>(attack1);
    rep.falsified_epsilon = falsify_security(qs, target, best_attack_of, keys).epsilon;

    const double slack = 5.0 * (rep.residual_m0 + rep.residual_m1) + 1e-6;
    rep.inequality_holds =
        rep.best_attack.advantage >= 2.0 * rep.gap.squared_norm_diff - slack;
    rep.witnessed = rep.inequality_holds && rep.best_attack.advantage > slack + 1e-3;
    return rep;
}

} // namespace qsclab::attacks
