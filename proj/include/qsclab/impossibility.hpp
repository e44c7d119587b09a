#pragma once

#include "qsclab/toy_qs.hpp"

namespace qsclab::attacks {

struct AttackReport {
    double accept_prob_before = 0;
    double accept_prob_after = 0;
    double outcome_prob_before = 0;
    double outcome_prob_after = 0;
    double gap = 0;        // sequential-order 1-norm gap of the target pair
    double advantage = 0;  // |outcome_prob_after - outcome_prob_before|
};

/// Undo the verification through its dilation, reflect through the outcome-0
/// projector of the target measurement (given on the message space), redo the
/// verification. A unitary channel on the ciphertext register.
sim::KrausChannel build_reflection_attack(const ToyQS& qs, int key, const Mat& p0_on_m);

/// Dilate, map the prepared state of outcome 0 onto the prepared state of
/// outcome 1 (U1 U0^dag on the message factor), undo the dilation.
sim::KrausChannel build_swap_attack(const ToyQS& qs, int key, const Mat& u0, const Mat& u1);

struct CommutatorGap {
    double sequential_one_norm;  // || second-after-first - first-after-second ||_1
    double squared_norm_diff;    // proof quantity, maximized over outcome relabelings
};

CommutatorGap commutator_gap(const sim::TwoOutcomeMeasurement& m0,
                             const sim::TwoOutcomeMeasurement& m1,
                             const sim::DensityState& psi);

/// Per-measurement Choi residual of N o Ver o Sign against N o embed,
/// averaged over the given keys. Measurements act on the extended space.
std::vector<double> check_correct_for(const ToyQS& qs,
                                      const std::vector<sim::TwoOutcomeMeasurement>& measurements,
                                      const std::vector<int>& keys);

struct SecurityFalsification {
    double epsilon;  // minimal Choi distance achieved by the best p
    double p;        // mixing weight of the identity branch at the optimum
};

/// Fits L o E_k[Ver o A_k o Sign] against p (L o embed) + (1-p) (L o reject)
/// by one-dimensional minimization; a lower-bound falsifier of the
/// simulability claim, never a proof of security.
SecurityFalsification falsify_security(
    const ToyQS& qs, const sim::TwoOutcomeMeasurement& target,
    const std::function<sim::KrausChannel(int key)>& attack_of, const std::vector<int>& keys);

struct Imp1Report {
    CommutatorGap gap;
    double residual_m0 = 0;
    double residual_m1 = 0;
    AttackReport best_attack;   // the better of the two reflection orderings
    int best_ordering = 0;      // 0: reflect m0 / read m1, 1: reflect m1 / read m0
    double falsified_epsilon = 0;
    bool inequality_holds = false;  // advantage >= 2 sq-diff - residual slack
    bool witnessed = false;         // a non-trivial advantage was demonstrated
};

/// Composite check: correctness residuals, both reflection attacks, the
/// outcome shift of the better one, and the proof inequality.
Imp1Report verify_thm_imp1(const ToyQS& qs, const sim::TwoOutcomeMeasurement& m0,
                           const sim::TwoOutcomeMeasurement& m1, const sim::DensityState& psi,
                           const std::vector<int>& keys);

/// Run an attack end to end on |psi> through sign/attack/verify averaged over
/// keys and report acceptance and outcome statistics for `target`.
AttackReport run_attack(const ToyQS& qs, const sim::TwoOutcomeMeasurement& target,
                        const std::function<sim::KrausChannel(int key)>& attack_of,
                        const std::vector<int>& keys, const sim::DensityState& psi);

} // namespace qsclab::attacks
