#pragma once

#include <array>

#include "qsclab/channel.hpp"

namespace qsclab::sim {

/// Two-outcome projective measurement, P = projector for outcome 1.
struct TwoOutcomeMeasurement {
    Mat projector;
    RegisterLayout layout;

    TwoOutcomeMeasurement(Mat p, RegisterLayout l);
};

/// Bell test {Pi+, 1 - Pi+} on a d x d pair.
TwoOutcomeMeasurement bell_projector(int d, const std::string& la = "A",
                                     const std::string& lb = "B");

/// N(X) = Tr((1-P)X)|0><0| + Tr(PX)|1><1| into a fresh 2-dim outcome register.
KrausChannel measurement_channel(const TwoOutcomeMeasurement& m,
                                 const std::string& outcome_label = "R");

struct InstrumentBranch {
    double probability;
    DensityState post_state;  // renormalized; maximally mixed placeholder if p ~ 0
    int outcome;
};

/// Projective instrument; branches for outcome 0 ((1-P)X(1-P)) and 1 (PXP).
/// The measurement may act on a sub-layout of `s` (matched by labels).
std::vector<InstrumentBranch> instrument(const DensityState& s,
                                         const TwoOutcomeMeasurement& m);

/// Joint outcome distribution of applying `first` (as an instrument) and then
/// `second` on the post-measurement state. Entry [2*a + b] is the probability
/// of (first -> a, second -> b); the index slot is tied to the measurement
/// argument, not the application order.
std::array<double, 4> sequential_measure(const DensityState& s,
                                         const TwoOutcomeMeasurement& first,
                                         const TwoOutcomeMeasurement& second);

/// Embed the projector of `m` into the full layout of a state (identity on
/// the other subsystems, zero on a reject direction if present).
Mat embed_projector(const TwoOutcomeMeasurement& m, const RegisterLayout& full);

} // namespace qsclab::sim
