#include "qsclab/measurement.hpp"

#include <stdexcept>

namespace qsclab::sim {

using namespace qsclab::linalg;

TwoOutcomeMeasurement::TwoOutcomeMeasurement(Mat p, RegisterLayout l)
    : projector(std::move(p)), layout(std::move(l)) {
    if (projector.rows() != layout.total_dim())
        throw std::invalid_argument("TwoOutcomeMeasurement: projector size mismatch");
    if (!is_projector(projector, 1e-10))
        throw std::invalid_argument("TwoOutcomeMeasurement: P^2 != P or P != P^dag");
}

TwoOutcomeMeasurement bell_projector(int d, const std::string& la, const std::string& lb) {
    return TwoOutcomeMeasurement(bell_vector_matrix(d), RegisterLayout({{la, d}, {lb, d}}));
}

KrausChannel measurement_channel(const TwoOutcomeMeasurement& m, const std::string& outcome_label) {
    const long d = m.layout.total_dim();
    const Mat p1 = m.projector;
    const Mat p0 = Mat::Identity(d, d) - p1;
    // Rank-1 Kraus pieces |b><v| over eigenbases of each outcome projector.
    std::vector<Mat> ops;
    auto push_outcome = [&](const Mat& p, int outcome) {
        Eigen::SelfAdjointEigenSolver<Mat> es(p);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            if (es.eigenvalues()(i) < 0.5) continue;
            Mat k = Mat::Zero(2, d);
            k.row(outcome) = es.eigenvectors().col(i).adjoint();
            ops.push_back(std::move(k));
        }
    };
    push_outcome(p0, 0);
    push_outcome(p1, 1);
    return KrausChannel(std::move(ops), m.layout, RegisterLayout::single(outcome_label, 2));
}

Mat embed_projector(const TwoOutcomeMeasurement& m, const RegisterLayout& full) {
    // Identify the measured labels in the full layout; identity elsewhere.
    if (full.reject_extended()) {
        // Zero on the reject direction: embed over the base block.
        RegisterLayout base(full.subsystems(), false);
        Mat p = embed_projector(m, base);
        return embed_op(p);
    }
    std::vector<std::string> front = m.layout.labels();
    auto [perm, reordered] = bring_to_front(full, front);
    long dm = m.layout.total_dim();
    const long drest = full.base_dim() / dm;
    Mat p = kron(m.projector, Mat::Identity(drest, drest));
    return perm.adjoint() * p * perm;
}

std::vector<InstrumentBranch> instrument(const DensityState& s, const TwoOutcomeMeasurement& m) {
    const Mat p1 = embed_projector(m, s.layout());
    const Mat p0 = Mat::Identity(s.dim(), s.dim()) - p1;
    std::vector<InstrumentBranch> branches;
    for (int outcome = 0; outcome < 2; ++outcome) {
        const Mat& p = outcome == 0 ? p0 : p1;
        Mat post = p * s.matrix() * p;
        const double prob = post.trace().real();
        if (prob > 1e-14) {
            branches.push_back({prob, DensityState(s.layout(), post / prob), outcome});
        } else {
            branches.push_back({prob, DensityState::maximally_mixed(s.layout()), outcome});
        }
    }
    const double total = branches[0].probability + branches[1].probability;
    if (std::abs(total - 1.0) > 1e-9)
        throw std::runtime_error("instrument: branch probabilities do not sum to 1");
    return branches;
}

std::array<double, 4> sequential_measure(const DensityState& s,
                                         const TwoOutcomeMeasurement& first,
                                         const TwoOutcomeMeasurement& second) {
    std::array<double, 4> dist{0, 0, 0, 0};
    for (const auto& b1 : instrument(s, first)) {
        if (b1.probability <= 1e-14) continue;
        const Mat p1 = embed_projector(second, b1.post_state.layout());
        const double q1 = (p1 * b1.post_state.matrix()).trace().real();
        dist[2 * b1.outcome + 1] += b1.probability * q1;
        dist[2 * b1.outcome + 0] += b1.probability * (1.0 - q1);
    }
    return dist;
}

} // namespace qsclab::sim
