#include "qsclab/state.hpp"

#include <stdexcept>

namespace qsclab::sim {

using namespace qsclab::linalg;

DensityState::DensityState(RegisterLayout layout, Mat matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
    if (layout_.base_dim() > kMaxBaseDim)
        throw std::invalid_argument("DensityState: register exceeds the 8-qubit (dim 256) cap");
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() != layout_.total_dim())
        throw std::invalid_argument("DensityState: matrix size does not match layout");
}

DensityState DensityState::pure(RegisterLayout layout, const Vec& amplitudes) {
    if (amplitudes.size() != layout.total_dim())
        throw std::invalid_argument("DensityState::pure: amplitude size mismatch");
    Mat m = amplitudes * amplitudes.adjoint();
    return DensityState(std::move(layout), std::move(m));
}

DensityState DensityState::basis(RegisterLayout layout, long index) {
    const long d = layout.total_dim();
    if (index < 0 || index >= d) throw std::invalid_argument("DensityState::basis: index out of range");
    return DensityState(std::move(layout), basis_proj(static_cast<int>(d), static_cast<int>(index)));
}

DensityState DensityState::maximally_mixed(RegisterLayout layout) {
    const long d = layout.base_dim();
    Mat m = Mat::Zero(layout.total_dim(), layout.total_dim());
    m.topLeftCorner(d, d) = Mat::Identity(d, d) / static_cast<double>(d);
    return DensityState(std::move(layout), std::move(m));
}

double DensityState::reject_weight() const {
    if (!layout_.reject_extended()) return 0.0;
    return matrix_(matrix_.rows() - 1, matrix_.cols() - 1).real();
}

DensityState DensityState::with_layout(RegisterLayout layout) const {
    if (layout.total_dim() != layout_.total_dim())
        throw std::invalid_argument("with_layout: dimension mismatch");
    return DensityState(std::move(layout), matrix_);
}

void DensityState::check_invariants() const {
    if (max_abs(matrix_ - matrix_.adjoint()) > 1e-10)
        throw std::runtime_error("DensityState: not Hermitian");
    if (std::abs(matrix_.trace().real() - 1.0) > 1e-10 || std::abs(matrix_.trace().imag()) > 1e-10)
        throw std::runtime_error("DensityState: trace != 1");
    Eigen::SelfAdjointEigenSolver<Mat> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw std::runtime_error("DensityState: negative eigenvalue");
}

DensityState tensor(const DensityState& a, const DensityState& b) {
    if (a.layout().reject_extended() || b.layout().reject_extended())
        throw std::invalid_argument("tensor: reject-extended states cannot be tensored");
    for (const auto& s : b.layout().subsystems())
        if (a.layout().has_label(s.label))
            throw std::invalid_argument("tensor: label collision on " + s.label);
    return DensityState(concat(a.layout(), b.layout()), kron(a.matrix(), b.matrix()));
}

DensityState partial_trace(const DensityState& s, const std::set<std::string>& keep) {
    if (s.layout().reject_extended())
        throw std::invalid_argument("partial_trace: not defined on reject-extended states");
    for (const auto& l : keep)
        if (!s.layout().has_label(l))
            throw std::invalid_argument("partial_trace: unknown label " + l);

    const auto& subs = s.layout().subsystems();
    std::vector<Subsystem> kept, traced;
    for (const auto& sub : subs)
        (keep.count(sub.label) ? kept : traced).push_back(sub);

    // Permute kept subsystems to the front, then trace the tail block.
    std::vector<std::string> front;
    for (const auto& sub : kept) front.push_back(sub.label);
    auto [perm, reordered] = bring_to_front(s.layout(), front);
    Mat m = perm * s.matrix() * perm.adjoint();

    long dk = 1, dt = 1;
    for (const auto& sub : kept) dk *= sub.dim;
    for (const auto& sub : traced) dt *= sub.dim;

    Mat out = Mat::Zero(dk, dk);
    for (long i = 0; i < dk; ++i)
        for (long j = 0; j < dk; ++j) {
            cplx acc = 0;
            for (long t = 0; t < dt; ++t) acc += m(i * dt + t, j * dt + t);
            out(i, j) = acc;
        }
    return DensityState(RegisterLayout(kept), std::move(out));
}

DensityState apply_unitary(const DensityState& s, const Mat& u,
                           const std::vector<std::string>& on) {
    if (!is_unitary(u, 1e-9)) throw std::invalid_argument("apply_unitary: matrix is not unitary");
    auto [perm, reordered] = bring_to_front(s.layout(), on);
    long don = 1;
    for (const auto& l : on) don *= s.layout().dim_of(l);
    if (u.rows() != don) throw std::invalid_argument("apply_unitary: dimension mismatch");
    const long drest = s.layout().base_dim() / don;
    Mat full = kron(u, Mat::Identity(drest, drest));
    Mat m = perm.adjoint() * full * perm;
    return DensityState(s.layout(), m * s.matrix() * m.adjoint());
}

double one_norm_distance(const Mat& a, const Mat& b) {
    return trace_norm_hermitian(a - b);
}

double one_norm_distance(const DensityState& a, const DensityState& b) {
    if (a.layout().total_dim() != b.layout().total_dim())
        throw std::invalid_argument("one_norm_distance: layout mismatch");
    return one_norm_distance(a.matrix(), b.matrix());
}

double trace_distance(const DensityState& a, const DensityState& b) {
    return 0.5 * one_norm_distance(a, b);
}

Mat bell_vector_matrix(int d) {
    Vec v = Vec::Zero(static_cast<long>(d) * d);
    const double a = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) v(static_cast<long>(i) * d + i) = a;
    return v * v.adjoint();
}

DensityState bell_pair(int d, const std::string& la, const std::string& lb) {
    if (d < 2) throw std::invalid_argument("bell_pair: dimension must be >= 2");
    RegisterLayout layout({{la, d}, {lb, d}});
    return DensityState(std::move(layout), bell_vector_matrix(d));
}

Mat reflection(const Mat& projector) {
    if (!is_projector(projector, 1e-9))
        throw std::invalid_argument("reflection: input is not a projector");
    return Mat::Identity(projector.rows(), projector.cols()) - 2.0 * projector;
}

DensityState embed_reject(const DensityState& s) {
    if (s.layout().reject_extended())
        throw std::invalid_argument("embed_reject: state already reject-extended");
    const long d = s.dim();
    Mat m = Mat::Zero(d + 1, d + 1);
    m.topLeftCorner(d, d) = s.matrix();
    return DensityState(s.layout().extended(), std::move(m));
}

DensityState make_reject(const RegisterLayout& base_layout) {
    if (base_layout.reject_extended())
        throw std::invalid_argument("make_reject: layout already reject-extended");
    const long d = base_layout.base_dim();
    Mat m = Mat::Zero(d + 1, d + 1);
    m(d, d) = 1.0;
    return DensityState(base_layout.extended(), std::move(m));
}

Mat embed_op(const Mat& op) {
    Mat m = Mat::Zero(op.rows() + 1, op.cols() + 1);
    m.topLeftCorner(op.rows(), op.cols()) = op;
    return m;
}

std::pair<Mat, RegisterLayout> bring_to_front(const RegisterLayout& layout,
                                              const std::vector<std::string>& front) {
    if (layout.reject_extended())
        throw std::invalid_argument("bring_to_front: not defined on reject-extended layouts");
    const auto& subs = layout.subsystems();
    const int n = static_cast<int>(subs.size());
    std::vector<int> target(n, -1);
    int pos = 0;
    for (const auto& l : front) target[layout.index_of(l)] = pos++;
    std::vector<Subsystem> out_subs(n);
    for (int i = 0; i < n; ++i) {
        if (target[i] < 0) target[i] = pos++;
        out_subs[target[i]] = subs[i];
    }
    Mat p = linalg::permute_factors(layout.dims(), target);
    return {std::move(p), RegisterLayout(std::move(out_subs))};
}

} // namespace qsclab::sim
