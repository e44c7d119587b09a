#include "qsclab/channel.hpp"

#include <stdexcept>

namespace qsclab::sim {

using namespace qsclab::linalg;

void KrausChannel::index_rows() {
    op_rows_.clear();
    op_rows_.reserve(ops_.size());
    for (const auto& k : ops_) {
        if (k.rows() != out_.total_dim() || k.cols() != in_.total_dim())
            throw std::invalid_argument("KrausChannel: Kraus operator shape mismatch");
        // Column-major walk; row() expressions stride badly on big operators.
        std::vector<std::uint8_t> seen(k.rows(), 0);
        const cplx* data = k.data();
        for (long c = 0; c < k.cols(); ++c)
            for (long r = 0; r < k.rows(); ++r)
                if (data[c * k.rows() + r] != cplx(0, 0)) seen[r] = 1;
        std::vector<long> rows;
        for (long r = 0; r < k.rows(); ++r)
            if (seen[r]) rows.push_back(r);
        op_rows_.push_back(std::move(rows));
    }
}

namespace {
Mat gram_sum(const std::vector<Mat>& ops, const std::vector<std::vector<long>>& op_rows,
             long in_dim) {
    Mat acc = Mat::Zero(in_dim, in_dim);
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const Mat& k = ops[i];
        const auto& rows = op_rows[i];
        if (static_cast<long>(rows.size()) == k.rows()) {
            acc.noalias() += k.adjoint() * k;
        } else if (!rows.empty()) {
            Mat b(rows.size(), k.cols());
            for (std::size_t r = 0; r < rows.size(); ++r) b.row(r) = k.row(rows[r]);
            acc.noalias() += b.adjoint() * b;
        }
    }
    return acc;
}
} // namespace

KrausChannel::KrausChannel(std::vector<Mat> kraus_ops, RegisterLayout in_layout,
                           RegisterLayout out_layout, TraceClass trace_class)
    : ops_(std::move(kraus_ops)), in_(std::move(in_layout)), out_(std::move(out_layout)), tc_(trace_class) {
    if (ops_.empty()) throw std::invalid_argument("KrausChannel: empty Kraus list");
    index_rows();
    check_invariants();
}

KrausChannel KrausChannel::with_reject_completion(std::vector<Mat> listed_ops,
                                                  RegisterLayout in_layout,
                                                  RegisterLayout out_layout) {
    KrausChannel ch;
    ch.ops_ = std::move(listed_ops);
    ch.in_ = std::move(in_layout);
    ch.out_ = std::move(out_layout);
    ch.tc_ = TraceClass::preserving;
    ch.bot_completed_ = true;
    if (ch.ops_.empty())
        ch.ops_.push_back(Mat::Zero(ch.out_.total_dim(), ch.in_.total_dim()));
    ch.index_rows();
    ch.deficit_ = Mat::Identity(ch.in_dim(), ch.in_dim()) -
                  gram_sum(ch.ops_, ch.op_rows_, ch.in_dim());
    // Shifted Cholesky as a fast PSD test.
    const Mat shifted = ch.deficit_ + 1e-9 * Mat::Identity(ch.in_dim(), ch.in_dim());
    if (Eigen::LLT<Mat>(shifted).info() != Eigen::Success)
        throw std::runtime_error("KrausChannel: listed operators exceed trace preservation");
    return ch;
}

const std::vector<Mat>& KrausChannel::materialized() const {
    if (!materialized_) {
        auto full = std::make_shared<std::vector<Mat>>(ops_);
        Eigen::SelfAdjointEigenSolver<Mat> es(deficit_);
        const long dout = out_.total_dim();
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            const double lam = es.eigenvalues()(i);
            if (lam <= 1e-12) continue;
            Mat k = Mat::Zero(dout, in_dim());
            k.row(dout - 1) = std::sqrt(lam) * es.eigenvectors().col(i).adjoint();
            full->push_back(std::move(k));
        }
        materialized_ = std::move(full);
    }
    return *materialized_;
}

const std::vector<Mat>& KrausChannel::kraus_ops() const {
    return bot_completed_ ? materialized() : ops_;
}

void KrausChannel::check_invariants() const {
    const Mat acc = gram_sum(ops_, op_rows_, in_dim());
    const Mat id = Mat::Identity(in_dim(), in_dim());
    if (tc_ == TraceClass::preserving && !bot_completed_) {
        if (max_abs(acc - id) > 1e-9)
            throw std::runtime_error("KrausChannel: sum K^dag K != I for a trace-preserving map");
    } else {
        const Mat shifted = id - acc + 1e-9 * id;
        if (Eigen::LLT<Mat>(shifted).info() != Eigen::Success)
            throw std::runtime_error("KrausChannel: sum K^dag K exceeds I");
    }
}

KrausChannel KrausChannel::identity(const RegisterLayout& layout) {
    return KrausChannel({Mat::Identity(layout.total_dim(), layout.total_dim())}, layout, layout);
}

KrausChannel KrausChannel::unitary(const Mat& u, const RegisterLayout& in,
                                   const RegisterLayout& out) {
    if (!is_unitary(u, 1e-9)) throw std::invalid_argument("KrausChannel::unitary: not unitary");
    return KrausChannel({u}, in, out);
}

KrausChannel KrausChannel::unitary(const Mat& u, const RegisterLayout& layout) {
    return unitary(u, layout, layout);
}

KrausChannel KrausChannel::reject_all(const RegisterLayout& in, const RegisterLayout& out_base) {
    return with_reject_completion({}, in, out_base.extended());
}

KrausChannel KrausChannel::embed(const RegisterLayout& base) {
    const long d = base.base_dim();
    Mat k = Mat::Zero(d + 1, d);
    k.topLeftCorner(d, d) = Mat::Identity(d, d);
    return KrausChannel({k}, base, base.extended());
}

KrausChannel KrausChannel::completely_depolarizing(const RegisterLayout& layout) {
    const long d = layout.total_dim();
    std::vector<Mat> ops;
    ops.reserve(d * d);
    const double w = 1.0 / std::sqrt(static_cast<double>(d));
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) {
            Mat k = Mat::Zero(d, d);
            k(i, j) = w;
            ops.push_back(std::move(k));
        }
    return KrausChannel(std::move(ops), layout, layout);
}

Mat apply_kraus_list(const std::vector<Mat>& ops, const Mat& rho, long out_dim) {
    Mat out = Mat::Zero(out_dim, out_dim);
    for (const auto& k : ops) {
        // Many decode operators touch only a few output rows (rank-one
        // reject branches); restrict the product to those rows.
        std::vector<long> rows;
        for (long r = 0; r < k.rows(); ++r) {
            if (k.row(r).cwiseAbs().maxCoeff() > 0) rows.push_back(r);
        }
        if (static_cast<long>(rows.size()) == k.rows()) {
            out.noalias() += k * rho * k.adjoint();
            continue;
        }
        if (rows.empty()) continue;
        Mat b(rows.size(), k.cols());
        for (std::size_t i = 0; i < rows.size(); ++i) b.row(i) = k.row(rows[i]);
        const Mat t = b * rho * b.adjoint();
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < rows.size(); ++j) out(rows[i], rows[j]) += t(i, j);
    }
    return out;
}

Mat KrausChannel::apply_matrix(const Mat& rho) const {
    Mat out = Mat::Zero(out_dim(), out_dim());
    for (std::size_t i = 0; i < ops_.size(); ++i) {
        const Mat& k = ops_[i];
        const auto& rows = op_rows_[i];
        if (static_cast<long>(rows.size()) == k.rows()) {
            out.noalias() += k * rho * k.adjoint();
            continue;
        }
        if (rows.empty()) continue;
        Mat b(rows.size(), k.cols());
        for (std::size_t r = 0; r < rows.size(); ++r) b.row(r) = k.row(rows[r]);
        const Mat t = b * rho * b.adjoint();
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t c = 0; c < rows.size(); ++c) out(rows[a], rows[c]) += t(a, c);
    }
    if (bot_completed_) {
        // The implicit completion routes the missing weight to |bot>.
        out(out_dim() - 1, out_dim() - 1) += (deficit_ * rho).trace();
    }
    return out;
}

DensityState KrausChannel::apply(const DensityState& s) const {
    if (s.layout().total_dim() != in_dim())
        throw std::invalid_argument("KrausChannel::apply: layout mismatch");
    return DensityState(out_, apply_matrix(s.matrix()));
}

KrausChannel compose(const KrausChannel& b, const KrausChannel& a) {
    if (a.out_dim() != b.in_dim())
        throw std::invalid_argument("compose: intermediate dimension mismatch");
    std::vector<Mat> ops;
    ops.reserve(a.kraus_ops().size() * b.kraus_ops().size());
    for (const auto& kb : b.kraus_ops())
        for (const auto& ka : a.kraus_ops()) ops.push_back(kb * ka);
    const TraceClass tc = (a.trace_class() == TraceClass::preserving &&
                           b.trace_class() == TraceClass::preserving)
                              ? TraceClass::preserving
                              : TraceClass::non_increasing;
    return KrausChannel(std::move(ops), a.in_layout(), b.out_layout(), tc);
}

KrausChannel tensor_id(const KrausChannel& c, const RegisterLayout& side) {
    if (side.reject_extended())
        throw std::invalid_argument("tensor_id: side register cannot be reject-extended");
    const long ds = side.total_dim();
    const Mat id = Mat::Identity(ds, ds);
    std::vector<Mat> ops;
    ops.reserve(c.kraus_ops().size());
    for (const auto& k : c.kraus_ops()) ops.push_back(kron(k, id));
    return KrausChannel(std::move(ops), concat(flatten_extended(c.in_layout()), side),
                        concat(flatten_extended(c.out_layout()), side), c.trace_class());
}

KrausChannel mix(const std::vector<KrausChannel>& channels, const std::vector<double>& weights) {
    if (channels.empty() || channels.size() != weights.size())
        throw std::invalid_argument("mix: bad arguments");
    std::vector<Mat> ops;
    for (std::size_t i = 0; i < channels.size(); ++i) {
        if (channels[i].in_dim() != channels[0].in_dim() ||
            channels[i].out_dim() != channels[0].out_dim())
            throw std::invalid_argument("mix: incompatible channels");
        const double w = std::sqrt(weights[i]);
        for (const auto& k : channels[i].kraus_ops()) ops.push_back(w * k);
    }
    return KrausChannel(std::move(ops), channels[0].in_layout(), channels[0].out_layout(),
                        channels[0].trace_class());
}

Mat choi(const KrausChannel& c) {
    const long din = c.in_dim();
    const long dout = c.out_dim();
    Mat j = Mat::Zero(din * dout, din * dout);
    // (1/din) sum_ij |i><j| (x) Phi(|i><j|), assembled entry-wise from the
    // channel's action on matrix units.
    for (long i = 0; i < din; ++i)
        for (long j2 = 0; j2 < din; ++j2) {
            Mat unit = Mat::Zero(din, din);
            unit(i, j2) = 1.0;
            j.block(i * dout, j2 * dout, dout, dout) = c.apply_matrix(unit);
        }
    return j / static_cast<double>(din);
}

double choi_distance(const Mat& ja, const Mat& jb) {
    return trace_norm_hermitian(ja - jb);
}

double channel_distance(const KrausChannel& a, const KrausChannel& b) {
    if (a.in_dim() != b.in_dim() || a.out_dim() != b.out_dim())
        throw std::invalid_argument("channel_distance: dimension mismatch");
    return choi_distance(choi(a), choi(b));
}

KrausChannel channel_from_choi(const Mat& j, const RegisterLayout& in,
                               const RegisterLayout& out, double tol) {
    const long din = in.total_dim();
    const long dout = out.total_dim();
    if (j.rows() != din * dout) throw std::invalid_argument("channel_from_choi: size mismatch");
    Eigen::SelfAdjointEigenSolver<Mat> es(j);
    std::vector<Mat> ops;
    for (Eigen::Index e = 0; e < es.eigenvalues().size(); ++e) {
        const double lam = es.eigenvalues()(e);
        if (lam <= tol) continue;
        const Vec v = es.eigenvectors().col(e);
        Mat k(dout, din);
        for (long i = 0; i < din; ++i) k.col(i) = v.segment(i * dout, dout);
        ops.push_back(std::sqrt(lam * din) * k);
    }
    if (ops.empty()) ops.push_back(Mat::Zero(dout, din));
    return KrausChannel(std::move(ops), in, out, TraceClass::non_increasing);
}

} // namespace qsclab::sim
