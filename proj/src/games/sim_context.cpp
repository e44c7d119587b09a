#include "qsclab/sim_context.hpp"

#include <stdexcept>

namespace qsclab::games {

using namespace qsclab::linalg;

namespace {

/// Index permutation for reordering tensor factors: entry i of the result is
/// the new flat index of old flat index i.
std::vector<long> factor_index_map(const std::vector<int>& dims, const std::vector<int>& target) {
    const int n = static_cast<int>(dims.size());
    long total = 1;
    for (int d : dims) total *= d;
    std::vector<int> out_dims(n);
    for (int i = 0; i < n; ++i) out_dims[target[i]] = dims[i];
    std::vector<long> in_stride(n, 1), out_stride(n, 1);
    for (int i = n - 2; i >= 0; --i) in_stride[i] = in_stride[i + 1] * dims[i + 1];
    for (int i = n - 2; i >= 0; --i) out_stride[i] = out_stride[i + 1] * out_dims[i + 1];
    std::vector<long> map(total);
    for (long idx = 0; idx < total; ++idx) {
        long r = idx;
        long out = 0;
        for (int i = 0; i < n; ++i) {
            const long digit = r / in_stride[i];
            r %= in_stride[i];
            out += digit * out_stride[target[i]];
        }
        map[idx] = out;
    }
    return map;
}

} // namespace

bool SimContext::has(const std::string& label) const {
    for (const auto& r : regs_)
        if (r.label == label) return true;
    return false;
}

int SimContext::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < regs_.size(); ++i)
        if (regs_[i].label == label) return static_cast<int>(i);
    throw std::invalid_argument("SimContext: unknown register " + label);
}

int SimContext::dim_of(const std::string& label) const { return regs_[index_of(label)].dim; }

long SimContext::total_dim() const {
    long d = 1;
    for (const auto& r : regs_) d *= r.dim;
    return d;
}

std::vector<std::string> SimContext::labels() const {
    std::vector<std::string> out;
    for (const auto& r : regs_) out.push_back(r.label);
    return out;
}

void SimContext::add_state(const std::string& label, const Mat& density, int dim) {
    if (has(label)) throw std::invalid_argument("SimContext: duplicate register " + label);
    if (density.rows() != dim || density.cols() != dim)
        throw std::invalid_argument("SimContext: density size mismatch");
    if (total_dim() * dim > kMaxDim)
        throw std::runtime_error("SimContext: joint dimension cap exceeded");
    state_ = regs_.empty() ? density : kron(state_, density);
    regs_.push_back({label, dim});
}

void SimContext::add_state(const std::string& label, const sim::DensityState& st) {
    add_state(label, st.matrix(), static_cast<int>(st.layout().total_dim()));
}

void SimContext::add_basis(const std::string& label, int dim, long index) {
    add_state(label, basis_proj(dim, static_cast<int>(index)), dim);
}

void SimContext::add_bell(const std::string& la, const std::string& lb, int d) {
    auto bell = sim::bell_pair(d, la, lb);
    if (has(la) || has(lb)) throw std::invalid_argument("SimContext: duplicate register");
    if (total_dim() * d * d > kMaxDim)
        throw std::runtime_error("SimContext: joint dimension cap exceeded");
    state_ = regs_.empty() ? bell.matrix() : kron(state_, bell.matrix());
    regs_.push_back({la, d});
    regs_.push_back({lb, d});
}

void SimContext::reorder_front(const std::vector<std::string>& front) {
    const int n = static_cast<int>(regs_.size());
    std::vector<int> target(n, -1);
    int pos = 0;
    bool already = true;
    for (const auto& l : front) {
        const int idx = index_of(l);
        if (idx != pos) already = false;
        target[idx] = pos++;
    }
    if (already) return;
    std::vector<sim::Subsystem> new_regs(n);
    for (int i = 0; i < n; ++i) {
        if (target[i] < 0) target[i] = pos++;
        new_regs[target[i]] = regs_[i];
    }
    std::vector<int> dims;
    for (const auto& r : regs_) dims.push_back(r.dim);
    const auto map = factor_index_map(dims, target);
    const long total = state_.rows();
    Mat out(total, total);
    for (long i = 0; i < total; ++i)
        for (long j = 0; j < total; ++j) out(map[i], map[j]) = state_(i, j);
    state_ = std::move(out);
    regs_ = std::move(new_regs);
}

namespace {

/// Apply sum_K (K (x) I_rest) rho (K (x) I_rest)^dag block-wise, using the
/// nonzero output rows of each operator.
Mat apply_front_kraus(const std::vector<Mat>& ops, const Mat& rho, long don, long dout,
                      long rest) {
    Mat out = Mat::Zero(dout * rest, dout * rest);
    auto block = [&](const Mat& m, long r, long c) {
        return m.block(r * rest, c * rest, rest, rest);
    };
    for (const auto& k : ops) {
        std::vector<long> rows;
        for (long r = 0; r < k.rows(); ++r)
            if (k.row(r).squaredNorm() > 0) rows.push_back(r);
        if (rows.empty()) continue;
        // temp[(ri, c')] = sum_c K[rows[ri], c] rho_block(c, c')
        Mat temp = Mat::Zero(rows.size() * rest, don * rest);
        for (std::size_t ri = 0; ri < rows.size(); ++ri)
            for (long c = 0; c < don; ++c) {
                const cplx kc = k(rows[ri], c);
                if (kc == cplx(0, 0)) continue;
                for (long c2 = 0; c2 < don; ++c2)
                    temp.block(ri * rest, c2 * rest, rest, rest).noalias() +=
                        kc * block(rho, c, c2);
            }
        for (std::size_t ri = 0; ri < rows.size(); ++ri)
            for (std::size_t rj = 0; rj < rows.size(); ++rj)
                for (long c2 = 0; c2 < don; ++c2) {
                    const cplx kc = std::conj(k(rows[rj], c2));
                    if (kc == cplx(0, 0)) continue;
                    out.block(rows[ri] * rest, rows[rj] * rest, rest, rest).noalias() +=
                        kc * temp.block(ri * rest, c2 * rest, rest, rest);
                }
    }
    return out;
}

} // namespace

void SimContext::apply(const sim::KrausChannel& chan, const std::vector<std::string>& on,
                       const std::vector<std::string>& out_labels) {
    reorder_front(on);
    long don = 1;
    for (const auto& l : on) don *= dim_of(l);
    if (don != chan.in_dim()) throw std::invalid_argument("SimContext::apply: dim mismatch");
    const long rest = total_dim() / don;

    const auto out_layout = flatten_extended(chan.out_layout());
    if (out_labels.size() != out_layout.subsystems().size())
        throw std::invalid_argument("SimContext::apply: output label count mismatch");
    for (const auto& l : out_labels) {
        bool replaced = false;
        for (const auto& o : on) replaced = replaced || (o == l);
        if (has(l) && !replaced)
            throw std::invalid_argument("SimContext::apply: output label collides: " + l);
    }
    if (chan.out_dim() * rest > kMaxDim)
        throw std::runtime_error("SimContext: joint dimension cap exceeded");

    if (rest == 1) {
        state_ = chan.apply_matrix(state_);
    } else {
        state_ = apply_front_kraus(chan.kraus_ops(), state_, don, chan.out_dim(), rest);
    }

    std::vector<sim::Subsystem> new_regs;
    for (std::size_t i = 0; i < out_labels.size(); ++i)
        new_regs.push_back({out_labels[i], out_layout.subsystems()[i].dim});
    for (std::size_t i = on.size(); i < regs_.size(); ++i) new_regs.push_back(regs_[i]);
    regs_ = std::move(new_regs);
}

void SimContext::apply_unitary(const Mat& u, const std::vector<std::string>& on) {
    reorder_front(on);
    long don = 1;
    for (const auto& l : on) don *= dim_of(l);
    if (u.rows() != don) throw std::invalid_argument("SimContext::apply_unitary: dim mismatch");
    if (!is_unitary(u, 1e-9))
        throw std::invalid_argument("SimContext::apply_unitary: not unitary");
    const long rest = total_dim() / don;
    if (rest == 1) state_ = u * state_ * u.adjoint();
    else state_ = apply_front_kraus({u}, state_, don, don, rest);
}

int SimContext::measure(const Mat& projector, const std::vector<std::string>& on, Rng& rng) {
    reorder_front(on);
    long don = 1;
    for (const auto& l : on) don *= dim_of(l);
    if (projector.rows() != don)
        throw std::invalid_argument("SimContext::measure: projector dim mismatch");
    const long rest = total_dim() / don;
    const Mat post1 = rest == 1 ? Mat(projector * state_ * projector)
                                : apply_front_kraus({projector}, state_, don, don, rest);
    const double prob1 = post1.trace().real();
    const int outcome = rng.uniform() < prob1 ? 1 : 0;
    if (outcome == 1 && prob1 > 1e-14) {
        state_ = post1 / prob1;
        return 1;
    }
    const Mat comp = Mat::Identity(don, don) - projector;
    const Mat post0 = rest == 1 ? Mat(comp * state_ * comp)
                                : apply_front_kraus({comp}, state_, don, don, rest);
    const double prob0 = post0.trace().real();
    if (prob0 <= 1e-14) {
        state_ = post1 / prob1;
        return 1;
    }
    state_ = post0 / prob0;
    return 0;
}

sim::DensityState SimContext::peek(const std::vector<std::string>& keep) const {
    // Marginal without disturbing (or copying) the full context: sum the
    // diagonal over every traced factor via index arithmetic.
    const int n = static_cast<int>(regs_.size());
    std::vector<int> target(n, -1);
    int pos = 0;
    for (const auto& l : keep) target[index_of(l)] = pos++;
    for (int i = 0; i < n; ++i)
        if (target[i] < 0) target[i] = pos++;
    std::vector<int> dims;
    for (const auto& r : regs_) dims.push_back(r.dim);
    const auto map = factor_index_map(dims, target);

    long dk = 1;
    for (const auto& l : keep) dk *= dim_of(l);
    const long total = state_.rows();
    const long rest = total / dk;
    Mat out = Mat::Zero(dk, dk);
    // Invert the map per index: walk all pairs whose reordered indices share
    // the same rest part.
    std::vector<long> front_of(total), rest_of(total);
    for (long i = 0; i < total; ++i) {
        front_of[i] = map[i] / rest;
        rest_of[i] = map[i] % rest;
    }
    std::vector<std::vector<long>> by_rest(rest);
    for (long i = 0; i < total; ++i) by_rest[rest_of[i]].push_back(i);
    for (long t = 0; t < rest; ++t)
        for (long i : by_rest[t])
            for (long j : by_rest[t]) out(front_of[i], front_of[j]) += state_(i, j);

    std::vector<sim::Subsystem> layout_subs;
    for (const auto& l : keep) layout_subs.push_back({l, dim_of(l)});
    return sim::DensityState(sim::RegisterLayout(layout_subs), std::move(out));
}

void SimContext::discard(const std::string& label) {
    reorder_front({label});
    const long d = dim_of(label);
    const long rest = total_dim() / d;
    Mat out = Mat::Zero(rest, rest);
    for (long t = 0; t < d; ++t) out += state_.block(t * rest, t * rest, rest, rest);
    state_ = std::move(out);
    regs_.erase(regs_.begin());
}

void SimContext::rename(const std::string& from, const std::string& to) {
    if (has(to)) throw std::invalid_argument("SimContext::rename: target exists: " + to);
    regs_[index_of(from)].label = to;
}

Mat bell_pass_projector_ext(int d) {
    const Mat bell = sim::bell_vector_matrix(d);  // d^2 x d^2
    const long dext = d + 1;
    Mat p = Mat::Zero(dext * d, dext * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e)
                    p(a * d + b, c * d + e) = bell(a * d + b, c * d + e);
    return p;
}

} // namespace qsclab::games
