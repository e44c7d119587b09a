#include "qsclab/toy_qs.hpp"

#include <stdexcept>

namespace qsclab::attacks {

using namespace qsclab::linalg;
using sim::KrausChannel;
using sim::RegisterLayout;

ToyQS::ToyQS(int m_dim, int anc_dim, int e1_dim, int e2_dim, std::vector<Key> keys)
    : m_dim_(m_dim), anc_dim_(anc_dim), e1_(e1_dim), e2_(e2_dim), keys_(std::move(keys)) {
    if (m_dim_ < 2 || anc_dim_ < 1 || e1_ < 1 || e2_ < 1 || keys_.empty())
        throw std::invalid_argument("ToyQS: bad dimensions");
    const long dc = cipher_dim();
    if (dc * e1_ != static_cast<long>(m_dim_) * e2_)
        throw std::invalid_argument("ToyQS: dilation shape mismatch");
    for (const auto& k : keys_) {
        if (k.sign_unitary.rows() != dc || !is_unitary(k.sign_unitary, 1e-9))
            throw std::invalid_argument("ToyQS: signing unitary invalid");
        if (k.verify_dilation.rows() != m_dim_ * e2_ || k.verify_dilation.cols() != dc * e1_ ||
            !is_unitary(k.verify_dilation, 1e-9))
            throw std::invalid_argument("ToyQS: verification dilation invalid");
        if (k.accept_projector.rows() != e2_ || !is_projector(k.accept_projector, 1e-9))
            throw std::invalid_argument("ToyQS: accept projector invalid");
    }
}

RegisterLayout ToyQS::message_layout() const { return RegisterLayout::single("M", m_dim_); }
RegisterLayout ToyQS::cipher_layout() const {
    return RegisterLayout::single("C", static_cast<int>(cipher_dim()));
}

KrausChannel ToyQS::sign_channel(int key) const {
    const auto& k = keys_.at(key);
    const long dc = cipher_dim();
    Mat iso = Mat::Zero(dc, m_dim_);
    for (int m = 0; m < m_dim_; ++m) iso.col(m) = k.sign_unitary.col(m * anc_dim_);
    return KrausChannel({iso}, message_layout(), cipher_layout());
}

KrausChannel ToyQS::verify_channel(int key) const {
    const auto& k = keys_.at(key);
    const long dc = cipher_dim();
    // Embed the ciphertext with the fresh |0>_{E1} ancilla, apply the
    // dilation, then split E2 into accept/reject eigenvectors.
    Mat embed_in = Mat::Zero(dc * e1_, dc);
    for (long c = 0; c < dc; ++c) embed_in(c * e1_, c) = 1.0;
    const Mat w = k.verify_dilation * embed_in;  // (m_dim * e2) x dc

    Eigen::SelfAdjointEigenSolver<Mat> es(k.accept_projector);
    std::vector<Mat> ops;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (es.eigenvalues()(i) < 0.5) continue;  // reject weight goes to |bot>
        const Vec f = es.eigenvectors().col(i);
        Mat acc = Mat::Zero(m_dim_ + 1, dc);
        for (int o = 0; o < m_dim_; ++o)
            for (int e = 0; e < e2_; ++e) acc.row(o) += std::conj(f(e)) * w.row(o * e2_ + e);
        ops.push_back(std::move(acc));
    }
    return KrausChannel::with_reject_completion(std::move(ops), cipher_layout(),
                                                message_layout().extended());
}

ToyQS make_keyed_unitary_toy() {
    Mat cnot(4, 4);
    cnot << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
    Mat cz = Mat::Identity(4, 4);
    cz(3, 3) = -1;
    const Mat v0 = cnot;
    const Mat v1 = cz * kron(kPauliI, kHadamard) * cnot;

    std::vector<ToyQS::Key> keys;
    for (const Mat& v : {v0, v1}) {
        ToyQS::Key k;
        k.sign_unitary = v;
        k.verify_dilation = v.adjoint();  // C -> M (x) E2 with E2 the ancilla
        k.accept_projector = basis_proj(2, 0);
        keys.push_back(std::move(k));
    }
    return ToyQS(2, 2, 1, 2, std::move(keys));
}

ToyQS make_basis_copy_toy() {
    Mat cnot(4, 4);
    cnot << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
    ToyQS::Key k;
    k.sign_unitary = cnot;
    k.verify_dilation = Mat::Identity(4, 4);   // expose the ancilla as E2
    k.accept_projector = Mat::Identity(2, 2);  // never rejects
    return ToyQS(2, 2, 1, 2, {std::move(k)});
}

} // namespace qsclab::attacks
