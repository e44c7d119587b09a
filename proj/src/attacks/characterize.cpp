#include "qsclab/characterize.hpp"

#include <stdexcept>

namespace qsclab::attacks {

using namespace qsclab::linalg;
using sim::KrausChannel;
using sim::RegisterLayout;

namespace {

/// Environment-alignment by orthogonal Procrustes: the unitary maximizing
/// Re Tr[V A] for the dilation overlap matrix A (SVD of A; ties inherit the
/// SVD output order).
Mat procrustes_unitary(const Mat& overlap) {
    Eigen::JacobiSVD<Mat> svd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixV() * svd.matrixU().adjoint();
}

} // namespace

EncryptionCharacterization characterize_encryption(const KrausChannel& enc,
                                                   const KrausChannel& dec,
                                                   double schmidt_cutoff) {
    const long dm = enc.in_dim();
    const long dc = enc.out_dim();
    if (dec.in_dim() != dc)
        throw std::invalid_argument("characterize_encryption: dec input mismatch");
    const bool extended_out = dec.out_dim() == dm + 1;
    if (!extended_out && dec.out_dim() != dm)
        throw std::invalid_argument("characterize_encryption: dec output mismatch");
    if (dc % dm != 0)
        throw std::invalid_argument("characterize_encryption: cipher dim not divisible");

    // Round-trip distance from the correctness target.
    const RegisterLayout m_layout = RegisterLayout::single("M", static_cast<int>(dm));
    KrausChannel target = extended_out
                              ? [&] {
                                    auto e = KrausChannel::embed(m_layout);
                                    return KrausChannel(e.kraus_ops(), e.in_layout(),
                                                        flatten_extended(e.out_layout()));
                                }()
                              : KrausChannel::identity(m_layout);
    const auto roundtrip = compose(
        KrausChannel(dec.kraus_ops(), dec.in_layout(), flatten_extended(dec.out_layout()),
                     dec.trace_class()),
        enc);
    const double delta = channel_distance(roundtrip, target);

    // Stinespring both channels: U: M -> C (x) E, W: C -> Mo (x) F.
    const auto u_dila = sim::stinespring(enc);
    const auto w_dila = sim::stinespring(dec);
    const long e1 = u_dila.env_dim;
    const long f0 = w_dila.env_dim;
    const long dmo = dec.out_dim();

    // Composite dilation G: M -> Mo (x) (F (x) E), env index g = f * e1 + e.
    const long env = f0 * e1;
    Mat g = Mat::Zero(dmo * env, dm);
    for (long m = 0; m < dm; ++m) {
        const Vec uc = u_dila.isometry.col(m);  // index (c, e)
        for (long o = 0; o < dmo; ++o)
            for (long f = 0; f < f0; ++f) {
                for (long e = 0; e < e1; ++e) {
                    cplx acc = 0;
                    for (long c = 0; c < dc; ++c)
                        acc += w_dila.isometry(o * f0 + f, c) * uc(c * e1 + e);
                    g(o * env + f * e1 + e, m) = acc;
                }
            }
    }

    // Align the composite environment against the target's trivial dilation
    // (identity/embedding tensored with a fixed environment vector).
    Mat overlap = Mat::Zero(env, env);
    for (long gidx = 0; gidx < env; ++gidx) {
        cplx acc = 0;
        for (long m = 0; m < dm; ++m) acc += g(m * env + gidx, m);
        overlap(gidx, 0) = acc;
    }
    const Mat align = procrustes_unitary(overlap);
    const Vec phi = align.adjoint() * basis_vec(static_cast<int>(env), 0);  // in F (x) E

    // Unitary completion W-hat of the decoder isometry, padding F so that
    // (Mo x Fpad) is divisible by C.
    long fpad = f0;
    while ((dmo * fpad) % dc != 0) ++fpad;
    Mat w_iso = Mat::Zero(dmo * fpad, dc);
    for (long o = 0; o < dmo; ++o)
        for (long f = 0; f < f0; ++f) w_iso.row(o * fpad + f) = w_dila.isometry.row(o * f0 + f);
    const long dr = (dmo * fpad) / dc;
    const Mat w_full = complete_isometry(w_iso);  // columns: first dc are W
    Mat w_hat = Mat::Zero(dmo * fpad, dmo * fpad);
    for (long c = 0; c < dc; ++c) w_hat.col(c * dr) = w_full.col(c);
    long extra = dc;
    for (long c = 0; c < dc; ++c)
        for (long r = 1; r < dr; ++r) w_hat.col(c * dr + r) = w_full.col(extra++);

    // B: M -> C (x) E, reading the R=0 slice of W-hat^dag |m, phi>.
    const Mat w_hat_dag = w_hat.adjoint();
    Mat b = Mat::Zero(dc * e1, dm);
    for (long m = 0; m < dm; ++m) {
        for (long e = 0; e < e1; ++e) {
            // x over (Mo, Fpad): |m> (x) phi_F component for this e
            Vec x = Vec::Zero(dmo * fpad);
            for (long f = 0; f < f0; ++f) x(m * fpad + f) = phi(f * e1 + e);
            const Vec y = w_hat_dag * x;  // over (C, R)
            for (long c = 0; c < dc; ++c) b(c * e1 + e, m) += y(c * dr);
        }
    }

    // SVD polar correction: the exact isometry closest to B, and the input
    // correction that turns the A-map into an exact conditional isometry.
    Eigen::JacobiSVD<Mat> bsvd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Mat corr = bsvd.matrixV() *
                     bsvd.singularValues().cwiseMax(1e-12).cwiseInverse().asDiagonal() *
                     bsvd.matrixV().adjoint();

    // A: (M (x) Fpad) -> C from the corrected decoder, then kappa and sigma.
    Mat a = Mat::Zero(dc, dm * fpad);
    for (long c = 0; c < dc; ++c)
        for (long m = 0; m < dm; ++m)
            for (long f = 0; f < fpad; ++f) {
                // <c, r=0| W-hat^dag |(m, f)>
                a(c, m * fpad + f) = w_hat_dag(c * dr, m * fpad + f);
            }
    // Fold the polar correction into the message index.
    Mat a_corr = Mat::Zero(dc, dm * fpad);
    for (long c = 0; c < dc; ++c)
        for (long f = 0; f < fpad; ++f)
            for (long m = 0; m < dm; ++m) {
                cplx acc = 0;
                for (long m2 = 0; m2 < dm; ++m2)
                    acc += a(c, m2 * fpad + f) * corr(m2, m);
                a_corr(c, m * fpad + f) = acc;
            }

    // kappa_F = (1/dm) Tr_M [A^dag A].
    const Mat ada = a_corr.adjoint() * a_corr;
    Mat kappa = Mat::Zero(fpad, fpad);
    for (long f = 0; f < fpad; ++f)
        for (long f2 = 0; f2 < fpad; ++f2) {
            cplx acc = 0;
            for (long m = 0; m < dm; ++m) acc += ada(m * fpad + f, m * fpad + f2);
            kappa(f, f2) = acc / static_cast<double>(dm);
        }

    // phi_F = Tr_E |phi><phi| and sigma = sqrt(kappa) phi_F sqrt(kappa).
    Mat phi_f = Mat::Zero(fpad, fpad);
    for (long f = 0; f < f0; ++f)
        for (long f2 = 0; f2 < f0; ++f2) {
            cplx acc = 0;
            for (long e = 0; e < e1; ++e) acc += phi(f * e1 + e) * std::conj(phi(f2 * e1 + e));
            phi_f(f, f2) = acc;
        }
    const Mat sqrt_kappa = sqrt_psd(kappa);
    Mat sigma_f = sqrt_kappa * phi_f * sqrt_kappa;

    // T basis: eigenvectors of kappa by descending eigenvalue, the leading
    // dc/dm of them; V is the completion of A kappa^{-1/2} on that block.
    const long dt = dc / dm;
    Eigen::SelfAdjointEigenSolver<Mat> kes(kappa);
    std::vector<long> order(fpad);
    for (long i = 0; i < fpad; ++i) order[i] = fpad - 1 - i;  // descending
    Mat tbasis(fpad, dt);
    for (long j = 0; j < dt; ++j) tbasis.col(j) = kes.eigenvectors().col(order[j]);

    const Mat kappa_pinv_sqrt = pinv_sqrt_psd(kappa);
    Mat v_part = Mat::Zero(dc, dm * dt);
    long iso_cols = 0;
    std::vector<bool> col_set(dm * dt, false);
    for (long j = 0; j < dt; ++j) {
        const double lam = kes.eigenvalues()(order[j]);
        if (lam < 1e-10) continue;
        const Vec tj = kappa_pinv_sqrt * tbasis.col(j);
        for (long m = 0; m < dm; ++m) {
            Vec in = Vec::Zero(dm * fpad);
            for (long f = 0; f < fpad; ++f) in(m * fpad + f) = tj(f);
            v_part.col(m * dt + j) = a_corr * in;
            col_set[m * dt + j] = true;
            ++iso_cols;
        }
    }
    // Gather the defined columns, complete, then scatter back in order.
    Mat defined(dc, iso_cols);
    long di = 0;
    for (long col = 0; col < dm * dt; ++col)
        if (col_set[col]) defined.col(di++) = v_part.col(col);
    // Orthonormality polish before completion.
    Eigen::JacobiSVD<Mat> dsvd(defined, Eigen::ComputeThinU | Eigen::ComputeThinV);
    defined = dsvd.matrixU() * dsvd.matrixV().adjoint();
    const Mat completed = complete_isometry(defined);
    Mat v = Mat::Zero(dc, dc);
    di = 0;
    long spare = iso_cols;
    for (long col = 0; col < dm * dt; ++col) {
        if (col_set[col]) v.col(col) = completed.col(di++);
        else v.col(col) = completed.col(spare++);
    }

    // sigma expressed in the chosen T basis.
    Mat sigma_t = Mat::Zero(dt, dt);
    for (long j = 0; j < dt; ++j)
        for (long j2 = 0; j2 < dt; ++j2)
            sigma_t(j, j2) = (tbasis.col(j).adjoint() * sigma_f * tbasis.col(j2))(0, 0);

    EncryptionCharacterization out;
    out.unitary_v = std::move(v);
    out.sigma = std::move(sigma_t);
    out.t_dim = static_cast<int>(dt);
    out.roundtrip_delta = delta;
    out.cutoff = schmidt_cutoff >= 0 ? schmidt_cutoff : std::pow(4.0 * delta, 1.0 / 6.0);

    // Support projector: drop ascending eigenvalues while they stay below the
    // cutoff and the dropped mass stays below it too.
    Eigen::SelfAdjointEigenSolver<Mat> ses(out.sigma);
    Mat proj = Mat::Zero(dt, dt);
    double dropped = 0;
    for (long i = 0; i < dt; ++i) {
        const double lam = std::max(0.0, ses.eigenvalues()(i));
        const bool drop = lam < std::max(out.cutoff, 1e-12) && dropped + lam <= out.cutoff + 1e-12;
        if (drop) {
            dropped += lam;
            continue;
        }
        proj += ses.eigenvectors().col(i) * ses.eigenvectors().col(i).adjoint();
    }
    out.support_projector = std::move(proj);

    // Reconstruction fit: enc vs V((.) (x) sigma)V^dag as channels.
    Eigen::SelfAdjointEigenSolver<Mat> fs(out.sigma);
    std::vector<Mat> ops;
    for (long i = 0; i < dt; ++i) {
        const double lam = fs.eigenvalues()(i);
        if (lam < 1e-14) continue;
        Mat k = Mat::Zero(dc, dm);
        for (long m = 0; m < dm; ++m) {
            Vec in = Vec::Zero(dc);
            for (long t = 0; t < dt; ++t) in += fs.eigenvectors()(t, i) *
                                                out.unitary_v.col(m * dt + t);
            k.col(m) = std::sqrt(lam) * in;
        }
        ops.push_back(std::move(k));
    }
    if (ops.empty()) ops.push_back(Mat::Zero(dc, dm));
    KrausChannel reconstructed(std::move(ops), enc.in_layout(), enc.out_layout(),
                               sim::TraceClass::non_increasing);
    out.fit_error = channel_distance(enc, reconstructed);
    return out;
}

} // namespace qsclab::attacks
