#include "qsclab/linalg.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsclab {

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                (std::numeric_limits<std::uint64_t>::max() % bound);
    std::uint64_t x;
    do {
        x = u64();
    } while (x >= limit);
    return x % bound;
}

double Rng::uniform() {
    return static_cast<double>(u64() >> 11) * 0x1.0p-53;
}

double Rng::gauss() {
    if (have_gauss_) {
        have_gauss_ = false;
        return spare_gauss_;
    }
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_gauss_ = r * std::sin(t);
    have_gauss_ = true;
    return r * std::cos(t);
}

void Rng::fill_bytes(std::vector<std::uint8_t>& out) {
    std::size_t i = 0;
    while (i < out.size()) {
        std::uint64_t w = u64();
        for (int k = 0; k < 8 && i < out.size(); ++k, ++i) {
            out[i] = static_cast<std::uint8_t>(w & 0xff);
            w >>= 8;
        }
    }
}

std::vector<std::uint8_t> Rng::bytes(std::size_t n) {
    std::vector<std::uint8_t> out(n);
    fill_bytes(out);
    return out;
}

namespace linalg {

namespace {
Mat make_pauli(int which) {
    Mat m(2, 2);
    switch (which) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        default: m << 1, 0, 0, -1; break;
    }
    return m;
}
Mat make_hadamard() {
    Mat m(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}
} // namespace

const Mat kPauliI = make_pauli(0);
const Mat kPauliX = make_pauli(1);
const Mat kPauliY = make_pauli(2);
const Mat kPauliZ = make_pauli(3);
const Mat kHadamard = make_hadamard();

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double trace_norm_hermitian(const Mat& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

double trace_norm(const Mat& a) {
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues().sum();
}

double operator_norm(const Mat& a) {
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

double max_abs(const Mat& a) {
    return a.size() > 0 ? a.cwiseAbs().maxCoeff() : 0.0;
}

bool is_hermitian(const Mat& a, double tol) {
    return a.rows() == a.cols() && max_abs(a - a.adjoint()) <= tol;
}

bool is_unitary(const Mat& u, double tol) {
    if (u.rows() != u.cols()) return false;
    return max_abs(u.adjoint() * u - Mat::Identity(u.cols(), u.cols())) <= tol;
}

bool is_isometry(const Mat& v, double tol) {
    if (v.rows() < v.cols()) return false;
    return max_abs(v.adjoint() * v - Mat::Identity(v.cols(), v.cols())) <= tol;
}

bool is_projector(const Mat& p, double tol) {
    return is_hermitian(p, tol) && max_abs(p * p - p) <= tol;
}

Mat sqrt_psd(const Mat& a) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = ev(i) > 0 ? std::sqrt(ev(i)) : 0.0;
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Mat pinv_sqrt_psd(const Mat& a, double rank_tol) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    Eigen::VectorXd ev = es.eigenvalues();
    const double cutoff = rank_tol * std::max(1.0, ev.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        ev(i) = ev(i) > cutoff ? 1.0 / std::sqrt(ev(i)) : 0.0;
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Mat complete_isometry(const Mat& v) {
    const Eigen::Index n = v.rows();
    const Eigen::Index k = v.cols();
    if (k > n) throw std::invalid_argument("complete_isometry: more columns than rows");
    if (k == n) return v;
    // Orthonormal basis of the orthogonal complement of the column span.
    Mat p = Mat::Identity(n, n) - v * v.adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> es(p);
    Mat u(n, n);
    u.leftCols(k) = v;
    Eigen::Index col = k;
    for (Eigen::Index i = 0; i < n && col < n; ++i) {
        if (es.eigenvalues()(i) > 0.5) u.col(col++) = es.eigenvectors().col(i);
    }
    if (col != n) throw std::runtime_error("complete_isometry: complement rank mismatch");
    return u;
}

Vec haar_state(int d, Rng& rng) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v(i) = cplx(rng.gauss(), rng.gauss());
    v.normalize();
    return v;
}

Mat random_density(int d, Rng& rng) {
    Mat g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = cplx(rng.gauss(), rng.gauss());
    Mat rho = g * g.adjoint();
    return rho / rho.trace().real();
}

Mat random_projector(int d, int k, Rng& rng) {
    if (k < 0 || k > d) throw std::invalid_argument("random_projector: bad rank");
    Mat g(d, k);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < k; ++j) g(i, j) = cplx(rng.gauss(), rng.gauss());
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(d, k);
    return q * q.adjoint();
}

Mat permute_factors(const std::vector<int>& dims, const std::vector<int>& perm) {
    const int n = static_cast<int>(dims.size());
    if (static_cast<int>(perm.size()) != n)
        throw std::invalid_argument("permute_factors: size mismatch");
    long total = 1;
    for (int d : dims) total *= d;
    std::vector<int> out_dims(n);
    for (int i = 0; i < n; ++i) out_dims[perm[i]] = dims[i];
    std::vector<long> in_stride(n, 1), out_stride(n, 1);
    for (int i = n - 2; i >= 0; --i) in_stride[i] = in_stride[i + 1] * dims[i + 1];
    for (int i = n - 2; i >= 0; --i) out_stride[i] = out_stride[i + 1] * out_dims[i + 1];
    Mat p = Mat::Zero(total, total);
    std::vector<int> idx(n, 0);
    for (long row = 0; row < total; ++row) {
        long r = row;
        long out_index = 0;
        for (int i = 0; i < n; ++i) {
            idx[i] = static_cast<int>(r / in_stride[i]);
            r %= in_stride[i];
            out_index += static_cast<long>(idx[i]) * out_stride[perm[i]];
        }
        p(out_index, row) = 1.0;
    }
    return p;
}

Mat identity(int d) { return Mat::Identity(d, d); }
Mat zero(int r, int c) { return Mat::Zero(r, c); }

Mat basis_proj(int d, int i) {
    Mat m = Mat::Zero(d, d);
    m(i, i) = 1.0;
    return m;
}

Vec basis_vec(int d, int i) {
    Vec v = Vec::Zero(d);
    v(i) = 1.0;
    return v;
}

} // namespace linalg
} // namespace qsclab
