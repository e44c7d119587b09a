#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace qsclab {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Deterministic RNG handle used throughout; mt19937_64 keeps replays
/// byte-identical for a fixed seed. Helpers below avoid std distributions
/// so the output stream does not depend on the standard library vendor.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t u64() { return eng_(); }

    /// Uniform integer in [0, bound), bound >= 1, via rejection.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform double in [0, 1).
    double uniform();

    /// Standard normal via Box-Muller.
    double gauss();

    bool bit() { return (u64() & 1u) != 0; }

    void fill_bytes(std::vector<std::uint8_t>& out);
    std::vector<std::uint8_t> bytes(std::size_t n);

    /// Child RNG with a seed derived from this stream (for per-trial streams).
    Rng fork() { return Rng(u64() ^ 0x9e3779b97f4a7c15ull); }

private:
    std::mt19937_64 eng_;
    bool have_gauss_ = false;
    double spare_gauss_ = 0.0;
};

namespace linalg {

Mat kron(const Mat& a, const Mat& b);
inline Mat dagger(const Mat& a) { return a.adjoint(); }

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm_hermitian(const Mat& h);

/// Sum of singular values (any matrix).
double trace_norm(const Mat& a);

/// Largest singular value.
double operator_norm(const Mat& a);

double max_abs(const Mat& a);

bool is_hermitian(const Mat& a, double tol = 1e-10);
bool is_unitary(const Mat& u, double tol = 1e-9);
bool is_isometry(const Mat& v, double tol = 1e-9);
bool is_projector(const Mat& p, double tol = 1e-10);

/// Hermitian PSD square root via eigendecomposition (negative dust clipped).
Mat sqrt_psd(const Mat& a);

/// Moore-Penrose inverse square root of a Hermitian PSD matrix,
/// acting only on the eigenspaces above `rank_tol`.
Mat pinv_sqrt_psd(const Mat& a, double rank_tol = 1e-12);

/// Extend an isometry (cols orthonormal, rows >= cols) to a square unitary.
Mat complete_isometry(const Mat& v);

/// Haar-random pure state of dimension d.
Vec haar_state(int d, Rng& rng);

/// Random density matrix of dimension d (normalized Wishart).
Mat random_density(int d, Rng& rng);

/// Random rank-k orthogonal projector of dimension d.
Mat random_projector(int d, int k, Rng& rng);

/// Permutation matrix that reorders tensor factors with dimensions `dims`
/// so that factor i of the input ends up at position perm[i] of the output.
Mat permute_factors(const std::vector<int>& dims, const std::vector<int>& perm);

Mat identity(int d);
Mat zero(int r, int c);

/// Computational basis projector |i><i| of dimension d.
Mat basis_proj(int d, int i);
Vec basis_vec(int d, int i);

extern const Mat kPauliI;
extern const Mat kPauliX;
extern const Mat kPauliY;
extern const Mat kPauliZ;
extern const Mat kHadamard;

} // namespace linalg
} // namespace qsclab
