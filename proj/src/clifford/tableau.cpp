#include "qsclab/clifford.hpp"

#include <algorithm>
#include <stdexcept>

namespace qsclab::cliff {

using namespace qsclab::linalg;

bool PauliRep::is_identity() const {
    for (int i = 0; i < qubits(); ++i)
        if (x[i] || z[i]) return false;
    return true;
}

Mat pauli_matrix(const PauliRep& p) {
    const int n = p.qubits();
    Mat out = Mat::Identity(1, 1);
    for (int j = 0; j < n; ++j) {
        Mat q;
        if (p.x[j] && p.z[j]) q = kPauliY;        // i XZ = Y
        else if (p.x[j]) q = kPauliX;
        else if (p.z[j]) q = kPauliZ;
        else q = kPauliI;
        out = kron(out, q);
    }
    if (p.negative) out = -out;
    return out;
}

int symplectic_product(const PauliRep& a, const PauliRep& b) {
    int acc = 0;
    for (int i = 0; i < a.qubits(); ++i) acc ^= (a.x[i] & b.z[i]) ^ (a.z[i] & b.x[i]);
    return acc;
}

CliffordElement::CliffordElement(std::vector<std::vector<std::uint8_t>> symplectic,
                                 std::vector<std::uint8_t> phases)
    : s_(std::move(symplectic)), r_(std::move(phases)) {
    if (s_.empty() || s_.size() % 2 != 0)
        throw std::invalid_argument("CliffordElement: tableau must have 2m rows");
    m_ = static_cast<int>(s_.size()) / 2;
    for (const auto& row : s_)
        if (row.size() != s_.size())
            throw std::invalid_argument("CliffordElement: tableau must be square");
    if (r_.size() != s_.size())
        throw std::invalid_argument("CliffordElement: phase vector size mismatch");
    if (!symplectic_condition_holds())
        throw std::invalid_argument("CliffordElement: symplectic condition violated");
}

CliffordElement CliffordElement::identity(int m) {
    std::vector<std::vector<std::uint8_t>> s(2 * m, std::vector<std::uint8_t>(2 * m, 0));
    for (int i = 0; i < 2 * m; ++i) s[i][i] = 1;
    return CliffordElement(std::move(s), std::vector<std::uint8_t>(2 * m, 0));
}

namespace {
int row_symplectic_product(const std::vector<std::uint8_t>& a,
                           const std::vector<std::uint8_t>& b) {
    const int n = static_cast<int>(a.size()) / 2;
    int acc = 0;
    for (int i = 0; i < n; ++i) acc ^= (a[i] & b[n + i]) ^ (a[n + i] & b[i]);
    return acc;
}
} // namespace

bool is_symplectic(const std::vector<std::vector<std::uint8_t>>& s) {
    const int rows = static_cast<int>(s.size());
    const int n = rows / 2;
    for (int a = 0; a < rows; ++a)
        for (int b = a; b < rows; ++b) {
            const int want = (b == a + n && a < n) ? 1 : 0;
            if (row_symplectic_product(s[a], s[b]) != want) return false;
        }
    return true;
}

bool CliffordElement::symplectic_condition_holds() const { return is_symplectic(s_); }

PauliRep CliffordElement::generator_image(int i) const {
    PauliRep p;
    p.x.assign(s_[i].begin(), s_[i].begin() + m_);
    p.z.assign(s_[i].begin() + m_, s_[i].end());
    p.negative = r_[i] != 0;
    return p;
}

namespace {

/// Apply a Hermitian Pauli string to a state vector.
void apply_pauli(const PauliRep& p, Vec& v) {
    const int n = p.qubits();
    const long dim = v.size();
    long xmask = 0;
    long zmask = 0;
    int y_count = 0;
    for (int j = 0; j < n; ++j) {
        const long bit = 1L << (n - 1 - j);  // qubit 0 is the most significant factor
        if (p.x[j]) xmask |= bit;
        if (p.z[j]) zmask |= bit;
        if (p.x[j] && p.z[j]) ++y_count;
    }
    static const cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const cplx global = (p.negative ? -1.0 : 1.0) * i_pow[y_count % 4];
    Vec out(dim);
    for (long b = 0; b < dim; ++b) {
        const int zpar = __builtin_popcountll(static_cast<unsigned long long>(b & zmask)) & 1;
        out[b ^ xmask] = global * (zpar ? -v[b] : v[b]);
    }
    v = std::move(out);
}

} // namespace

Mat CliffordElement::unitary() const {
    const long dim = 1L << m_;
    std::vector<PauliRep> im_x(m_), im_z(m_);
    for (int i = 0; i < m_; ++i) {
        im_x[i] = generator_image(i);
        im_z[i] = generator_image(m_ + i);
    }
    // |psi0> is the unique state stabilized by the Z-generator images.
    Vec psi0;
    for (long seed = 0; seed < dim; ++seed) {
        Vec v = Vec::Zero(dim);
        v(seed) = 1.0;
        for (int i = 0; i < m_; ++i) {
            Vec pv = v;
            apply_pauli(im_z[i], pv);
            v = 0.5 * (v + pv);
        }
        if (v.norm() > 1e-6) {
            psi0 = v / v.norm();
            break;
        }
    }
    if (psi0.size() == 0) throw std::runtime_error("CliffordElement: no stabilized state found");
    for (long i = 0; i < dim; ++i) {
        if (std::abs(psi0(i)) > 1e-9) {
            psi0 *= std::conj(psi0(i)) / std::abs(psi0(i));
            break;
        }
    }
    // Column a is prod_i (image of X_i)^{a_i} |psi0>; the images commute.
    Mat u(dim, dim);
    for (long a = 0; a < dim; ++a) {
        Vec col = psi0;
        for (int i = 0; i < m_; ++i) {
            if ((a >> (m_ - 1 - i)) & 1) apply_pauli(im_x[i], col);
        }
        u.col(a) = col;
    }
    return u;
}

namespace {

/// Read the tableau of a (known-Clifford) unitary by conjugating generators.
CliffordElement extract_tableau(const Mat& u, int m) {
    auto gen_pauli = [&](bool is_x, int q) {
        PauliRep p;
        p.x.assign(m, 0);
        p.z.assign(m, 0);
        (is_x ? p.x : p.z)[q] = 1;
        return p;
    };
    std::vector<std::vector<std::uint8_t>> s(2 * m, std::vector<std::uint8_t>(2 * m, 0));
    std::vector<std::uint8_t> phases(2 * m, 0);
    for (int row = 0; row < 2 * m; ++row) {
        const PauliRep g = gen_pauli(row < m, row < m ? row : row - m);
        const Mat img = u * pauli_matrix(g) * u.adjoint();
        PauliRep v;
        v.x.assign(m, 0);
        v.z.assign(m, 0);
        for (int q = 0; q < m; ++q) {
            const Mat ix = pauli_matrix(gen_pauli(true, q));
            const Mat iz = pauli_matrix(gen_pauli(false, q));
            // x (resp. z) support shows up as anticommutation with Z (resp. X).
            v.x[q] = max_abs(img * iz + iz * img) < 1e-6 ? 1 : 0;
            v.z[q] = max_abs(img * ix + ix * img) < 1e-6 ? 1 : 0;
        }
        const Mat ref = pauli_matrix(v);
        if (max_abs(img - ref) < 1e-8) {
            phases[row] = 0;
        } else if (max_abs(img + ref) < 1e-8) {
            phases[row] = 1;
        } else {
            throw std::runtime_error("extract_tableau: image is not a signed Pauli string");
        }
        for (int q = 0; q < m; ++q) {
            s[row][q] = v.x[q];
            s[row][m + q] = v.z[q];
        }
    }
    return CliffordElement(std::move(s), std::move(phases));
}

} // namespace

CliffordElement CliffordElement::then(const CliffordElement& next) const {
    if (next.m_ != m_) throw std::invalid_argument("CliffordElement::then: size mismatch");
    return extract_tableau(next.unitary() * unitary(), m_);
}

std::vector<std::uint8_t> CliffordElement::serialize() const {
    const int rows = 2 * m_;
    std::vector<std::uint8_t> out;
    out.push_back(static_cast<std::uint8_t>(m_));
    std::uint8_t acc = 0;
    int nbits = 0;
    auto push_bit = [&](int b) {
        acc = static_cast<std::uint8_t>((acc << 1) | (b & 1));
        if (++nbits == 8) {
            out.push_back(acc);
            acc = 0;
            nbits = 0;
        }
    };
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < rows; ++j) push_bit(s_[i][j]);
    for (int i = 0; i < rows; ++i) push_bit(r_[i]);
    if (nbits > 0) out.push_back(static_cast<std::uint8_t>(acc << (8 - nbits)));
    return out;
}

CliffordElement CliffordElement::deserialize(const std::vector<std::uint8_t>& bytes) {
    if (bytes.empty()) throw std::invalid_argument("CliffordElement::deserialize: empty input");
    const int m = bytes[0];
    if (m < 1 || m > 8) throw std::invalid_argument("CliffordElement::deserialize: bad size");
    const int rows = 2 * m;
    const int total_bits = rows * rows + rows;
    if (static_cast<int>(bytes.size()) != 1 + (total_bits + 7) / 8)
        throw std::invalid_argument("CliffordElement::deserialize: length mismatch");
    int bit = 0;
    auto next_bit = [&]() {
        const int byte_index = 1 + bit / 8;
        const int shift = 7 - (bit % 8);
        ++bit;
        return (bytes[byte_index] >> shift) & 1;
    };
    std::vector<std::vector<std::uint8_t>> s(rows, std::vector<std::uint8_t>(rows, 0));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < rows; ++j) s[i][j] = static_cast<std::uint8_t>(next_bit());
    std::vector<std::uint8_t> r(rows, 0);
    for (int i = 0; i < rows; ++i) r[i] = static_cast<std::uint8_t>(next_bit());
    return CliffordElement(std::move(s), std::move(r));
}

std::uint64_t clifford_group_order(int n) {
    std::uint64_t order = 1;
    for (int j = 1; j <= n; ++j) order *= (1ull << (2 * j)) - 1;
    return order << (n * n + 2 * n);
}

std::vector<CliffordElement> enumerate_clifford_group(int n) {
    if (n < 1 || n > 2)
        throw std::invalid_argument("enumerate_clifford_group: only n <= 2 is enumerable");
    const int rows = 2 * n;
    const int bits = rows * rows;
    std::vector<std::vector<std::vector<std::uint8_t>>> sympl;
    for (std::uint64_t code = 0; code < (1ull << bits); ++code) {
        std::vector<std::vector<std::uint8_t>> s(rows, std::vector<std::uint8_t>(rows, 0));
        for (int b = 0; b < bits; ++b)
            s[b / rows][b % rows] = static_cast<std::uint8_t>((code >> (bits - 1 - b)) & 1);
        if (is_symplectic(s)) sympl.push_back(std::move(s));
    }
    std::vector<CliffordElement> group;
    group.reserve(sympl.size() << rows);
    for (const auto& s : sympl) {
        for (std::uint64_t ph = 0; ph < (1ull << rows); ++ph) {
            std::vector<std::uint8_t> r(rows, 0);
            for (int i = 0; i < rows; ++i)
                r[i] = static_cast<std::uint8_t>((ph >> (rows - 1 - i)) & 1);
            group.emplace_back(s, std::move(r));
        }
    }
    return group;
}

namespace {

using BitVec = std::vector<std::uint8_t>;

int bv_symp(const BitVec& a, const BitVec& b) { return row_symplectic_product(a, b); }

BitVec bv_add(const BitVec& a, const BitVec& b) {
    BitVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

bool bv_zero(const BitVec& a) {
    for (auto b : a)
        if (b) return false;
    return true;
}

std::vector<BitVec> reduce_basis(std::vector<BitVec> vecs) {
    std::vector<BitVec> basis;
    std::vector<int> pivots;
    for (auto v : vecs) {
        for (std::size_t k = 0; k < basis.size(); ++k)
            if (v[pivots[k]]) v = bv_add(v, basis[k]);
        int pivot = -1;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i]) {
                pivot = static_cast<int>(i);
                break;
            }
        if (pivot >= 0) {
            basis.push_back(v);
            pivots.push_back(pivot);
        }
    }
    return basis;
}

BitVec random_in_span(const std::vector<BitVec>& basis, Rng& rng, bool nonzero) {
    while (true) {
        BitVec v(basis[0].size(), 0);
        for (const auto& b : basis)
            if (rng.bit()) v = bv_add(v, b);
        if (!nonzero || !bv_zero(v)) return v;
    }
}

} // namespace

std::vector<std::vector<std::uint8_t>> random_symplectic(int n, Rng& rng) {
    const int width = 2 * n;
    std::vector<BitVec> complement;
    for (int i = 0; i < width; ++i) {
        BitVec e(width, 0);
        e[i] = 1;
        complement.push_back(std::move(e));
    }
    std::vector<BitVec> f(n), g(n);
    for (int step = 0; step < n; ++step) {
        // f_step: uniform nonzero vector of the current symplectic complement.
        f[step] = random_in_span(complement, rng, true);
        // g_step: uniform among complement vectors pairing to 1 with f_step.
        BitVec w0;
        std::vector<BitVec> kernel;
        for (const auto& b : complement) {
            if (bv_symp(f[step], b)) {
                if (w0.empty()) w0 = b;
                else kernel.push_back(bv_add(b, w0));
            } else {
                kernel.push_back(b);
            }
        }
        if (w0.empty()) throw std::runtime_error("random_symplectic: degenerate form");
        BitVec gs = w0;
        for (const auto& k : kernel)
            if (rng.bit()) gs = bv_add(gs, k);
        g[step] = gs;
        // Shrink the complement to vectors orthogonal to both f_step and g_step.
        std::vector<BitVec> next;
        for (const auto& v : complement) {
            BitVec v2 = v;
            if (bv_symp(v2, g[step])) v2 = bv_add(v2, f[step]);
            if (bv_symp(v2, f[step])) v2 = bv_add(v2, g[step]);
            if (!bv_zero(v2)) next.push_back(std::move(v2));
        }
        complement = reduce_basis(std::move(next));
        if (static_cast<int>(complement.size()) != width - 2 * (step + 1))
            throw std::runtime_error("random_symplectic: complement dimension mismatch");
    }
    std::vector<std::vector<std::uint8_t>> s(width);
    for (int i = 0; i < n; ++i) {
        s[i] = f[i];
        s[n + i] = g[i];
    }
    return s;
}

CliffordElement random_clifford(int n, Rng& rng) {
    if (n < 1 || n > 8)
        throw std::invalid_argument("random_clifford: supported sizes are 1..8 qubits");
    if (n <= 2) {
        static const std::vector<CliffordElement> group1 = enumerate_clifford_group(1);
        static const std::vector<CliffordElement> group2 = enumerate_clifford_group(2);
        const auto& group = n == 1 ? group1 : group2;
        return group[rng.below(group.size())];
    }
    auto s = random_symplectic(n, rng);
    std::vector<std::uint8_t> phases(2 * n, 0);
    for (auto& p : phases) p = rng.bit() ? 1 : 0;
    return CliffordElement(std::move(s), std::move(phases));
}

} // namespace qsclab::cliff
