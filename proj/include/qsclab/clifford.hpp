#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsclab/linalg.hpp"

namespace qsclab::cliff {

/// Pauli string over GF(2) symplectic coordinates (x | z), Hermitian
/// convention P(x,z) = prod_i i^{x_i z_i} X^{x_i} Z^{z_i}.
struct PauliRep {
    std::vector<std::uint8_t> x;
    std::vector<std::uint8_t> z;
    bool negative = false;

    int qubits() const { return static_cast<int>(x.size()); }
    bool is_identity() const;
};

Mat pauli_matrix(const PauliRep& p);

/// Binary symplectic product (0 = commute, 1 = anticommute).
int symplectic_product(const PauliRep& a, const PauliRep& b);

/// Clifford element as a 2m x 2m symplectic bit matrix plus a 2m phase
/// vector. Row i (i < m) is the image of X_i under conjugation, row m+i the
/// image of Z_i; phases give the sign of each generator image.
class CliffordElement {
public:
    CliffordElement(std::vector<std::vector<std::uint8_t>> symplectic,
                    std::vector<std::uint8_t> phases);

    static CliffordElement identity(int m);

    int qubits() const { return m_; }
    const std::vector<std::vector<std::uint8_t>>& symplectic() const { return s_; }
    const std::vector<std::uint8_t>& phases() const { return r_; }

    bool symplectic_condition_holds() const;

    /// Image of the i-th generator (X_i for i < m, Z_{i-m} otherwise).
    PauliRep generator_image(int i) const;

    /// Dense 2^m x 2^m unitary realizing the tableau (global phase fixed
    /// canonically). Exact: built column-wise on the stabilizer coset basis.
    Mat unitary() const;

    /// Tableau composition: (b * a) acts as first a, then b.
    /// Phases of the composite are read off the synthesized generators.
    CliffordElement then(const CliffordElement& next) const;

    /// Packed header + tableau + phase serialization (fixed width).
    std::vector<std::uint8_t> serialize() const;
    static CliffordElement deserialize(const std::vector<std::uint8_t>& bytes);

    bool same_symplectic(const CliffordElement& other) const { return s_ == other.s_; }
    bool operator==(const CliffordElement& other) const = default;

private:
    int m_;
    std::vector<std::vector<std::uint8_t>> s_;  // 2m rows of 2m bits
    std::vector<std::uint8_t> r_;               // 2m sign bits
};

/// |Sp(2n,2)| * 4^n = 2^(n^2+2n) * prod_{j=1..n} (4^j - 1).
std::uint64_t clifford_group_order(int n);

/// Full enumeration (n <= 2): all symplectic matrices x all phase vectors,
/// in a fixed deterministic order.
std::vector<CliffordElement> enumerate_clifford_group(int n);

/// Uniformly random element; enumeration-backed for n <= 2, symplectic-basis
/// sampler for 3 <= n <= 8.
CliffordElement random_clifford(int n, Rng& rng);

/// Uniformly random symplectic 2n x 2n bit matrix (Sp(2n,2)).
std::vector<std::vector<std::uint8_t>> random_symplectic(int n, Rng& rng);

bool is_symplectic(const std::vector<std::vector<std::uint8_t>>& s);

} // namespace qsclab::cliff
