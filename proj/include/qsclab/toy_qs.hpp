#pragma once

#include "qsclab/dilation.hpp"
#include "qsclab/measurement.hpp"

namespace qsclab::attacks {

/// Toy quantum signature scheme given as explicit circuits: signing is a
/// keyed unitary on message (x) ancilla, verification is declared through a
/// unitary dilation with an accept projector on its environment output.
class ToyQS {
public:
    struct Key {
        Mat sign_unitary;      // cipher_dim x cipher_dim
        Mat verify_dilation;   // (m_dim * e2) x (cipher_dim * e1), unitary
        Mat accept_projector;  // e2 x e2
    };

    ToyQS(int m_dim, int anc_dim, int e1_dim, int e2_dim, std::vector<Key> keys);

    int m_dim() const { return m_dim_; }
    int cipher_dim() const { return m_dim_ * anc_dim_; }
    int e1_dim() const { return e1_; }
    int e2_dim() const { return e2_; }
    int key_count() const { return static_cast<int>(keys_.size()); }
    const Key& key(int i) const { return keys_.at(i); }

    sim::RegisterLayout message_layout() const;
    sim::RegisterLayout cipher_layout() const;

    /// rho -> V_k (rho (x) |0><0|_anc) V_k^dag.
    sim::KrausChannel sign_channel(int key) const;
    /// Dilate, test the accept projector, output message or |bot>.
    sim::KrausChannel verify_channel(int key) const;

private:
    int m_dim_;
    int anc_dim_;
    int e1_;
    int e2_;
    std::vector<Key> keys_;
};

/// Two-key scheme over one message qubit and one ancilla qubit; exactly
/// correct, with public per-key verification dilations.
ToyQS make_keyed_unitary_toy();

/// Scheme that copies the computational basis into the ancilla and then
/// discards it (verification always accepts): correct for Z outcomes only.
ToyQS make_basis_copy_toy();

} // namespace qsclab::attacks
