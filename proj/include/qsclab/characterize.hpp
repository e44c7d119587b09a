#pragma once

#include "qsclab/dilation.hpp"

namespace qsclab::attacks {

/// Normal form of a correct encryption/decryption pair: a unitary V on
/// M (x) T -> C, an auxiliary state sigma on T, and the projector onto its
/// significant support. fit_error is the Choi distance between the original
/// encryption and V((.) (x) sigma)V^dag.
struct EncryptionCharacterization {
    Mat unitary_v;           // c_dim x c_dim, column order (m, t) with t minor
    Mat sigma;               // t_dim x t_dim state
    Mat support_projector;   // on T
    int t_dim = 0;
    double roundtrip_delta = 0;  // Choi distance of dec o enc from the target
    double fit_error = 0;
    double cutoff = 0;           // eigenvalue threshold used for the projector
};

/// Aligns the environments of the round-trip dilation with the identity's
/// dilation (orthogonal Procrustes via SVD of the overlap matrix), corrects
/// the near-isometry by its SVD polar part, and reads off (V, sigma, P).
/// `schmidt_cutoff` < 0 selects the default (4 delta)^(1/6).
EncryptionCharacterization characterize_encryption(const sim::KrausChannel& enc,
                                                   const sim::KrausChannel& dec,
                                                   double schmidt_cutoff = -1.0);

} // namespace qsclab::attacks
