#pragma once

#include <set>
#include <string>

#include "qsclab/layout.hpp"
#include "qsclab/linalg.hpp"

namespace qsclab::sim {

/// Hard cap on simulated register size (8 qubits).
inline constexpr long kMaxBaseDim = 256;

/// Density operator on a labeled register layout. Immutable after
/// construction; all operations return fresh values.
class DensityState {
public:
    DensityState(RegisterLayout layout, Mat matrix);

    static DensityState pure(RegisterLayout layout, const Vec& amplitudes);
    static DensityState basis(RegisterLayout layout, long index);
    static DensityState maximally_mixed(RegisterLayout layout);

    const RegisterLayout& layout() const { return layout_; }
    const Mat& matrix() const { return matrix_; }
    long dim() const { return matrix_.rows(); }

    double purity() const { return (matrix_ * matrix_).trace().real(); }
    /// Weight on the reject direction (0 for non-extended states).
    double reject_weight() const;

    DensityState with_layout(RegisterLayout layout) const;

    /// Throws unless Hermitian, unit trace and PSD within tolerances.
    void check_invariants() const;

private:
    RegisterLayout layout_;
    Mat matrix_;
};

DensityState tensor(const DensityState& a, const DensityState& b);

DensityState partial_trace(const DensityState& s, const std::set<std::string>& keep);

DensityState apply_unitary(const DensityState& s, const Mat& u,
                           const std::vector<std::string>& on);

/// Halved trace distance (1/2)||a-b||_1.
double trace_distance(const DensityState& a, const DensityState& b);
/// Raw trace-norm distance ||a-b||_1.
double one_norm_distance(const DensityState& a, const DensityState& b);
double one_norm_distance(const Mat& a, const Mat& b);

/// |phi+> = d^{-1/2} sum_i |ii> on labels (la, lb), each of dimension d.
DensityState bell_pair(int d, const std::string& la = "A", const std::string& lb = "B");
Mat bell_vector_matrix(int d);  // |phi+><phi+| as a d^2 x d^2 matrix

/// Reflection through a projector: U = I - 2P.
Mat reflection(const Mat& projector);

/// Direct-sum embedding into the reject-extended space (zero bot weight).
DensityState embed_reject(const DensityState& s);
/// Full weight on the reject direction of the extended layout.
DensityState make_reject(const RegisterLayout& base_layout);

/// Embed an operator on the base space into the extended space (zero bot block).
Mat embed_op(const Mat& op);

/// Matrix that permutes/extends `s` to put `front` subsystems first (in the
/// given order) followed by the remaining subsystems in their original order.
/// Returns the permutation matrix and the reordered layout.
std::pair<Mat, RegisterLayout> bring_to_front(const RegisterLayout& layout,
                                              const std::vector<std::string>& front);

} // namespace qsclab::sim
