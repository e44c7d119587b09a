#pragma once

#include <memory>

#include "qsclab/state.hpp"

namespace qsclab::sim {

enum class TraceClass { preserving, non_increasing };

/// CP map as a Kraus-operator list between two labeled layouts.
class KrausChannel {
public:
    KrausChannel(std::vector<Mat> kraus_ops, RegisterLayout in_layout,
                 RegisterLayout out_layout,
                 TraceClass trace_class = TraceClass::preserving);

    static KrausChannel identity(const RegisterLayout& layout);
    static KrausChannel unitary(const Mat& u, const RegisterLayout& in,
                                const RegisterLayout& out);
    static KrausChannel unitary(const Mat& u, const RegisterLayout& layout);
    /// X -> Tr(X) |bot><bot| on the extended output layout.
    static KrausChannel reject_all(const RegisterLayout& in, const RegisterLayout& out_base);
    /// Direct-sum embedding M -> M (+) |bot> with zero reject weight.
    static KrausChannel embed(const RegisterLayout& base);
    static KrausChannel completely_depolarizing(const RegisterLayout& layout);

    /// Trace-preserving channel given by explicit (trace-non-increasing)
    /// operators plus an implicit completion sending the remaining weight to
    /// the last basis state of the output (the reject direction). The
    /// completion's rank-one operators are materialized only on demand.
    static KrausChannel with_reject_completion(std::vector<Mat> listed_ops,
                                               RegisterLayout in_layout,
                                               RegisterLayout out_layout);

    const std::vector<Mat>& kraus_ops() const;
    const RegisterLayout& in_layout() const { return in_; }
    const RegisterLayout& out_layout() const { return out_; }
    TraceClass trace_class() const { return tc_; }
    long in_dim() const { return in_.total_dim(); }
    long out_dim() const { return out_.total_dim(); }

    Mat apply_matrix(const Mat& rho) const;
    DensityState apply(const DensityState& s) const;

    void check_invariants() const;

private:
    KrausChannel() = default;
    void index_rows();
    const std::vector<Mat>& materialized() const;

    std::vector<Mat> ops_;
    std::vector<std::vector<long>> op_rows_;  // nonzero output rows per op
    RegisterLayout in_;
    RegisterLayout out_;
    TraceClass tc_ = TraceClass::preserving;
    bool bot_completed_ = false;
    Mat deficit_;  // I - sum K^dag K of the listed ops (bot-completed form)
    mutable std::shared_ptr<std::vector<Mat>> materialized_;
};

/// b after a (apply a first).
KrausChannel compose(const KrausChannel& b, const KrausChannel& a);

/// Channel acting as `c` on its registers and identity on `side` (appended).
KrausChannel tensor_id(const KrausChannel& c, const RegisterLayout& side);

/// Convex mixture sum_i w_i c_i as a single CP map.
KrausChannel mix(const std::vector<KrausChannel>& channels, const std::vector<double>& weights);

/// Normalized Choi matrix J = (id (x) Phi)(|phi+><phi+|), trace 1 for TP maps.
Mat choi(const KrausChannel& c);

/// Raw trace-norm distance of normalized Choi matrices. Lower-bounds the
/// diamond-norm distance; the diamond norm is at most in_dim times this value.
double channel_distance(const KrausChannel& a, const KrausChannel& b);
double choi_distance(const Mat& ja, const Mat& jb);

/// Reconstruct a channel from a normalized Choi matrix (eigendecomposition;
/// eigenvalues below `tol` are dropped).
KrausChannel channel_from_choi(const Mat& j, const RegisterLayout& in,
                               const RegisterLayout& out, double tol = 1e-12);

/// Sum_k K rho K^dag, skipping all-zero output rows of each operator.
Mat apply_kraus_list(const std::vector<Mat>& ops, const Mat& rho, long out_dim);

} // namespace qsclab::sim
