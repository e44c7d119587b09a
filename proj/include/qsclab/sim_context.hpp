#pragma once

#include "qsclab/measurement.hpp"

namespace qsclab::games {

/// Single evolving joint state over named registers. One game instance owns
/// one context; the trial runner may run many contexts in parallel.
class SimContext {
public:
    static constexpr long kMaxDim = 4096;

    bool has(const std::string& label) const;
    int dim_of(const std::string& label) const;
    long total_dim() const;
    std::vector<std::string> labels() const;

    void add_state(const std::string& label, const Mat& density, int dim);
    void add_state(const std::string& label, const sim::DensityState& st);
    void add_basis(const std::string& label, int dim, long index);
    void add_bell(const std::string& la, const std::string& lb, int d);

    /// Applies `chan` to the listed registers (in order); they are replaced by
    /// fresh registers named `out_labels` whose dims come from the channel's
    /// output layout (a reject-extended output collapses to one register).
    void apply(const sim::KrausChannel& chan, const std::vector<std::string>& on,
               const std::vector<std::string>& out_labels);
    void apply_unitary(const Mat& u, const std::vector<std::string>& on);

    /// Projective instrument on the listed registers; samples and collapses.
    int measure(const Mat& projector, const std::vector<std::string>& on, Rng& rng);

    sim::DensityState peek(const std::vector<std::string>& keep) const;
    void discard(const std::string& label);
    void rename(const std::string& from, const std::string& to);

private:
    /// Permutation bringing `front` first; updates regs_ order accordingly.
    void reorder_front(const std::vector<std::string>& front);
    int index_of(const std::string& label) const;

    std::vector<sim::Subsystem> regs_;
    Mat state_;  // empty until the first register is added
};

/// Projector testing |phi+> (d x d) where the first factor is reject-extended
/// (dimension d+1, zero weight on the reject row).
Mat bell_pass_projector_ext(int d);

} // namespace qsclab::games
