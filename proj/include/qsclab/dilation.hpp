#pragma once

#include "qsclab/channel.hpp"

namespace qsclab::sim {

/// Isometry V: H_in -> H_out (x) H_env realizing a channel by tracing out
/// the environment. Row index convention: (out, env) with env minor.
struct StinespringDilation {
    Mat isometry;
    RegisterLayout in_layout;
    RegisterLayout out_layout;
    int env_dim;

    long out_dim() const { return out_layout.total_dim(); }
};

/// V|psi> = sum_i K_i|psi> (x) |i>_E; env dimension equals the Kraus count.
StinespringDilation stinespring(const KrausChannel& c);

/// Trace out the environment of a dilation applied to rho.
Mat apply_dilation(const StinespringDilation& d, const Mat& rho);

/// Round-trip the dilation into a channel (one Kraus per env basis vector).
KrausChannel channel_from_dilation(const StinespringDilation& d);

} // namespace qsclab::sim
