#include "qsclab/dilation.hpp"

#include <stdexcept>

namespace qsclab::sim {

using namespace qsclab::linalg;

StinespringDilation stinespring(const KrausChannel& c) {
    if (c.trace_class() != TraceClass::preserving)
        throw std::invalid_argument("stinespring: channel must be trace-preserving");
    const int env = static_cast<int>(c.kraus_ops().size());
    const long din = c.in_dim();
    const long dout = c.out_dim();
    Mat v = Mat::Zero(dout * env, din);
    for (int e = 0; e < env; ++e) {
        const Mat& k = c.kraus_ops()[e];
        for (long o = 0; o < dout; ++o) v.row(o * env + e) = k.row(o);
    }
    StinespringDilation d{std::move(v), c.in_layout(), c.out_layout(), env};
    if (!is_isometry(d.isometry, 1e-9))
        throw std::runtime_error("stinespring: constructed map is not an isometry");
    return d;
}

Mat apply_dilation(const StinespringDilation& d, const Mat& rho) {
    const Mat big = d.isometry * rho * d.isometry.adjoint();
    const long dout = d.out_dim();
    const int env = d.env_dim;
    Mat out = Mat::Zero(dout, dout);
    for (long i = 0; i < dout; ++i)
        for (long j = 0; j < dout; ++j) {
            cplx acc = 0;
            for (int e = 0; e < env; ++e) acc += big(i * env + e, j * env + e);
            out(i, j) = acc;
        }
    return out;
}

KrausChannel channel_from_dilation(const StinespringDilation& d) {
    const long dout = d.out_dim();
    std::vector<Mat> ops;
    ops.reserve(d.env_dim);
    for (int e = 0; e < d.env_dim; ++e) {
        Mat k(dout, d.isometry.cols());
        for (long o = 0; o < dout; ++o) k.row(o) = d.isometry.row(o * d.env_dim + e);
        ops.push_back(std::move(k));
    }
    return KrausChannel(std::move(ops), d.in_layout, d.out_layout);
}

} // namespace qsclab::sim
