#include "qsclab/state_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace qsclab::sim {

using nlohmann::json;

std::string state_to_json(const DensityState& s) {
    json j;
    j["layout"] = json::array();
    for (const auto& sub : s.layout().subsystems())
        j["layout"].push_back({{"label", sub.label}, {"dim", sub.dim}});
    j["reject_extended"] = s.layout().reject_extended();
    // Emit a pure-state file when the state is (numerically) rank one.
    Eigen::SelfAdjointEigenSolver<Mat> es(s.matrix());
    const auto& ev = es.eigenvalues();
    json data = json::array();
    if (ev.size() > 0 && ev(ev.size() - 1) > 1.0 - 1e-12) {
        j["kind"] = "pure";
        Vec v = es.eigenvectors().col(ev.size() - 1);
        // Canonical global phase: first sizeable amplitude real positive.
        for (long i = 0; i < v.size(); ++i) {
            if (std::abs(v(i)) > 1e-9) {
                v *= std::conj(v(i)) / std::abs(v(i));
                break;
            }
        }
        for (long i = 0; i < v.size(); ++i) data.push_back({v(i).real(), v(i).imag()});
    } else {
        j["kind"] = "density";
        const Mat& m = s.matrix();
        for (long r = 0; r < m.rows(); ++r)
            for (long c = 0; c < m.cols(); ++c) data.push_back({m(r, c).real(), m(r, c).imag()});
    }
    j["data"] = std::move(data);
    return j.dump(2);
}

DensityState state_from_json(const std::string& text) {
    json j = json::parse(text);
    std::vector<Subsystem> subs;
    for (const auto& e : j.at("layout"))
        subs.push_back({e.at("label").get<std::string>(), e.at("dim").get<int>()});
    RegisterLayout layout(subs, j.value("reject_extended", false));
    const long d = layout.total_dim();
    const std::string kind = j.at("kind").get<std::string>();
    const auto& data = j.at("data");
    auto entry = [&](std::size_t i) {
        return cplx(data.at(i).at(0).get<double>(), data.at(i).at(1).get<double>());
    };
    if (kind == "pure") {
        if (static_cast<long>(data.size()) != d)
            throw std::invalid_argument("state_from_json: amplitude count mismatch");
        Vec v(d);
        for (long i = 0; i < d; ++i) v(i) = entry(i);
        const double n = v.norm();
        if (std::abs(n - 1.0) > 1e-6)
            throw std::invalid_argument("state_from_json: amplitudes not normalized");
        v /= n;
        return DensityState::pure(layout, v);
    }
    if (kind != "density") throw std::invalid_argument("state_from_json: unknown kind " + kind);
    if (static_cast<long>(data.size()) != d * d)
        throw std::invalid_argument("state_from_json: density entry count mismatch");
    Mat m(d, d);
    for (long r = 0; r < d; ++r)
        for (long c = 0; c < d; ++c) m(r, c) = entry(r * d + c);
    DensityState s(layout, std::move(m));
    s.check_invariants();
    return s;
}

void save_state(const DensityState& s, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_state: cannot open " + path);
    f << state_to_json(s) << "\n";
}

DensityState load_state(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_state: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return state_from_json(text);
}

} // namespace qsclab::sim
