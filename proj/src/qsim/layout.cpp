#include "qsclab/layout.hpp"

#include <set>
#include <stdexcept>

namespace qsclab::sim {

RegisterLayout::RegisterLayout(std::vector<Subsystem> subsystems, bool reject_extended)
    : subsystems_(std::move(subsystems)), reject_extended_(reject_extended) {
    std::set<std::string> seen;
    for (const auto& s : subsystems_) {
        if (s.dim < 1) throw std::invalid_argument("RegisterLayout: dim must be positive");
        if (!seen.insert(s.label).second)
            throw std::invalid_argument("RegisterLayout: duplicate label " + s.label);
    }
}

RegisterLayout RegisterLayout::qubits(const std::string& prefix, int n) {
    std::vector<Subsystem> subs;
    subs.reserve(n);
    for (int i = 0; i < n; ++i) subs.push_back({prefix + std::to_string(i), 2});
    return RegisterLayout(std::move(subs));
}

RegisterLayout RegisterLayout::single(const std::string& label, int dim) {
    return RegisterLayout({{label, dim}});
}

long RegisterLayout::base_dim() const {
    long d = 1;
    for (const auto& s : subsystems_) d *= s.dim;
    return d;
}

long RegisterLayout::total_dim() const { return base_dim() + (reject_extended_ ? 1 : 0); }

bool RegisterLayout::has_label(const std::string& label) const {
    for (const auto& s : subsystems_)
        if (s.label == label) return true;
    return false;
}

int RegisterLayout::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < subsystems_.size(); ++i)
        if (subsystems_[i].label == label) return static_cast<int>(i);
    throw std::invalid_argument("RegisterLayout: unknown label " + label);
}

int RegisterLayout::dim_of(const std::string& label) const {
    return subsystems_[index_of(label)].dim;
}

std::vector<int> RegisterLayout::dims() const {
    std::vector<int> d;
    d.reserve(subsystems_.size());
    for (const auto& s : subsystems_) d.push_back(s.dim);
    return d;
}

std::vector<std::string> RegisterLayout::labels() const {
    std::vector<std::string> l;
    l.reserve(subsystems_.size());
    for (const auto& s : subsystems_) l.push_back(s.label);
    return l;
}

RegisterLayout RegisterLayout::extended() const {
    if (reject_extended_) throw std::invalid_argument("RegisterLayout: already reject-extended");
    return RegisterLayout(subsystems_, true);
}

RegisterLayout RegisterLayout::collapsed(const std::string& label) const {
    return RegisterLayout({{label, static_cast<int>(total_dim())}}, false);
}

RegisterLayout RegisterLayout::renamed(const std::string& from, const std::string& to) const {
    auto subs = subsystems_;
    subs[index_of(from)].label = to;
    return RegisterLayout(std::move(subs), reject_extended_);
}

RegisterLayout concat(const RegisterLayout& a, const RegisterLayout& b) {
    if (a.reject_extended() || b.reject_extended())
        throw std::invalid_argument("concat: reject-extended layouts cannot be concatenated");
    std::vector<Subsystem> subs = a.subsystems();
    for (const auto& s : b.subsystems()) subs.push_back(s);
    return RegisterLayout(std::move(subs));
}

RegisterLayout flatten_extended(const RegisterLayout& l) {
    if (!l.reject_extended()) return l;
    std::string label;
    if (l.subsystems().size() == 1) {
        label = l.subsystems()[0].label;
    } else {
        for (const auto& s : l.subsystems()) {
            if (!label.empty()) label += "+";
            label += s.label;
        }
    }
    return l.collapsed(label);
}

} // namespace qsclab::sim
