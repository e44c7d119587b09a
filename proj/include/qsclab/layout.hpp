#pragma once

#include <string>
#include <vector>

namespace qsclab::sim {

struct Subsystem {
    std::string label;
    int dim = 0;
    bool operator==(const Subsystem&) const = default;
};

/// Ordered list of labeled subsystems. When `reject_extended` is set the
/// carried Hilbert space is (H_0 x ... x H_{k-1}) (+) span{|bot>}, with the
/// reject direction as the last basis vector of the total space.
class RegisterLayout {
public:
    RegisterLayout() = default;
    explicit RegisterLayout(std::vector<Subsystem> subsystems, bool reject_extended = false);

    static RegisterLayout qubits(const std::string& prefix, int n);
    static RegisterLayout single(const std::string& label, int dim);

    const std::vector<Subsystem>& subsystems() const { return subsystems_; }
    bool reject_extended() const { return reject_extended_; }

    /// Product of subsystem dims, excluding the reject direction.
    long base_dim() const;
    /// base_dim() plus one if reject-extended.
    long total_dim() const;

    bool has_label(const std::string& label) const;
    int index_of(const std::string& label) const;
    int dim_of(const std::string& label) const;
    std::vector<int> dims() const;
    std::vector<std::string> labels() const;

    RegisterLayout extended() const;

    /// Same space, all subsystems merged into one labeled block.
    /// A reject extension folds into the block dimension (base_dim()+1).
    RegisterLayout collapsed(const std::string& label) const;

    RegisterLayout renamed(const std::string& from, const std::string& to) const;

    bool operator==(const RegisterLayout&) const = default;

private:
    std::vector<Subsystem> subsystems_;
    bool reject_extended_ = false;
};

RegisterLayout concat(const RegisterLayout& a, const RegisterLayout& b);

/// Identity on the carried space. A reject-extended layout collapses into a
/// single subsystem (label joined from its parts) so it can be concatenated.
RegisterLayout flatten_extended(const RegisterLayout& l);

} // namespace qsclab::sim
