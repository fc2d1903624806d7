#include "ghzsim/layout.hpp"

#include <set>
#include <stdexcept>

namespace ghzsim {

SpaceLayout::SpaceLayout(std::vector<int> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
    if (dims_.empty() || dims_.size() != labels_.size())
        throw std::invalid_argument("SpaceLayout: dims/labels size mismatch");
    std::set<std::string> seen;
    total_ = 1;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (dims_[k] < 2)
            throw std::invalid_argument("SpaceLayout: subsystem dimension must be >= 2");
        if (!seen.insert(labels_[k]).second)
            throw std::invalid_argument("SpaceLayout: duplicate label '" + labels_[k] + "'");
        total_ *= dims_[k];
    }
    strides_.assign(dims_.size(), 1);
    for (int k = static_cast<int>(dims_.size()) - 2; k >= 0; --k)
        strides_[k] = strides_[k + 1] * dims_[k + 1];
}

SpaceLayout SpaceLayout::compose_space(int n_cavities,
                                       const std::vector<int>& qubits_per_cavity,
                                       int fock_cutoff) {
    if (n_cavities < 1)
        throw std::invalid_argument("compose_space: need at least one cavity");
    if (static_cast<int>(qubits_per_cavity.size()) != n_cavities)
        throw std::invalid_argument("compose_space: qubits_per_cavity size != n_cavities");
    if (fock_cutoff < 2)
        throw std::invalid_argument("compose_space: fock_cutoff must be >= 2");
    int total_qubits = 0;
    for (int m : qubits_per_cavity) {
        if (m < 0) throw std::invalid_argument("compose_space: negative qubit count");
        total_qubits += m;
    }
    if (total_qubits == 0)
        throw std::invalid_argument("compose_space: zero intra-cavity qubits, nothing to entangle");

    std::vector<int> dims;
    std::vector<std::string> labels;
    dims.push_back(3);
    labels.push_back("A");
    for (int j = 0; j < n_cavities; ++j)
        for (int i = 0; i < qubits_per_cavity[j]; ++i) {
            dims.push_back(3);
            labels.push_back("q" + std::to_string(j + 1) + "_" + std::to_string(i + 1));
        }
    for (int j = 0; j < n_cavities; ++j) {
        dims.push_back(fock_cutoff);
        labels.push_back("cav" + std::to_string(j + 1));
    }
    SpaceLayout lay(std::move(dims), std::move(labels));
    lay.n_cavities_ = n_cavities;
    lay.m_per_ = qubits_per_cavity;
    lay.n_qutrits_ = 1 + total_qubits;
    lay.fock_cutoff_ = fock_cutoff;
    return lay;
}

int SpaceLayout::site_of(const std::string& label) const {
    for (std::size_t k = 0; k < labels_.size(); ++k)
        if (labels_[k] == label) return static_cast<int>(k);
    throw std::invalid_argument("SpaceLayout: unknown label '" + label + "'");
}

int SpaceLayout::qubit_site(int cavity, int i) const {
    if (cavity < 0 || cavity >= n_cavities_ || i < 0 || i >= m_per_[cavity])
        throw std::out_of_range("SpaceLayout: qubit index out of range");
    int off = 0;
    for (int j = 0; j < cavity; ++j) off += m_per_[j];
    return 1 + off + i;
}

int SpaceLayout::cavity_site(int cavity) const {
    if (cavity < 0 || cavity >= n_cavities_)
        throw std::out_of_range("SpaceLayout: cavity index out of range");
    return n_qutrits_ + cavity;
}

int SpaceLayout::excitation_of(std::int64_t idx) const {
    int exc = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        int lvl = level_of(idx, static_cast<int>(k));
        if (static_cast<int>(k) < n_qutrits_)
            exc += (lvl == LVL_E) ? 1 : 0;
        else
            exc += lvl;
    }
    return exc;
}

} // namespace ghzsim
