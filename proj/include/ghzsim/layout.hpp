#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ghzsim {

// Qutrit level encoding used everywhere (coupler and intra-cavity qubits):
//   0 = |g'>,  1 = |g>,  2 = |e>
enum Level : int { LVL_GPRIME = 0, LVL_G = 1, LVL_E = 2 };

// Tensor-product register layout. Subsystem ordering is fixed:
// coupler A first, then cavity-1 qubits, cavity-2 qubits, ..., then the
// N cavity modes. Index arithmetic is row-major over `dims` (the last
// subsystem varies fastest).
class SpaceLayout {
public:
    SpaceLayout(std::vector<int> dims, std::vector<std::string> labels);

    static SpaceLayout compose_space(int n_cavities,
                                     const std::vector<int>& qubits_per_cavity,
                                     int fock_cutoff);

    const std::vector<int>& dims() const { return dims_; }
    const std::vector<std::string>& labels() const { return labels_; }
    std::int64_t total_dim() const { return total_; }
    std::size_t n_sites() const { return dims_.size(); }

    int site_of(const std::string& label) const;       // throws on unknown label
    int dim_at(int site) const { return dims_.at(site); }
    std::int64_t stride_at(int site) const { return strides_.at(site); }

    // Local level/occupation of `site` within the flat basis index.
    int level_of(std::int64_t basis_index, int site) const {
        return static_cast<int>((basis_index / strides_[site]) % dims_[site]);
    }

    // Register structure (filled by compose_space)
    int n_cavities() const { return n_cavities_; }
    const std::vector<int>& qubits_per_cavity() const { return m_per_; }
    int n_qutrits() const { return n_qutrits_; }       // coupler + intra-cavity qubits
    int fock_cutoff() const { return fock_cutoff_; }

    int coupler_site() const { return 0; }
    int qubit_site(int cavity, int i) const;           // 0-based cavity, 0-based qubit
    int qubit_site_linear(int q) const { return 1 + q; }
    int cavity_site(int cavity) const;

    // Total excitation count of a basis index: photons plus |e> occupations
    // of every qutrit (coupler included).
    int excitation_of(std::int64_t basis_index) const;

    bool operator==(const SpaceLayout& o) const {
        return dims_ == o.dims_ && labels_ == o.labels_;
    }

private:
    std::vector<int> dims_;
    std::vector<std::string> labels_;
    std::vector<std::int64_t> strides_;
    std::int64_t total_ = 0;
    int n_cavities_ = 0;
    std::vector<int> m_per_;
    int n_qutrits_ = 0;
    int fock_cutoff_ = 0;
};

} // namespace ghzsim
