#pragma once

#include <memory>
#include <vector>

#include "ghzsim/operators.hpp"

namespace ghzsim {

// Restriction of the full tensor-product space to the subspace with total
// excitation number <= max_excitation. The exchange Hamiltonians and every
// collapse operator either conserve or lower the excitation count, so for an
// initial state inside the sector the restricted dynamics is exact, at a
// fraction of the dimension (e.g. 36 instead of 432 for one qubit per cavity
// and two cavities at cutoff 3).
class SectorMap {
public:
    SectorMap(std::shared_ptr<const SpaceLayout> layout, int max_excitation);

    std::int64_t full_dim() const { return full_dim_; }
    std::int64_t reduced_dim() const { return static_cast<std::int64_t>(keep_.size()); }
    int max_excitation() const { return max_exc_; }
    const std::vector<std::int64_t>& kept_indices() const { return keep_; }
    const std::shared_ptr<const SpaceLayout>& layout() const { return layout_; }

    SpMat restrict_op(const SpMat& full) const;
    DVec restrict_vec(const DVec& full) const;        // throws if weight outside sector
    DMat restrict_mat(const DMat& full) const;
    DVec lift_vec(const DVec& reduced) const;
    DMat lift_mat(const DMat& reduced) const;

    // Weight of a state outside the kept sector (used for validation).
    double leakage(const DVec& full) const;
    double leakage(const DMat& full) const;

private:
    std::shared_ptr<const SpaceLayout> layout_;
    int max_exc_;
    std::int64_t full_dim_;
    std::vector<std::int64_t> keep_;               // reduced -> full
    std::vector<std::int64_t> inv_;                // full -> reduced, -1 if dropped
};

// Smallest sector containing the protocol states: one shared excitation plus
// head-room for thermal photons in the cavities.
int required_excitation(int n_thermal_levels);

} // namespace ghzsim
