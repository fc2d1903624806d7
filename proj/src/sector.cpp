#include "ghzsim/sector.hpp"

#include <cmath>
#include <stdexcept>

namespace ghzsim {

SectorMap::SectorMap(std::shared_ptr<const SpaceLayout> layout, int max_excitation)
    : layout_(std::move(layout)), max_exc_(max_excitation) {
    if (!layout_) throw std::invalid_argument("SectorMap: null layout");
    if (max_exc_ < 0) throw std::invalid_argument("SectorMap: negative excitation cap");
    full_dim_ = layout_->total_dim();
    inv_.assign(full_dim_, -1);
    for (std::int64_t i = 0; i < full_dim_; ++i) {
        if (layout_->excitation_of(i) <= max_exc_) {
            inv_[i] = static_cast<std::int64_t>(keep_.size());
            keep_.push_back(i);
        }
    }
}

SpMat SectorMap::restrict_op(const SpMat& full) const {
    if (full.rows() != full_dim_ || full.cols() != full_dim_)
        throw std::invalid_argument("SectorMap: operator dimension mismatch");
    const std::int64_t d = reduced_dim();
    std::vector<Eigen::Triplet<cd>> trips;
    for (std::int64_t r = 0; r < d; ++r) {
        const std::int64_t row = keep_[r];
        for (SpMat::InnerIterator it(full, row); it; ++it) {
            const std::int64_t c = inv_[it.col()];
            if (c >= 0 && it.value() != cd(0.0)) trips.emplace_back(r, c, it.value());
        }
    }
    SpMat out(d, d);
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

DVec SectorMap::restrict_vec(const DVec& full) const {
    if (full.size() != full_dim_)
        throw std::invalid_argument("SectorMap: state dimension mismatch");
    const double leak = leakage(full);
    if (leak > 1e-12)
        throw std::invalid_argument("SectorMap: state has weight " + std::to_string(leak) +
                                    " outside the excitation sector");
    const std::int64_t d = reduced_dim();
    DVec out(d);
    for (std::int64_t r = 0; r < d; ++r) out[r] = full[keep_[r]];
    return out;
}

DMat SectorMap::restrict_mat(const DMat& full) const {
    if (full.rows() != full_dim_)
        throw std::invalid_argument("SectorMap: state dimension mismatch");
    const double leak = leakage(full);
    if (leak > 1e-12)
        throw std::invalid_argument("SectorMap: density matrix has trace weight " +
                                    std::to_string(leak) + " outside the excitation sector");
    const std::int64_t d = reduced_dim();
    DMat out(d, d);
    for (std::int64_t r = 0; r < d; ++r)
        for (std::int64_t c = 0; c < d; ++c) out(r, c) = full(keep_[r], keep_[c]);
    return out;
}

DVec SectorMap::lift_vec(const DVec& reduced) const {
    if (reduced.size() != reduced_dim())
        throw std::invalid_argument("SectorMap: reduced state dimension mismatch");
    DVec out = DVec::Zero(full_dim_);
    for (std::int64_t r = 0; r < reduced_dim(); ++r) out[keep_[r]] = reduced[r];
    return out;
}

DMat SectorMap::lift_mat(const DMat& reduced) const {
    if (reduced.rows() != reduced_dim())
        throw std::invalid_argument("SectorMap: reduced state dimension mismatch");
    DMat out = DMat::Zero(full_dim_, full_dim_);
    for (std::int64_t r = 0; r < reduced_dim(); ++r)
        for (std::int64_t c = 0; c < reduced_dim(); ++c)
            out(keep_[r], keep_[c]) = reduced(r, c);
    return out;
}

double SectorMap::leakage(const DVec& full) const {
    double kept = 0.0;
    for (std::int64_t i : keep_) kept += std::norm(full[i]);
    return std::max(0.0, full.squaredNorm() - kept);
}

double SectorMap::leakage(const DMat& full) const {
    double out = full.trace().real();
    for (std::int64_t i : keep_) out -= full(i, i).real();
    return std::max(0.0, out);
}

int required_excitation(int n_thermal_levels) {
    // One shared excitation circulates during the protocol; thermal photons
    // in each of the two cavities add on top.
    return 1 + std::max(0, n_thermal_levels) * 2;
}

} // namespace ghzsim
