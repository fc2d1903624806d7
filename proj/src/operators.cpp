#include "ghzsim/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace ghzsim {

Operator Operator::adjoint() const {
    Operator out{layout, SpMat(mat.adjoint())};
    return out;
}

bool Operator::is_hermitian(double rel_tol) const {
    SpMat diff = SpMat(mat.adjoint()) - mat;
    double n = frobenius_norm(mat);
    if (n == 0.0) return true;
    return frobenius_norm(diff) <= rel_tol * n;
}

DMat QuantumState::density() const {
    if (is_pure()) {
        const DVec& v = vec();
        return DMat(v * v.adjoint());
    }
    return mat();
}

void QuantumState::check_valid(double norm_tol) const {
    if (is_pure()) {
        double n = vec().norm();
        if (std::abs(n - 1.0) > norm_tol)
            throw std::runtime_error("QuantumState: pure-state norm " + std::to_string(n) +
                                     " violates unit normalization");
    } else {
        const DMat& r = mat();
        double tr = r.trace().real();
        if (std::abs(tr - 1.0) > norm_tol)
            throw std::runtime_error("QuantumState: density trace " + std::to_string(tr));
        double hn = (r - r.adjoint()).norm();
        if (hn > 1e-12 * std::max(1.0, r.norm()))
            throw std::runtime_error("QuantumState: density not Hermitian");
    }
}

Eigen::MatrixXcd annihilation_op(int dim) {
    if (dim < 2) throw std::invalid_argument("annihilation_op: dim must be >= 2");
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Eigen::MatrixXcd transition_op(int a, int b, int dim) {
    if (a < 0 || b < 0 || a >= dim || b >= dim)
        throw std::out_of_range("transition_op: level index out of range");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    m(a, b) = 1.0;
    return m;
}

Eigen::MatrixXcd projector_op(int level, int dim) {
    return transition_op(level, level, dim);
}

Operator embed(const Eigen::MatrixXcd& local, const std::string& site_label,
               std::shared_ptr<const SpaceLayout> layout) {
    return embed(local, layout->site_of(site_label), layout);
}

Operator embed(const Eigen::MatrixXcd& local, int site,
               std::shared_ptr<const SpaceLayout> layout) {
    const int d = layout->dim_at(site);
    if (local.rows() != d || local.cols() != d)
        throw std::invalid_argument("embed: local operator dimension mismatch at site " +
                                    std::to_string(site));
    const std::int64_t D = layout->total_dim();
    const std::int64_t stride = layout->stride_at(site);
    // block = number of consecutive runs; within one outer block the site index
    // advances every `stride` entries.
    std::vector<Eigen::Triplet<cd>> trips;
    int nnz_local = 0;
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            if (local(r, c) != cd(0.0)) ++nnz_local;
    trips.reserve(static_cast<std::size_t>(nnz_local) * (D / d));

    const std::int64_t outer = D / (stride * d);
    for (std::int64_t o = 0; o < outer; ++o) {
        const std::int64_t base = o * stride * d;
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                const cd v = local(r, c);
                if (v == cd(0.0)) continue;
                for (std::int64_t s = 0; s < stride; ++s)
                    trips.emplace_back(base + r * stride + s, base + c * stride + s, v);
            }
    }
    SpMat m(D, D);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return Operator{std::move(layout), std::move(m)};
}

cd expectation(const SpMat& op, const QuantumState& state) {
    if (op.rows() != state.dim())
        throw std::invalid_argument("expectation: operator/state dimension mismatch");
    if (state.is_pure()) {
        const DVec& v = state.vec();
        return v.dot(op * v);
    }
    // Tr(op rho) = sum_ij op_ij rho_ji
    const DMat& rho = state.mat();
    cd tr(0.0);
    for (int k = 0; k < op.outerSize(); ++k)
        for (SpMat::InnerIterator it(op, k); it; ++it)
            tr += it.value() * rho(it.col(), it.row());
    return tr;
}

cd expectation(const Operator& op, const QuantumState& state) {
    if (!(*op.layout == *state.layout))
        throw std::invalid_argument("expectation: layout mismatch");
    return expectation(op.mat, state);
}

double frobenius_norm(const SpMat& m) {
    double s = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it)
            s += std::norm(it.value());
    return std::sqrt(s);
}

} // namespace ghzsim
