#include "ghzsim/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace ghzsim {

double overlap_probability(const QuantumState& state, const DVec& target) {
    if (state.dim() != target.size())
        throw std::invalid_argument("overlap: dimension mismatch");
    if (state.is_pure()) return std::norm(target.dot(state.vec()));
    return std::max(0.0, (target.adjoint() * state.mat() * target)(0).real());
}

double fidelity(const QuantumState& state, const DVec& target) {
    return std::sqrt(overlap_probability(state, target));
}

double register_overlap_probability(const QuantumState& state, const DVec& target) {
    if (state.dim() != target.size())
        throw std::invalid_argument("register overlap: dimension mismatch");
    const auto& lay = *state.layout;
    Eigen::Index dcav = 1;
    for (int j = 0; j < lay.n_cavities(); ++j) dcav *= lay.fock_cutoff();
    const Eigen::Index dq = target.size() / dcav;
    // register part of the target, read off its cavity-vacuum block
    // (cavity sites are last, so each register index owns a contiguous block)
    DVec tq(dq);
    for (Eigen::Index q = 0; q < dq; ++q) tq[q] = target[q * dcav];
    double s = 0.0;
    if (state.is_pure()) {
        const DVec& psi = state.vec();
        for (Eigen::Index c = 0; c < dcav; ++c) {
            cd a = 0.0;
            for (Eigen::Index q = 0; q < dq; ++q) a += std::conj(tq[q]) * psi[q * dcav + c];
            s += std::norm(a);
        }
        return s;
    }
    const DMat& rho = state.mat();
    for (Eigen::Index c = 0; c < dcav; ++c) {
        cd a = 0.0;
        for (Eigen::Index q = 0; q < dq; ++q)
            for (Eigen::Index r = 0; r < dq; ++r)
                a += std::conj(tq[q]) * rho(q * dcav + c, r * dcav + c) * tq[r];
        s += a.real();
    }
    return std::max(0.0, s);
}

double purity(const QuantumState& state) {
    if (state.is_pure()) return 1.0;
    return (state.mat() * state.mat()).trace().real();
}

StateDiagnostics diagnose(const QuantumState& state) {
    StateDiagnostics d;
    const auto& lay = *state.layout;
    if (state.is_pure()) {
        d.trace_error = std::abs(state.vec().norm() - 1.0);
    } else {
        const DMat& rho = state.mat();
        d.trace_error = std::abs(rho.trace().real() - 1.0);
        const double nrm = rho.norm();
        d.hermiticity_error = nrm > 0.0 ? (rho - rho.adjoint()).norm() / nrm : 0.0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            0.5 * (Eigen::MatrixXcd(rho) + Eigen::MatrixXcd(rho).adjoint()),
            Eigen::EigenvaluesOnly);
        d.min_eigenvalue = es.eigenvalues().minCoeff();
    }
    for (int j = 0; j < lay.n_cavities(); ++j) {
        Operator n_op = embed(
            (annihilation_op(lay.fock_cutoff()).adjoint() * annihilation_op(lay.fock_cutoff()))
                .eval(),
            lay.cavity_site(j), state.layout);
        d.cavity_photons.push_back(expectation(n_op, state).real());
    }
    return d;
}

} // namespace ghzsim
