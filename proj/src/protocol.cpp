#include "ghzsim/protocol.hpp"

#include "ghzsim/evolve.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ghzsim {

namespace {

constexpr double PI = std::numbers::pi;

// Tensor product of per-site local vectors, in register order.
DVec kron_product(const SpaceLayout& lay, const std::vector<DVec>& locals) {
    if (locals.size() != lay.n_sites())
        throw std::invalid_argument("kron_product: wrong number of local factors");
    DVec v = DVec::Ones(1);
    for (std::size_t s = 0; s < locals.size(); ++s) {
        if (locals[s].size() != lay.dim_at(static_cast<int>(s)))
            throw std::invalid_argument("kron_product: local dimension mismatch");
        DVec next(v.size() * locals[s].size());
        std::int64_t k = 0;
        for (std::int64_t i = 0; i < v.size(); ++i)
            for (std::int64_t j = 0; j < locals[s].size(); ++j) next[k++] = v[i] * locals[s][j];
        v = std::move(next);
    }
    return v;
}

DVec qutrit_level(int level) {
    DVec v = DVec::Zero(3);
    v[level] = 1.0;
    return v;
}

DVec fock_level(int n, int cutoff) {
    if (n < 0 || n >= cutoff)
        throw std::invalid_argument("fock level outside cavity cutoff");
    DVec v = DVec::Zero(cutoff);
    v[n] = 1.0;
    return v;
}

DVec plus_state(double epsilon, double sign) {
    DVec v = DVec::Zero(3);
    v[LVL_GPRIME] = std::sqrt((1.0 + epsilon) / 2.0);
    v[LVL_G] = sign * std::sqrt((1.0 - epsilon) / 2.0);
    return v;
}

void check_amplitudes(cd alpha, cd beta) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10)
        throw std::invalid_argument("coupler amplitudes not normalized");
}

} // namespace

const char* protocol_name(ProtocolKind k) {
    switch (k) {
        case ProtocolKind::SingleShot: return "single-shot";
        case ProtocolKind::Method1: return "method1";
        case ProtocolKind::Method2: return "method2";
    }
    return "?";
}

ProtocolTiming solve_coupling(int n_cavities, int m, double delta_big, double delta_A,
                              double mu_A) {
    if (n_cavities < 1) throw std::invalid_argument("solve_coupling: n_cavities < 1");
    if (m < 1) throw std::invalid_argument("solve_coupling: m < 1");
    if (mu_A <= 0.0) throw std::invalid_argument("solve_coupling: mu_A <= 0");
    if (delta_big == 0.0 || delta_A == 0.0)
        throw std::invalid_argument("solve_coupling: zero detuning");
    if (delta_big == delta_A)
        throw std::invalid_argument("solve_coupling: Delta = Delta_A (lambda resonance undefined)");
    if (delta_big + delta_A == 0.0)
        throw std::invalid_argument("solve_coupling: Delta = -Delta_A (lambda vanishes)");

    ProtocolTiming out;
    out.m = m;
    out.delta = delta_big - delta_A;
    const double N = static_cast<double>(n_cavities);
    out.T = 2.0 * m * PI * std::abs(delta_A) / (N * mu_A * mu_A);
    out.mu = std::abs(delta_big) *
             std::sqrt(2.0 * N * std::abs(out.delta) * std::abs(delta_A) / m) /
             std::abs(delta_big + delta_A);
    out.lambda = 0.5 * out.mu * mu_A * (1.0 / delta_big + 1.0 / delta_A);

    const double phi_c = N * mu_A * mu_A * out.T / std::abs(delta_A);
    out.coupler_phase_residual = std::abs(phi_c - 2.0 * m * PI) / (2.0 * m * PI);
    const double phi_q = out.lambda * out.lambda * out.T / std::abs(out.delta);
    out.qubit_phase_residual = std::abs(phi_q - PI) / PI;
    return out;
}

DVec build_initial(const SystemParams& p, std::shared_ptr<const SpaceLayout> lay,
                   ProtocolKind kind, cd alpha, cd beta,
                   const std::vector<int>& fock_levels) {
    check_amplitudes(alpha, beta);
    const double eps = p.epsilon;
    if (eps != 0.0 && std::abs(alpha - beta) > 1e-12)
        throw std::invalid_argument(
            "preparation error epsilon is only defined for alpha = beta = 1/sqrt(2)");
    if (!fock_levels.empty() && static_cast<int>(fock_levels.size()) != lay->n_cavities())
        throw std::invalid_argument("fock_levels size mismatch");

    std::vector<DVec> locals;
    DVec coupler = DVec::Zero(3);
    if (eps != 0.0) {
        coupler[LVL_GPRIME] = std::sqrt((1.0 + eps) / 2.0);
        coupler[LVL_E] = std::sqrt((1.0 - eps) / 2.0);
    } else {
        coupler[LVL_GPRIME] = alpha;
        coupler[LVL_E] = beta;
    }
    locals.push_back(coupler);
    for (int q = 0; q < p.total_qubits(); ++q) {
        if (kind == ProtocolKind::Method2 && q == 0)
            locals.push_back(qutrit_level(LVL_GPRIME));
        else
            locals.push_back(plus_state(eps, +1.0));
    }
    for (int j = 0; j < lay->n_cavities(); ++j)
        locals.push_back(fock_level(fock_levels.empty() ? 0 : fock_levels[j],
                                    lay->fock_cutoff()));
    return kron_product(*lay, locals);
}

DMat build_initial_thermal(const SystemParams& p, std::shared_ptr<const SpaceLayout> lay,
                           ProtocolKind kind, cd alpha, cd beta) {
    const int cutoff = lay->fock_cutoff();
    const auto w = thermal_weights(p.n_bar, cutoff);
    const int N = lay->n_cavities();
    DMat rho = DMat::Zero(lay->total_dim(), lay->total_dim());
    std::vector<int> levels(N, 0);
    // enumerate all cavity Fock combinations (small: cutoff^N)
    for (;;) {
        double weight = 1.0;
        for (int j = 0; j < N; ++j) weight *= w[levels[j]];
        DVec psi = build_initial(p, lay, kind, alpha, beta, levels);
        rho.noalias() += cd(weight) * (psi * psi.adjoint());
        int j = N - 1;
        while (j >= 0 && ++levels[j] == cutoff) levels[j--] = 0;
        if (j < 0) break;
    }
    return rho;
}

DVec ideal_target(const SystemParams& p, std::shared_ptr<const SpaceLayout> lay,
                  ProtocolKind kind, cd alpha, cd beta, bool method1_minus) {
    check_amplitudes(alpha, beta);
    const int nq = p.total_qubits();
    auto branch = [&](int coupler_level, double sign, int q0_level_override,
                      cd amp) {
        std::vector<DVec> locals;
        locals.push_back(qutrit_level(coupler_level));
        for (int q = 0; q < nq; ++q) {
            if (q0_level_override >= 0 && q == 0)
                locals.push_back(qutrit_level(q0_level_override));
            else
                locals.push_back(plus_state(0.0, sign));
        }
        for (int j = 0; j < lay->n_cavities(); ++j)
            locals.push_back(fock_level(0, lay->fock_cutoff()));
        return DVec(amp * kron_product(*lay, locals));
    };

    switch (kind) {
        case ProtocolKind::SingleShot:
            return branch(LVL_GPRIME, +1.0, -1, alpha) + branch(LVL_E, -1.0, -1, beta);
        case ProtocolKind::Method1: {
            const int cl = method1_minus ? LVL_E : LVL_GPRIME;
            const double s = method1_minus ? -1.0 : 1.0;
            return branch(cl, +1.0, -1, alpha) + branch(cl, -1.0, -1, s * beta);
        }
        case ProtocolKind::Method2:
            return branch(LVL_G, +1.0, LVL_G, alpha) +
                   branch(LVL_G, -1.0, LVL_E, cd(0.0, -1.0) * beta);
    }
    throw std::invalid_argument("ideal_target: unknown protocol kind");
}

Operator coupler_half_pi(std::shared_ptr<const SpaceLayout> lay) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(3, 3);
    const double r = 1.0 / std::sqrt(2.0);
    u(LVL_GPRIME, LVL_GPRIME) = r; u(LVL_E, LVL_GPRIME) = r;   // |g'> -> (|g'>+|e>)/sqrt2
    u(LVL_GPRIME, LVL_E) = r;      u(LVL_E, LVL_E) = -r;       // |e>  -> (|g'>-|e>)/sqrt2
    u(LVL_G, LVL_G) = 1.0;
    return embed(u, lay->coupler_site(), lay);
}

Operator pulse_gprime_to_g(std::shared_ptr<const SpaceLayout> lay, int site) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(3, 3);
    u(LVL_G, LVL_GPRIME) = 1.0;
    u(LVL_GPRIME, LVL_G) = 1.0;
    u(LVL_E, LVL_E) = 1.0;
    return embed(u, site, lay);
}

Operator qubit_coupler_swap(std::shared_ptr<const SpaceLayout> lay) {
    const int sA = lay->coupler_site();
    const int sq = lay->qubit_site_linear(0);
    const std::int64_t D = lay->total_dim();
    const std::int64_t strA = lay->stride_at(sA);
    const std::int64_t strq = lay->stride_at(sq);
    std::vector<Eigen::Triplet<cd>> trips;
    trips.reserve(D);
    for (std::int64_t i = 0; i < D; ++i) {
        const int lA = lay->level_of(i, sA);
        const int lq = lay->level_of(i, sq);
        if (lq == LVL_G && lA == LVL_E) {
            const std::int64_t j = i + (LVL_E - LVL_G) * strq + (LVL_G - LVL_E) * strA;
            trips.emplace_back(j, i, cd(0.0, -1.0));
        } else if (lq == LVL_E && lA == LVL_G) {
            const std::int64_t j = i + (LVL_G - LVL_E) * strq + (LVL_E - LVL_G) * strA;
            trips.emplace_back(j, i, cd(0.0, -1.0));
        } else {
            trips.emplace_back(i, i, cd(1.0));
        }
    }
    SpMat m(D, D);
    m.setFromTriplets(trips.begin(), trips.end());
    return Operator{std::move(lay), std::move(m)};
}

void apply_unitary(const Operator& u, QuantumState& state) {
    if (u.dim() != state.dim())
        throw std::invalid_argument("apply_unitary: dimension mismatch");
    if (state.is_pure()) {
        state.vec() = (u.mat * state.vec()).eval();
    } else {
        DMat t = u.mat * state.mat();
        state.mat() = t * SpMat(u.mat.adjoint());
    }
}

MeasurementOutcome measure_coupler(const QuantumState& state, Level outcome) {
    Operator proj = embed(projector_op(outcome, 3), state.layout->coupler_site(),
                          state.layout);
    MeasurementOutcome out;
    out.post.layout = state.layout;
    if (state.is_pure()) {
        DVec w = proj.mat * state.vec();
        out.probability = w.squaredNorm();
        if (out.probability < 1e-15)
            throw std::runtime_error("measure_coupler: outcome has (near-)zero probability");
        out.post.payload = DVec(w / std::sqrt(out.probability));
    } else {
        DMat w = proj.mat * state.mat();
        w = (w * proj.mat).eval();
        out.probability = w.trace().real();
        if (out.probability < 1e-15)
            throw std::runtime_error("measure_coupler: outcome has (near-)zero probability");
        out.post.payload = DMat(w / out.probability);
    }
    return out;
}

double finalize_protocol(ProtocolKind kind, QuantumState& state, Level method1_outcome) {
    switch (kind) {
        case ProtocolKind::SingleShot:
            return 1.0;
        case ProtocolKind::Method1: {
            if (method1_outcome == LVL_G)
                throw std::invalid_argument("method1: measurement basis is {|g'>, |e>}");
            apply_unitary(coupler_half_pi(state.layout), state);
            auto mo = measure_coupler(state, method1_outcome);
            state = std::move(mo.post);
            return mo.probability;
        }
        case ProtocolKind::Method2: {
            apply_unitary(pulse_gprime_to_g(state.layout, state.layout->qubit_site_linear(0)),
                          state);
            apply_unitary(pulse_gprime_to_g(state.layout, state.layout->coupler_site()),
                          state);
            apply_unitary(qubit_coupler_swap(state.layout), state);
            return 1.0;
        }
    }
    throw std::invalid_argument("finalize_protocol: unknown protocol kind");
}

} // namespace ghzsim
