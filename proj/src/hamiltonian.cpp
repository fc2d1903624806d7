#include "ghzsim/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ghzsim {

const char* tier_name(Tier t) {
    switch (t) {
        case Tier::Ideal_Eq1: return "ideal";
        case Tier::Full_Eq15: return "full";
        case Tier::Effective_Eq2: return "effective2";
        case Tier::Effective_Eq3: return "effective3";
        case Tier::Effective_Eq5: return "effective5";
        case Tier::Diagonal_Eq6: return "diagonal";
    }
    return "?";
}

std::vector<std::string> SystemParams::validate() const {
    if (n_cavities < 1) throw std::invalid_argument("params: n_cavities < 1");
    if (static_cast<int>(qubits_per_cavity.size()) != n_cavities)
        throw std::invalid_argument("params: qubits_per_cavity size mismatch");
    if (total_qubits() < 1) throw std::invalid_argument("params: no intra-cavity qubits");
    if (fock_cutoff < 2) throw std::invalid_argument("params: fock_cutoff < 2");
    auto nonneg = [](double v, const char* what) {
        if (v < 0.0) throw std::invalid_argument(std::string("params: negative rate ") + what);
    };
    for (double k : kappa) nonneg(k, "kappa");
    nonneg(gamma_eg, "gamma_eg"); nonneg(gamma_eg_prime, "gamma_eg_prime");
    nonneg(gamma_gprime_g, "gamma_gprime_g"); nonneg(gamma_e_phi, "gamma_e_phi");
    nonneg(gamma_gprime_phi, "gamma_gprime_phi");
    nonneg(gamma_eg_A, "gamma_eg_A"); nonneg(gamma_eg_prime_A, "gamma_eg_prime_A");
    nonneg(gamma_gprime_g_A, "gamma_gprime_g_A"); nonneg(gamma_e_phi_A, "gamma_e_phi_A");
    nonneg(gamma_gprime_phi_A, "gamma_gprime_phi_A");
    nonneg(mu, "mu"); nonneg(mu_A, "mu_A"); nonneg(n_bar, "n_bar");
    if (epsilon < -1.0 || epsilon > 1.0)
        throw std::invalid_argument("params: epsilon outside [-1, 1]");
    if (!coupling_scale.empty() &&
        static_cast<int>(coupling_scale.size()) != total_qubits())
        throw std::invalid_argument("params: coupling_scale size mismatch");
    if (!detuning_offset.empty() &&
        static_cast<int>(detuning_offset.size()) != total_qubits())
        throw std::invalid_argument("params: detuning_offset size mismatch");

    std::vector<std::string> warnings;
    if (mu > 0.0 && std::abs(delta) <= mu)
        warnings.push_back("dispersive condition |Delta| > mu not satisfied");
    if (mu_A > 0.0 && std::abs(delta_A) <= mu_A)
        warnings.push_back("dispersive condition |Delta_A| > mu_A not satisfied");
    if (std::abs(delta - delta_A) == 0.0)
        warnings.push_back("delta = Delta - Delta_A is zero");
    return warnings;
}

EffectiveCouplings lambda_and_delta(const SystemParams& p) {
    if (p.delta == 0.0 || p.delta_A == 0.0)
        throw std::invalid_argument("lambda_and_delta: zero detuning (division by Delta or Delta_A)");
    EffectiveCouplings out;
    out.lambda = 0.5 * p.mu * p.mu_A * (1.0 / p.delta + 1.0 / p.delta_A);
    out.delta = p.delta - p.delta_A;
    out.lambda_jk = p.mu_A * p.mu_A / p.delta_A;
    return out;
}

Generator::Generator(std::shared_ptr<const SpaceLayout> layout, std::vector<HamTerm> terms,
                     std::int64_t dim_override)
    : layout_(std::move(layout)), terms_(std::move(terms)),
      dim_(dim_override > 0 ? dim_override : layout_->total_dim()) {
    for (auto& t : terms_)
        if (t.op.rows() != t.op.cols() || t.op.rows() != dim_)
            throw std::invalid_argument("Generator: term dimension mismatch");
}

void Generator::apply(double t, const DVec& x, DVec& out) const {
    for (const auto& term : terms_) {
        const cd c = std::polar(1.0, -term.omega * t);
        out.noalias() += c * (term.op * x);
        out.noalias() += std::conj(c) * (term.op_dag * x);
    }
}

void Generator::apply(double t, const DMat& x, DMat& out) const {
    for (const auto& term : terms_) {
        const cd c = std::polar(1.0, -term.omega * t);
        out.noalias() += c * (term.op * x);
        out.noalias() += std::conj(c) * (term.op_dag * x);
    }
}

SpMat Generator::assemble(double t) const {
    SpMat h(dim_, dim_);
    for (const auto& term : terms_) {
        const cd c = std::polar(1.0, -term.omega * t);
        h = h + SpMat(c * term.op) + SpMat(std::conj(c) * term.op_dag);
    }
    h.makeCompressed();
    return h;
}

double Generator::max_phase_frequency() const {
    double w = 0.0;
    for (const auto& term : terms_) w = std::max(w, std::abs(term.omega));
    return w;
}

namespace {

struct Builder {
    std::shared_ptr<const SpaceLayout> lay;
    const SystemParams& p;
    std::vector<HamTerm> terms;
    SpMat h_static;   // accumulated Hermitian time-independent part

    explicit Builder(std::shared_ptr<const SpaceLayout> l, const SystemParams& pp)
        : lay(std::move(l)), p(pp), h_static(lay->total_dim(), lay->total_dim()) {}

    SpMat site_op(const Eigen::MatrixXcd& local, int site) const {
        return embed(local, site, lay).mat;
    }
    SpMat annih(int cav) const {
        return site_op(annihilation_op(lay->fock_cutoff()), lay->cavity_site(cav));
    }
    SpMat qutrit(int site, int a, int b) const {
        return site_op(transition_op(a, b, 3), site);
    }
    void add_phase_term(SpMat a, double omega) {
        if (a.nonZeros() == 0) return;
        SpMat ad = SpMat(a.adjoint());
        terms.push_back(HamTerm{std::move(a), std::move(ad), omega});
    }
    void add_static(const SpMat& h) { h_static = SpMat(h_static + h); }

    Generator finish() {
        h_static.prune(cd(0.0));
        if (h_static.nonZeros() > 0) add_phase_term(SpMat(0.5 * h_static), 0.0);
        return Generator(lay, std::move(terms));
    }

    int cavity_of_qubit(int q) const {
        int j = 0, acc = p.qubits_per_cavity[0];
        while (q >= acc) acc += p.qubits_per_cavity[++j];
        return j;
    }
    double qubit_lambda(int q) const {
        double dq = p.qubit_delta(q);
        if (dq == 0.0 || p.delta_A == 0.0)
            throw std::invalid_argument("effective tier: zero detuning");
        return 0.5 * p.qubit_mu(q) * p.mu_A * (1.0 / dq + 1.0 / p.delta_A);
    }
    double qubit_small_delta(int q) const { return p.qubit_delta(q) - p.delta_A; }
};

void add_exchange_terms(Builder& b, bool parasitics) {
    const auto& p = b.p;
    const int nq = p.total_qubits();
    for (int q = 0; q < nq; ++q) {
        const int j = b.cavity_of_qubit(q);
        const int site = 1 + q;
        SpMat a = b.annih(j);
        b.add_phase_term(SpMat(p.qubit_mu(q) * (a * b.qutrit(site, LVL_E, LVL_G))),
                         p.qubit_delta(q));
        if (parasitics && p.mu_tilde != 0.0) {
            double scale = p.coupling_scale.empty() ? 1.0 : p.coupling_scale[q];
            double off = p.detuning_offset.empty() ? 0.0 : p.detuning_offset[q];
            b.add_phase_term(SpMat(scale * p.mu_tilde * (a * b.qutrit(site, LVL_E, LVL_GPRIME))),
                             p.delta_tilde + off);
        }
    }
    for (int j = 0; j < p.n_cavities; ++j) {
        SpMat a = b.annih(j);
        b.add_phase_term(SpMat(p.mu_A * (a * b.qutrit(0, LVL_E, LVL_G))), p.delta_A);
        if (parasitics && p.mu_tilde_A != 0.0)
            b.add_phase_term(SpMat(p.mu_tilde_A * (a * b.qutrit(0, LVL_E, LVL_GPRIME))),
                             p.delta_tilde_A);
    }
    if (parasitics && p.mu_12 != 0.0 && p.n_cavities >= 2) {
        SpMat x = SpMat(cd(p.mu_12) * SpMat(b.annih(0) * SpMat(b.annih(1).adjoint())));
        b.add_static(SpMat(x + SpMat(x.adjoint())));
    }
}

// Intra-cavity dipole-dipole -mu^2/Delta * (J_j J_j^+ - G_j), per cavity.
void add_intracavity_dipole(Builder& b) {
    const auto& p = b.p;
    int q0 = 0;
    for (int j = 0; j < p.n_cavities; ++j) {
        const int m = p.qubits_per_cavity[j];
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < m; ++k) {
                if (i == k) continue;   // diagonal cancels against G_j
                const int qi = q0 + i, qk = q0 + k;
                double coeff = -p.qubit_mu(qi) * p.qubit_mu(qk) /
                               (0.5 * (p.qubit_delta(qi) + p.qubit_delta(qk)));
                SpMat op = SpMat(b.qutrit(1 + qi, LVL_G, LVL_E) * b.qutrit(1 + qk, LVL_E, LVL_G));
                b.add_static(SpMat(coeff * op));
            }
        q0 += m;
    }
}

void add_stark_E_terms(Builder& b) {
    // -sum_i mu_i^2/Delta_i E_i  -  N mu_A^2/Delta_A E_A
    const auto& p = b.p;
    const int nq = p.total_qubits();
    for (int q = 0; q < nq; ++q)
        b.add_static(SpMat(cd(-p.qubit_mu(q) * p.qubit_mu(q) / p.qubit_delta(q)) *
                           b.qutrit(1 + q, LVL_E, LVL_E)));
    b.add_static(SpMat(cd(-p.n_cavities * p.mu_A * p.mu_A / p.delta_A) *
                       b.qutrit(0, LVL_E, LVL_E)));
}

Generator build_effective2(Builder& b) {
    const auto& p = b.p;
    const int nq = p.total_qubits();
    // ac-Stark shifts with photon operators kept
    for (int j = 0; j < p.n_cavities; ++j) {
        SpMat a = b.annih(j);
        SpMat n_op = SpMat(SpMat(a.adjoint()) * a);
        SpMat aad = SpMat(a * SpMat(a.adjoint()));
        for (int i = 0; i < p.qubits_per_cavity[j]; ++i) {
            int q = 0;
            for (int jj = 0; jj < j; ++jj) q += p.qubits_per_cavity[jj];
            q += i;
            const double c = p.qubit_mu(q) * p.qubit_mu(q) / p.qubit_delta(q);
            b.add_static(SpMat(cd(c) * SpMat(b.qutrit(1 + q, LVL_G, LVL_G) * n_op)) +
                         SpMat(cd(-c) * SpMat(b.qutrit(1 + q, LVL_E, LVL_E) * aad)));
        }
        const double cA = p.mu_A * p.mu_A / p.delta_A;
        b.add_static(SpMat(cd(cA) * SpMat(b.qutrit(0, LVL_G, LVL_G) * n_op)) +
                     SpMat(cd(-cA) * SpMat(b.qutrit(0, LVL_E, LVL_E) * aad)));
    }
    add_intracavity_dipole(b);
    // qubit-coupler dipole terms with e^{-i delta_q t} phases
    for (int q = 0; q < nq; ++q)
        b.add_phase_term(SpMat(cd(-b.qubit_lambda(q)) *
                               SpMat(b.qutrit(1 + q, LVL_G, LVL_E) * b.qutrit(0, LVL_E, LVL_G))),
                         b.qubit_small_delta(q));
    // cavity-cavity coupling conditioned on the coupler state
    const double ljk = p.mu_A * p.mu_A / p.delta_A;
    SpMat cond = SpMat(b.qutrit(0, LVL_E, LVL_E) - b.qutrit(0, LVL_G, LVL_G));
    for (int j = 0; j < p.n_cavities; ++j)
        for (int k = j + 1; k < p.n_cavities; ++k) {
            SpMat x = SpMat(cd(ljk) * SpMat(SpMat(b.annih(j) * SpMat(b.annih(k).adjoint())) * cond));
            b.add_static(SpMat(x + SpMat(x.adjoint())));
        }
    return b.finish();
}

Generator build_effective3(Builder& b) {
    const auto& p = b.p;
    add_stark_E_terms(b);
    add_intracavity_dipole(b);
    for (int q = 0; q < p.total_qubits(); ++q)
        b.add_phase_term(SpMat(cd(-b.qubit_lambda(q)) *
                               SpMat(b.qutrit(1 + q, LVL_G, LVL_E) * b.qutrit(0, LVL_E, LVL_G))),
                         b.qubit_small_delta(q));
    return b.finish();
}

Generator build_effective5(Builder& b) {
    const auto& p = b.p;
    const int nq = p.total_qubits();
    add_stark_E_terms(b);
    add_intracavity_dipole(b);
    // adiabatically eliminated dipole exchange, conditioned on coupler level
    const EffectiveCouplings eff = lambda_and_delta(p);
    SpMat ea = b.qutrit(0, LVL_E, LVL_E);
    SpMat ga = b.qutrit(0, LVL_G, LVL_G);
    for (int i = 0; i < nq; ++i)
        for (int k = 0; k < nq; ++k) {
            const double c = b.qubit_lambda(i) * b.qubit_lambda(k) / eff.delta;
            SpMat lower_raise = SpMat(b.qutrit(1 + i, LVL_G, LVL_E) * b.qutrit(1 + k, LVL_E, LVL_G));
            SpMat raise_lower = SpMat(b.qutrit(1 + i, LVL_E, LVL_G) * b.qutrit(1 + k, LVL_G, LVL_E));
            b.add_static(SpMat(cd(c) * SpMat(ea * lower_raise)) +
                         SpMat(cd(-c) * SpMat(ga * raise_lower)));
        }
    return b.finish();
}

Generator build_diagonal6(Builder& b) {
    const auto& p = b.p;
    b.add_static(SpMat(cd(-p.n_cavities * p.mu_A * p.mu_A / p.delta_A) *
                       b.qutrit(0, LVL_E, LVL_E)));
    SpMat ea = b.qutrit(0, LVL_E, LVL_E);
    for (int q = 0; q < p.total_qubits(); ++q) {
        const double lq = b.qubit_lambda(q);
        const double c = lq * lq / b.qubit_small_delta(q);
        b.add_static(SpMat(cd(c) * SpMat(ea * b.qutrit(1 + q, LVL_G, LVL_G))));
    }
    return b.finish();
}

} // namespace

Generator build_generator(const HamiltonianSpec& spec) {
    const auto& p = spec.params;
    auto lay = spec.layout;
    if (!lay) throw std::invalid_argument("build_generator: null layout");
    if (lay->n_cavities() != p.n_cavities || lay->qubits_per_cavity() != p.qubits_per_cavity)
        throw std::invalid_argument("build_generator: layout/params register mismatch");

    Builder b(lay, p);
    switch (spec.tier) {
        case Tier::Ideal_Eq1:
            add_exchange_terms(b, false);
            return b.finish();
        case Tier::Full_Eq15:
            add_exchange_terms(b, true);
            return b.finish();
        case Tier::Effective_Eq2: return build_effective2(b);
        case Tier::Effective_Eq3: return build_effective3(b);
        case Tier::Effective_Eq5: return build_effective5(b);
        case Tier::Diagonal_Eq6: return build_diagonal6(b);
    }
    throw std::invalid_argument("build_generator: unknown tier");
}

std::vector<CollapseChannel> build_collapse_set(const SystemParams& p,
                                                std::shared_ptr<const SpaceLayout> lay) {
    std::vector<CollapseChannel> out;
    Builder b(lay, p);
    // Zero-rate channels are physically absent; skip them at the source.
    auto push = [&out](SpMat op, double rate, std::string name) {
        if (rate > 0.0) out.push_back({std::move(op), rate, std::move(name)});
    };
    for (int j = 0; j < p.n_cavities; ++j)
        push(b.annih(j), p.kappa_at(j), "kappa_cav" + std::to_string(j + 1));
    auto qutrit_channels = [&](int site, const std::string& tag, double eg, double egp,
                               double gpg, double ephi, double gpphi) {
        push(b.qutrit(site, LVL_G, LVL_E), eg, "gamma_eg_" + tag);
        push(b.qutrit(site, LVL_GPRIME, LVL_E), egp, "gamma_eg'_" + tag);
        push(b.qutrit(site, LVL_G, LVL_GPRIME), gpg, "gamma_g'g_" + tag);
        push(b.qutrit(site, LVL_E, LVL_E), ephi, "gamma_e_phi_" + tag);
        push(b.qutrit(site, LVL_GPRIME, LVL_GPRIME), gpphi, "gamma_g'_phi_" + tag);
    };
    for (int q = 0; q < p.total_qubits(); ++q)
        qutrit_channels(1 + q, lay->labels()[1 + q], p.gamma_eg, p.gamma_eg_prime,
                        p.gamma_gprime_g, p.gamma_e_phi, p.gamma_gprime_phi);
    qutrit_channels(0, "A", p.gamma_eg_A, p.gamma_eg_prime_A, p.gamma_gprime_g_A,
                    p.gamma_e_phi_A, p.gamma_gprime_phi_A);
    return out;
}

Operator excitation_number(std::shared_ptr<const SpaceLayout> lay) {
    const std::int64_t D = lay->total_dim();
    std::vector<Eigen::Triplet<cd>> trips;
    trips.reserve(D);
    for (std::int64_t i = 0; i < D; ++i) {
        int e = lay->excitation_of(i);
        if (e != 0) trips.emplace_back(i, i, cd(static_cast<double>(e)));
    }
    SpMat m(D, D);
    m.setFromTriplets(trips.begin(), trips.end());
    return Operator{std::move(lay), std::move(m)};
}

} // namespace ghzsim
