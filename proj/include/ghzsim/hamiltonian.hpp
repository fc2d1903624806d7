#pragma once

#include <memory>
#include <vector>

#include "ghzsim/operators.hpp"
#include "ghzsim/params.hpp"

namespace ghzsim {

enum class Tier {
    Ideal_Eq1,      // bare dispersive interaction, no parasitics
    Full_Eq15,      // + parasitic |g'><e| couplings and inter-cavity crosstalk
    Effective_Eq2,  // second-order effective model, photon operators kept
    Effective_Eq3,  // cavities in vacuum
    Effective_Eq5,  // dipole terms adiabatically eliminated
    Diagonal_Eq6,   // diagonal conditional-phase generator
};

const char* tier_name(Tier t);

struct HamiltonianSpec {
    Tier tier = Tier::Full_Eq15;
    SystemParams params;
    std::shared_ptr<const SpaceLayout> layout;
};

// H(t) = sum_k [ e^{-i omega_k t} A_k + e^{+i omega_k t} A_k^dag ].
// Static Hermitian contributions are stored as (A = H_static/2, omega = 0).
struct HamTerm {
    SpMat op;       // A_k
    SpMat op_dag;   // cached adjoint
    double omega;   // phase frequency (rad/s)
};

class Generator {
public:
    // dim_override > 0 is used when the terms act on a restricted subspace
    // instead of the full register (see SectorMap).
    Generator(std::shared_ptr<const SpaceLayout> layout, std::vector<HamTerm> terms,
              std::int64_t dim_override = -1);

    const std::vector<HamTerm>& terms() const { return terms_; }
    std::int64_t dim() const { return dim_; }
    const std::shared_ptr<const SpaceLayout>& layout() const { return layout_; }

    // out += H(t) * x
    void apply(double t, const DVec& x, DVec& out) const;
    void apply(double t, const DMat& x, DMat& out) const;    // out += H(t) * X
    SpMat assemble(double t) const;
    double max_phase_frequency() const;

private:
    std::shared_ptr<const SpaceLayout> layout_;
    std::vector<HamTerm> terms_;
    std::int64_t dim_;
};

Generator build_generator(const HamiltonianSpec& spec);

// A weighted collapse channel of the master equation (op is the bare
// operator; the dissipator uses sqrt(rate) * op).
struct CollapseChannel {
    SpMat op;
    double rate;
    std::string name;
};

std::vector<CollapseChannel> build_collapse_set(const SystemParams& p,
                                                std::shared_ptr<const SpaceLayout> layout);

struct EffectiveCouplings {
    double lambda;     // (mu mu_A / 2)(1/Delta + 1/Delta_A)
    double delta;      // Delta - Delta_A (signed)
    double lambda_jk;  // mu_A^2 / Delta_A
};

EffectiveCouplings lambda_and_delta(const SystemParams& p);

// Total-excitation operator: sum_j a_j^dag a_j + sum E_{j_i} + E_A.
Operator excitation_number(std::shared_ptr<const SpaceLayout> layout);

} // namespace ghzsim
