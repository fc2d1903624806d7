#pragma once

#include <complex>
#include <memory>
#include <variant>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "ghzsim/layout.hpp"

namespace ghzsim {

using cd = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cd, Eigen::RowMajor>;
using DMat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using DVec = Eigen::VectorXcd;

// Sparse operator bound to a register layout.
struct Operator {
    std::shared_ptr<const SpaceLayout> layout;
    SpMat mat;

    std::int64_t dim() const { return mat.rows(); }
    Operator adjoint() const;
    bool is_hermitian(double rel_tol = 1e-12) const;
};

// Pure state vector or density matrix on a layout.
struct QuantumState {
    std::shared_ptr<const SpaceLayout> layout;
    std::variant<DVec, DMat> payload;

    bool is_pure() const { return payload.index() == 0; }
    const DVec& vec() const { return std::get<DVec>(payload); }
    DVec& vec() { return std::get<DVec>(payload); }
    const DMat& mat() const { return std::get<DMat>(payload); }
    DMat& mat() { return std::get<DMat>(payload); }
    std::int64_t dim() const {
        return is_pure() ? vec().size() : mat().rows();
    }
    // |psi><psi| if pure, otherwise a copy of the density matrix.
    DMat density() const;
    void check_valid(double norm_tol = 1e-9) const;   // throws on violation
};

// Local (single-subsystem) operators, dense since they are tiny.
Eigen::MatrixXcd annihilation_op(int dim);
Eigen::MatrixXcd transition_op(int level_a, int level_b, int dim); // |a><b|
Eigen::MatrixXcd projector_op(int level, int dim);                 // |l><l|

// Kronecker-lift a local operator to the full register (identity elsewhere).
Operator embed(const Eigen::MatrixXcd& local, const std::string& site_label,
               std::shared_ptr<const SpaceLayout> layout);
Operator embed(const Eigen::MatrixXcd& local, int site,
               std::shared_ptr<const SpaceLayout> layout);

// <psi|op|psi> or Tr(op rho)
cd expectation(const Operator& op, const QuantumState& state);
cd expectation(const SpMat& op, const QuantumState& state);

double frobenius_norm(const SpMat& m);

} // namespace ghzsim
