#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "qcs/quantizer.hpp"

namespace qcs {

struct SolverParams {
  double eps_feas = 1e-8;  // primal feasibility, relative to max(1, ‖y‖₂)
  double eps_obj = 1e-9;   // relative ℓ₁-objective change over the window
  int obj_window = 10;
  int max_iter = 20'000;
  double rho = 1.0;           // fixed splitting penalty, no over-relaxation
  bool precondition = false;  // diagonal preconditioning by column norms
  bool debias = false;        // least-squares refit on the surviving entries
  double debias_thresh = 1e-3;
};

struct L1Result {
  Eigen::VectorXd x;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;   // ‖Φx − y‖₂, or the worst box violation
  double objective = 0.0;  // ‖x‖₁ before any debias refit
};

// Operator-splitting solver for the equality- and box-constrained ℓ₁
// programs. Alternates a soft-shrinkage step with a projection that restores
// measurement consistency (onto the affine set Φx = y, or onto Φx = clip of
// the current image into the box), with a running dual correction. The Gram
// factorization of ΦΦᵀ is computed once and shared across right-hand sides.
class L1Solver {
 public:
  explicit L1Solver(const Eigen::MatrixXd& phi);

  // min ‖x‖₁ subject to Φx = y
  L1Result solve_equality(const Eigen::VectorXd& y, const SolverParams& p = {}) const;
  // min ‖x‖₁ subject to Φx ∈ box
  L1Result solve_box(const BoxRegion& box, const SolverParams& p = {}) const;

 private:
  L1Result run(const BoxRegion& box, const Eigen::VectorXd* y_eq, const SolverParams& p) const;

  Eigen::MatrixXd phi_;
  Eigen::LLT<Eigen::MatrixXd> gram_llt_;  // ΦΦᵀ
  Eigen::VectorXd col_norms_;
};

L1Result bp_reconstruct(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y,
                        const SolverParams& p = {});
L1Result qbp_reconstruct(const Eigen::MatrixXd& phi, const BoxRegion& box,
                         const SolverParams& p = {});

}  // namespace qcs
