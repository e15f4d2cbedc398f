#pragma once

#include <Eigen/Core>
#include <Eigen/QR>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcs/quantizer.hpp"

namespace qcs {

// A column submatrix failed the full-column-rank test (smallest singular
// value below 1e-10 times the largest). Carries the offending support.
class rank_error : public std::runtime_error {
 public:
  rank_error(const std::string& what, std::vector<Eigen::Index> support)
      : std::runtime_error(what), support_(std::move(support)) {}
  const std::vector<Eigen::Index>& support() const { return support_; }

 private:
  std::vector<Eigen::Index> support_;
};

inline constexpr double kRankTolerance = 1e-10;

// Least-squares operators for one column submatrix Φ_T: factored once by a
// Householder QR, reused for every right-hand side.
class SubmatrixLsq {
 public:
  explicit SubmatrixLsq(Eigen::MatrixXd phi_t, std::vector<Eigen::Index> support = {});

  Eigen::VectorXd pcoeff(const Eigen::VectorXd& y) const;   // argmin_x ‖y − Φ_T x‖₂
  Eigen::VectorXd project(const Eigen::VectorXd& y) const;  // Φ_T · pcoeff(y)
  Eigen::VectorXd resid(const Eigen::VectorXd& y) const;    // y − project(y)

  const Eigen::MatrixXd& matrix() const { return phi_t_; }

 private:
  Eigen::MatrixXd phi_t_;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr_;
};

Eigen::VectorXd pcoeff(const Eigen::VectorXd& y, const Eigen::MatrixXd& phi_t);
Eigen::VectorXd proj(const Eigen::VectorXd& y, const Eigen::MatrixXd& phi_t);
Eigen::VectorXd resid(const Eigen::VectorXd& y, const Eigen::MatrixXd& phi_t);

struct ConstrainedProjectionOptions {
  double tol = 1e-9;  // scaled by (1 + ‖ŷ‖₂) for intersection detection
  int max_iter = 10'000;
};

struct ConstrainedProjection {
  Eigen::VectorXd x;   // x̃
  Eigen::VectorXd y;   // ỹ, always inside the box
  double dist = 0.0;   // ‖ỹ − Φ_T x̃‖₂
  bool intersects = false;  // box meets span(Φ_T) within tolerance
  int iterations = 0;
};

// Best box-consistent approximation of ŷ: (x̃, ỹ) minimizes ‖y − Φ_T x‖₂ over
// box × R^{|T|}, and among the minimizers ỹ is the point nearest ŷ.
//
// Phase 1 alternates a least-squares solve in x with clipping Φ_T x into the
// box, starting from y = ŷ; its limit attains the minimal distance. The
// minimizer set is the affine slice box ∩ (base + span(Φ_T)) through that
// limit (box ∩ span itself when the sets intersect), and phase 2 picks its
// point nearest ŷ by alternating projections with accumulated corrections
// (Dykstra). When the slice only grazes the box at the phase-1 limit, that
// limit is already the answer and is kept.
ConstrainedProjection constrained_projection(const SubmatrixLsq& lsq, const BoxRegion& box,
                                             const Eigen::VectorXd& y_hat,
                                             const ConstrainedProjectionOptions& opt = {});

// resid^(q) = ỹ − Φ_T x̃ and pcoeff^(q) = x̃; the residual is returned as an
// exact zero vector when the attained distance falls below tolerance.
Eigen::VectorXd resid_q(const Eigen::VectorXd& y_hat, const Eigen::MatrixXd& phi_t,
                        const BoxRegion& box);
Eigen::VectorXd pcoeff_q(const Eigen::VectorXd& y_hat, const Eigen::MatrixXd& phi_t,
                         const BoxRegion& box);

}  // namespace qcs
