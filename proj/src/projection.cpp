#include "qcs/projection.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace qcs {

SubmatrixLsq::SubmatrixLsq(Eigen::MatrixXd phi_t, std::vector<Eigen::Index> support)
    : phi_t_(std::move(phi_t)), qr_(phi_t_) {
  const auto k = phi_t_.cols();
  if (k < 1 || phi_t_.rows() < k)
    throw rank_error("submatrix is wider than tall", std::move(support));
  // Singular values of the k x k R factor equal those of Φ_T.
  const Eigen::MatrixXd r =
      qr_.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (!(smin > kRankTolerance * smax))
    throw rank_error("column submatrix is rank deficient", std::move(support));
}

Eigen::VectorXd SubmatrixLsq::pcoeff(const Eigen::VectorXd& y) const { return qr_.solve(y); }

Eigen::VectorXd SubmatrixLsq::project(const Eigen::VectorXd& y) const { return phi_t_ * pcoeff(y); }

Eigen::VectorXd SubmatrixLsq::resid(const Eigen::VectorXd& y) const { return y - project(y); }

Eigen::VectorXd pcoeff(const Eigen::VectorXd& y, const Eigen::MatrixXd& phi_t) {
  return SubmatrixLsq(phi_t).pcoeff(y);
}

Eigen::VectorXd proj(const Eigen::VectorXd& y, const Eigen::MatrixXd& phi_t) {
  return SubmatrixLsq(phi_t).project(y);
}

Eigen::VectorXd resid(const Eigen::VectorXd& y, const Eigen::MatrixXd& phi_t) {
  return SubmatrixLsq(phi_t).resid(y);
}

ConstrainedProjection constrained_projection(const SubmatrixLsq& lsq, const BoxRegion& box,
                                             const Eigen::VectorXd& y_hat,
                                             const ConstrainedProjectionOptions& opt) {
  box.validate();
  if (box.dim() != y_hat.size())
    throw std::invalid_argument("constrained_projection: box/ŷ dimension mismatch");
  const double scale = 1.0 + y_hat.norm();
  const double thresh = opt.tol * scale;

  ConstrainedProjection out;
  // Phase 1: alternating minimization of ‖y − Φ_T x‖ over box × coefficients,
  // starting from ŷ. The limit attains the minimal distance; its image under
  // I − proj fixes the affine slice base + span(Φ_T) on which every minimizer
  // lives (the distance is exactly flat along span directions).
  Eigen::VectorXd y = box.clip(y_hat);
  Eigen::VectorXd x = lsq.pcoeff(y);
  double dist_prev = std::numeric_limits<double>::infinity();
  double dist = (y - lsq.matrix() * x).norm();
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    const Eigen::VectorXd z = lsq.matrix() * x;
    y = box.clip(z);
    dist = (y - z).norm();
    if (dist <= thresh) break;
    if (dist_prev - dist <= 1e-14 * scale) break;
    dist_prev = dist;
    x = lsq.pcoeff(y);
  }
  out.iterations = it + 1;
  out.intersects = dist <= thresh;

  // Phase 2: the minimizer set is box ∩ (base + span(Φ_T)), generically more
  // than one point even in the disjoint case. Pick the point nearest ŷ by
  // alternating projections with accumulated corrections.
  // When the sets intersect, base + span coincides with span(Φ_T) itself.
  const Eigen::VectorXd y_limit = y;
  const Eigen::VectorXd base = out.intersects ? Eigen::VectorXd::Zero(y_hat.size()).eval()
                                              : (y - lsq.project(y)).eval();
  Eigen::VectorXd v = y_hat;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(y_hat.size());
  Eigen::VectorXd q = Eigen::VectorXd::Zero(y_hat.size());
  Eigen::VectorXd yb = box.clip(y_hat);
  Eigen::VectorXd yb_prev = yb;
  for (int k = 0; k < opt.max_iter; ++k) {
    yb = box.clip(v + p);
    p = v + p - yb;
    const Eigen::VectorXd ys = base + lsq.project(yb + q - base);
    q = yb + q - ys;
    v = ys;
    ++out.iterations;
    const double move = (yb - yb_prev).norm();
    const double gap = (yb - ys).norm();
    if (k > 0 && move <= 1e-13 * scale && gap <= thresh) break;
    yb_prev = yb;
  }

  // When the minimizer set reduces to a corner the slice only grazes the box
  // and the corrected projections converge sublinearly; the phase-1 limit is
  // then already the answer. Keep whichever candidate is lexicographically
  // better in (distance, gap to ŷ).
  const double dist_limit = lsq.resid(y_limit).norm();
  const double dist_dykstra = lsq.resid(yb).norm();
  bool take_dykstra = true;
  if (dist_dykstra > dist_limit + thresh)
    take_dykstra = false;
  else if (dist_dykstra >= dist_limit - thresh)
    take_dykstra = (yb - y_hat).norm() <= (y_limit - y_hat).norm();
  out.y = take_dykstra ? yb : y_limit;
  out.x = lsq.pcoeff(out.y);
  out.dist = (out.y - lsq.matrix() * out.x).norm();
  out.intersects = out.dist <= thresh;
  return out;
}

Eigen::VectorXd resid_q(const Eigen::VectorXd& y_hat, const Eigen::MatrixXd& phi_t,
                        const BoxRegion& box) {
  const SubmatrixLsq lsq(phi_t);
  const ConstrainedProjection cp = constrained_projection(lsq, box, y_hat);
  if (cp.intersects) return Eigen::VectorXd::Zero(y_hat.size());
  return cp.y - phi_t * cp.x;
}

Eigen::VectorXd pcoeff_q(const Eigen::VectorXd& y_hat, const Eigen::MatrixXd& phi_t,
                         const BoxRegion& box) {
  const SubmatrixLsq lsq(phi_t);
  return constrained_projection(lsq, box, y_hat).x;
}

}  // namespace qcs
