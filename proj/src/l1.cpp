#include "qcs/l1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qcs/projection.hpp"

namespace qcs {

namespace {

double shrink(double v, double kappa) {
  if (v > kappa) return v - kappa;
  if (v < -kappa) return v + kappa;
  return 0.0;
}

double box_violation(const BoxRegion& box, const Eigen::VectorXd& w) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double width = box.width(i);
    const double scale = std::isfinite(width) ? std::max(width, 1e-300) : 1.0;
    double v = 0.0;
    if (w[i] < box.lower[i]) v = box.lower[i] - w[i];
    if (w[i] > box.upper[i]) v = w[i] - box.upper[i];
    worst = std::max(worst, v / scale);
  }
  return worst;
}

// argmin over w in the box of (w - r)' M (w - r) by cyclic coordinate
// descent; M must be positive definite. Warm-started from `w`.
void box_qp_descent(const Eigen::MatrixXd& m, const BoxRegion& box, const Eigen::VectorXd& r,
                    Eigen::VectorXd& w, int max_sweeps, double tol) {
  Eigen::VectorXd g = m * (w - r);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      double wi = w[i] - g[i] / m(i, i);
      wi = std::min(std::max(wi, box.lower[i]), box.upper[i]);
      const double delta = wi - w[i];
      if (delta != 0.0) {
        g += delta * m.col(i);
        w[i] = wi;
        moved = std::max(moved, std::abs(delta));
      }
    }
    if (moved <= tol) break;
  }
}

}  // namespace

L1Solver::L1Solver(const Eigen::MatrixXd& phi) : phi_(phi) {
  if (phi_.rows() < 1 || phi_.cols() < 1) throw std::invalid_argument("L1Solver: empty matrix");
  col_norms_ = phi_.colwise().norm();
  const Eigen::MatrixXd gram = phi_ * phi_.transpose();
  gram_llt_.compute(gram);
  if (gram_llt_.info() != Eigen::Success)
    throw std::runtime_error("L1Solver: Gram matrix factorization failed (rank-deficient rows?)");
}

L1Result L1Solver::solve_equality(const Eigen::VectorXd& y, const SolverParams& p) const {
  if (y.size() != phi_.rows()) throw std::invalid_argument("solve_equality: dimension mismatch");
  if (!y.allFinite()) throw std::invalid_argument("solve_equality: measurements must be finite");
  return run(BoxRegion::singleton(y), &y, p);
}

L1Result L1Solver::solve_box(const BoxRegion& box, const SolverParams& p) const {
  box.validate();
  if (box.dim() != phi_.rows()) throw std::invalid_argument("solve_box: dimension mismatch");
  return run(box, nullptr, p);
}

L1Result L1Solver::run(const BoxRegion& box, const Eigen::VectorXd* y_eq,
                       const SolverParams& p) const {
  const auto n = phi_.cols();
  const auto m = phi_.rows();

  // Optional diagonal preconditioning: solve in the scaled variable Dx with
  // unit-norm columns; the objective becomes a weighted ℓ₁ norm.
  Eigen::MatrixXd phi_scaled;
  Eigen::LLT<Eigen::MatrixXd> llt_scaled;
  Eigen::VectorXd weights = Eigen::VectorXd::Ones(n);
  const Eigen::MatrixXd* phi = &phi_;
  const Eigen::LLT<Eigen::MatrixXd>* llt = &gram_llt_;
  if (p.precondition) {
    for (Eigen::Index j = 0; j < n; ++j)
      if (!(col_norms_[j] > 0.0)) throw std::runtime_error("L1Solver: zero column");
    phi_scaled = phi_ * col_norms_.cwiseInverse().asDiagonal();
    llt_scaled.compute(phi_scaled * phi_scaled.transpose());
    weights = col_norms_.cwiseInverse();
    phi = &phi_scaled;
    llt = &llt_scaled;
  }

  // The measurement-consistency step projects onto {x : Φx = w*}. For the
  // equality program w* is y itself; for the box program w* is the point of
  // the cell nearest Φv in the (ΦΦᵀ)⁻¹ metric, so that the step is the exact
  // Euclidean projection onto {x : Φx ∈ box}.
  Eigen::MatrixXd gram_inv;
  Eigen::VectorXd w_warm;
  if (y_eq == nullptr) {
    gram_inv = llt->solve(Eigen::MatrixXd::Identity(m, m));
    w_warm = box.clip(Eigen::VectorXd::Zero(m));
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  const double feas_scale = (y_eq != nullptr) ? std::max(1.0, y_eq->norm()) : 1.0;

  std::vector<double> obj_history;
  obj_history.reserve(static_cast<std::size_t>(std::min(p.max_iter, 4096)));
  L1Result out;

  for (int it = 1; it <= p.max_iter; ++it) {
    out.iterations = it;
    const Eigen::VectorXd v = z - u;
    const Eigen::VectorXd w = (*phi) * v;
    Eigen::VectorXd target;
    if (y_eq != nullptr) {
      target = *y_eq;
    } else {
      box_qp_descent(gram_inv, box, w, w_warm, 16, 1e-10 * (1.0 + w.norm()));
      target = w_warm;
    }
    x = v + phi->transpose() * llt->solve(target - w);
    for (Eigen::Index j = 0; j < n; ++j) z[j] = shrink(x[j] + u[j], weights[j] / p.rho);
    u += x - z;

    double obj = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) obj += weights[j] * std::abs(x[j]);
    obj_history.push_back(obj);

    const auto h = obj_history.size();
    if (h > static_cast<std::size_t>(p.obj_window)) {
      const double past = obj_history[h - 1 - static_cast<std::size_t>(p.obj_window)];
      if (std::abs(obj - past) <= p.eps_obj * std::max(1.0, std::abs(obj))) {
        const Eigen::VectorXd image = (*phi) * x;
        const bool feasible = (y_eq != nullptr)
                                  ? ((image - *y_eq).norm() <= p.eps_feas * feas_scale)
                                  : (box_violation(box, image) <= p.eps_feas);
        if (feasible) {
          out.converged = true;
          break;
        }
      }
    }
  }

  if (p.precondition) x = col_norms_.cwiseInverse().asDiagonal() * x;
  out.objective = x.lpNorm<1>();

  if (p.debias && y_eq != nullptr) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(x[j]) > p.debias_thresh) keep.push_back(j);
    if (!keep.empty() && static_cast<Eigen::Index>(keep.size()) <= phi_.rows()) {
      Eigen::MatrixXd sub(phi_.rows(), static_cast<Eigen::Index>(keep.size()));
      for (std::size_t c = 0; c < keep.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = phi_.col(keep[c]);
      try {
        const Eigen::VectorXd coeffs = SubmatrixLsq(std::move(sub), keep).pcoeff(*y_eq);
        x.setZero();
        for (std::size_t c = 0; c < keep.size(); ++c) x[keep[c]] = coeffs[static_cast<Eigen::Index>(c)];
      } catch (const rank_error&) {
        // Keep the splitting iterate if the refit support is degenerate.
      }
    }
  }

  out.x = x;
  const Eigen::VectorXd image = phi_ * x;
  out.residual = (y_eq != nullptr) ? (image - *y_eq).norm() : box_violation(box, image);
  return out;
}

L1Result bp_reconstruct(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y,
                        const SolverParams& p) {
  return L1Solver(phi).solve_equality(y, p);
}

L1Result qbp_reconstruct(const Eigen::MatrixXd& phi, const BoxRegion& box,
                         const SolverParams& p) {
  return L1Solver(phi).solve_box(box, p);
}

}  // namespace qcs
