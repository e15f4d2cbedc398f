#include "qcs/pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace qcs {

namespace {

// Indices of the k largest |v_i|; ties go to the lowest index.
std::vector<Eigen::Index> k_largest(const Eigen::VectorXd& v, int k) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double fa = std::abs(v[a]);
    const double fb = std::abs(v[b]);
    if (fa != fb) return fa > fb;
    return a < b;
  });
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<Eigen::Index> merge_supports(const std::vector<Eigen::Index>& a,
                                         const std::vector<Eigen::Index>& b) {
  std::vector<Eigen::Index> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Eigen::MatrixXd columns(const Eigen::MatrixXd& phi, const std::vector<Eigen::Index>& support) {
  Eigen::MatrixXd sub(phi.rows(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t c = 0; c < support.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = phi.col(support[c]);
  return sub;
}

// The k entries of coeffs with the largest magnitudes, mapped back to global
// indices (sorted).
std::vector<Eigen::Index> keep_k(const std::vector<Eigen::Index>& support,
                                 const Eigen::VectorXd& coeffs, int k) {
  const auto local = k_largest(coeffs, k);
  std::vector<Eigen::Index> idx(local.size());
  for (std::size_t i = 0; i < local.size(); ++i) idx[i] = support[static_cast<std::size_t>(local[i])];
  std::sort(idx.begin(), idx.end());
  return idx;
}

SparseSignal make_estimate(Eigen::Index n, const std::vector<Eigen::Index>& support,
                           const Eigen::VectorXd& coeffs) {
  SparseSignal x;
  x.values = Eigen::VectorXd::Zero(n);
  x.support = support;
  for (std::size_t i = 0; i < support.size(); ++i) x.values[support[i]] = coeffs[static_cast<Eigen::Index>(i)];
  return x;
}

struct ProjectionPair {
  Eigen::VectorXd coeffs;
  Eigen::VectorXd residue;
};

// Shared skeleton of the standard and quantization-aware pursuits; project_for
// computes the projection coefficients and residue for one support.
template <typename ProjectFn>
PursuitResult pursuit_loop(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y_hat, int k,
                           int max_iter, ProjectFn project_for) {
  const auto n = phi.cols();
  if (k < 1 || k > n) throw std::invalid_argument("pursuit: K out of range");
  if (2 * k > phi.rows())
    std::fprintf(stderr, "warning: pursuit with 2K > m (K=%d, m=%ld) is outside the recommended regime\n",
                 k, static_cast<long>(phi.rows()));
  if (max_iter <= 0) max_iter = 3 * k;

  PursuitResult out;
  std::vector<Eigen::Index> support = k_largest(phi.transpose() * y_hat, k);
  ProjectionPair cur = project_for(support);
  double rnorm = cur.residue.norm();
  out.trace.push_back({support, rnorm});

  for (int it = 1; it <= max_iter; ++it) {
    out.iterations = it;
    const auto expanded = merge_supports(support, k_largest(phi.transpose() * cur.residue, k));
    const ProjectionPair wide = project_for(expanded);
    auto cand_support = keep_k(expanded, wide.coeffs, k);
    ProjectionPair cand = project_for(cand_support);
    const double cand_rnorm = cand.residue.norm();

    if (cand_rnorm > rnorm) {
      out.converged = true;  // halting test: keep the previous support
      break;
    }
    const bool stagnated = cand_support == support;
    support = std::move(cand_support);
    cur = std::move(cand);
    rnorm = cand_rnorm;
    out.trace.push_back({support, rnorm});
    if (stagnated) {
      out.converged = true;
      break;
    }
  }
  out.estimate = make_estimate(n, support, cur.coeffs);
  out.residual_norm = rnorm;
  return out;
}

}  // namespace

PursuitResult sp_reconstruct(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y, int k,
                             int max_iter) {
  if (phi.rows() != y.size()) throw std::invalid_argument("sp_reconstruct: dimension mismatch");
  return pursuit_loop(phi, y, k, max_iter, [&](const std::vector<Eigen::Index>& support) {
    const SubmatrixLsq lsq(columns(phi, support), support);
    ProjectionPair pr;
    pr.coeffs = lsq.pcoeff(y);
    pr.residue = y - lsq.matrix() * pr.coeffs;
    return pr;
  });
}

PursuitResult qsp_reconstruct(const Eigen::MatrixXd& phi, const BoxRegion& box,
                              const Eigen::VectorXd& y_hat, int k, int max_iter) {
  if (phi.rows() != y_hat.size() || box.dim() != y_hat.size())
    throw std::invalid_argument("qsp_reconstruct: dimension mismatch");
  return pursuit_loop(phi, y_hat, k, max_iter, [&](const std::vector<Eigen::Index>& support) {
    const SubmatrixLsq lsq(columns(phi, support), support);
    const ConstrainedProjection cp = constrained_projection(lsq, box, y_hat);
    ProjectionPair pr;
    pr.coeffs = cp.x;
    pr.residue = cp.intersects ? Eigen::VectorXd::Zero(y_hat.size()).eval()
                               : (cp.y - lsq.matrix() * cp.x).eval();
    return pr;
  });
}

double reconstruction_error(const Eigen::VectorXd& x, const Eigen::VectorXd& x_hat) {
  if (x.size() != x_hat.size()) throw std::invalid_argument("reconstruction_error: size mismatch");
  return (x - x_hat).squaredNorm();
}

}  // namespace qcs
