#include "qcs/model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qcs/quantizer.hpp"
#include "qcs/rng.hpp"

namespace qcs {

MeasurementMatrix gen_gaussian_matrix(int m, int n, std::uint64_t seed, MatrixMode mode) {
  if (m < 1 || n < 1) throw std::invalid_argument("gen_gaussian_matrix: dimensions must be positive");
  MeasurementMatrix out;
  out.mode = mode;
  out.seed = seed;
  out.entries.resize(m, n);
  CounterRng rng(seed);
  const double scale = (mode == MatrixMode::IidScaled) ? 1.0 / std::sqrt(static_cast<double>(m)) : 1.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) out.entries(i, j) = scale * rng.next_gaussian();
  if (mode == MatrixMode::ColumnNormalized) {
    for (int j = 0; j < n; ++j) {
      const double norm = out.entries.col(j).norm();
      if (norm == 0.0) throw std::runtime_error("gen_gaussian_matrix: zero column");
      out.entries.col(j) /= norm;
    }
  }
  return out;
}

SparseSignal gen_sparse_signal(int n, int k, std::uint64_t seed) {
  if (n < 0 || k < 0 || k > n) throw std::invalid_argument("gen_sparse_signal: need 0 <= K <= N");
  SparseSignal out;
  out.values = Eigen::VectorXd::Zero(n);
  CounterRng rng(seed);
  // Partial Fisher-Yates: the first k slots form a uniform k-subset.
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  out.support.assign(idx.begin(), idx.begin() + k);
  std::sort(out.support.begin(), out.support.end());
  for (Eigen::Index j : out.support) out.values[j] = rng.next_gaussian();
  return out;
}

Eigen::VectorXd measure(const MeasurementMatrix& phi, const SparseSignal& x) {
  if (phi.cols() != x.dim()) throw std::invalid_argument("measure: dimension mismatch");
  return phi.entries * x.values;
}

double mu1(const Eigen::MatrixXd& phi) {
  return phi.squaredNorm() / static_cast<double>(phi.cols());
}

double mu2(const Eigen::MatrixXd& phi, int k) {
  if (k < 1 || k > phi.cols()) throw std::invalid_argument("mu2: K out of range");
  const auto m = phi.rows();
  double worst = 0.0;
  std::vector<double> sq(static_cast<std::size_t>(phi.cols()));
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < phi.cols(); ++j) sq[static_cast<std::size_t>(j)] = phi(i, j) * phi(i, j);
    std::nth_element(sq.begin(), sq.begin() + (k - 1), sq.end(), std::greater<>());
    const double row_sum = std::accumulate(sq.begin(), sq.begin() + k, 0.0);
    worst = std::max(worst, row_sum);
  }
  return static_cast<double>(m) / static_cast<double>(k) * worst;
}

namespace {

double support_delta(const Eigen::MatrixXd& phi, const std::vector<Eigen::Index>& support) {
  const auto k = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXd sub(phi.rows(), k);
  for (Eigen::Index c = 0; c < k; ++c) sub.col(c) = phi.col(support[static_cast<std::size_t>(c)]);
  const Eigen::MatrixXd gram = sub.transpose() * sub;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  return std::max(1.0 - lo, hi - 1.0);
}

// C(n, k) saturating at the cap sentinel.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    if (result > cap) return cap + 1;
    result = result * (n - k + i) / i;
  }
  return std::min<std::uint64_t>(result, cap + 1);
}

}  // namespace

RipEstimate rip_delta(const Eigen::MatrixXd& phi, int k, const RipExact& mode) {
  if (k < 1 || k > phi.cols()) throw std::invalid_argument("rip_delta: K out of range");
  const auto n = static_cast<std::uint64_t>(phi.cols());
  const std::uint64_t count = binomial_capped(n, static_cast<std::uint64_t>(k), mode.enumeration_cap);
  if (count > mode.enumeration_cap)
    throw std::invalid_argument("rip_delta: C(N,K) exceeds the enumeration cap");
  RipEstimate out;
  out.is_lower_bound = false;
  std::vector<Eigen::Index> support(static_cast<std::size_t>(k));
  std::iota(support.begin(), support.end(), 0);
  while (true) {
    out.delta = std::max(out.delta, support_delta(phi, support));
    ++out.supports_evaluated;
    // Odometer step to the next k-combination of {0, ..., n-1}.
    int pos = k - 1;
    while (pos >= 0 &&
           support[static_cast<std::size_t>(pos)] == static_cast<Eigen::Index>(n) - (k - pos)) {
      --pos;
    }
    if (pos < 0) break;
    ++support[static_cast<std::size_t>(pos)];
    for (int p = pos + 1; p < k; ++p)
      support[static_cast<std::size_t>(p)] = support[static_cast<std::size_t>(p - 1)] + 1;
  }
  return out;
}

RipEstimate rip_delta(const Eigen::MatrixXd& phi, int k, const RipSampled& mode) {
  if (k < 1 || k > phi.cols()) throw std::invalid_argument("rip_delta: K out of range");
  const auto n = phi.cols();
  RipEstimate out;
  out.is_lower_bound = true;
  CounterRng rng(mode.seed);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<Eigen::Index> support(static_cast<std::size_t>(k));
  for (std::uint64_t t = 0; t < mode.trials; ++t) {
    for (int i = 0; i < k; ++i) {
      const auto j = i + static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(n - i)));
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    std::copy(idx.begin(), idx.begin() + k, support.begin());
    out.delta = std::max(out.delta, support_delta(phi, support));
    ++out.supports_evaluated;
  }
  return out;
}

MeasurementMatrix quantize_matrix(const MeasurementMatrix& phi, const ScalarQuantizer& q) {
  MeasurementMatrix out = phi;
  out.quantized = true;
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      out.entries(i, j) = apply_scalar(q, out.entries(i, j)).level;
  return out;
}

}  // namespace qcs
