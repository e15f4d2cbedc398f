#include "qcs/vq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "qcs/rng.hpp"

namespace qcs {

int VectorQuantizer::nearest(const Eigen::VectorXd& y) const {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int c = 0; c < num_codewords(); ++c) {
    const double d = (y - codebook.col(c)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

namespace {

std::size_t count_distinct_columns(const Eigen::MatrixXd& samples) {
  std::vector<std::vector<double>> cols(static_cast<std::size_t>(samples.cols()));
  for (Eigen::Index j = 0; j < samples.cols(); ++j)
    cols[static_cast<std::size_t>(j)].assign(samples.col(j).data(), samples.col(j).data() + samples.rows());
  std::sort(cols.begin(), cols.end());
  return static_cast<std::size_t>(std::unique(cols.begin(), cols.end()) - cols.begin());
}

Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& samples, int m, CounterRng& rng) {
  const auto n = samples.cols();
  Eigen::MatrixXd centers(samples.rows(), m);
  centers.col(0) = samples.col(static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(n))));
  Eigen::VectorXd d2 = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  for (int c = 1; c < m; ++c) {
    double total = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      d2[j] = std::min(d2[j], (samples.col(j) - centers.col(c - 1)).squaredNorm());
      total += d2[j];
    }
    if (total <= 0.0) throw std::invalid_argument("lbg_design: fewer distinct samples than codewords");
    double target = rng.next_double() * total;
    Eigen::Index pick = n - 1;
    for (Eigen::Index j = 0; j < n; ++j) {
      target -= d2[j];
      if (target <= 0.0) {
        pick = j;
        break;
      }
    }
    centers.col(c) = samples.col(pick);
  }
  return centers;
}

}  // namespace

LbgResult lbg_design(const Eigen::MatrixXd& samples, int m_codewords, const LbgOptions& opt) {
  const auto k = samples.rows();
  const auto n = samples.cols();
  if (k < 1) throw std::invalid_argument("lbg_design: dimension must be at least 1");
  if (m_codewords < 1) throw std::invalid_argument("lbg_design: need at least one codeword");
  if (n < m_codewords) throw std::invalid_argument("lbg_design: fewer samples than codewords");
  if (count_distinct_columns(samples) < static_cast<std::size_t>(m_codewords))
    throw std::invalid_argument("lbg_design: fewer distinct samples than codewords");

  CounterRng rng(opt.seed);
  Eigen::MatrixXd centers = kmeanspp_init(samples, m_codewords, rng);
  const double norm = static_cast<double>(k) * static_cast<double>(n);

  LbgResult out;
  std::vector<int> assign(static_cast<std::size_t>(n));
  std::vector<double> cell_err(static_cast<std::size_t>(m_codewords));
  std::vector<Eigen::Index> cell_count(static_cast<std::size_t>(m_codewords));

  auto assignment_pass = [&]() {
    std::fill(cell_err.begin(), cell_err.end(), 0.0);
    std::fill(cell_count.begin(), cell_count.end(), 0);
    double total = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < m_codewords; ++c) {
        const double d = (samples.col(j) - centers.col(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      assign[static_cast<std::size_t>(j)] = best;
      cell_err[static_cast<std::size_t>(best)] += best_d;
      ++cell_count[static_cast<std::size_t>(best)];
      total += best_d;
    }
    return total / norm;
  };

  double d_prev = assignment_pass();
  out.distortion_history.push_back(d_prev);

  for (int it = 1; it <= opt.max_iter; ++it) {
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, m_codewords);
    for (Eigen::Index j = 0; j < n; ++j) sums.col(assign[static_cast<std::size_t>(j)]) += samples.col(j);
    for (int c = 0; c < m_codewords; ++c)
      if (cell_count[static_cast<std::size_t>(c)] > 0)
        centers.col(c) = sums.col(c) / static_cast<double>(cell_count[static_cast<std::size_t>(c)]);

    // Empty cells: split the centroid of the cell with the largest
    // distortion contribution, nudged toward its farthest member.
    for (int c = 0; c < m_codewords; ++c) {
      if (cell_count[static_cast<std::size_t>(c)] > 0) continue;
      int donor = 0;
      for (int d = 1; d < m_codewords; ++d)
        if (cell_err[static_cast<std::size_t>(d)] > cell_err[static_cast<std::size_t>(donor)]) donor = d;
      Eigen::VectorXd dir = Eigen::VectorXd::Zero(k);
      double far = -1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (assign[static_cast<std::size_t>(j)] != donor) continue;
        const double dist = (samples.col(j) - centers.col(donor)).squaredNorm();
        if (dist > far) {
          far = dist;
          dir = samples.col(j) - centers.col(donor);
        }
      }
      if (far <= 0.0) dir.setConstant(1.0);
      centers.col(c) = centers.col(donor) + 1e-4 * dir;
    }

    const double d = assignment_pass();
    out.distortion_history.push_back(d);
    out.iterations = it;
    if (d_prev - d <= opt.tol * std::max(d_prev, 1e-300)) {
      out.converged = true;
      break;
    }
    d_prev = d;
  }
  out.quantizer.codebook = std::move(centers);
  return out;
}

}  // namespace qcs
