#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace qcs {

// Codebook of M points in R^k with nearest-codeword assignment; distance ties
// go to the lower codeword index.
struct VectorQuantizer {
  Eigen::MatrixXd codebook;  // k x M, one codeword per column

  int dim() const { return static_cast<int>(codebook.rows()); }
  int num_codewords() const { return static_cast<int>(codebook.cols()); }
  int nearest(const Eigen::VectorXd& y) const;
};

struct LbgOptions {
  std::uint64_t seed = 0;
  double tol = 1e-10;
  int max_iter = 500;
};

struct LbgResult {
  VectorQuantizer quantizer;
  std::vector<double> distortion_history;  // per-dimension MSE, non-increasing
  int iterations = 0;
  bool converged = false;
};

// Generalized Lloyd codebook training: alternates nearest-codeword partition
// and cell centroid updates. Empty cells are repaired by splitting the cell
// with the largest distortion contribution near its centroid. Distortion is
// per-dimension MSE: total squared error / (k · n).
LbgResult lbg_design(const Eigen::MatrixXd& samples /* k x n */, int m_codewords,
                     const LbgOptions& opt = {});

}  // namespace qcs
