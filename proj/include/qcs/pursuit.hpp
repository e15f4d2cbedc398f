#pragma once

#include <Eigen/Core>
#include <vector>

#include "qcs/model.hpp"
#include "qcs/projection.hpp"

namespace qcs {

struct PursuitTraceEntry {
  std::vector<Eigen::Index> support;
  double residual_norm = 0.0;
};

struct PursuitResult {
  SparseSignal estimate;
  std::vector<PursuitTraceEntry> trace;  // entry 0 is the initialization
  int iterations = 0;
  bool converged = false;  // halting test or support stagnation fired
  double residual_norm = 0.0;
};

// Subspace pursuit: keep a K-index candidate support, expand it by the K
// strongest correlations with the residue, solve least squares on the union,
// keep the K largest coefficients, and quit as soon as the residue norm
// stops decreasing. Magnitude ties select the lowest index. max_iter = 0
// uses the default cap of 3K.
PursuitResult sp_reconstruct(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y, int k,
                             int max_iter = 0);

// Same iteration with the projection residue and coefficients computed
// against the whole quantization cell instead of the point ŷ.
PursuitResult qsp_reconstruct(const Eigen::MatrixXd& phi, const BoxRegion& box,
                              const Eigen::VectorXd& y_hat, int k, int max_iter = 0);

// Squared Euclidean reconstruction error.
double reconstruction_error(const Eigen::VectorXd& x, const Eigen::VectorXd& x_hat);

}  // namespace qcs
