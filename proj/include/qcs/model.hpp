#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace qcs {

struct ScalarQuantizer;

enum class MatrixMode { IidScaled, ColumnNormalized };

// Dense sensing operator plus its generation metadata. `quantized` marks the
// output of quantize_matrix; `mode` then keeps the mode of the source matrix.
struct MeasurementMatrix {
  Eigen::MatrixXd entries;
  MatrixMode mode = MatrixMode::ColumnNormalized;
  bool quantized = false;
  std::uint64_t seed = 0;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

// Exactly K-sparse vector with an explicit sorted support set. values[j] is
// zero exactly for j outside the support.
struct SparseSignal {
  Eigen::VectorXd values;
  std::vector<Eigen::Index> support;

  Eigen::Index dim() const { return values.size(); }
  int sparsity() const { return static_cast<int>(support.size()); }
};

// IidScaled draws entries i.i.d. N(0, 1/m); ColumnNormalized draws standard
// normal entries and rescales every column to unit norm. Deterministic given
// (m, n, seed, mode).
MeasurementMatrix gen_gaussian_matrix(int m, int n, std::uint64_t seed, MatrixMode mode);

// Support uniform over size-k subsets of {0, ..., n-1}; nonzeros i.i.d.
// standard normal.
SparseSignal gen_sparse_signal(int n, int k, std::uint64_t seed);

Eigen::VectorXd measure(const MeasurementMatrix& phi, const SparseSignal& x);

// (1/N) Σ φ², the average column energy.
double mu1(const Eigen::MatrixXd& phi);

// max over rows of (m/K) · (sum of the K largest squared entries of the row).
// The max over all size-K supports separates row by row, so no enumeration.
double mu2(const Eigen::MatrixXd& phi, int k);

struct RipEstimate {
  double delta = 0.0;
  bool is_lower_bound = false;  // true when only sampled supports were evaluated
  std::uint64_t supports_evaluated = 0;
};

struct RipExact {
  std::uint64_t enumeration_cap = 1'000'000;
};
struct RipSampled {
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 0;
};

// Restricted isometry constant of order k: the max over evaluated supports T
// of max(1 - λmin(Φ_T*Φ_T), λmax(Φ_T*Φ_T) - 1). Exact mode enumerates all
// C(N,k) supports and throws if that exceeds the cap.
RipEstimate rip_delta(const Eigen::MatrixXd& phi, int k, const RipExact& mode);
RipEstimate rip_delta(const Eigen::MatrixXd& phi, int k, const RipSampled& mode);

// Entrywise scalar quantization of the matrix.
MeasurementMatrix quantize_matrix(const MeasurementMatrix& phi, const ScalarQuantizer& q);

}  // namespace qcs
