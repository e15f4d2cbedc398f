#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

namespace qcs {

// Minimum-distance scalar quantizer: M strictly increasing levels and M-1
// finite interior thresholds. The outer thresholds are implicitly ±infinity,
// so the cells cover the whole line. Exact boundary ties go to the lower cell.
struct ScalarQuantizer {
  std::vector<double> levels;
  std::vector<double> thresholds;  // size M-1, strictly increasing

  // Nearest-level quantizer: thresholds at midpoints of adjacent levels.
  static ScalarQuantizer from_levels(std::vector<double> levels);

  int num_levels() const { return static_cast<int>(levels.size()); }
  // t_i for i in [0, M]; t_0 = -inf and t_M = +inf.
  double threshold(int i) const;
  // 0-based cell index of y; the cell is (t_{i}, t_{i+1}] in threshold terms.
  int cell_of(double y) const;

  void validate() const;  // throws std::invalid_argument if malformed
};

struct QuantizedValue {
  double level;
  int index;  // 0-based cell index
};

QuantizedValue apply_scalar(const ScalarQuantizer& q, double y);

// Product of per-coordinate closed intervals in R^m; bounds may be ±infinity.
struct BoxRegion {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Eigen::Index dim() const { return lower.size(); }
  Eigen::VectorXd clip(const Eigen::VectorXd& v) const;
  bool contains(const Eigen::VectorXd& v, double tol = 0.0) const;
  // Finite width of coordinate i, or +infinity for unbounded cells.
  double width(Eigen::Index i) const { return upper[i] - lower[i]; }

  static BoxRegion whole_space(Eigen::Index m);
  static BoxRegion singleton(const Eigen::VectorXd& y);

  void validate() const;
};

// Preimage cell of a quantized measurement vector: coordinate i gets the
// threshold interval of cell yq[i].index; outermost cells get infinite bounds.
BoxRegion box_region(const ScalarQuantizer& q, std::span<const QuantizedValue> yq);
// Convenience overload: re-derives cells with apply_scalar (levels are fixed
// points, so feeding already-quantized values is safe).
BoxRegion box_region(const ScalarQuantizer& q, const Eigen::VectorXd& y);

// Zero-mean Gaussian source with standard deviation sigma.
struct GaussianSource {
  double sigma = 1.0;
};

enum class LloydInit { UniformSpread, KMeansPlusPlusLike };

struct LloydOptions {
  LloydInit init = LloydInit::UniformSpread;
  std::uint64_t seed = 0;  // KMeansPlusPlusLike only
  double tol = 1e-10;      // relative distortion decrease per iteration
  int max_iter = 500;
};

struct LloydResult {
  ScalarQuantizer quantizer;
  std::vector<double> distortion_history;  // non-increasing
  int iterations = 0;
  bool converged = false;
};

// Lloyd's alternation of midpoint thresholds and cell centroids. The sample
// overload uses cell sample means; the Gaussian overload uses the closed-form
// truncated-normal mean. UniformSpread places the initial levels at source
// quantiles spread through the Gaussian companding map (the equal-mass ramp
// fed through p ↦ Φ(√3·Φ⁻¹(p))), which seeds near the optimal point density
// and keeps every initial cell populated.
LloydResult lloyd_design(std::span<const double> samples, int m_levels, const LloydOptions& opt = {});
LloydResult lloyd_design(const GaussianSource& src, int m_levels, const LloydOptions& opt = {});

struct StepGrid {
  double delta_min = 0.0;
  double delta_max = 0.0;
  int n_grid = 0;

  // Wide bracket for a symmetric uniform quantizer with m levels on a
  // zero-mean Gaussian of deviation sigma.
  static StepGrid for_levels(int m_levels, double sigma);
};

struct UniformDesignResult {
  ScalarQuantizer quantizer;
  double step = 0.0;
  double distortion = 0.0;
};

// Optimal symmetric uniform quantizer, levels ω_i = (i - (M+1)/2)·Δ: evaluates
// the expected distortion for each Δ on the grid, then refines around the
// bracketing interval by golden-section search. Throws if the grid minimum
// sits on an endpoint (no bracket).
UniformDesignResult uniform_design(const GaussianSource& src, int m_levels, const StepGrid& grid);

// Mean squared quantization error under the source (per sample/coordinate).
double distortion(const ScalarQuantizer& q, std::span<const double> samples);
double distortion(const ScalarQuantizer& q, const GaussianSource& src);

// p_i = P(q(Y) = ω_i) for Y ~ N(0, sigma²). Sums to 1 within 1e-12.
std::vector<double> gaussian_cell_probs(const ScalarQuantizer& q, double sigma);

}  // namespace qcs
