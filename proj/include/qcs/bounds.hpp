#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qcs {

// One distortion bound together with the rate normalization that makes it a
// dimensionless constant.
struct BoundReport {
  std::string name;
  std::optional<double> lower;
  std::optional<double> upper;
  std::string normalization;
  std::vector<std::string> flags;

  void validate() const;  // lower <= upper when both present
};

// Asymptotic constants for scalar quantization of the (Gaussian-limit)
// measurement coordinates.
double sq_nonuniform_const();  // π√3/2
double sq_uniform_const();     // (4/3)·ln 2

struct SqMatrixBounds {
  BoundReport nonuniform;  // (π√3/2)μ₁ .. (π√3/2)μ₂
  BoundReport uniform;     // (4 ln2/3)μ₁ .. (no matrix-dependent upper bound)
};
SqMatrixBounds sq_bounds_with_matrix(double mu1, double mu2);

// Entropy-coded uniform quantization: [πe/6, πe/3] and the optimal step rule
// Δ = √(2πeK/m)·2^{−R}.
BoundReport enc_bounds();
double enc_optimal_step(int rate, int m, int k);

struct VqBounds {
  BoundReport rip_bound;      // (1−δ_K) .. (1+δ_K), mixed normalizations
  BoundReport product_bound;  // .. (π√3/2)·μ₂ via the scalar-product codebook
  double crossover_delta;     // the RIP upper bound is smaller iff δ_K < this
  bool rip_upper_smaller;
};
VqBounds vq_bounds(double delta_k, int m, int k, double mu2);

// Reconstruction-error constants; each throws std::domain_error outside its
// domain, naming the failed inequality.
double c_bp(double delta_4k);  // 4 / (√(3−3δ) − √(1+δ)),  δ < 1/2
double c_sp(double delta_3k);  // (1+δ+δ²) / (δ(1−δ)),      δ ∈ (0,1)
double c_lb(double delta_k);   // √(1−δ) / (1+δ),           δ ∈ [0,1)

enum class Scheme { SQ, USQ, ENC, VQ };
enum class Algo { Sp, Bp };

struct DeltaInputs {
  double delta_k = 0.0;
  double delta_3k = 0.0;
  double delta_4k = 0.0;
  bool sampled = false;  // deltas came from sampled supports (lower bounds)
};

struct MuInputs {
  std::optional<double> mu1;
  std::optional<double> mu2;
};

// Chains c_lb² (lower) and c_sp²/c_bp² (upper) with the scheme's measurement
// constants into one reconstruction-distortion bound.
BoundReport recon_bound_report(Scheme scheme, Algo algo, const DeltaInputs& deltas,
                               const MuInputs& mus, int m, int k);

std::string to_string(Scheme s);
std::string to_string(Algo a);

}  // namespace qcs
