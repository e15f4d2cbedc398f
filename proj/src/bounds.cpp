#include "qcs/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qcs {

void BoundReport::validate() const {
  if (lower && upper && !(*lower <= *upper))
    throw std::invalid_argument("bound report '" + name + "': lower exceeds upper");
}

double sq_nonuniform_const() { return std::numbers::pi * std::sqrt(3.0) / 2.0; }

double sq_uniform_const() { return 4.0 / 3.0 * std::numbers::ln2; }

SqMatrixBounds sq_bounds_with_matrix(double mu1, double mu2) {
  if (!(mu1 <= mu2)) throw std::invalid_argument("sq_bounds_with_matrix: requires mu1 <= mu2");
  if (!(mu1 >= 0.0)) throw std::invalid_argument("sq_bounds_with_matrix: mu1 must be nonnegative");
  SqMatrixBounds out;
  out.nonuniform = {"sq_nonuniform", sq_nonuniform_const() * mu1, sq_nonuniform_const() * mu2,
                    "2^{2R}/K", {}};
  out.uniform = {"sq_uniform", sq_uniform_const() * mu1, std::nullopt, "2^{2R}/(KR)",
                 {"no matrix-dependent upper bound"}};
  out.nonuniform.validate();
  return out;
}

BoundReport enc_bounds() {
  const double e = std::numbers::e;
  BoundReport r{"entropy_coded", std::numbers::pi * e / 6.0, std::numbers::pi * e / 3.0,
                "2^{2R}/K", {}};
  r.validate();
  return r;
}

double enc_optimal_step(int rate, int m, int k) {
  if (rate < 1 || m < 1 || k < 1) throw std::invalid_argument("enc_optimal_step: bad arguments");
  return std::sqrt(2.0 * std::numbers::pi * std::numbers::e * k / static_cast<double>(m)) *
         std::ldexp(1.0, -rate);
}

VqBounds vq_bounds(double delta_k, int m, int k, double mu2) {
  if (!(delta_k >= 0.0 && delta_k < 1.0)) throw std::domain_error("vq_bounds: requires 0 <= delta_K < 1");
  if (m < 1 || k < 1 || k > m) throw std::invalid_argument("vq_bounds: requires 1 <= K <= m");
  VqBounds out;
  out.rip_bound = {"vq_rip",
                   1.0 - delta_k,
                   1.0 + delta_k,
                   "lower: 2^{2Rm/K}/K; upper: 2^{2R}/m",
                   {"asymptotic"}};
  out.product_bound = {"vq_scalar_product", std::nullopt, sq_nonuniform_const() * mu2, "2^{2R}/K",
                       {}};
  const double alpha = static_cast<double>(m) / static_cast<double>(k);
  out.crossover_delta = sq_nonuniform_const() / alpha * mu2 - 1.0;
  out.rip_upper_smaller = delta_k < out.crossover_delta;
  out.rip_bound.validate();
  return out;
}

double c_bp(double delta_4k) {
  if (!(delta_4k >= 0.0 && delta_4k < 0.5))
    throw std::domain_error("c_bp: requires 0 <= delta_4K < 1/2 (positive denominator)");
  return 4.0 / (std::sqrt(3.0 - 3.0 * delta_4k) - std::sqrt(1.0 + delta_4k));
}

double c_sp(double delta_3k) {
  if (!(delta_3k > 0.0 && delta_3k < 1.0))
    throw std::domain_error("c_sp: requires 0 < delta_3K < 1");
  return (1.0 + delta_3k + delta_3k * delta_3k) / (delta_3k * (1.0 - delta_3k));
}

double c_lb(double delta_k) {
  if (!(delta_k >= 0.0 && delta_k < 1.0))
    throw std::domain_error("c_lb: requires 0 <= delta_K < 1");
  return std::sqrt(1.0 - delta_k) / (1.0 + delta_k);
}

BoundReport recon_bound_report(Scheme scheme, Algo algo, const DeltaInputs& deltas,
                               const MuInputs& mus, int m, int k) {
  const double clb2 = c_lb(deltas.delta_k) * c_lb(deltas.delta_k);
  const double calgo = (algo == Algo::Sp) ? c_sp(deltas.delta_3k) : c_bp(deltas.delta_4k);
  const double calgo2 = calgo * calgo;
  const double m1 = mus.mu1.value_or(1.0);
  const double m2 = mus.mu2.value_or(1.0);

  BoundReport r;
  r.name = "recon_" + to_string(scheme) + "_" + to_string(algo);
  switch (scheme) {
    case Scheme::SQ:
      r.lower = clb2 * sq_nonuniform_const() * m1;
      r.upper = calgo2 * sq_nonuniform_const() * m2;
      r.normalization = "2^{2R}/K";
      break;
    case Scheme::USQ:
      r.lower = clb2 * sq_uniform_const() * m1;
      r.normalization = "2^{2R}/(KR)";
      if (mus.mu1 || mus.mu2) {
        r.flags.push_back("no matrix-dependent upper bound");
      } else {
        r.upper = calgo2 * sq_uniform_const();
        r.flags.push_back("upper bound valid under the scaled i.i.d. ensemble only");
      }
      break;
    case Scheme::ENC:
      r.lower = clb2 * std::numbers::pi * std::numbers::e / 6.0;
      r.upper = calgo2 * std::numbers::pi * std::numbers::e / 3.0;
      r.normalization = "2^{2R}/K";
      break;
    case Scheme::VQ: {
      const auto vq = vq_bounds(deltas.delta_k, m, k, m2);
      r.lower = clb2 * *vq.rip_bound.lower;
      r.upper = calgo2 * *vq.rip_bound.upper;
      r.normalization = vq.rip_bound.normalization;
      r.flags.push_back("asymptotic");
      break;
    }
  }
  if (deltas.sampled) r.flags.push_back("sampled delta: upper bounds unverified");
  r.validate();
  return r;
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::SQ: return "sq";
    case Scheme::USQ: return "usq";
    case Scheme::ENC: return "enc";
    case Scheme::VQ: return "vq";
  }
  return "?";
}

std::string to_string(Algo a) { return a == Algo::Sp ? "sp" : "bp"; }

}  // namespace qcs
