#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "qcs/bounds.hpp"

using namespace qcs;

TEST_SUITE_BEGIN("bounds");

TEST_CASE("asymptotic constants") {
  CHECK(sq_nonuniform_const() == doctest::Approx(2.7206990463513264).epsilon(1e-15));
  CHECK(sq_uniform_const() == doctest::Approx(0.9241962407465937).epsilon(1e-15));
  // Ratio of the two constants drives the uniform/nonuniform gap per rate bit.
  CHECK(sq_uniform_const() / sq_nonuniform_const() == doctest::Approx(0.3397).epsilon(1e-3));
}

TEST_CASE("matrix-dependent scalar bounds") {
  const auto unit = sq_bounds_with_matrix(1.0, 1.0);
  CHECK(*unit.nonuniform.lower == doctest::Approx(sq_nonuniform_const()));
  CHECK(*unit.nonuniform.upper == doctest::Approx(sq_nonuniform_const()));
  CHECK(*unit.uniform.lower == doctest::Approx(sq_uniform_const()));
  CHECK_FALSE(unit.uniform.upper.has_value());

  const auto wide = sq_bounds_with_matrix(0.9, 1.3);
  CHECK(*wide.nonuniform.lower == doctest::Approx(0.9 * sq_nonuniform_const()).epsilon(1e-12));
  CHECK(*wide.nonuniform.upper == doctest::Approx(1.3 * sq_nonuniform_const()).epsilon(1e-12));

  CHECK_THROWS_AS(sq_bounds_with_matrix(1.2, 1.0), std::invalid_argument);
}

TEST_CASE("entropy-coded bounds and the optimal step rule") {
  const auto b = enc_bounds();
  CHECK(*b.lower == doctest::Approx(std::numbers::pi * std::numbers::e / 6.0).epsilon(1e-15));
  CHECK(*b.upper == doctest::Approx(std::numbers::pi * std::numbers::e / 3.0).epsilon(1e-15));

  // m = K collapses the step rule to √(2πe)·2^{-R}.
  CHECK(enc_optimal_step(4, 7, 7) ==
        doctest::Approx(std::sqrt(2.0 * std::numbers::pi * std::numbers::e) / 16.0).epsilon(1e-15));
  CHECK(enc_optimal_step(8, 128, 6) ==
        doctest::Approx(std::sqrt(2.0 * std::numbers::pi * std::numbers::e * 6.0 / 128.0) / 256.0)
            .epsilon(1e-15));
}

TEST_CASE("vector quantization bounds and the crossover") {
  const auto iso = vq_bounds(0.0, 128, 6, 1.0);
  CHECK(*iso.rip_bound.lower == doctest::Approx(1.0));
  CHECK(*iso.rip_bound.upper == doctest::Approx(1.0));

  // alpha equal to the scalar constant puts the crossover exactly at zero.
  const int k = 6;
  const int m = static_cast<int>(std::lround(sq_nonuniform_const() * k));
  const auto edge = vq_bounds(0.1, m, k, static_cast<double>(m) / (k * sq_nonuniform_const()));
  CHECK(edge.crossover_delta == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_FALSE(edge.rip_upper_smaller);

  // delta 0.2, mu2 1, alpha 2: rescaled first upper is 2.4 against 2.7207.
  const auto two = vq_bounds(0.2, 12, 6, 1.0);
  CHECK(2.0 * (1.0 + 0.2) == doctest::Approx(2.4));
  CHECK(*two.product_bound.upper == doctest::Approx(sq_nonuniform_const()));
  CHECK(two.rip_upper_smaller);
  CHECK(two.crossover_delta == doctest::Approx(sq_nonuniform_const() / 2.0 - 1.0).epsilon(1e-12));
}

TEST_CASE("reconstruction constants") {
  CHECK(c_lb(0.0) == doctest::Approx(1.0));
  CHECK(c_sp(0.1) == doctest::Approx(1.11 / 0.09).epsilon(1e-12));
  CHECK(c_bp(0.2) == doctest::Approx(4.0 / (std::sqrt(2.4) - std::sqrt(1.2))).epsilon(1e-12));

  CHECK_THROWS_AS(c_bp(0.5), std::domain_error);
  CHECK_THROWS_AS(c_sp(0.0), std::domain_error);
  CHECK_THROWS_AS(c_sp(1.0), std::domain_error);
  CHECK_THROWS_AS(c_lb(1.0), std::domain_error);
}

TEST_CASE("constant ordering and monotonicity on a delta grid") {
  for (double d = 0.01; d < 0.49; d += 0.02) {
    CHECK(c_lb(d) <= 1.0);
    CHECK(c_sp(d) >= 1.0);
    CHECK(c_lb(d) < c_bp(d));
  }
  double prev_bp = 0.0, prev_lb = 2.0;
  bool first = true;
  for (double d = 0.05; d < 0.49; d += 0.05) {
    if (!first) {
      CHECK(c_bp(d) > prev_bp);
      CHECK(c_lb(d) < prev_lb);
    }
    prev_bp = c_bp(d);
    prev_lb = c_lb(d);
    first = false;
  }
  // c_sp diverges at both endpoints of (0,1): decreasing below its interior
  // minimum near 0.37, increasing above it.
  double prev = c_sp(0.02);
  for (double d = 0.07; d < 0.36; d += 0.05) {
    CHECK(c_sp(d) < prev);
    prev = c_sp(d);
  }
  prev = c_sp(0.40);
  for (double d = 0.45; d < 0.99; d += 0.05) {
    CHECK(c_sp(d) > prev);
    prev = c_sp(d);
  }
}

TEST_CASE("composed reconstruction bounds") {
  DeltaInputs d{0.0, 0.1, 0.1, false};
  MuInputs none;
  const auto sq_sp = recon_bound_report(Scheme::SQ, Algo::Sp, d, none, 128, 6);
  CHECK(*sq_sp.lower == doctest::Approx(sq_nonuniform_const()));  // c_lb(0) = 1
  CHECK(*sq_sp.upper == doctest::Approx(c_sp(0.1) * c_sp(0.1) * sq_nonuniform_const()).epsilon(1e-12));

  MuInputs mus{1.0, 1.2};
  const auto usq = recon_bound_report(Scheme::USQ, Algo::Bp, d, mus, 128, 6);
  CHECK(*usq.lower == doctest::Approx(sq_uniform_const()));
  CHECK_FALSE(usq.upper.has_value());

  const auto enc = recon_bound_report(Scheme::ENC, Algo::Bp, d, none, 128, 6);
  CHECK(*enc.lower == doctest::Approx(std::numbers::pi * std::numbers::e / 6.0));

  DeltaInputs bad{0.0, 0.1, 0.6, false};
  CHECK_THROWS_AS(recon_bound_report(Scheme::SQ, Algo::Bp, bad, none, 128, 6), std::domain_error);

  DeltaInputs sampled{0.2, 0.3, 0.3, true};
  const auto flagged = recon_bound_report(Scheme::VQ, Algo::Sp, sampled, none, 128, 6);
  bool has_flag = false;
  for (const auto& f : flagged.flags) has_flag |= f.find("sampled") != std::string::npos;
  CHECK(has_flag);
}

TEST_CASE("reports keep lower below upper") {
  for (double dk : {0.0, 0.1, 0.3}) {
    DeltaInputs d{dk, std::max(dk, 0.05), std::max(dk, 0.05), false};
    for (auto scheme : {Scheme::SQ, Scheme::ENC, Scheme::VQ})
      for (auto algo : {Algo::Sp, Algo::Bp}) {
        const auto r = recon_bound_report(scheme, algo, d, MuInputs{}, 128, 6);
        if (r.lower && r.upper) CHECK(*r.lower <= *r.upper);
      }
  }
}

TEST_SUITE_END();
