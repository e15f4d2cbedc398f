#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "qcs/bench.hpp"
#include "qcs/bounds.hpp"
#include "qcs/projection.hpp"
#include "qcs/model.hpp"
#include "qcs/pursuit.hpp"
#include "qcs/quantizer.hpp"
#include "qcs/rng.hpp"

using namespace qcs;

TEST_SUITE_BEGIN("pursuit");

TEST_CASE("zero measurements give the zero signal") {
  const auto phi = gen_gaussian_matrix(16, 32, 51, MatrixMode::ColumnNormalized);
  const auto r = sp_reconstruct(phi.entries, Eigen::VectorXd::Zero(16), 3);
  CHECK(r.estimate.values.norm() == 0.0);
  CHECK(r.converged);
}

TEST_CASE("orthonormal matrix decouples the coordinates") {
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(8, 8);
  Eigen::VectorXd y(8);
  y << 0.1, -3.0, 0.2, 2.0, -0.5, 0.0, 1.0, -0.05;
  const auto r = sp_reconstruct(id, y, 3);
  // Expect exactly the 3 largest magnitudes of y.
  CHECK(r.estimate.support == std::vector<Eigen::Index>{1, 3, 6});
  CHECK(r.estimate.values[1] == doctest::Approx(-3.0));
  CHECK(r.estimate.values[3] == doctest::Approx(2.0));
  CHECK(r.estimate.values[6] == doctest::Approx(1.0));
}

TEST_CASE("exact recovery on the standard instance") {
  const auto phi = gen_gaussian_matrix(128, 256, 52, MatrixMode::ColumnNormalized);
  const auto x = gen_sparse_signal(256, 6, 53);
  const Eigen::VectorXd y = phi.entries * x.values;
  const auto r = sp_reconstruct(phi.entries, y, 6);
  CHECK(r.estimate.support == x.support);
  CHECK((r.estimate.values - x.values).norm() < 1e-8);
  CHECK(r.converged);
}

TEST_CASE("trace residuals decrease until the quit test") {
  const auto phi = gen_gaussian_matrix(64, 128, 54, MatrixMode::ColumnNormalized);
  const auto x = gen_sparse_signal(128, 10, 55);
  const Eigen::VectorXd y = phi.entries * x.values;
  const auto r = sp_reconstruct(phi.entries, y, 10);
  REQUIRE(!r.trace.empty());
  for (std::size_t i = 1; i < r.trace.size(); ++i)
    CHECK(r.trace[i].residual_norm <= r.trace[i - 1].residual_norm + 1e-12);
  for (const auto& entry : r.trace) CHECK(entry.support.size() == 10);
}

TEST_CASE("support always has exactly K sorted indices") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto phi = gen_gaussian_matrix(32, 64, 60 + seed, MatrixMode::ColumnNormalized);
    const auto x = gen_sparse_signal(64, 5, 70 + seed);
    const Eigen::VectorXd y = phi.entries * x.values;
    const auto r = sp_reconstruct(phi.entries, y, 5);
    CHECK(r.estimate.support.size() == 5);
    CHECK(std::is_sorted(r.estimate.support.begin(), r.estimate.support.end()));
  }
}

TEST_CASE("qsp with a singleton box reduces to sp") {
  const auto phi = gen_gaussian_matrix(32, 64, 80, MatrixMode::ColumnNormalized);
  const auto x = gen_sparse_signal(64, 4, 81);
  const Eigen::VectorXd y = phi.entries * x.values;
  const auto sp = sp_reconstruct(phi.entries, y, 4);
  const auto qsp = qsp_reconstruct(phi.entries, BoxRegion::singleton(y), y, 4);
  CHECK(qsp.estimate.support == sp.estimate.support);
  CHECK((qsp.estimate.values - sp.estimate.values).norm() < 1e-8);
}

TEST_CASE("qsp beats sp on coarsely quantized measurements") {
  // 200 paired trials at 6 bits; the cell-aware residue should cut the mean
  // squared reconstruction error at least in half.
  const int trials = 200;
  double mse_sp = 0.0, mse_qsp = 0.0;
  const auto bank = lloyd_design(GaussianSource{std::sqrt(6.0 / 128.0)}, 64);
  for (int t = 0; t < trials; ++t) {
    const auto phi = gen_gaussian_matrix(128, 256, CounterRng::derive_key(900, static_cast<std::uint64_t>(t)),
                                         MatrixMode::ColumnNormalized);
    const auto x = gen_sparse_signal(256, 6, CounterRng::derive_key(901, static_cast<std::uint64_t>(t)));
    const Eigen::VectorXd y = phi.entries * x.values;
    Eigen::VectorXd y_hat(128);
    for (int i = 0; i < 128; ++i) y_hat[i] = apply_scalar(bank.quantizer, y[i]).level;
    const auto box = box_region(bank.quantizer, y_hat);
    const auto sp = sp_reconstruct(phi.entries, y_hat, 6);
    const auto qsp = qsp_reconstruct(phi.entries, box, y_hat, 6);
    mse_sp += (sp.estimate.values - x.values).squaredNorm();
    mse_qsp += (qsp.estimate.values - x.values).squaredNorm();
  }
  CHECK(mse_qsp < 0.5 * mse_sp);
}

TEST_CASE("qsp converges to sp as the quantizer gets fine") {
  // With the cell shrinking, the cell-aware operators reduce to the point
  // operators: output differences fall with the rate and essentially vanish
  // at 16 bits (the quantization error norm itself is ~1e-3 at 12 bits, so
  // the disagreement threshold is only meaningful past that).
  const double sigma = std::sqrt(6.0 / 128.0);
  const int trials = 40;
  double prev_mean_diff = std::numeric_limits<double>::infinity();
  for (int rate : {8, 12, 16}) {
    std::vector<double> grid(static_cast<std::size_t>(1) << rate);
    const double span = 12.0 * sigma;
    for (std::size_t i = 0; i < grid.size(); ++i)
      grid[i] = -span / 2.0 + span * (static_cast<double>(i) + 0.5) / static_cast<double>(grid.size());
    const auto q = ScalarQuantizer::from_levels(std::move(grid));
    double total_diff = 0.0;
    int agree = 0;
    for (int t = 0; t < trials; ++t) {
      const auto phi = gen_gaussian_matrix(128, 256, CounterRng::derive_key(910, static_cast<std::uint64_t>(t)),
                                           MatrixMode::ColumnNormalized);
      const auto x = gen_sparse_signal(256, 6, CounterRng::derive_key(911, static_cast<std::uint64_t>(t)));
      const Eigen::VectorXd y = phi.entries * x.values;
      Eigen::VectorXd y_hat(128);
      for (int i = 0; i < 128; ++i) y_hat[i] = apply_scalar(q, y[i]).level;
      const auto box = box_region(q, y_hat);
      const auto sp = sp_reconstruct(phi.entries, y_hat, 6);
      const auto qsp = qsp_reconstruct(phi.entries, box, y_hat, 6);
      const double diff = (qsp.estimate.values - sp.estimate.values).norm();
      total_diff += diff;
      if (diff < 1e-3) ++agree;
    }
    const double mean_diff = total_diff / trials;
    CHECK(mean_diff < prev_mean_diff);
    prev_mean_diff = mean_diff;
    if (rate == 16) CHECK(agree >= trials * 95 / 100);
  }
}

TEST_CASE("oracle-support error sandwich under span-aligned measurement noise") {
  // With the support known and the measurement error inside span(Φ_T), the
  // least-squares refit error obeys ‖x̂−x‖² ≥ (√(1−δ_K)/(1+δ_K))²·‖ŷ−y‖²
  // with the exact restricted-isometry constant. (Error components orthogonal
  // to the span are annihilated by the refit, so the inequality is specific
  // to this regime.)
  const int m = 12, n = 16, k = 2;
  const auto phi = gen_gaussian_matrix(m, n, 3100, MatrixMode::ColumnNormalized);
  const auto rip = rip_delta(phi.entries, k, RipExact{});
  const double c = c_lb(rip.delta);
  CounterRng rng(3101);
  for (int t = 0; t < 50; ++t) {
    const auto x = gen_sparse_signal(n, k, CounterRng::derive_key(3102, static_cast<std::uint64_t>(t)));
    Eigen::MatrixXd cols(m, k);
    for (int i = 0; i < k; ++i) cols.col(i) = phi.entries.col(x.support[static_cast<std::size_t>(i)]);
    const Eigen::VectorXd y = phi.entries * x.values;
    Eigen::VectorXd g(k);
    for (int i = 0; i < k; ++i) g[i] = rng.next_gaussian();
    Eigen::VectorXd e = cols * g;
    e *= 0.01 / e.norm();
    const Eigen::VectorXd coeffs = pcoeff(y + e, cols);
    Eigen::VectorXd x_true(k);
    for (int i = 0; i < k; ++i) x_true[i] = x.values[x.support[static_cast<std::size_t>(i)]];
    CHECK((coeffs - x_true).squaredNorm() >= c * c * e.squaredNorm() * (1.0 - 1e-9));
  }
}

TEST_CASE("reconstruction error basics") {
  Eigen::VectorXd x(3);
  x << 1, 2, 3;
  CHECK(reconstruction_error(x, x) == 0.0);
  CHECK(reconstruction_error(x, Eigen::VectorXd::Zero(3)) == doctest::Approx(14.0));
  Eigen::VectorXd off = x;
  off[1] += 1.0;
  CHECK(reconstruction_error(x, off) == doctest::Approx(1.0));
}

TEST_CASE("bad arguments are rejected") {
  const auto phi = gen_gaussian_matrix(8, 16, 99, MatrixMode::ColumnNormalized);
  CHECK_THROWS_AS(sp_reconstruct(phi.entries, Eigen::VectorXd::Zero(8), 0), std::invalid_argument);
  CHECK_THROWS_AS(sp_reconstruct(phi.entries, Eigen::VectorXd::Zero(7), 2), std::invalid_argument);
}

TEST_SUITE_END();
