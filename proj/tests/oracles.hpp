// Test-only oracles, kept independent of the library's computation paths:
// quadrature instead of closed forms, analytic eigenvalues instead of a
// solver, Cramer elimination instead of QR, exhaustive search instead of the
// greedy code construction.
#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

inline double gauss_pdf(double x, double sigma) {
  return std::exp(-0.5 * x * x / (sigma * sigma)) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

// E[(Y - q(Y))^2] for Y ~ N(0, sigma^2) by quadrature over [-12σ, 12σ] split
// at every threshold, given levels and finite interior thresholds.
inline double quantizer_distortion(const std::vector<double>& levels,
                                   const std::vector<double>& thresholds, double sigma) {
  const double lo = -12.0 * sigma;
  const double hi = 12.0 * sigma;
  double total = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double a = std::max(lo, i == 0 ? lo : thresholds[i - 1]);
    const double b = std::min(hi, i + 1 == levels.size() ? hi : thresholds[i]);
    if (b <= a) continue;
    const double w = levels[i];
    total += simpson([&](double y) { return (y - w) * (y - w) * gauss_pdf(y, sigma); }, a, b);
  }
  return total;
}

// P(a < Z <= b) for the standard normal by quadrature (bounds clamped to ±12).
inline double normal_prob(double a, double b) {
  a = std::max(a, -12.0);
  b = std::min(b, 12.0);
  if (b <= a) return 0.0;
  return simpson([](double y) { return gauss_pdf(y, 1.0); }, a, b, 4000);
}

// Eigenvalues of a symmetric k x k matrix for k <= 3, closed form.
inline std::vector<double> sym_eigenvalues(const Eigen::MatrixXd& g) {
  const auto k = g.rows();
  if (k == 1) return {g(0, 0)};
  if (k == 2) {
    const double tr = g(0, 0) + g(1, 1);
    const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    return {tr / 2.0 - disc, tr / 2.0 + disc};
  }
  if (k == 3) {
    // Trigonometric solution of the characteristic cubic.
    const double q = g.trace() / 3.0;
    Eigen::MatrixXd b = g - q * Eigen::MatrixXd::Identity(3, 3);
    const double p2 = b.squaredNorm() / 6.0;
    const double p = std::sqrt(p2);
    if (p < 1e-300) return {q, q, q};
    const double detb = b.determinant() / (p * p * p);
    const double r = std::clamp(detb / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    const double e2 = 3.0 * q - e1 - e3;
    std::vector<double> out{e1, e2, e3};
    std::sort(out.begin(), out.end());
    return out;
  }
  throw std::invalid_argument("sym_eigenvalues: k must be at most 3");
}

// Least-squares coefficients for up to two columns by Cramer elimination.
inline Eigen::VectorXd cramer_lsq(const Eigen::MatrixXd& cols, const Eigen::VectorXd& y) {
  const auto k = cols.cols();
  Eigen::VectorXd x(k);
  if (k == 1) {
    x[0] = cols.col(0).dot(y) / cols.col(0).squaredNorm();
    return x;
  }
  if (k == 2) {
    const double a = cols.col(0).squaredNorm();
    const double b = cols.col(0).dot(cols.col(1));
    const double d = cols.col(1).squaredNorm();
    const double r0 = cols.col(0).dot(y);
    const double r1 = cols.col(1).dot(y);
    const double det = a * d - b * b;
    x[0] = (d * r0 - b * r1) / det;
    x[1] = (a * r1 - b * r0) / det;
    return x;
  }
  throw std::invalid_argument("cramer_lsq: at most two columns");
}

struct BoxOracleResult {
  Eigen::VectorXd y;
  double dist = 0.0;
};

// Solves n x n symmetric systems for n <= 3 by Cramer determinants with a
// tiny ridge, so flat directions resolve to a valid solution-set point.
inline Eigen::VectorXd ridge_solve_small(Eigen::MatrixXd h, const Eigen::VectorXd& b) {
  const auto n = h.rows();
  const double ridge = 1e-12 * (1.0 + h.trace());
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) += ridge;
  Eigen::VectorXd x(n);
  if (n == 1) {
    x[0] = b[0] / h(0, 0);
    return x;
  }
  if (n == 2) {
    const double det = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
    x[0] = (b[0] * h(1, 1) - h(0, 1) * b[1]) / det;
    x[1] = (h(0, 0) * b[1] - b[0] * h(1, 0)) / det;
    return x;
  }
  if (n == 3) {
    auto det3 = [](const Eigen::MatrixXd& a) {
      return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
             a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
             a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    };
    const double det = det3(h);
    for (Eigen::Index c = 0; c < 3; ++c) {
      Eigen::MatrixXd hc = h;
      hc.col(c) = b;
      x[c] = det3(hc) / det;
    }
    return x;
  }
  throw std::invalid_argument("ridge_solve_small: n must be at most 3");
}

// Exact evaluation of the best box-consistent approximation for m <= 3 and
// up to two columns. Squared distance to the span is a quadratic in y, flat
// exactly along span directions, so:
//   stage 1 enumerates the 3^m box faces and minimizes the quadratic on each
//     face in closed form (difference interpolation + Cramer), giving the
//     minimal distance and one minimizer y0;
//   stage 2 notes that the whole minimizer set is box ∩ (y0 + span) and picks
//     its point nearest y_hat by enumerating the KKT candidates of that
//     low-dimensional quadratic program.
inline BoxOracleResult box_projection_oracle(const Eigen::MatrixXd& cols,
                                             const Eigen::VectorXd& lower,
                                             const Eigen::VectorXd& upper,
                                             const Eigen::VectorXd& y_hat) {
  const auto m = cols.rows();
  const auto k = cols.cols();
  if (m > 3 || k > 2) throw std::invalid_argument("box_projection_oracle: m <= 3 and k <= 2");
  auto dist2 = [&](const Eigen::VectorXd& y) {
    const Eigen::VectorXd r = y - cols * cramer_lsq(cols, y);
    return r.squaredNorm();
  };
  const double feas_tol = 1e-9 * (1.0 + lower.norm() + upper.norm());

  // Stage 1: face enumeration.
  double best_d2 = std::numeric_limits<double>::infinity();
  Eigen::VectorXd y0 = (lower + upper) / 2.0;
  std::vector<int> digits(static_cast<std::size_t>(m), 0);  // 0 free, 1 lower, 2 upper
  while (true) {
    std::vector<Eigen::Index> free_idx;
    Eigen::VectorXd base = Eigen::VectorXd::Zero(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const int d = digits[static_cast<std::size_t>(i)];
      if (d == 0)
        free_idx.push_back(i);
      else
        base[i] = (d == 1) ? lower[i] : upper[i];
    }
    const auto nf = static_cast<Eigen::Index>(free_idx.size());
    Eigen::VectorXd candidate = base;
    if (nf > 0) {
      // Recover the quadratic q(t) = dist2(base + Σ t_i e_{free_i}) from
      // exact difference interpolation, then minimize it.
      auto eval = [&](const Eigen::VectorXd& t) {
        Eigen::VectorXd y = base;
        for (Eigen::Index i = 0; i < nf; ++i) y[free_idx[static_cast<std::size_t>(i)]] += t[i];
        return dist2(y);
      };
      const double q0 = eval(Eigen::VectorXd::Zero(nf));
      Eigen::MatrixXd hess(nf, nf);
      Eigen::VectorXd grad(nf);
      for (Eigen::Index i = 0; i < nf; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(nf);
        e[i] = 1.0;
        const double qp = eval(e);
        const double qm = eval(-e);
        hess(i, i) = qp + qm - 2.0 * q0;
        grad[i] = 0.5 * (qp - qm);
      }
      for (Eigen::Index i = 0; i < nf; ++i)
        for (Eigen::Index j = i + 1; j < nf; ++j) {
          Eigen::VectorXd e = Eigen::VectorXd::Zero(nf);
          e[i] = 1.0;
          e[j] = 1.0;
          const double qij = eval(e);
          Eigen::VectorXd ei = Eigen::VectorXd::Zero(nf), ej = Eigen::VectorXd::Zero(nf);
          ei[i] = 1.0;
          ej[j] = 1.0;
          hess(i, j) = hess(j, i) = qij - eval(ei) - eval(ej) + q0;
        }
      const Eigen::VectorXd t = ridge_solve_small(hess, -grad);
      bool feasible = true;
      for (Eigen::Index i = 0; i < nf; ++i) {
        const Eigen::Index c = free_idx[static_cast<std::size_t>(i)];
        candidate[c] = base[c] + t[i];
        feasible &= candidate[c] >= lower[c] - feas_tol && candidate[c] <= upper[c] + feas_tol;
        candidate[c] = std::clamp(candidate[c], lower[c], upper[c]);
      }
      if (!feasible) candidate = Eigen::VectorXd();  // covered by a sub-face
    }
    if (candidate.size() == m) {
      const double d2 = dist2(candidate);
      if (d2 < best_d2) {
        best_d2 = d2;
        y0 = candidate;
      }
    }
    Eigen::Index pos = 0;
    while (pos < m) {
      if (++digits[static_cast<std::size_t>(pos)] < 3) break;
      digits[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == m) break;
  }

  // Stage 2: minimize ‖y0 + cols·x − y_hat‖ subject to y0 + cols·x in the box.
  const Eigen::VectorXd r = y_hat - y0;
  Eigen::VectorXd best_x = Eigen::VectorXd::Zero(k);
  auto x_feasible = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd y = y0 + cols * x;
    for (Eigen::Index i = 0; i < m; ++i)
      if (y[i] < lower[i] - feas_tol || y[i] > upper[i] + feas_tol) return false;
    return true;
  };
  if (k == 1) {
    double xlo = -std::numeric_limits<double>::infinity();
    double xhi = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double a = cols(i, 0);
      if (std::abs(a) < 1e-14) continue;
      const double t1 = (lower[i] - y0[i]) / a;
      const double t2 = (upper[i] - y0[i]) / a;
      xlo = std::max(xlo, std::min(t1, t2));
      xhi = std::min(xhi, std::max(t1, t2));
    }
    const double xu = cols.col(0).dot(r) / cols.col(0).squaredNorm();
    best_x[0] = std::clamp(xu, xlo, xhi);
  } else {
    // KKT enumeration over the 2m halfspace constraints g·x <= c.
    const double g00 = cols.col(0).squaredNorm();
    const double g01 = cols.col(0).dot(cols.col(1));
    const double g11 = cols.col(1).squaredNorm();
    const double gdet = g00 * g11 - g01 * g01;
    auto ginv_apply = [&](const Eigen::Vector2d& v) {
      return Eigen::Vector2d((g11 * v[0] - g01 * v[1]) / gdet, (g00 * v[1] - g01 * v[0]) / gdet);
    };
    const Eigen::Vector2d xu = ginv_apply(Eigen::Vector2d(cols.col(0).dot(r), cols.col(1).dot(r)));
    std::vector<std::pair<Eigen::Vector2d, double>> cons;  // g·x <= c
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::Vector2d a(cols(i, 0), cols(i, 1));
      if (a.norm() < 1e-14) continue;
      cons.emplace_back(a, upper[i] - y0[i]);
      cons.emplace_back(-a, y0[i] - lower[i]);
    }
    std::vector<Eigen::Vector2d> candidates{xu, Eigen::Vector2d::Zero()};
    for (const auto& [g, c] : cons) {
      const Eigen::Vector2d gig = ginv_apply(g);
      const double denom = g.dot(gig);
      if (std::abs(denom) < 1e-14) continue;
      candidates.push_back(xu + ((c - g.dot(xu)) / denom) * gig);
    }
    for (std::size_t i = 0; i < cons.size(); ++i)
      for (std::size_t j = i + 1; j < cons.size(); ++j) {
        const auto& [g1, c1] = cons[i];
        const auto& [g2, c2] = cons[j];
        const double det = g1[0] * g2[1] - g1[1] * g2[0];
        if (std::abs(det) < 1e-12) continue;
        candidates.emplace_back((c1 * g2[1] - g1[1] * c2) / det, (g1[0] * c2 - c1 * g2[0]) / det);
      }
    double best_obj = std::numeric_limits<double>::infinity();
    for (const auto& cand : candidates) {
      Eigen::VectorXd x(2);
      x << cand[0], cand[1];
      if (!x_feasible(x)) continue;
      const double obj = (cols * x - r).squaredNorm();
      if (obj < best_obj) {
        best_obj = obj;
        best_x = x;
      }
    }
  }
  Eigen::VectorXd y_tie = y0 + cols * best_x;
  for (Eigen::Index i = 0; i < m; ++i) y_tie[i] = std::clamp(y_tie[i], lower[i], upper[i]);
  return {y_tie, std::sqrt(dist2(y_tie))};
}

// Minimal expected length over all prefix codes (Kraft-feasible length
// vectors with lengths in [1, M-1]), for small alphabets.
inline double best_prefix_expected_length(const std::vector<double>& probs) {
  const int m = static_cast<int>(probs.size());
  if (m == 1) return 1.0;
  const int max_len = m - 1;
  std::vector<int> lengths(static_cast<std::size_t>(m), 1);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    double kraft = 0.0;
    for (int l : lengths) kraft += std::ldexp(1.0, -l);
    if (kraft <= 1.0 + 1e-12) {
      double el = 0.0;
      for (int i = 0; i < m; ++i) el += probs[static_cast<std::size_t>(i)] * lengths[static_cast<std::size_t>(i)];
      best = std::min(best, el);
    }
    int pos = 0;
    while (pos < m) {
      if (++lengths[static_cast<std::size_t>(pos)] <= max_len) break;
      lengths[static_cast<std::size_t>(pos)] = 1;
      ++pos;
    }
    if (pos == m) break;
  }
  return best;
}

}  // namespace oracle
