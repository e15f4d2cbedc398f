#include "qcs/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qcs/rng.hpp"
#include "qcs/stats.hpp"

namespace qcs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ScalarQuantizer ScalarQuantizer::from_levels(std::vector<double> levels) {
  ScalarQuantizer q;
  q.levels = std::move(levels);
  q.thresholds.resize(q.levels.empty() ? 0 : q.levels.size() - 1);
  for (std::size_t i = 0; i + 1 < q.levels.size(); ++i)
    q.thresholds[i] = 0.5 * (q.levels[i] + q.levels[i + 1]);
  q.validate();
  return q;
}

double ScalarQuantizer::threshold(int i) const {
  if (i <= 0) return -kInf;
  if (i >= num_levels()) return kInf;
  return thresholds[static_cast<std::size_t>(i - 1)];
}

int ScalarQuantizer::cell_of(double y) const {
  // Number of interior thresholds strictly below y; boundary ties stay low.
  const auto it = std::lower_bound(thresholds.begin(), thresholds.end(), y);
  return static_cast<int>(it - thresholds.begin());
}

void ScalarQuantizer::validate() const {
  if (levels.empty()) throw std::invalid_argument("quantizer: no levels");
  for (std::size_t i = 0; i + 1 < levels.size(); ++i)
    if (!(levels[i] < levels[i + 1])) throw std::invalid_argument("quantizer: levels not strictly increasing");
  if (thresholds.size() + 1 != levels.size())
    throw std::invalid_argument("quantizer: need M-1 thresholds");
  for (std::size_t i = 0; i + 1 < thresholds.size(); ++i)
    if (!(thresholds[i] < thresholds[i + 1]))
      throw std::invalid_argument("quantizer: thresholds not strictly increasing");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double lo = (i == 0) ? -kInf : thresholds[i - 1];
    const double hi = (i + 1 == levels.size()) ? kInf : thresholds[i];
    if (levels[i] < lo || levels[i] > hi)
      throw std::invalid_argument("quantizer: level outside its cell");
  }
  for (double v : levels)
    if (!std::isfinite(v)) throw std::invalid_argument("quantizer: non-finite level");
  for (double v : thresholds)
    if (!std::isfinite(v)) throw std::invalid_argument("quantizer: non-finite interior threshold");
}

QuantizedValue apply_scalar(const ScalarQuantizer& q, double y) {
  const int i = q.cell_of(y);
  return {q.levels[static_cast<std::size_t>(i)], i};
}

Eigen::VectorXd BoxRegion::clip(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = std::min(std::max(v[i], lower[i]), upper[i]);
  return out;
}

bool BoxRegion::contains(const Eigen::VectorXd& v, double tol) const {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v[i] < lower[i] - tol || v[i] > upper[i] + tol) return false;
  return true;
}

BoxRegion BoxRegion::whole_space(Eigen::Index m) {
  BoxRegion b;
  b.lower = Eigen::VectorXd::Constant(m, -kInf);
  b.upper = Eigen::VectorXd::Constant(m, kInf);
  return b;
}

BoxRegion BoxRegion::singleton(const Eigen::VectorXd& y) {
  BoxRegion b;
  b.lower = y;
  b.upper = y;
  return b;
}

void BoxRegion::validate() const {
  if (lower.size() != upper.size()) throw std::invalid_argument("box: bound size mismatch");
  for (Eigen::Index i = 0; i < lower.size(); ++i)
    if (!(lower[i] <= upper[i])) throw std::invalid_argument("box: lower > upper");
}

BoxRegion box_region(const ScalarQuantizer& q, std::span<const QuantizedValue> yq) {
  BoxRegion b;
  const auto m = static_cast<Eigen::Index>(yq.size());
  b.lower.resize(m);
  b.upper.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const int c = yq[static_cast<std::size_t>(i)].index;
    if (c < 0 || c >= q.num_levels()) throw std::invalid_argument("box_region: cell index out of range");
    b.lower[i] = q.threshold(c);
    b.upper[i] = q.threshold(c + 1);
  }
  return b;
}

BoxRegion box_region(const ScalarQuantizer& q, const Eigen::VectorXd& y) {
  std::vector<QuantizedValue> yq(static_cast<std::size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) yq[static_cast<std::size_t>(i)] = apply_scalar(q, y[i]);
  return box_region(q, yq);
}

// ---------------------------------------------------------------------------
// Lloyd design on empirical samples. Works on the sorted sample array with
// prefix sums, so each iteration costs O(M log n).

namespace {

struct SortedSamples {
  std::vector<double> x;    // sorted
  std::vector<double> ps;   // prefix sums of x
  std::vector<double> pss;  // prefix sums of x^2

  explicit SortedSamples(std::span<const double> samples) {
    x.assign(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    ps.resize(x.size() + 1, 0.0);
    pss.resize(x.size() + 1, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      ps[i + 1] = ps[i] + x[i];
      pss[i + 1] = pss[i] + x[i] * x[i];
    }
  }

  std::size_t size() const { return x.size(); }

  std::size_t count_distinct() const {
    std::size_t d = x.empty() ? 0 : 1;
    for (std::size_t i = 1; i < x.size(); ++i)
      if (x[i] != x[i - 1]) ++d;
    return d;
  }
};

// Cell end offsets for the partition induced by the levels' midpoints:
// cell i holds samples in (t_{i-1}, t_i].
std::vector<std::size_t> cell_bounds(const SortedSamples& s, const std::vector<double>& levels) {
  const std::size_t m = levels.size();
  std::vector<std::size_t> b(m + 1);
  b[0] = 0;
  b[m] = s.size();
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double t = 0.5 * (levels[i] + levels[i + 1]);
    b[i + 1] = static_cast<std::size_t>(
        std::upper_bound(s.x.begin(), s.x.end(), t) - s.x.begin());
  }
  return b;
}

double partition_distortion(const SortedSamples& s, const std::vector<double>& levels,
                            const std::vector<std::size_t>& b) {
  double total = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double cnt = static_cast<double>(b[i + 1] - b[i]);
    if (cnt == 0.0) continue;
    const double sum = s.ps[b[i + 1]] - s.ps[b[i]];
    const double sqsum = s.pss[b[i + 1]] - s.pss[b[i]];
    total += sqsum - 2.0 * levels[i] * sum + cnt * levels[i] * levels[i];
  }
  return total / static_cast<double>(s.size());
}

// Moves levels of empty cells into the most populous cell. Restores the
// strict ordering afterwards. Returns the number of repairs performed.
int repair_empty_cells(const SortedSamples& s, std::vector<double>& levels,
                       std::vector<std::size_t>& b) {
  int repairs = 0;
  for (int round = 0; round < static_cast<int>(levels.size()); ++round) {
    int empty = -1;
    for (std::size_t i = 0; i < levels.size(); ++i)
      if (b[i + 1] == b[i]) {
        empty = static_cast<int>(i);
        break;
      }
    if (empty < 0) return repairs;
    std::size_t donor = 0;
    std::size_t best = 0;
    for (std::size_t i = 0; i < levels.size(); ++i)
      if (b[i + 1] - b[i] > best) {
        best = b[i + 1] - b[i];
        donor = i;
      }
    const double lo = s.x[b[donor]];
    const double hi = s.x[b[donor + 1] - 1];
    double candidate = 0.5 * (lo + hi);
    if (std::find(levels.begin(), levels.end(), candidate) != levels.end())
      candidate = 0.5 * (lo + candidate);
    levels[static_cast<std::size_t>(empty)] = candidate;
    std::sort(levels.begin(), levels.end());
    b = cell_bounds(s, levels);
    ++repairs;
  }
  throw std::runtime_error("lloyd_design: unable to repair empty cells");
}

std::vector<double> kmeanspp_pick(std::span<const double> candidates, int m, CounterRng& rng) {
  std::vector<double> chosen;
  chosen.reserve(static_cast<std::size_t>(m));
  chosen.push_back(candidates[static_cast<std::size_t>(rng.next_below(candidates.size()))]);
  std::vector<double> d2(candidates.size());
  while (static_cast<int>(chosen.size()) < m) {
    double total = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      double best = kInf;
      for (double c : chosen) best = std::min(best, (candidates[i] - c) * (candidates[i] - c));
      d2[i] = best;
      total += best;
    }
    if (total <= 0.0) throw std::invalid_argument("lloyd_design: fewer distinct values than levels");
    double target = rng.next_double() * total;
    std::size_t pick = candidates.size() - 1;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      target -= d2[i];
      if (target <= 0.0) {
        pick = i;
        break;
      }
    }
    chosen.push_back(candidates[pick]);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// Quantile ramp for the initial levels. Equal-mass placement makes Lloyd
// crawl for large codebooks (the optimal point density is f^{1/3}, not f,
// and the alternation redistributes mass only locally), so the ramp spreads
// the equal-mass positions through the Gaussian companding map; for a
// near-Gaussian source this seeds levels close to the optimal density.
double companded_position(double p) { return normal_cdf(std::sqrt(3.0) * normal_quantile(p)); }

std::vector<double> init_levels(const SortedSamples& s, int m, const LloydOptions& opt) {
  if (opt.init == LloydInit::KMeansPlusPlusLike) {
    CounterRng rng(opt.seed);
    return kmeanspp_pick(s.x, m, rng);
  }
  // Work on the distinct sorted values so the ramp can always be made
  // strictly increasing (the caller guarantees at least m of them).
  std::vector<double> distinct;
  distinct.reserve(s.size());
  for (double v : s.x)
    if (distinct.empty() || v != distinct.back()) distinct.push_back(v);
  const std::size_t d = distinct.size();
  std::vector<std::size_t> pos(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double p = companded_position(static_cast<double>(i + 1) / (m + 1));
    pos[static_cast<std::size_t>(i)] =
        std::min(static_cast<std::size_t>(p * static_cast<double>(d)), d - 1);
  }
  for (int i = 1; i < m; ++i)
    pos[static_cast<std::size_t>(i)] =
        std::max(pos[static_cast<std::size_t>(i)], pos[static_cast<std::size_t>(i - 1)] + 1);
  pos[static_cast<std::size_t>(m - 1)] = std::min(pos[static_cast<std::size_t>(m - 1)], d - 1);
  for (int i = m - 2; i >= 0; --i)
    pos[static_cast<std::size_t>(i)] =
        std::min(pos[static_cast<std::size_t>(i)], pos[static_cast<std::size_t>(i + 1)] - 1);
  std::vector<double> levels(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    levels[static_cast<std::size_t>(i)] = distinct[pos[static_cast<std::size_t>(i)]];
  return levels;
}

}  // namespace

LloydResult lloyd_design(std::span<const double> samples, int m_levels, const LloydOptions& opt) {
  if (m_levels < 1) throw std::invalid_argument("lloyd_design: need at least one level");
  SortedSamples s(samples);
  if (s.size() == 0) throw std::invalid_argument("lloyd_design: no samples");
  if (s.count_distinct() < static_cast<std::size_t>(m_levels))
    throw std::invalid_argument("lloyd_design: fewer distinct values than levels");

  LloydResult out;
  std::vector<double> levels = init_levels(s, m_levels, opt);
  auto b = cell_bounds(s, levels);
  int repairs = repair_empty_cells(s, levels, b);
  double d_prev = partition_distortion(s, levels, b);
  out.distortion_history.push_back(d_prev);

  for (int it = 1; it <= opt.max_iter; ++it) {
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const std::size_t cnt = b[i + 1] - b[i];
      if (cnt > 0) levels[i] = (s.ps[b[i + 1]] - s.ps[b[i]]) / static_cast<double>(cnt);
    }
    b = cell_bounds(s, levels);
    repairs += repair_empty_cells(s, levels, b);
    if (repairs > m_levels) throw std::runtime_error("lloyd_design: unable to repair empty cells");
    const double d = partition_distortion(s, levels, b);
    out.distortion_history.push_back(d);
    out.iterations = it;
    if (d_prev - d <= opt.tol * std::max(d_prev, 1e-300)) {
      out.converged = true;
      break;
    }
    d_prev = d;
  }
  out.quantizer = ScalarQuantizer::from_levels(levels);
  return out;
}

// ---------------------------------------------------------------------------
// Lloyd design for the analytic Gaussian source.

namespace {

double gaussian_partition_distortion(const std::vector<double>& levels, double sigma) {
  double total = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double lo = (i == 0) ? -kInf : 0.5 * (levels[i - 1] + levels[i]) / sigma;
    const double hi = (i + 1 == levels.size()) ? kInf : 0.5 * (levels[i] + levels[i + 1]) / sigma;
    total += normal_interval_sqerr(lo, hi, levels[i] / sigma);
  }
  return sigma * sigma * total;
}

}  // namespace

LloydResult lloyd_design(const GaussianSource& src, int m_levels, const LloydOptions& opt) {
  if (m_levels < 1) throw std::invalid_argument("lloyd_design: need at least one level");
  if (!(src.sigma > 0.0)) throw std::invalid_argument("lloyd_design: sigma must be positive");

  std::vector<double> levels(static_cast<std::size_t>(m_levels));
  if (opt.init == LloydInit::KMeansPlusPlusLike) {
    const std::size_t n_cand = std::max<std::size_t>(1024, 128 * static_cast<std::size_t>(m_levels));
    std::vector<double> candidates(n_cand);
    for (std::size_t j = 0; j < n_cand; ++j)
      candidates[j] = src.sigma * normal_quantile((static_cast<double>(j) + 0.5) / static_cast<double>(n_cand));
    CounterRng rng(opt.seed);
    levels = kmeanspp_pick(candidates, m_levels, rng);
  } else {
    // Companded quantiles: for a Gaussian the f^{1/3} density is the
    // √3-inflated Gaussian, so the ramp collapses to stretched quantiles.
    for (int i = 0; i < m_levels; ++i)
      levels[static_cast<std::size_t>(i)] =
          src.sigma * std::sqrt(3.0) * normal_quantile(static_cast<double>(i + 1) / (m_levels + 1));
  }

  LloydResult out;
  double d_prev = gaussian_partition_distortion(levels, src.sigma);
  out.distortion_history.push_back(d_prev);
  for (int it = 1; it <= opt.max_iter; ++it) {
    std::vector<double> next(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const double lo = (i == 0) ? -kInf : 0.5 * (levels[i - 1] + levels[i]) / src.sigma;
      const double hi = (i + 1 == levels.size()) ? kInf : 0.5 * (levels[i] + levels[i + 1]) / src.sigma;
      next[i] = src.sigma * truncated_normal_mean(lo, hi);
    }
    levels = std::move(next);
    const double d = gaussian_partition_distortion(levels, src.sigma);
    out.distortion_history.push_back(d);
    out.iterations = it;
    if (d_prev - d <= opt.tol * std::max(d_prev, 1e-300)) {
      out.converged = true;
      break;
    }
    d_prev = d;
  }
  out.quantizer = ScalarQuantizer::from_levels(levels);
  return out;
}

// ---------------------------------------------------------------------------
// Optimal symmetric uniform quantizer.

namespace {

std::vector<double> uniform_levels(int m, double step) {
  std::vector<double> levels(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    levels[static_cast<std::size_t>(i)] = (static_cast<double>(i + 1) - 0.5 * (m + 1)) * step;
  return levels;
}

double uniform_distortion(int m, double step, double sigma) {
  return gaussian_partition_distortion(uniform_levels(m, step), sigma);
}

}  // namespace

StepGrid StepGrid::for_levels(int m_levels, double sigma) {
  StepGrid g;
  g.delta_min = 1.0 * sigma / m_levels;
  g.delta_max = 18.0 * sigma / m_levels;
  g.n_grid = 64;
  return g;
}

UniformDesignResult uniform_design(const GaussianSource& src, int m_levels, const StepGrid& grid) {
  if (m_levels < 2) throw std::invalid_argument("uniform_design: need at least two levels");
  if (!(src.sigma > 0.0)) throw std::invalid_argument("uniform_design: sigma must be positive");
  if (grid.n_grid < 3 || !(grid.delta_min > 0.0) || !(grid.delta_max > grid.delta_min))
    throw std::invalid_argument("uniform_design: malformed step grid");

  std::vector<double> deltas(static_cast<std::size_t>(grid.n_grid));
  for (int i = 0; i < grid.n_grid; ++i)
    deltas[static_cast<std::size_t>(i)] =
        grid.delta_min + (grid.delta_max - grid.delta_min) * static_cast<double>(i) / (grid.n_grid - 1);
  int best = 0;
  double best_d = kInf;
  for (int i = 0; i < grid.n_grid; ++i) {
    const double d = uniform_distortion(m_levels, deltas[static_cast<std::size_t>(i)], src.sigma);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  if (best == 0 || best == grid.n_grid - 1)
    throw std::invalid_argument("uniform_design: distortion is monotone over the step grid");

  // Golden-section refinement on the bracketing interval.
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = deltas[static_cast<std::size_t>(best - 1)];
  double b = deltas[static_cast<std::size_t>(best + 1)];
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = uniform_distortion(m_levels, x1, src.sigma);
  double f2 = uniform_distortion(m_levels, x2, src.sigma);
  while (b - a > 1e-12 * src.sigma) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = uniform_distortion(m_levels, x1, src.sigma);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = uniform_distortion(m_levels, x2, src.sigma);
    }
  }
  UniformDesignResult out;
  out.step = 0.5 * (a + b);
  out.distortion = uniform_distortion(m_levels, out.step, src.sigma);
  out.quantizer = ScalarQuantizer::from_levels(uniform_levels(m_levels, out.step));
  return out;
}

double distortion(const ScalarQuantizer& q, std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("distortion: no samples");
  double total = 0.0;
  for (double s : samples) {
    const double e = s - apply_scalar(q, s).level;
    total += e * e;
  }
  return total / static_cast<double>(samples.size());
}

double distortion(const ScalarQuantizer& q, const GaussianSource& src) {
  if (!(src.sigma > 0.0)) throw std::invalid_argument("distortion: sigma must be positive");
  double total = 0.0;
  for (int i = 0; i < q.num_levels(); ++i) {
    const double lo = q.threshold(i) / src.sigma;
    const double hi = q.threshold(i + 1) / src.sigma;
    total += normal_interval_sqerr(lo, hi, q.levels[static_cast<std::size_t>(i)] / src.sigma);
  }
  return src.sigma * src.sigma * total;
}

std::vector<double> gaussian_cell_probs(const ScalarQuantizer& q, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_cell_probs: sigma must be positive");
  std::vector<double> p(static_cast<std::size_t>(q.num_levels()));
  for (int i = 0; i < q.num_levels(); ++i)
    p[static_cast<std::size_t>(i)] = normal_interval_prob(q.threshold(i) / sigma, q.threshold(i + 1) / sigma);
  return p;
}

}  // namespace qcs
