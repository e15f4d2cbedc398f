#include "qcs/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "qcs/entropy.hpp"
#include "qcs/io.hpp"
#include "qcs/pursuit.hpp"
#include "qcs/rng.hpp"
#include "qcs/stats.hpp"

namespace qcs {

namespace {
// Disjoint stream ranges under one master seed.
constexpr std::uint64_t kMatrixStream = 0;
constexpr std::uint64_t kSignalStream = 1ull << 32;
constexpr std::uint64_t kTrainingStream = 1ull << 40;
}  // namespace

std::string to_string(QuantKind k) {
  switch (k) {
    case QuantKind::Lloyd: return "lloyd";
    case QuantKind::Uniform: return "uniform";
    case QuantKind::Entropy: return "entropy";
  }
  return "?";
}

std::string to_string(ReconAlgo a) {
  switch (a) {
    case ReconAlgo::Sp: return "sp";
    case ReconAlgo::Bp: return "bp";
    case ReconAlgo::Qsp: return "qsp";
    case ReconAlgo::Qbp: return "qbp";
  }
  return "?";
}

QuantKind quant_kind_from_string(const std::string& s) {
  if (s == "lloyd") return QuantKind::Lloyd;
  if (s == "uniform") return QuantKind::Uniform;
  if (s == "entropy") return QuantKind::Entropy;
  throw std::invalid_argument("unknown quantizer kind: " + s);
}

ReconAlgo recon_algo_from_string(const std::string& s) {
  if (s == "sp") return ReconAlgo::Sp;
  if (s == "bp") return ReconAlgo::Bp;
  if (s == "qsp") return ReconAlgo::Qsp;
  if (s == "qbp") return ReconAlgo::Qbp;
  throw std::invalid_argument("unknown algorithm: " + s);
}

void ExperimentConfig::validate() const {
  if (m < 1 || n < 1) throw std::invalid_argument("config: dimensions must be positive");
  if (k < 0 || k > n) throw std::invalid_argument("config: need 0 <= K <= N");
  if (trials < 1) throw std::invalid_argument("config: trials must be at least 1");
  if (rates.empty()) throw std::invalid_argument("config: rates must be nonempty");
  for (int r : rates)
    if (r < 1 || r > 24) throw std::invalid_argument("config: rates must be in [1, 24]");
  if (quantizers.empty()) throw std::invalid_argument("config: need at least one quantizer kind");
  if (algorithms.empty()) throw std::invalid_argument("config: need at least one algorithm");
  if (training.mode == QuantTraining::Mode::Analytic && !(training.sigma > 0.0))
    throw std::invalid_argument("config: analytic training sigma must be positive");
  if (training.mode == QuantTraining::Mode::Empirical && training.n_samples < 1000)
    throw std::invalid_argument("config: empirical training needs at least 1000 samples");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  static const std::vector<std::string> known = {"m",           "N",          "K",
                                                 "rates",       "trials",     "master_seed",
                                                 "quantizers",  "algorithms", "matrix_mode",
                                                 "quantizer_training"};
  for (const auto& item : j.items())
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw std::invalid_argument("config: unknown key '" + item.key() + "'");

  ExperimentConfig c;
  if (j.contains("m")) c.m = j.at("m").get<int>();
  if (j.contains("N")) c.n = j.at("N").get<int>();
  if (j.contains("K")) c.k = j.at("K").get<int>();
  if (j.contains("rates")) c.rates = j.at("rates").get<std::vector<int>>();
  if (j.contains("trials")) c.trials = j.at("trials").get<int>();
  if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("quantizers")) {
    c.quantizers.clear();
    for (const auto& s : j.at("quantizers")) c.quantizers.push_back(quant_kind_from_string(s.get<std::string>()));
  }
  if (j.contains("algorithms")) {
    c.algorithms.clear();
    for (const auto& s : j.at("algorithms")) c.algorithms.push_back(recon_algo_from_string(s.get<std::string>()));
  }
  if (j.contains("matrix_mode")) {
    const auto s = j.at("matrix_mode").get<std::string>();
    if (s == "column_normalized")
      c.matrix_mode = MatrixMode::ColumnNormalized;
    else if (s == "iid_scaled")
      c.matrix_mode = MatrixMode::IidScaled;
    else
      throw std::invalid_argument("config: unknown matrix_mode '" + s + "'");
  }
  if (j.contains("quantizer_training")) {
    const auto& t = j.at("quantizer_training");
    static const std::vector<std::string> tkeys = {"mode", "sigma", "n_samples"};
    for (const auto& item : t.items())
      if (std::find(tkeys.begin(), tkeys.end(), item.key()) == tkeys.end())
        throw std::invalid_argument("config: unknown quantizer_training key '" + item.key() + "'");
    const auto mode = t.at("mode").get<std::string>();
    if (mode == "analytic") {
      c.training.mode = QuantTraining::Mode::Analytic;
      if (t.contains("sigma")) c.training.sigma = t.at("sigma").get<double>();
    } else if (mode == "empirical") {
      c.training.mode = QuantTraining::Mode::Empirical;
      if (t.contains("n_samples")) c.training.n_samples = t.at("n_samples").get<std::uint64_t>();
    } else {
      throw std::invalid_argument("config: unknown training mode '" + mode + "'");
    }
  }
  if (const char* env = std::getenv("QCS_SEED")) c.master_seed = std::stoull(env);
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_text(text);
}

// ---------------------------------------------------------------------------
// Quantizer bank: one design per (rate, kind), trained once and shared.

namespace {

std::vector<double> training_pool(const ExperimentConfig& c) {
  const auto pairs =
      (c.training.n_samples + static_cast<std::uint64_t>(c.m) - 1) / static_cast<std::uint64_t>(c.m);
  std::vector<double> pool;
  pool.reserve(static_cast<std::size_t>(pairs) * static_cast<std::size_t>(c.m));
  const double scale = 1.0 / std::sqrt(static_cast<double>(c.m));
  Eigen::VectorXd col(c.m);
  Eigen::VectorXd y(c.m);
  for (std::uint64_t p = 0; p < pairs; ++p) {
    CounterRng rng = CounterRng::derive(c.master_seed, kTrainingStream + p);
    y.setZero();
    // Only the k support columns of the matrix enter y = Φx.
    for (int j = 0; j < c.k; ++j) {
      for (int i = 0; i < c.m; ++i) col[i] = rng.next_gaussian();
      if (c.matrix_mode == MatrixMode::ColumnNormalized)
        col /= col.norm();
      else
        col *= scale;
      y += rng.next_gaussian() * col;
    }
    for (int i = 0; i < c.m; ++i) pool.push_back(y[i]);
  }
  return pool;
}

}  // namespace

std::vector<DesignedQuantizer> design_experiment_quantizers(const ExperimentConfig& c) {
  c.validate();
  std::vector<double> pool;
  double sigma = c.training.sigma;
  if (c.training.mode == QuantTraining::Mode::Empirical) {
    pool = training_pool(c);
    double ss = 0.0;
    for (double v : pool) ss += v * v;
    sigma = std::sqrt(ss / static_cast<double>(pool.size()));
  }
  std::vector<DesignedQuantizer> out;
  for (int rate : c.rates) {
    const int levels = 1 << rate;
    for (QuantKind kind : c.quantizers) {
      DesignedQuantizer d;
      d.rate = rate;
      d.kind = kind;
      switch (kind) {
        case QuantKind::Lloyd:
          d.q = (c.training.mode == QuantTraining::Mode::Empirical)
                    ? lloyd_design(pool, levels).quantizer
                    : lloyd_design(GaussianSource{sigma}, levels).quantizer;
          break;
        case QuantKind::Uniform:
          d.q = uniform_design(GaussianSource{sigma}, levels, StepGrid::for_levels(levels, sigma))
                    .quantizer;
          break;
        case QuantKind::Entropy:
          d.q = entropy_coded_uniform(rate, sigma);
          break;
      }
      out.push_back(std::move(d));
    }
  }
  return out;
}

namespace {

std::vector<Eigen::Index> top_k_support(const Eigen::VectorXd& x, int k) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(x.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double fa = std::abs(x[a]);
    const double fb = std::abs(x[b]);
    if (fa != fb) return fa > fb;
    return a < b;
  });
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

void run_trial(const ExperimentConfig& c, const std::vector<DesignedQuantizer>& bank, int trial,
               std::vector<TrialRecord>& records, std::size_t slot) {
  const auto matrix = gen_gaussian_matrix(
      c.m, c.n, CounterRng::derive_key(c.master_seed, kMatrixStream + static_cast<std::uint64_t>(trial)),
      c.matrix_mode);
  const auto signal = gen_sparse_signal(
      c.n, c.k, CounterRng::derive_key(c.master_seed, kSignalStream + static_cast<std::uint64_t>(trial)));
  const Eigen::VectorXd y = measure(matrix, signal);

  const bool wants_l1 = std::find(c.algorithms.begin(), c.algorithms.end(), ReconAlgo::Bp) != c.algorithms.end() ||
                        std::find(c.algorithms.begin(), c.algorithms.end(), ReconAlgo::Qbp) != c.algorithms.end();
  std::unique_ptr<L1Solver> l1;
  if (wants_l1) l1 = std::make_unique<L1Solver>(matrix.entries);

  for (const auto& dq : bank) {
    Eigen::VectorXd y_hat(c.m);
    std::vector<QuantizedValue> cells(static_cast<std::size_t>(c.m));
    for (int i = 0; i < c.m; ++i) {
      cells[static_cast<std::size_t>(i)] = apply_scalar(dq.q, y[i]);
      y_hat[i] = cells[static_cast<std::size_t>(i)].level;
    }
    const BoxRegion box = box_region(dq.q, cells);
    const double meas_mse = (y_hat - y).squaredNorm() / static_cast<double>(c.m);

    for (ReconAlgo algo : c.algorithms) {
      TrialRecord rec;
      rec.trial_index = trial;
      rec.rate = dq.rate;
      rec.quantizer = dq.kind;
      rec.algorithm = algo;
      rec.measurement_mse = meas_mse;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        Eigen::VectorXd x_hat;
        std::vector<Eigen::Index> support;
        switch (algo) {
          case ReconAlgo::Sp: {
            const auto r = sp_reconstruct(matrix.entries, y_hat, c.k);
            x_hat = r.estimate.values;
            support = r.estimate.support;
            rec.iterations = r.iterations;
            rec.converged = r.converged;
            break;
          }
          case ReconAlgo::Qsp: {
            const auto r = qsp_reconstruct(matrix.entries, box, y_hat, c.k);
            x_hat = r.estimate.values;
            support = r.estimate.support;
            rec.iterations = r.iterations;
            rec.converged = r.converged;
            break;
          }
          case ReconAlgo::Bp: {
            const auto r = l1->solve_equality(y_hat, c.l1_params);
            x_hat = r.x;
            support = top_k_support(x_hat, c.k);
            rec.iterations = r.iterations;
            rec.converged = r.converged;
            break;
          }
          case ReconAlgo::Qbp: {
            const auto r = l1->solve_box(box, c.l1_params);
            x_hat = r.x;
            support = top_k_support(x_hat, c.k);
            rec.iterations = r.iterations;
            rec.converged = r.converged;
            break;
          }
        }
        rec.reconstruction_mse = (x_hat - signal.values).squaredNorm() / static_cast<double>(c.n);
        rec.support_recovered = support == signal.support;
      } catch (const std::exception& e) {
        rec.error = e.what();
        rec.converged = false;
        rec.measurement_mse = meas_mse;
        rec.reconstruction_mse = std::numeric_limits<double>::quiet_NaN();
      }
      rec.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      records[slot++] = std::move(rec);
    }
  }
}

}  // namespace

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config, int workers) {
  config.validate();
  const auto bank = design_experiment_quantizers(config);
  const std::size_t per_trial = bank.size() * config.algorithms.size();
  std::vector<TrialRecord> records(per_trial * static_cast<std::size_t>(config.trials));

  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, config.trials));

  if (workers == 1) {
    for (int t = 0; t < config.trials; ++t)
      run_trial(config, bank, t, records, static_cast<std::size_t>(t) * per_trial);
    return records;
  }

  std::atomic<int> next{0};
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      while (true) {
        const int t = next.fetch_add(1);
        if (t >= config.trials) break;
        run_trial(config, bank, t, records, static_cast<std::size_t>(t) * per_trial);
      }
    });
  }
  for (auto& th : threads) th.join();
  return records;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  std::vector<SummaryRow> rows;
  std::vector<std::vector<double>> meas, recon;
  auto find_row = [&](const TrialRecord& r) -> std::size_t {
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].rate == r.rate && rows[i].quantizer == r.quantizer && rows[i].algorithm == r.algorithm)
        return i;
    rows.push_back({r.rate, r.quantizer, r.algorithm, 0, 0, 0, 0, 0});
    meas.emplace_back();
    recon.emplace_back();
    return rows.size() - 1;
  };
  for (const auto& r : records) {
    if (!r.error.empty()) continue;
    const auto i = find_row(r);
    meas[i].push_back(r.measurement_mse);
    recon[i].push_back(r.reconstruction_mse);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto sm = summarize_values(meas[i]);
    const auto sr = summarize_values(recon[i]);
    rows[i].mean_measurement_mse = sm.mean;
    rows[i].stderr_measurement_mse = sm.std_error;
    rows[i].mean_reconstruction_mse = sr.mean;
    rows[i].stderr_reconstruction_mse = sr.std_error;
    rows[i].count = sm.count;
  }
  return rows;
}

ScalarQuantizer entropy_coded_uniform(int rate, double sigma) {
  if (rate < 1 || rate > 24) throw std::invalid_argument("entropy_coded_uniform: rate out of range");
  if (!(sigma > 0.0)) throw std::invalid_argument("entropy_coded_uniform: sigma must be positive");
  const double step =
      sigma * std::sqrt(2.0 * std::numbers::pi * std::numbers::e) * std::ldexp(1.0, -rate);
  const int half = static_cast<int>(std::ceil(8.0 * sigma / step + 0.5));
  const int m = 2 * half;
  std::vector<double> levels(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    levels[static_cast<std::size_t>(i)] = (static_cast<double>(i + 1) - 0.5 * (m + 1)) * step;
  return ScalarQuantizer::from_levels(std::move(levels));
}

double verify_clt(int m, int k, int n, std::size_t n_samples, std::uint64_t seed) {
  if (k < 1 || m < 1 || n < k) throw std::invalid_argument("verify_clt: bad dimensions");
  if (n_samples < 2) throw std::invalid_argument("verify_clt: need at least two samples");
  std::vector<double> samples(n_samples);
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  for (std::size_t s = 0; s < n_samples; ++s) {
    CounterRng rng = CounterRng::derive(seed, s);
    double sum = 0.0;
    for (int j = 0; j < k; ++j) sum += rng.next_gaussian() * rng.next_gaussian();
    samples[s] = scale * sum;
  }
  return ks_statistic_normal(samples);
}

std::vector<Theorem1Row> theorem1_check(const std::vector<int>& rates, std::size_t n_samples,
                                        std::uint64_t seed) {
  std::vector<Theorem1Row> out;
  for (int rate : rates) {
    if (rate < 1 || rate > 16) throw std::invalid_argument("theorem1_check: rate out of range");
    const int levels = 1 << rate;
    const double pow4r = std::ldexp(1.0, 2 * rate);
    Theorem1Row row;
    row.rate = rate;
    LloydOptions opt;
    opt.tol = 1e-12;
    opt.max_iter = 5000;
    const auto lloyd = lloyd_design(GaussianSource{1.0}, levels, opt);
    row.lloyd_normalized = pow4r * distortion(lloyd.quantizer, GaussianSource{1.0});
    const auto uni = uniform_design(GaussianSource{1.0}, levels, StepGrid::for_levels(levels, 1.0));
    row.uniform_normalized = pow4r * uni.distortion / static_cast<double>(rate);
    row.uniform_step = uni.step;
    row.lloyd_mc = std::numeric_limits<double>::quiet_NaN();
    if (n_samples > 0) {
      std::vector<double> draws(n_samples);
      CounterRng rng = CounterRng::derive(seed, static_cast<std::uint64_t>(rate));
      for (auto& d : draws) d = rng.next_gaussian();
      row.lloyd_mc = pow4r * distortion(lloyd.quantizer, draws);
    }
    out.push_back(row);
  }
  return out;
}

std::vector<Theorem3Row> theorem3_check(const std::vector<int>& rates) {
  std::vector<Theorem3Row> out;
  for (int rate : rates) {
    if (rate < 1 || rate > 16) throw std::invalid_argument("theorem3_check: rate out of range");
    Theorem3Row row;
    row.rate = rate;
    const ScalarQuantizer q = entropy_coded_uniform(rate, 1.0);
    row.levels = q.num_levels();
    row.step = q.levels[1] - q.levels[0];
    const auto probs = gaussian_cell_probs(q, 1.0);
    const auto code = huffman(probs);
    row.expected_code_length = expected_length(code, probs);
    row.entropy_bits = entropy(probs);
    row.normalized_distortion =
        std::pow(2.0, 2.0 * row.expected_code_length) * distortion(q, GaussianSource{1.0});
    out.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV emission. `.` decimal, `,` separator, LF endings, 17 significant digits.

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

}  // namespace

void emit_records_csv(const std::vector<TrialRecord>& records, const std::filesystem::path& path) {
  auto out = open_csv(path);
  out << "trial,rate,quantizer,algorithm,measurement_mse,reconstruction_mse,"
         "support_recovered,iterations,converged,wall_time_seconds,error\n";
  for (const auto& r : records) {
    out << r.trial_index << ',' << r.rate << ',' << to_string(r.quantizer) << ','
        << to_string(r.algorithm) << ',' << format_double(r.measurement_mse) << ','
        << format_double(r.reconstruction_mse) << ',' << (r.support_recovered ? "true" : "false")
        << ',' << r.iterations << ',' << (r.converged ? "true" : "false") << ','
        << format_double(r.wall_time_seconds) << ',' << r.error << '\n';
  }
}

void emit_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
  auto out = open_csv(path);
  out << "rate,quantizer,algorithm,mean_measurement_mse,stderr_measurement_mse,"
         "mean_reconstruction_mse,stderr_reconstruction_mse,count\n";
  for (const auto& r : rows) {
    out << r.rate << ',' << to_string(r.quantizer) << ',' << to_string(r.algorithm) << ','
        << format_double(r.mean_measurement_mse) << ',' << format_double(r.stderr_measurement_mse)
        << ',' << format_double(r.mean_reconstruction_mse) << ','
        << format_double(r.stderr_reconstruction_mse) << ',' << r.count << '\n';
  }
}

void emit_fig_data(const std::vector<SummaryRow>& rows, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto fig1 = open_csv(out_dir / "fig1.csv");
  fig1 << "rate,quantizer,mean_measurement_mse,stderr\n";
  std::vector<std::pair<int, QuantKind>> seen;
  for (const auto& r : rows) {
    const auto key = std::make_pair(r.rate, r.quantizer);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(key);
    fig1 << r.rate << ',' << to_string(r.quantizer) << ','
         << format_double(r.mean_measurement_mse) << ',' << format_double(r.stderr_measurement_mse)
         << '\n';
  }
  auto fig2a = open_csv(out_dir / "fig2a.csv");
  auto fig2b = open_csv(out_dir / "fig2b.csv");
  const std::string header = "rate,quantizer,algorithm,mean_reconstruction_mse,stderr\n";
  fig2a << header;
  fig2b << header;
  for (const auto& r : rows) {
    const bool standard = r.algorithm == ReconAlgo::Sp || r.algorithm == ReconAlgo::Bp;
    auto& fig = standard ? fig2a : fig2b;
    fig << r.rate << ',' << to_string(r.quantizer) << ',' << to_string(r.algorithm) << ','
        << format_double(r.mean_reconstruction_mse) << ','
        << format_double(r.stderr_reconstruction_mse) << '\n';
  }
}

}  // namespace qcs
