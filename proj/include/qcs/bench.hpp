#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qcs/l1.hpp"
#include "qcs/model.hpp"
#include "qcs/quantizer.hpp"

namespace qcs {

enum class QuantKind { Lloyd, Uniform, Entropy };
enum class ReconAlgo { Sp, Bp, Qsp, Qbp };

std::string to_string(QuantKind k);
std::string to_string(ReconAlgo a);
QuantKind quant_kind_from_string(const std::string& s);
ReconAlgo recon_algo_from_string(const std::string& s);

struct QuantTraining {
  enum class Mode { Analytic, Empirical };
  Mode mode = Mode::Empirical;
  double sigma = 1.0;                    // Analytic: source deviation
  std::uint64_t n_samples = 1'000'000;   // Empirical: pooled measurement samples
};

struct ExperimentConfig {
  int m = 128;
  int n = 256;
  int k = 6;
  std::vector<int> rates = {2, 3, 4, 5, 6};
  int trials = 1000;
  std::uint64_t master_seed = 1;
  std::vector<QuantKind> quantizers = {QuantKind::Lloyd, QuantKind::Uniform};
  std::vector<ReconAlgo> algorithms = {ReconAlgo::Sp, ReconAlgo::Bp, ReconAlgo::Qsp,
                                       ReconAlgo::Qbp};
  MatrixMode matrix_mode = MatrixMode::ColumnNormalized;
  QuantTraining training;
  // Solver settings for the bp/qbp trials; looser objective window than the
  // standalone default, sized for thousand-trial runs.
  SolverParams l1_params{.eps_obj = 1e-7, .max_iter = 2000};

  void validate() const;
  // Flat JSON document with the fields above; unknown keys are rejected.
  // The QCS_SEED environment variable, when set, overrides master_seed.
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::filesystem::path& path);
};

struct TrialRecord {
  int trial_index = 0;
  int rate = 0;
  QuantKind quantizer = QuantKind::Lloyd;
  ReconAlgo algorithm = ReconAlgo::Sp;
  double measurement_mse = 0.0;     // per coordinate
  double reconstruction_mse = 0.0;  // per coordinate
  bool support_recovered = false;
  int iterations = 0;
  bool converged = false;
  double wall_time_seconds = 0.0;
  std::string error;  // empty unless the reconstruction failed
};

struct DesignedQuantizer {
  int rate = 0;
  QuantKind kind = QuantKind::Lloyd;
  ScalarQuantizer q;
};

// The quantizer bank the experiment uses: one design per (rate, kind),
// trained once from the config's training source and shared by all trials.
std::vector<DesignedQuantizer> design_experiment_quantizers(const ExperimentConfig& config);

// One record per (trial, rate, quantizer, algorithm), ordered by trial index
// then by the config's rate/quantizer/algorithm order; deterministic given
// the config regardless of the worker count.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config, int workers = 1);

struct SummaryRow {
  int rate = 0;
  QuantKind quantizer = QuantKind::Lloyd;
  ReconAlgo algorithm = ReconAlgo::Sp;
  double mean_measurement_mse = 0.0;
  double stderr_measurement_mse = 0.0;
  double mean_reconstruction_mse = 0.0;
  double stderr_reconstruction_mse = 0.0;
  std::size_t count = 0;
};
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

// Kolmogorov-Smirnov statistic of √(m/K)·Y_i against the standard normal,
// sampled over independent (matrix row, signal) realizations of the scaled
// i.i.d. ensemble. The scaled law depends on K only.
double verify_clt(int m, int k, int n, std::size_t n_samples, std::uint64_t seed);

// Uniform quantizer with the entropy-coding step rule Δ = σ·√(2πe)·2^{−R} and
// enough levels to cover ±8σ; meant to be paired with a Huffman code on its
// Gaussian cell probabilities.
ScalarQuantizer entropy_coded_uniform(int rate, double sigma);

struct Theorem1Row {
  int rate = 0;
  double lloyd_normalized = 0.0;    // 2^{2R}·D for the Lloyd design
  double uniform_normalized = 0.0;  // 2^{2R}·D/R for the optimal uniform design
  double uniform_step = 0.0;
  double lloyd_mc = 0.0;  // Monte Carlo distortion cross-check (NaN when n_samples = 0)
};
// Designs Lloyd and optimal-uniform quantizers for the standard Gaussian at
// each rate and reports the normalized distortions next to the asymptotic
// constants π√3/2 and (4/3)ln2.
std::vector<Theorem1Row> theorem1_check(const std::vector<int>& rates, std::size_t n_samples,
                                        std::uint64_t seed);

struct Theorem3Row {
  int rate = 0;
  double step = 0.0;
  double expected_code_length = 0.0;  // L̄
  double entropy_bits = 0.0;          // H
  double normalized_distortion = 0.0; // 2^{2L̄}·D
  int levels = 0;
};
// Uniform quantizer with step √(2πe)·2^{−R} covering ±8σ, Huffman coded;
// checks the H ≤ L̄ ≤ H+1 bracket and the πe/6 .. πe/3 band.
std::vector<Theorem3Row> theorem3_check(const std::vector<int>& rates);

void emit_records_csv(const std::vector<TrialRecord>& records, const std::filesystem::path& path);
void emit_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);
// fig1.csv: rate,quantizer,mean_measurement_mse,stderr
// fig2a.csv / fig2b.csv: rate,quantizer,algorithm,mean_reconstruction_mse,stderr
// (2a holds the standard algorithms, 2b the box-constrained ones).
void emit_fig_data(const std::vector<SummaryRow>& rows, const std::filesystem::path& out_dir);

}  // namespace qcs
