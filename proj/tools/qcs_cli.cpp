// Command line front end: seeded experiments, quantizer design, single-shot
// reconstruction, bound tables, and the distributional/theorem checks.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcs/bench.hpp"
#include "qcs/bounds.hpp"
#include "qcs/entropy.hpp"
#include "qcs/io.hpp"
#include "qcs/l1.hpp"
#include "qcs/model.hpp"
#include "qcs/pursuit.hpp"
#include "qcs/quantizer.hpp"

namespace {

using qcs::format_double;

int cmd_experiment(const std::string& config_path, const std::string& out_dir, int workers) {
  const auto config = qcs::ExperimentConfig::from_json_file(config_path);
  const auto records = qcs::run_experiment(config, workers);
  const auto rows = qcs::summarize(records);
  std::filesystem::create_directories(out_dir);
  qcs::emit_records_csv(records, std::filesystem::path(out_dir) / "records.csv");
  qcs::emit_summary_csv(rows, std::filesystem::path(out_dir) / "summary.csv");
  qcs::emit_fig_data(rows, out_dir);
  std::cout << "rate,quantizer,algorithm,mean_measurement_mse,mean_reconstruction_mse,count\n";
  for (const auto& r : rows) {
    std::cout << r.rate << ',' << qcs::to_string(r.quantizer) << ',' << qcs::to_string(r.algorithm)
              << ',' << format_double(r.mean_measurement_mse) << ','
              << format_double(r.mean_reconstruction_mse) << ',' << r.count << '\n';
  }
  std::cerr << "wrote records.csv, summary.csv, fig1.csv, fig2a.csv, fig2b.csv to " << out_dir
            << "\n";
  return 0;
}

int cmd_design(const std::string& kind, int levels, int rate, double sigma,
               const std::string& samples_path, const std::string& out_path,
               const std::string& code_path, std::uint64_t seed) {
  if (levels <= 0) {
    if (rate <= 0) throw CLI::ValidationError("pass --levels or --rate");
    levels = 1 << rate;
  }
  qcs::ScalarQuantizer q;
  double train_sigma = sigma;
  if (!samples_path.empty()) {
    const Eigen::VectorXd v = qcs::load_vector(samples_path);
    std::vector<double> samples(v.data(), v.data() + v.size());
    if (kind == "lloyd") {
      q = qcs::lloyd_design(samples, levels, {.seed = seed}).quantizer;
    } else {
      double ss = 0.0;
      for (double s : samples) ss += s * s;
      train_sigma = std::sqrt(ss / static_cast<double>(samples.size()));
    }
  }
  if (kind == "lloyd" && samples_path.empty())
    q = qcs::lloyd_design(qcs::GaussianSource{train_sigma}, levels, {.seed = seed}).quantizer;
  if (kind == "uniform")
    q = qcs::uniform_design(qcs::GaussianSource{train_sigma}, levels,
                            qcs::StepGrid::for_levels(levels, train_sigma))
            .quantizer;
  if (kind == "entropy") {
    if (rate <= 0) throw CLI::ValidationError("--kind entropy requires --rate");
    q = qcs::entropy_coded_uniform(rate, train_sigma);
  }
  qcs::save_quantizer(out_path, q);
  const double d = qcs::distortion(q, qcs::GaussianSource{train_sigma});
  std::cout << "levels=" << q.num_levels() << " distortion=" << format_double(d) << '\n';
  if (!code_path.empty()) {
    const auto probs = qcs::gaussian_cell_probs(q, train_sigma);
    const auto code = qcs::huffman(probs);
    qcs::save_prefix_code(code_path, code);
    std::cout << "expected_length=" << format_double(qcs::expected_length(code, probs))
              << " entropy=" << format_double(qcs::entropy(probs)) << '\n';
  }
  return 0;
}

int cmd_reconstruct(const std::string& matrix_path, const std::string& meas_path,
                    const std::string& algo, int k, const std::string& quantizer_path, double tol,
                    int max_iter) {
  const auto matrix = qcs::load_matrix(matrix_path);
  const Eigen::VectorXd y = qcs::load_vector(meas_path);
  if (y.size() != matrix.rows()) throw CLI::ValidationError("measurement length does not match the matrix");

  Eigen::VectorXd x_hat;
  bool converged = false;
  int iters = 0;
  double residual = 0.0;

  if (algo == "sp" || algo == "qsp") {
    if (k <= 0) throw CLI::ValidationError("--algo sp/qsp requires --k");
  }
  if (algo == "qsp" || algo == "qbp") {
    if (quantizer_path.empty()) throw CLI::ValidationError("--algo qsp/qbp requires --quantizer");
  }

  qcs::SolverParams params;
  if (max_iter > 0) params.max_iter = max_iter;
  if (tol > 0) {
    params.eps_feas = tol;
    params.eps_obj = tol;
  }

  if (algo == "sp") {
    const auto r = qcs::sp_reconstruct(matrix.entries, y, k, max_iter);
    x_hat = r.estimate.values;
    converged = r.converged;
    iters = r.iterations;
    residual = r.residual_norm;
  } else if (algo == "bp") {
    const auto r = qcs::bp_reconstruct(matrix.entries, y, params);
    x_hat = r.x;
    converged = r.converged;
    iters = r.iterations;
    residual = r.residual;
  } else if (algo == "qsp" || algo == "qbp") {
    const auto q = qcs::load_quantizer(quantizer_path);
    // Quantizer levels are fixed points, so re-quantizing recovers the cells.
    const qcs::BoxRegion box = qcs::box_region(q, y);
    Eigen::VectorXd y_hat(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) y_hat[i] = qcs::apply_scalar(q, y[i]).level;
    if (algo == "qsp") {
      qcs::ConstrainedProjectionOptions cp_opt;
      if (tol > 0) cp_opt.tol = tol;
      const auto r = qcs::qsp_reconstruct(matrix.entries, box, y_hat, k, max_iter);
      x_hat = r.estimate.values;
      converged = r.converged;
      iters = r.iterations;
      residual = r.residual_norm;
    } else {
      const auto r = qcs::qbp_reconstruct(matrix.entries, box, params);
      x_hat = r.x;
      converged = r.converged;
      iters = r.iterations;
      residual = r.residual;
    }
  } else {
    throw CLI::ValidationError("unknown --algo: " + algo);
  }

  for (Eigen::Index i = 0; i < x_hat.size(); ++i) std::cout << format_double(x_hat[i]) << '\n';
  std::cout << "converged=" << (converged ? "true" : "false") << " iters=" << iters
            << " residual=" << format_double(residual) << '\n';
  return 0;
}

void print_report(const qcs::BoundReport& r) {
  std::cout << r.name << ',' << (r.lower ? format_double(*r.lower) : "") << ','
            << (r.upper ? format_double(*r.upper) : "") << ',' << r.normalization << ',';
  for (std::size_t i = 0; i < r.flags.size(); ++i) {
    if (i) std::cout << ';';
    std::cout << r.flags[i];
  }
  std::cout << '\n';
}

int cmd_bounds(std::optional<double> delta_k, std::optional<double> delta_3k,
               std::optional<double> delta_4k, std::optional<double> mu1_v,
               std::optional<double> mu2_v, int m, int k) {
  std::cout << "name,lower,upper,normalization,flags\n";
  print_report({"sq_gaussian_limit", qcs::sq_nonuniform_const(), qcs::sq_nonuniform_const(),
                "2^{2R}/K", {"limit value"}});
  print_report({"usq_gaussian_limit", qcs::sq_uniform_const(), qcs::sq_uniform_const(),
                "2^{2R}/(KR)", {"limit value"}});
  print_report(qcs::enc_bounds());
  if (mu1_v && mu2_v) {
    const auto b = qcs::sq_bounds_with_matrix(*mu1_v, *mu2_v);
    print_report(b.nonuniform);
    print_report(b.uniform);
  }
  if (delta_k && mu2_v && m > 0 && k > 0) {
    const auto vq = qcs::vq_bounds(*delta_k, m, k, *mu2_v);
    print_report(vq.rip_bound);
    print_report(vq.product_bound);
  }
  if (delta_k && delta_3k && delta_4k) {
    qcs::DeltaInputs d{*delta_k, *delta_3k, *delta_4k, false};
    qcs::MuInputs mus{mu1_v, mu2_v};
    for (auto scheme : {qcs::Scheme::SQ, qcs::Scheme::USQ, qcs::Scheme::ENC, qcs::Scheme::VQ})
      for (auto algo : {qcs::Algo::Sp, qcs::Algo::Bp})
        print_report(qcs::recon_bound_report(scheme, algo, d, mus, std::max(m, 1), std::max(k, 1)));
  }
  return 0;
}

int cmd_clt(int m, int k, int n, std::size_t samples, std::uint64_t seed) {
  const double ks = qcs::verify_clt(m, k, n, samples, seed);
  const double crit1 = 1.63 / std::sqrt(static_cast<double>(samples));
  const double crit5 = 1.36 / std::sqrt(static_cast<double>(samples));
  std::cout << "ks=" << format_double(ks) << " crit_5pct=" << format_double(crit5)
            << " crit_1pct=" << format_double(crit1) << '\n';
  return 0;
}

int cmd_theorem(int which, const std::vector<int>& rates) {
  if (which == 1) {
    std::cout << "rate,lloyd_2_2R_D,uniform_2_2R_D_over_R,uniform_step,lloyd_mc,nonuniform_const,"
                 "uniform_const\n";
    for (const auto& row : qcs::theorem1_check(rates, 0, 0)) {
      std::cout << row.rate << ',' << format_double(row.lloyd_normalized) << ','
                << format_double(row.uniform_normalized) << ',' << format_double(row.uniform_step)
                << ',' << format_double(row.lloyd_mc) << ','
                << format_double(qcs::sq_nonuniform_const()) << ','
                << format_double(qcs::sq_uniform_const()) << '\n';
    }
  } else if (which == 3) {
    std::cout << "rate,step,levels,expected_length,entropy,2_2L_D,lower_const,upper_const\n";
    const auto b = qcs::enc_bounds();
    for (const auto& row : qcs::theorem3_check(rates)) {
      std::cout << row.rate << ',' << format_double(row.step) << ',' << row.levels << ','
                << format_double(row.expected_code_length) << ','
                << format_double(row.entropy_bits) << ','
                << format_double(row.normalized_distortion) << ',' << format_double(*b.lower)
                << ',' << format_double(*b.upper) << '\n';
    }
  } else {
    throw CLI::ValidationError("theorem-check takes 1 or 3");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantized compressive sensing toolkit"};
  app.require_subcommand(1);

  // experiment
  std::string config_path, out_dir = "out";
  int workers = 1;
  auto* exp = app.add_subcommand("experiment", "run a seeded Monte Carlo experiment from a JSON config");
  exp->add_option("--config", config_path, "JSON config file")->required();
  exp->add_option("--out", out_dir, "output directory");
  exp->add_option("--workers", workers, "worker threads (0 = hardware)");

  // design-quantizer
  std::string kind = "lloyd", samples_path, q_out = "quantizer.txt", code_out;
  int levels = 0, rate = 0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  auto* des = app.add_subcommand("design-quantizer", "design a scalar quantizer");
  des->add_option("--kind", kind, "lloyd | uniform | entropy")
      ->check(CLI::IsMember({"lloyd", "uniform", "entropy"}));
  des->add_option("--levels", levels, "codebook size M");
  des->add_option("--rate", rate, "bits per sample (M = 2^R)");
  des->add_option("--sigma", sigma, "Gaussian source deviation");
  des->add_option("--samples", samples_path, "training sample file (single column)");
  des->add_option("--out", q_out, "output quantizer file");
  des->add_option("--code-out", code_out, "also write a Huffman code for the Gaussian cell probabilities");
  des->add_option("--seed", seed, "seed for randomized initialization");

  // reconstruct
  std::string matrix_path, meas_path, algo = "sp", quantizer_path;
  int k = 0, max_iter = 0;
  double tol = 0.0;
  auto* rec = app.add_subcommand("reconstruct", "reconstruct a sparse signal from measurements");
  rec->add_option("--matrix", matrix_path, "measurement matrix file")->required();
  rec->add_option("--measurements", meas_path, "measurement vector file")->required();
  rec->add_option("--algo", algo, "sp | bp | qsp | qbp")
      ->check(CLI::IsMember({"sp", "bp", "qsp", "qbp"}));
  rec->add_option("--k", k, "sparsity level (sp/qsp)");
  rec->add_option("--quantizer", quantizer_path, "quantizer file (qsp/qbp)");
  rec->add_option("--tol", tol, "solver tolerance");
  rec->add_option("--max-iter", max_iter, "iteration cap");

  // bounds
  double dk = -1, d3k = -1, d4k = -1, mu1v = -1, mu2v = -1;
  int bm = 0, bk = 0;
  auto* bnd = app.add_subcommand("bounds", "print the distortion bound table as CSV");
  bnd->add_option("--delta-k", dk, "RIP constant of order K");
  bnd->add_option("--delta-3k", d3k, "RIP constant of order 3K");
  bnd->add_option("--delta-4k", d4k, "RIP constant of order 4K");
  bnd->add_option("--mu1", mu1v, "average column energy");
  bnd->add_option("--mu2", mu2v, "worst-case row-restricted energy");
  bnd->add_option("--m", bm, "rows");
  bnd->add_option("--k", bk, "sparsity");

  // clt-check
  int cm = 128, ck = 6, cn = 256;
  std::size_t csamples = 10000;
  std::uint64_t cseed = 1;
  auto* clt = app.add_subcommand("clt-check", "Kolmogorov-Smirnov check of the scaled measurement law");
  clt->add_option("--m", cm, "rows");
  clt->add_option("--k", ck, "sparsity");
  clt->add_option("--n", cn, "columns");
  clt->add_option("--samples", csamples, "sample count");
  clt->add_option("--seed", cseed, "seed");

  // theorem-check
  int which = 1;
  std::vector<int> rates;
  auto* thm = app.add_subcommand("theorem-check", "normalized distortion tables for the asymptotic constants");
  thm->add_option("which", which, "1 or 3")->required();
  thm->add_option("--rates", rates, "rates to evaluate");

  CLI11_PARSE(app, argc, argv);

  try {
    if (exp->parsed()) return cmd_experiment(config_path, out_dir, workers);
    if (des->parsed()) return cmd_design(kind, levels, rate, sigma, samples_path, q_out, code_out, seed);
    if (rec->parsed()) return cmd_reconstruct(matrix_path, meas_path, algo, k, quantizer_path, tol, max_iter);
    if (bnd->parsed())
      return cmd_bounds(dk >= 0 ? std::optional<double>(dk) : std::nullopt,
                        d3k >= 0 ? std::optional<double>(d3k) : std::nullopt,
                        d4k >= 0 ? std::optional<double>(d4k) : std::nullopt,
                        mu1v >= 0 ? std::optional<double>(mu1v) : std::nullopt,
                        mu2v >= 0 ? std::optional<double>(mu2v) : std::nullopt, bm, bk);
    if (clt->parsed()) return cmd_clt(cm, ck, cn, csamples, cseed);
    if (thm->parsed()) {
      if (rates.empty()) rates = (which == 1) ? std::vector<int>{8, 10, 12} : std::vector<int>{4, 6, 8, 10, 12};
      return cmd_theorem(which, rates);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
