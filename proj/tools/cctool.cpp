// Command-line front end for the continuous categorical toolkit.
//
// Exit codes: 0 success; 2 usage or parse/validation failure; 3 sampler
// proposal budget exhausted; 4 divergent MLE (boundary sample mean);
// 5 optimizer did not converge.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "cc/csv.hpp"
#include "cc/errors.hpp"
#include "cc/inference.hpp"
#include "cc/moments.hpp"
#include "cc/normalizer.hpp"
#include "cc/samplers.hpp"
#include "cc/serialize.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitBoundary = 4;
constexpr int kExitNoConverge = 5;

struct ParamFlags {
  std::string eta_list;
  std::string lambda_list;
};

void add_param_flags(CLI::App* cmd, ParamFlags* p) {
  cmd->add_option("--eta", p->eta_list,
                  "natural parameters eta_1,...,eta_{K-1} (implicit eta_K=0)");
  cmd->add_option("--lambda", p->lambda_list,
                  "mean parameters lambda_1,...,lambda_K (fractions allowed)");
}

// Exactly one of --eta/--lambda; returns both parameterizations.
std::pair<cc::NaturalParams, cc::MeanParams> resolve_params(const ParamFlags& p) {
  if (p.eta_list.empty() == p.lambda_list.empty())
    throw std::invalid_argument("exactly one of --eta/--lambda is required");
  if (!p.eta_list.empty()) {
    cc::NaturalParams eta(cc::parse_number_list(p.eta_list));
    return {eta, cc::natural_to_mean(eta)};
  }
  cc::MeanParams lambda(cc::parse_number_list(p.lambda_list));
  return {cc::mean_to_natural(lambda), lambda};
}

std::uint64_t resolve_seed(bool seed_given, std::uint64_t seed, bool strict) {
  if (seed_given) return seed;
  if (strict)
    throw std::invalid_argument("--strict requires an explicit --seed");
  std::random_device rd;
  std::uint64_t s =
      (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
  std::cerr << "seed," << s << "\n";
  return s;
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::binary);  // binary: LF line endings everywhere
  if (!file) throw std::invalid_argument("cannot open '" + path + "' for writing");
  return file;
}

cc::SamplerMethod parse_method(const std::string& name,
                               const cc::MeanParams& lambda) {
  if (name == "naive") return cc::SamplerMethod::kNaive;
  if (name == "ordered") return cc::SamplerMethod::kOrdered;
  if (name == "permutation") return cc::SamplerMethod::kPermutation;
  if (name == "auto") return cc::recommend_sampler(lambda);
  throw std::invalid_argument("--method must be naive|ordered|permutation|auto");
}

// ---------------------------------------------------------------------------

int cmd_logc(const ParamFlags& p) {
  auto [eta, lambda] = resolve_params(p);
  double log_c = cc::log_normalizer(eta).log_c;
  std::cout << "log_c," << cc::format_full(log_c) << "\n"
            << "c," << cc::format_full(std::exp(log_c)) << "\n";
  if (!p.lambda_list.empty()) {
    double log_cl = cc::log_normalizer_lambda(lambda);
    std::cout << "log_c_lambda," << cc::format_full(log_cl) << "\n"
              << "c_lambda," << cc::format_full(std::exp(log_cl)) << "\n";
  }
  return 0;
}

int cmd_moments(const ParamFlags& p) {
  auto [eta, lambda] = resolve_params(p);
  std::vector<double> m = cc::mean(eta);
  std::cout << "mean";
  for (double v : m) std::cout << ',' << cc::format_full(v);
  std::cout << "\ncovariance\n";
  Eigen::MatrixXd cov = cc::covariance(eta);
  for (int i = 0; i < cov.rows(); ++i) {
    for (int j = 0; j < cov.cols(); ++j)
      std::cout << (j ? "," : "") << cc::format_full(cov(i, j));
    std::cout << "\n";
  }
  return 0;
}

int cmd_sample(const ParamFlags& p, std::size_t n, bool seed_given,
               std::uint64_t seed, bool strict, const std::string& method_name,
               const std::string& out_path, std::uint64_t budget) {
  auto [eta, lambda] = resolve_params(p);
  cc::SamplerMethod method = parse_method(method_name, lambda);
  std::uint64_t s = resolve_seed(seed_given, seed, strict);
  cc::SamplerOptions opt;
  opt.max_proposals_per_sample = budget;
  cc::SampleBatch batch = cc::sample(method, lambda, n, s, opt);
  std::ofstream file;
  cc::write_samples_csv(open_out(out_path, file), batch);
  std::uint64_t total = batch.total_proposals();
  std::uint64_t worst = 0;
  for (std::uint64_t v : batch.proposals) worst = std::max(worst, v);
  std::cerr << "method," << cc::to_string(method) << "\n"
            << "samples," << n << "\n"
            << "proposals," << total << "\n"
            << "acceptance," << cc::format_full(static_cast<double>(n) / total)
            << "\n"
            << "proposals_per_acceptance,"
            << cc::format_full(static_cast<double>(total) / n) << "\n"
            << "max_proposals_per_draw," << worst << "\n";
  return 0;
}

int cmd_fit(const std::string& data_path, const std::string& pred_path,
            double l2, bool smooth, bool standardize, double holdout,
            int max_iter, double tol, bool seed_given, std::uint64_t seed,
            bool strict, const std::string& out_path, bool trace,
            const std::string& format) {
  cc::CompositionTable table =
      cc::read_composition_csv_file(data_path, smooth ? 0.001 : 0.0);
  for (const auto& [line, reason] : table.rejected)
    std::cerr << "rejected_row," << line << "," << reason << "\n";
  std::cerr << "rows_accepted," << table.rows.size() << "\n"
            << "rows_rejected," << table.rejected.size() << "\n";
  if (table.rows.empty())
    throw std::invalid_argument("no valid rows in '" + data_path + "'");

  cc::Dataset data;
  data.rows = std::move(table.rows);

  auto emit_report = [&](const cc::FitReport& rep) {
    if (format == "jsonl")
      cc::write_fit_report_jsonl(std::cout, rep, trace);
    else
      cc::write_fit_report_csv(std::cout, rep, trace);
  };

  if (pred_path.empty()) {
    cc::MleOptions opt;
    opt.max_iterations = max_iter;
    opt.tolerance = tol > 0 ? tol : 1e-8;
    cc::FitReport rep = cc::fit_mle(data, opt);
    emit_report(rep);
    std::vector<double> mu = cc::mean(cc::NaturalParams(rep.eta_hat));
    std::cout << "fitted_mean";
    for (double v : mu) std::cout << ',' << cc::format_full(v);
    std::cout << "\n";
    if (!out_path.empty()) {
      std::ofstream f;
      cc::write_fit_report_jsonl(open_out(out_path, f), rep, true);
    }
    return rep.converged ? 0 : kExitNoConverge;
  }

  Eigen::MatrixXd z = cc::read_matrix_csv_file(pred_path);
  if (z.rows() != data.n())
    throw std::invalid_argument("predictor rows (" + std::to_string(z.rows()) +
                                ") do not match data rows (" +
                                std::to_string(data.n()) + ")");
  cc::GlmOptions opt;
  opt.l2 = l2;
  opt.max_iterations = max_iter;
  opt.tolerance = tol > 0 ? tol : 1e-6;
  opt.standardize = standardize;

  std::vector<std::int64_t> hold_idx;
  if (holdout > 0.0) {
    if (holdout >= 1.0)
      throw std::invalid_argument("--holdout must lie in (0,1)");
    std::uint64_t s = resolve_seed(seed_given, seed, strict);
    cc::RandomStream rng(s);
    std::vector<std::int64_t> idx(data.n());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::int64_t i = data.n() - 1; i > 0; --i)
      std::swap(idx[i], idx[static_cast<std::int64_t>(rng.uniform() * (i + 1))]);
    std::int64_t n_hold = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::floor(holdout * data.n())));
    hold_idx.assign(idx.begin(), idx.begin() + n_hold);
    std::vector<char> is_hold(data.n(), 0);
    for (std::int64_t i : hold_idx) is_hold[i] = 1;
    cc::Dataset train;
    Eigen::MatrixXd ztrain(data.n() - n_hold, z.cols());
    std::int64_t r = 0;
    for (std::int64_t i = 0; i < data.n(); ++i) {
      if (is_hold[i]) continue;
      train.rows.push_back(data.rows[i]);
      ztrain.row(r++) = z.row(i);
    }
    train.predictors = std::move(ztrain);
    cc::GlmFit fit = cc::glm_fit(train, opt);
    emit_report(fit.report);

    // held-out error vs the constant train-mean baseline
    std::vector<double> base = train.sample_mean();
    double l1 = 0.0, se = 0.0, base_se = 0.0;
    for (std::int64_t i : hold_idx) {
      std::vector<double> mu =
          cc::mean(fit.model.predict_eta(z.row(i).transpose()));
      for (int j = 0; j < data.K(); ++j) {
        double err = mu[j] - data.rows[i][j];
        double berr = base[j] - data.rows[i][j];
        l1 += std::abs(err);
        se += err * err;
        base_se += berr * berr;
      }
    }
    double denom = static_cast<double>(hold_idx.size()) * data.K();
    std::cout << "holdout_n," << hold_idx.size() << "\n"
              << "holdout_mae," << cc::format_full(l1 / denom) << "\n"
              << "holdout_rmse," << cc::format_full(std::sqrt(se / denom))
              << "\n"
              << "baseline_rmse,"
              << cc::format_full(std::sqrt(base_se / denom)) << "\n";
    if (!out_path.empty()) {
      std::ofstream f;
      cc::write_glm_model_json(open_out(out_path, f), fit.model);
    }
    return fit.report.converged ? 0 : kExitNoConverge;
  }

  data.predictors = std::move(z);
  cc::GlmFit fit = cc::glm_fit(data, opt);
  emit_report(fit.report);
  if (!out_path.empty()) {
    std::ofstream f;
    cc::write_glm_model_json(open_out(out_path, f), fit.model);
  }
  return fit.report.converged ? 0 : kExitNoConverge;
}

int cmd_bench(int kmin, int kmax, int trials, std::uint64_t budget,
              bool seed_given, std::uint64_t seed, bool strict,
              const std::string& out_path) {
  if (kmin < 2 || kmax < kmin || kmax > 12)
    throw std::invalid_argument("require 2 <= kmin <= kmax <= 12");
  std::uint64_t s = resolve_seed(seed_given, seed, strict);
  std::vector<int> ks;
  for (int k = kmin; k <= kmax; ++k) ks.push_back(k);
  cc::BenchOptions opt;
  opt.budget = budget;
  std::vector<cc::BenchRow> rows = cc::benchmark_samplers(ks, trials, s, opt);
  std::ofstream f;
  cc::write_bench_table_csv(open_out(out_path, f), rows);
  return 0;
}

int cmd_bias_sim(const std::string& truth_list, bool prior_uniform, int k,
                 int nmin, int nmax, int trials, bool seed_given,
                 std::uint64_t seed, bool strict, const std::string& out_path,
                 const std::string& format) {
  if (truth_list.empty() == !prior_uniform)
    throw std::invalid_argument(
        "exactly one of --truth-lambda/--prior-uniform is required");
  if (nmin < 1 || nmax < nmin)
    throw std::invalid_argument("require 1 <= nmin <= nmax");
  std::uint64_t s = resolve_seed(seed_given, seed, strict);
  std::vector<int> n_range;
  for (int n = nmin; n <= nmax; ++n) n_range.push_back(n);
  std::vector<cc::BiasRow> rows;
  if (prior_uniform) {
    if (k < 2) throw std::invalid_argument("--prior-uniform requires --k >= 2");
    rows = cc::bias_simulation_uniform_prior(k, n_range, trials, s);
  } else {
    cc::MeanParams truth(cc::parse_number_list(truth_list));
    rows = cc::bias_simulation(truth, n_range, trials, s);
  }
  std::ofstream f;
  std::ostream& out = open_out(out_path, f);
  if (format == "jsonl")
    cc::write_bias_table_jsonl(out, rows);
  else
    cc::write_bias_table_csv(out, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous categorical distribution toolkit"};
  app.require_subcommand(1);

  // logc
  ParamFlags logc_params;
  CLI::App* logc = app.add_subcommand("logc", "log normalizing constant");
  add_param_flags(logc, &logc_params);

  // moments
  ParamFlags mom_params;
  CLI::App* mom = app.add_subcommand("moments", "mean vector and covariance");
  add_param_flags(mom, &mom_params);

  // sample
  ParamFlags sample_params;
  std::size_t sample_n = 0;
  std::uint64_t sample_seed = 0;
  bool strict = false;
  std::string sample_method = "auto", sample_out;
  std::uint64_t sample_budget = 10'000'000;
  CLI::App* smp = app.add_subcommand("sample", "draw exact CC samples");
  add_param_flags(smp, &sample_params);
  smp->add_option("--n", sample_n, "number of draws")
      ->required()
      ->check(CLI::PositiveNumber);
  CLI::Option* sample_seed_opt =
      smp->add_option("--seed", sample_seed, "64-bit RNG seed");
  smp->add_option("--method", sample_method,
                  "naive|ordered|permutation|auto (default auto)");
  smp->add_option("--out", sample_out, "output CSV path (default stdout)");
  smp->add_option("--budget", sample_budget, "proposal cap per draw");
  smp->add_flag("--strict", strict, "require an explicit --seed");

  // fit
  std::string fit_data, fit_pred, fit_out, fit_format = "csv";
  double fit_l2 = 0.0, fit_holdout = 0.0, fit_tol = 0.0;
  int fit_max_iter = 500;
  bool fit_smooth = false, fit_standardize = false, fit_trace = false;
  std::uint64_t fit_seed = 0;
  bool fit_strict = false;
  CLI::App* fit = app.add_subcommand("fit", "maximum likelihood / regression");
  fit->add_option("--data", fit_data, "composition CSV")->required();
  fit->add_option("--predictors", fit_pred, "predictor CSV (enables the GLM)");
  fit->add_option("--l2", fit_l2, "L2 penalty coefficient")
      ->check(CLI::NonNegativeNumber);
  fit->add_flag("--smooth", fit_smooth,
                "apply the 0.1% smoothing adjustment (comparison workflows "
                "only; zeros are valid data)");
  fit->add_flag("--standardize", fit_standardize, "z-score predictors");
  fit->add_option("--holdout", fit_holdout, "held-out fraction in (0,1)");
  fit->add_option("--max-iter", fit_max_iter, "iteration budget");
  fit->add_option("--tol", fit_tol, "gradient tolerance");
  CLI::Option* fit_seed_opt =
      fit->add_option("--seed", fit_seed, "seed for the holdout split");
  fit->add_flag("--strict", fit_strict, "require an explicit --seed");
  fit->add_option("--out", fit_out, "model/report output path");
  fit->add_flag("--trace", fit_trace, "include the iteration trace");
  fit->add_option("--format", fit_format, "report format: csv|jsonl");

  // bench-samplers
  int bench_kmin = 2, bench_kmax = 8, bench_trials = 100;
  std::uint64_t bench_budget = 1'000'000, bench_seed = 0;
  bool bench_strict = false;
  std::string bench_out;
  CLI::App* bench =
      app.add_subcommand("bench-samplers", "proposals-per-acceptance study");
  bench->add_option("--kmin", bench_kmin, "smallest K")->required();
  bench->add_option("--kmax", bench_kmax, "largest K")->required();
  bench->add_option("--trials", bench_trials, "trials per K")
      ->check(CLI::PositiveNumber);
  bench->add_option("--budget", bench_budget, "right-censoring point");
  CLI::Option* bench_seed_opt =
      bench->add_option("--seed", bench_seed, "64-bit RNG seed");
  bench->add_flag("--strict", bench_strict, "require an explicit --seed");
  bench->add_option("--out", bench_out, "output CSV path (default stdout)");

  // bias-sim
  std::string bias_truth, bias_out, bias_format = "csv";
  bool bias_prior_uniform = false, bias_strict = false;
  int bias_k = 0, bias_nmin = 2, bias_nmax = 20, bias_trials = 10'000;
  std::uint64_t bias_seed = 0;
  CLI::App* bias = app.add_subcommand("bias-sim", "mean-MLE bias simulation");
  bias->add_option("--truth-lambda", bias_truth, "fixed truth lambda list");
  bias->add_flag("--prior-uniform", bias_prior_uniform,
                 "redraw the truth uniformly on the simplex per trial");
  bias->add_option("--k", bias_k, "dimension for --prior-uniform");
  bias->add_option("--nmin", bias_nmin, "smallest sample size");
  bias->add_option("--nmax", bias_nmax, "largest sample size");
  bias->add_option("--trials", bias_trials, "trials per sample size")
      ->check(CLI::PositiveNumber);
  CLI::Option* bias_seed_opt =
      bias->add_option("--seed", bias_seed, "64-bit RNG seed");
  bias->add_flag("--strict", bias_strict, "require an explicit --seed");
  bias->add_option("--out", bias_out, "output CSV path (default stdout)");
  bias->add_option("--format", bias_format, "table format: csv|jsonl");

  try {
    app.parse(argc, argv);
    if (logc->parsed()) return cmd_logc(logc_params);
    if (mom->parsed()) return cmd_moments(mom_params);
    if (smp->parsed())
      return cmd_sample(sample_params, sample_n, !sample_seed_opt->empty(),
                        sample_seed, strict, sample_method, sample_out,
                        sample_budget);
    if (fit->parsed())
      return cmd_fit(fit_data, fit_pred, fit_l2, fit_smooth, fit_standardize,
                     fit_holdout, fit_max_iter, fit_tol,
                     !fit_seed_opt->empty(), fit_seed, fit_strict, fit_out,
                     fit_trace, fit_format);
    if (bench->parsed())
      return cmd_bench(bench_kmin, bench_kmax, bench_trials, bench_budget,
                       !bench_seed_opt->empty(), bench_seed, bench_strict,
                       bench_out);
    if (bias->parsed())
      return cmd_bias_sim(bias_truth, bias_prior_uniform, bias_k, bias_nmin,
                          bias_nmax, bias_trials, !bias_seed_opt->empty(),
                          bias_seed, bias_strict, bias_out, bias_format);
    return kExitUsage;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const cc::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const cc::BoundaryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBoundary;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
