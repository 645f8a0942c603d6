#include "cc/serialize.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "cc/csv.hpp"

namespace cc {

namespace {

using ordered_json = nlohmann::ordered_json;

}  // namespace

void write_fit_report_csv(std::ostream& out, const FitReport& report,
                          bool include_trace) {
  out << "converged," << (report.converged ? 1 : 0) << '\n'
      << "iterations," << report.iterations << '\n'
      << "log_likelihood," << format_full(report.log_likelihood) << '\n'
      << "grad_norm," << format_full(report.grad_norm) << '\n';
  if (!report.eta_hat.empty()) {
    out << "eta_hat";
    for (double v : report.eta_hat) out << ',' << format_full(v);
    out << '\n';
  }
  if (include_trace) {
    out << "trace_iteration,log_likelihood,grad_norm\n";
    for (size_t i = 0; i < report.trace.size(); ++i)
      out << i << ',' << format_full(report.trace[i].first) << ','
          << format_full(report.trace[i].second) << '\n';
  }
}

void write_bias_table_csv(std::ostream& out, const std::vector<BiasRow>& rows) {
  out << "n,component,bias,se,trials,excluded\n";
  for (const BiasRow& r : rows)
    for (size_t j = 0; j < r.bias.size(); ++j)
      out << r.n << ',' << j + 1 << ',' << format_full(r.bias[j]) << ','
          << format_full(r.se[j]) << ',' << r.trials << ',' << r.excluded
          << '\n';
}

void write_bench_table_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "K,sampler,trial,log10_proposals,censored\n";
  for (const BenchRow& r : rows)
    out << r.K << ',' << to_string(r.method) << ',' << r.trial << ','
        << format_full(std::log10(static_cast<double>(r.proposals))) << ','
        << (r.censored ? 1 : 0) << '\n';
}

void write_fit_report_jsonl(std::ostream& out, const FitReport& report,
                            bool include_trace) {
  ordered_json j;
  j["converged"] = report.converged;
  j["iterations"] = report.iterations;
  j["log_likelihood"] = report.log_likelihood;
  j["grad_norm"] = report.grad_norm;
  j["eta_hat"] = report.eta_hat;
  if (include_trace) {
    ordered_json tr = ordered_json::array();
    for (const auto& [ll, gn] : report.trace) tr.push_back({ll, gn});
    j["trace"] = std::move(tr);
  }
  out << j.dump() << '\n';
}

void write_bias_table_jsonl(std::ostream& out,
                            const std::vector<BiasRow>& rows) {
  for (const BiasRow& r : rows) {
    ordered_json j;
    j["n"] = r.n;
    j["bias"] = r.bias;
    j["se"] = r.se;
    j["trials"] = r.trials;
    j["excluded"] = r.excluded;
    out << j.dump() << '\n';
  }
}

void write_glm_model_json(std::ostream& out, const GlmModel& model) {
  ordered_json j;
  j["d"] = model.d();
  j["K"] = model.K();
  ordered_json w = ordered_json::array();
  for (int r = 0; r < model.weights.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < model.weights.cols(); ++c)
      row.push_back(model.weights(r, c));
    w.push_back(std::move(row));
  }
  j["weights"] = std::move(w);
  j["bias"] = std::vector<double>(model.bias.data(),
                                  model.bias.data() + model.bias.size());
  j["l2"] = model.l2;
  j["standardized"] = model.standardized;
  j["feature_mean"] = std::vector<double>(
      model.feature_mean.data(),
      model.feature_mean.data() + model.feature_mean.size());
  j["feature_scale"] = std::vector<double>(
      model.feature_scale.data(),
      model.feature_scale.data() + model.feature_scale.size());
  out << j.dump() << '\n';
}

GlmModel read_glm_model_json(std::istream& in) {
  ordered_json j;
  in >> j;
  GlmModel m;
  int d = j.at("d").get<int>();
  int K = j.at("K").get<int>();
  m.weights.resize(d, K - 1);
  const auto& w = j.at("weights");
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < K - 1; ++c) m.weights(r, c) = w.at(r).at(c).get<double>();
  std::vector<double> b = j.at("bias").get<std::vector<double>>();
  m.bias = Eigen::Map<Eigen::VectorXd>(b.data(), b.size());
  m.l2 = j.at("l2").get<double>();
  m.standardized = j.at("standardized").get<bool>();
  std::vector<double> fm = j.at("feature_mean").get<std::vector<double>>();
  std::vector<double> fs = j.at("feature_scale").get<std::vector<double>>();
  m.feature_mean = Eigen::Map<Eigen::VectorXd>(fm.data(), fm.size());
  m.feature_scale = Eigen::Map<Eigen::VectorXd>(fs.data(), fs.size());
  return m;
}

}  // namespace cc
