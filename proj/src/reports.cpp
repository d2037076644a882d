#include "glshap/reports.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "glshap/errors.hpp"
#include "glshap/io.hpp"

namespace glshap {
namespace reports {
namespace {

double l2_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

void mean_std(const std::vector<double>& xs, double& mean, double& sd) {
  mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  sd = 0.0;
  if (xs.size() > 1) {
    for (double x : xs) sd += (x - mean) * (x - mean);
    sd = std::sqrt(sd / static_cast<double>(xs.size() - 1));
  }
}

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

}  // namespace

ConvergenceReport run_convergence(
    int dimension, std::vector<int> budgets, int reference_budget, int instances,
    const std::function<std::vector<double>(int, int)>& explain) {
  if (budgets.empty()) throw invalid_input("budget list is empty");
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (budgets[i] < 1) throw budget_error("budgets must be >= 1");
    if (i > 0 && budgets[i] <= budgets[i - 1])
      throw invalid_input("budgets must be strictly increasing");
  }
  if (reference_budget < 1) throw budget_error("reference budget must be >= 1");
  if (instances < 1) throw invalid_input("need at least one instance");

  ConvergenceReport report;
  report.dimension = dimension;
  report.instances = instances;
  report.reference_budget = reference_budget;
  report.reference_exact = reference_budget >= (dimension + 1) / 2;
  report.budgets = std::move(budgets);

  std::vector<std::vector<double>> errors(report.budgets.size());
  for (int i = 0; i < instances; ++i) {
    std::vector<double> reference = explain(i, reference_budget);
    for (std::size_t b = 0; b < report.budgets.size(); ++b) {
      std::vector<double> phi = explain(i, report.budgets[b]);
      if (phi.size() != reference.size())
        throw dimension_mismatch("explain returned inconsistent lengths");
      errors[b].push_back(l2_distance(phi, reference));
    }
  }

  report.mean_error.resize(report.budgets.size());
  report.std_error.resize(report.budgets.size());
  for (std::size_t b = 0; b < report.budgets.size(); ++b)
    mean_std(errors[b], report.mean_error[b], report.std_error[b]);
  return report;
}

std::vector<int> default_budget_grid(int dimension) {
  int top = std::min(500, std::max(1, (dimension + 1) / 2));
  std::vector<int> grid;
  for (int k = 0; k < 10; ++k) {
    double b = std::pow(static_cast<double>(top), static_cast<double>(k) / 9.0);
    int v = static_cast<int>(std::lround(b));
    v = std::max(1, std::min(top, v));
    if (grid.empty() || v > grid.back()) grid.push_back(v);
  }
  return grid;
}

VerifyReport run_verify(int instances, double tolerance,
                        const std::function<double(int)>& violation_of_row) {
  if (instances < 1) throw invalid_input("need at least one data row");
  if (!(tolerance > 0.0)) throw invalid_input("tolerance must be positive");
  VerifyReport report;
  report.tolerance = tolerance;
  report.violations.reserve(instances);
  for (int i = 0; i < instances; ++i) {
    double v = violation_of_row(i);
    report.violations.push_back(v);
    report.max_violation = std::max(report.max_violation, v);
  }
  report.pass = report.max_violation <= tolerance;
  return report;
}

BenchRow run_bench(const std::string& model_id, int instances, const BenchOptions& options,
                   const std::function<std::vector<double>(int)>& explain,
                   const std::function<double(int, const std::vector<double>&)>& violation) {
  if (instances < 1) throw invalid_input("need at least one instance");
  if (options.repeats < 1) throw invalid_input("repeats must be >= 1");

  BenchRow row;
  row.model_id = model_id;
  row.instances = instances;
  row.repeats = options.repeats;

  const double timeout_ms = options.timeout_s * 1000.0;

  // Warm-up pass, untimed in the report but watched for the timeout.
  for (int i = 0; i < instances; ++i) {
    double t0 = now_ms();
    (void)explain(i);
    if (now_ms() - t0 > timeout_ms) {
      row.timed_out = true;
      row.mean_ms = now_ms() - t0;
      return row;
    }
  }

  std::vector<std::vector<double>> first_pass_phi(instances);
  std::vector<double> per_instance_ms;
  per_instance_ms.reserve(options.repeats);

  for (int rep = 0; rep < options.repeats; ++rep) {
    double pass_ms = 0.0;
    for (int i = 0; i < instances; ++i) {
      double t0 = now_ms();
      std::vector<double> phi = explain(i);
      double elapsed = now_ms() - t0;
      pass_ms += elapsed;
      if (elapsed > timeout_ms) {
        row.timed_out = true;
        row.mean_ms = elapsed;
        return row;
      }
      if (rep == 0) {
        row.max_violation = std::max(row.max_violation, violation(i, phi));
        first_pass_phi[i] = std::move(phi);
      } else if (phi != first_pass_phi[i]) {
        row.deterministic = false;
      }
    }
    per_instance_ms.push_back(pass_ms / static_cast<double>(instances));
  }

  mean_std(per_instance_ms, row.mean_ms, row.std_ms);
  return row;
}

nlohmann::json to_json(const ConvergenceReport& r) {
  return nlohmann::json{{"dimension", r.dimension},
                        {"instances", r.instances},
                        {"reference_budget", r.reference_budget},
                        {"reference_exact", r.reference_exact},
                        {"budgets", r.budgets},
                        {"mean_error", r.mean_error},
                        {"std_error", r.std_error}};
}

nlohmann::json to_json(const VerifyReport& r) {
  return nlohmann::json{{"violations", r.violations},
                        {"max_violation", r.max_violation},
                        {"tolerance", r.tolerance},
                        {"pass", r.pass}};
}

nlohmann::json to_json(const BenchRow& r) {
  return nlohmann::json{{"model", r.model_id},
                        {"instances", r.instances},
                        {"repeats", r.repeats},
                        {"mean_ms_per_instance", r.mean_ms},
                        {"std_ms_per_instance", r.std_ms},
                        {"max_violation", r.max_violation},
                        {"timed_out", r.timed_out},
                        {"deterministic", r.deterministic}};
}

std::string to_csv(const ConvergenceReport& r) {
  std::string out = "budget,mean_error,std_error\n";
  for (std::size_t b = 0; b < r.budgets.size(); ++b) {
    out += std::to_string(r.budgets[b]) + ',' + io::format_double(r.mean_error[b]) + ',' +
           io::format_double(r.std_error[b]) + '\n';
  }
  return out;
}

std::string to_csv(const VerifyReport& r) {
  std::string out = "row,violation\n";
  for (std::size_t i = 0; i < r.violations.size(); ++i)
    out += std::to_string(i) + ',' + io::format_double(r.violations[i]) + '\n';
  return out;
}

std::string to_csv(const BenchRow& r) {
  std::string out =
      "model,instances,repeats,mean_ms_per_instance,std_ms_per_instance,"
      "max_violation,timed_out,deterministic\n";
  out += r.model_id + ',' + std::to_string(r.instances) + ',' + std::to_string(r.repeats) +
         ',' + (r.timed_out ? "t/o" : io::format_double(r.mean_ms)) + ',' +
         io::format_double(r.std_ms) + ',' + io::format_double(r.max_violation) + ',' +
         (r.timed_out ? "true" : "false") + ',' + (r.deterministic ? "true" : "false") + '\n';
  return out;
}

}  // namespace reports
}  // namespace glshap
