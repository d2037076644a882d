#ifndef GLSHAP_REPORTS_HPP
#define GLSHAP_REPORTS_HPP

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace glshap {
namespace reports {

// Mean/stddev of the l2 error against a fixed reference attribution, per
// budget, over a set of instances.
struct ConvergenceReport {
  int dimension = 0;
  int instances = 0;
  int reference_budget = 0;
  bool reference_exact = true;  // reference_budget >= ceil(dimension/2)
  std::vector<int> budgets;     // strictly increasing
  std::vector<double> mean_error;
  std::vector<double> std_error;
};

// explain(instance, budget) -> phi. The reference attribution is computed
// once per instance at reference_budget; errors are l2 distances to it.
ConvergenceReport run_convergence(
    int dimension, std::vector<int> budgets, int reference_budget, int instances,
    const std::function<std::vector<double>(int, int)>& explain);

// Ten geometrically spaced orders in [1, min(500, ceil(d/2))], deduplicated.
std::vector<int> default_budget_grid(int dimension);

struct VerifyReport {
  std::vector<double> violations;  // one per data row
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

VerifyReport run_verify(int instances, double tolerance,
                        const std::function<double(int)>& violation_of_row);

struct BenchRow {
  std::string model_id;
  int instances = 0;
  int repeats = 0;
  double mean_ms = 0.0;  // per instance, mean over repeats
  double std_ms = 0.0;   // sample std over repeats
  double max_violation = 0.0;
  bool timed_out = false;
  bool deterministic = true;  // phi bitwise stable across repeats
};

struct BenchOptions {
  int repeats = 3;
  double timeout_s = 300.0;  // per instance
};

// Runs one warm-up pass (untimed), then `repeats` timed passes over all
// instances. The violation and determinism checks use the same phi vectors
// the timed passes produced. A single instance running past timeout_s
// flags the row t/o and stops further passes.
BenchRow run_bench(const std::string& model_id, int instances, const BenchOptions& options,
                   const std::function<std::vector<double>(int)>& explain,
                   const std::function<double(int, const std::vector<double>&)>& violation);

nlohmann::json to_json(const ConvergenceReport& r);
nlohmann::json to_json(const VerifyReport& r);
nlohmann::json to_json(const BenchRow& r);
std::string to_csv(const ConvergenceReport& r);
std::string to_csv(const VerifyReport& r);
std::string to_csv(const BenchRow& r);

}  // namespace reports
}  // namespace glshap

#endif
