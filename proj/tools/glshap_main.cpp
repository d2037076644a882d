#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "glshap/errors.hpp"
#include "glshap/io.hpp"
#include "glshap/kernel_model.hpp"
#include "glshap/kernels.hpp"
#include "glshap/parallel.hpp"
#include "glshap/product_game.hpp"
#include "glshap/quadrature.hpp"
#include "glshap/reports.hpp"
#include "glshap/synthetic.hpp"
#include "glshap/tree_explain.hpp"
#include "glshap/tree_model.hpp"
#include "glshap/version.hpp"

namespace {

using nlohmann::json;

struct Options {
  int budget = 0;  // 0: derived from the model dimension
  bool exact = false;
  int cap = glshap::kDefaultBudgetCap;
  int threads = 1;
  std::uint64_t seed = 42;
  double timeout_s = 300.0;
  bool csv = false;
  double tolerance = 1e-9;
  std::string out_path;  // empty: stdout
};

// 0 success, 1 usage/parse, 2 verification failure
int g_exit = 0;

int resolve_budget(std::size_t d, const Options& o) {
  if (o.budget > 0) return o.budget;
  int half = std::max(1, (static_cast<int>(d) + 1) / 2);
  if (o.exact) return half;
  return glshap::default_budget(d, o.cap);
}

std::string basename_of(const std::string& path) {
  std::size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

json config_json(const Options& o, const std::string& command) {
  return json{{"command", command},
              {"budget", o.budget},
              {"exact", o.exact},
              {"cap", o.cap},
              {"threads", o.threads},
              {"seed", o.seed},
              {"timeout_s", o.timeout_s},
              {"tolerance", o.tolerance},
              {"backend", glshap::kernels::backend_name()}};
}

void emit(const Options& o, const std::string& command, json body,
          const std::string& csv_text) {
  std::string text;
  if (o.csv) {
    text = "# glshap " + std::string(glshap::kVersion) + " " + command +
           " seed=" + std::to_string(o.seed) + "\n" + csv_text;
  } else {
    body["version"] = glshap::kVersion;
    body["config"] = config_json(o, command);
    text = glshap::io::to_json_string(body);
  }
  if (o.out_path.empty())
    std::cout << text;
  else
    glshap::io::write_text_file(o.out_path, text);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::fabs(a[i] - b[i]));
  return worst;
}

void attach_oracle(json& out, const Options& o, const std::vector<double>& phi,
                   const glshap::Attribution& oracle) {
  double disc = max_abs_diff(phi, oracle.phi);
  out["oracle_phi"] = oracle.phi;
  out["max_abs_discrepancy"] = disc;
  if (disc > o.tolerance) g_exit = 2;
}

glshap::BudgetPolicy tree_policy(const Options& o) {
  glshap::BudgetPolicy policy;
  if (o.budget > 0) {
    policy.mode = glshap::BudgetPolicy::Mode::fixed;
    policy.fixed_budget = o.budget;
  } else {
    policy.mode = glshap::BudgetPolicy::Mode::exact;
    policy.cap = o.exact ? std::numeric_limits<int>::max() : o.cap;
  }
  return policy;
}

std::vector<double> matrix_row(const glshap::Matrix& m, std::size_t r) {
  return std::vector<double>(m.row(r), m.row(r) + m.cols);
}

void run_rule(const Options& o, int order) {
  auto rule = glshap::cached_rule(order);
  json out{{"order", rule->order}, {"nodes", rule->nodes}, {"weights", rule->weights}};
  std::string csv = "node,weight\n";
  for (int i = 0; i < rule->order; ++i)
    csv += glshap::io::format_double(rule->nodes[i]) + "," +
           glshap::io::format_double(rule->weights[i]) + "\n";
  emit(o, "rule", std::move(out), csv);
}

void run_explain_game(const Options& o, const std::string& factors_path, bool oracle) {
  glshap::ProductGame game{glshap::io::read_vector_any(factors_path)};
  auto rule = glshap::cached_rule(resolve_budget(game.dimension(), o));
  glshap::Attribution a = glshap::shapley_quadrature(game, *rule);
  json out{{"phi", a.phi}, {"budget", a.budget}, {"exact", a.exact}};
  if (oracle) attach_oracle(out, o, a.phi, glshap::shapley_bruteforce(game));
  emit(o, "explain-game", std::move(out), glshap::io::csv_row(a.phi) + "\n");
}

void run_explain_kernel(const Options& o, const std::string& model_path,
                        const std::string& x_path, bool oracle) {
  glshap::io::LoadedModel lm = glshap::io::load_model(model_path);
  if (lm.kind != glshap::io::ModelKind::kernel)
    throw glshap::invalid_input("explain-kernel needs a kernel model file");
  std::vector<double> x = glshap::io::read_vector_any(x_path);
  int budget = resolve_budget(lm.kernel.train.cols, o);
  glshap::KernelExplanation e =
      glshap::explain_kernel(lm.kernel, x, budget, glshap::resolve_threads(o.threads));
  json out{{"phi", e.attribution.phi},
           {"base_value", e.base_value},
           {"budget", e.attribution.budget},
           {"exact", e.attribution.exact}};
  if (oracle) attach_oracle(out, o, e.attribution.phi, glshap::kernel_bruteforce(lm.kernel, x));
  emit(o, "explain-kernel", std::move(out), glshap::io::csv_row(e.attribution.phi) + "\n");
}

void run_explain_tree(const Options& o, const std::string& model_path,
                      const std::string& x_path, bool oracle, bool direct) {
  glshap::io::LoadedModel lm = glshap::io::load_model(model_path);
  if (lm.kind != glshap::io::ModelKind::tree_ensemble)
    throw glshap::invalid_input("explain-tree needs a tree model file");
  std::vector<double> x = glshap::io::read_vector_any(x_path);
  glshap::BudgetPolicy policy = tree_policy(o);

  glshap::Attribution a;
  if (direct) {
    a.phi.assign(lm.ensemble.feature_count, 0.0);
    a.exact = true;
    for (const glshap::TreeModel& tree : lm.ensemble.trees) {
      int order = glshap::tree_rule_order(tree, policy);
      auto rule = glshap::cached_rule(order);
      glshap::Attribution part = glshap::explain_tree_direct(tree, x, *rule);
      for (std::size_t j = 0; j < a.phi.size(); ++j) a.phi[j] += part.phi[j];
      a.budget = std::max(a.budget, part.budget);
      a.exact = a.exact && part.exact;
    }
  } else {
    a = glshap::explain_ensemble(lm.ensemble, x, policy, glshap::resolve_threads(o.threads));
  }
  json out{{"phi", a.phi}, {"budget", a.budget}, {"exact", a.exact}};
  if (oracle) attach_oracle(out, o, a.phi, glshap::ensemble_bruteforce(lm.ensemble, x));
  emit(o, "explain-tree", std::move(out), glshap::io::csv_row(a.phi) + "\n");
}

void run_oracle(const Options& o, const std::string& model_path,
                const std::string& x_path, const std::string& factors_path) {
  glshap::Attribution a;
  if (!factors_path.empty()) {
    a = glshap::shapley_bruteforce(glshap::ProductGame{glshap::io::read_vector_any(factors_path)});
  } else if (!model_path.empty()) {
    glshap::io::LoadedModel lm = glshap::io::load_model(model_path);
    std::vector<double> x = glshap::io::read_vector_any(x_path);
    a = lm.kind == glshap::io::ModelKind::kernel
            ? glshap::kernel_bruteforce(lm.kernel, x)
            : glshap::ensemble_bruteforce(lm.ensemble, x);
  } else {
    throw glshap::invalid_input("oracle needs --factors, or --model with --x");
  }
  json out{{"phi", a.phi}, {"method", "subset-enumeration"}};
  emit(o, "oracle", std::move(out), glshap::io::csv_row(a.phi) + "\n");
}

void run_verify_cmd(const Options& o, const std::string& model_path,
                    const std::string& data_path) {
  glshap::io::LoadedModel lm = glshap::io::load_model(model_path);
  glshap::Matrix data = glshap::io::read_matrix_any(data_path);
  const int threads = glshap::resolve_threads(o.threads);

  std::function<double(int)> violation_of_row;
  if (lm.kind == glshap::io::ModelKind::tree_ensemble) {
    glshap::BudgetPolicy policy = tree_policy(o);
    violation_of_row = [&, policy](int i) {
      std::vector<double> x = matrix_row(data, i);
      glshap::Attribution a = glshap::explain_ensemble(lm.ensemble, x, policy, threads);
      return glshap::efficiency_violation(lm.ensemble, x, a.phi);
    };
  } else {
    int budget = resolve_budget(lm.kernel.train.cols, o);
    violation_of_row = [&, budget](int i) {
      std::vector<double> x = matrix_row(data, i);
      glshap::KernelExplanation e = glshap::explain_kernel(lm.kernel, x, budget, threads);
      return glshap::kernel_efficiency_gap(lm.kernel, x, e.attribution.phi);
    };
  }

  glshap::reports::VerifyReport rep =
      glshap::reports::run_verify(static_cast<int>(data.rows), o.tolerance, violation_of_row);
  std::cerr << (rep.pass ? "PASS" : "FAIL") << " max violation "
            << glshap::io::format_double(rep.max_violation) << " over "
            << data.rows << " rows (tolerance "
            << glshap::io::format_double(rep.tolerance) << ")\n";
  emit(o, "verify", glshap::reports::to_json(rep), glshap::reports::to_csv(rep));
  if (!rep.pass) g_exit = 2;
}

void run_convergence_cmd(const Options& o, const std::string& model_path, int game_dim,
                         std::vector<int> budgets, int reference, int instances,
                         const std::string& data_path) {
  glshap::synthetic::Rng rng(o.seed);
  std::function<std::vector<double>(int, int)> explain;
  int dimension = 0;

  glshap::io::LoadedModel lm;
  std::vector<std::vector<double>> xs;
  std::vector<glshap::ProductGame> games;

  if (!model_path.empty()) {
    lm = glshap::io::load_model(model_path);
    dimension = lm.kind == glshap::io::ModelKind::kernel
                    ? static_cast<int>(lm.kernel.train.cols)
                    : lm.ensemble.feature_count;
    if (!data_path.empty()) {
      glshap::Matrix data = glshap::io::read_matrix_any(data_path);
      instances = static_cast<int>(data.rows);
      for (std::size_t r = 0; r < data.rows; ++r) xs.push_back(matrix_row(data, r));
    } else {
      for (int i = 0; i < instances; ++i)
        xs.push_back(glshap::synthetic::random_instance(rng, dimension));
    }
    const int threads = glshap::resolve_threads(o.threads);
    if (lm.kind == glshap::io::ModelKind::kernel) {
      explain = [&, threads](int i, int budget) {
        return glshap::explain_kernel(lm.kernel, xs[i], budget, threads).attribution.phi;
      };
    } else {
      explain = [&, threads](int i, int budget) {
        glshap::BudgetPolicy policy;
        policy.mode = glshap::BudgetPolicy::Mode::fixed;
        policy.fixed_budget = budget;
        return glshap::explain_ensemble(lm.ensemble, xs[i], policy, threads).phi;
      };
    }
  } else if (game_dim > 0) {
    dimension = game_dim;
    for (int i = 0; i < instances; ++i)
      games.push_back(glshap::synthetic::random_game(rng, game_dim, 0.5, 1.5));
    explain = [&](int i, int budget) {
      return glshap::shapley_quadrature(games[i], *glshap::cached_rule(budget)).phi;
    };
  } else {
    throw glshap::invalid_input("convergence needs --model or --game-dim");
  }

  if (budgets.empty()) budgets = glshap::reports::default_budget_grid(dimension);
  if (reference <= 0) reference = std::max(1, (dimension + 1) / 2);

  glshap::reports::ConvergenceReport rep =
      glshap::reports::run_convergence(dimension, std::move(budgets), reference, instances, explain);
  emit(o, "convergence", glshap::reports::to_json(rep), glshap::reports::to_csv(rep));
}

void run_bench_cmd(const Options& o, const std::string& model_path,
                   const std::string& data_path, int repeats, int instances) {
  glshap::io::LoadedModel lm = glshap::io::load_model(model_path);
  const int threads = glshap::resolve_threads(o.threads);

  std::vector<std::vector<double>> xs;
  if (!data_path.empty()) {
    glshap::Matrix data = glshap::io::read_matrix_any(data_path);
    for (std::size_t r = 0; r < data.rows; ++r) xs.push_back(matrix_row(data, r));
  } else {
    glshap::synthetic::Rng rng(o.seed);
    int d = lm.kind == glshap::io::ModelKind::kernel ? static_cast<int>(lm.kernel.train.cols)
                                                     : lm.ensemble.feature_count;
    for (int i = 0; i < instances; ++i)
      xs.push_back(glshap::synthetic::random_instance(rng, d));
  }

  std::function<std::vector<double>(int)> explain;
  std::function<double(int, const std::vector<double>&)> violation;
  if (lm.kind == glshap::io::ModelKind::tree_ensemble) {
    glshap::BudgetPolicy policy = tree_policy(o);
    explain = [&, policy](int i) {
      return glshap::explain_ensemble(lm.ensemble, xs[i], policy, threads).phi;
    };
    violation = [&](int i, const std::vector<double>& phi) {
      return glshap::efficiency_violation(lm.ensemble, xs[i], phi);
    };
  } else {
    int budget = resolve_budget(lm.kernel.train.cols, o);
    explain = [&, budget](int i) {
      return glshap::explain_kernel(lm.kernel, xs[i], budget, threads).attribution.phi;
    };
    violation = [&](int i, const std::vector<double>& phi) {
      return glshap::kernel_efficiency_gap(lm.kernel, xs[i], phi);
    };
  }

  glshap::reports::BenchOptions bopt;
  bopt.repeats = repeats;
  bopt.timeout_s = o.timeout_s;
  glshap::reports::BenchRow row = glshap::reports::run_bench(
      basename_of(model_path), static_cast<int>(xs.size()), bopt, explain, violation);
  emit(o, "bench", glshap::reports::to_json(row), glshap::reports::to_csv(row));
}

struct GenTreeArgs {
  int features = 10, trees = 1, depth = 8, leaves = 32;
};
struct GenKernelArgs {
  int n = 20, features = 8;
  std::string family = "rbf";
};
struct GenGameArgs {
  int features = 10;
  double lo = 0.5, hi = 1.5;
};
struct GenInstancesArgs {
  int features = 10, count = 10;
};

void run_gen_tree(const Options& o, const GenTreeArgs& a, const std::string& out_file) {
  glshap::synthetic::Rng rng(o.seed);
  glshap::TreeEnsemble ens =
      glshap::synthetic::random_ensemble(rng, a.features, a.trees, a.depth, a.leaves);
  glshap::io::write_text_file(out_file,
                              glshap::io::to_json_string(glshap::io::ensemble_to_json(ens)));
  std::cerr << "wrote " << out_file << " (trees=" << a.trees << " seed=" << o.seed << ")\n";
}

void run_gen_kernel(const Options& o, const GenKernelArgs& a, const std::string& out_file) {
  glshap::synthetic::Rng rng(o.seed);
  glshap::KernelFamily family;
  if (a.family == "rbf")
    family = glshap::KernelFamily::rbf;
  else if (a.family == "laplace")
    family = glshap::KernelFamily::laplace;
  else if (a.family == "polynomial")
    family = glshap::KernelFamily::polynomial;
  else
    throw glshap::invalid_input("unknown kernel family: " + a.family);
  glshap::ProductKernelModel model =
      glshap::synthetic::random_kernel_model(rng, a.n, a.features, family);
  glshap::io::write_text_file(out_file,
                              glshap::io::to_json_string(glshap::io::kernel_to_json(model)));
  std::cerr << "wrote " << out_file << " (n=" << a.n << " seed=" << o.seed << ")\n";
}

void run_gen_game(const Options& o, const GenGameArgs& a, const std::string& out_file) {
  glshap::synthetic::Rng rng(o.seed);
  glshap::ProductGame game = glshap::synthetic::random_game(rng, a.features, a.lo, a.hi);
  glshap::io::write_text_file(out_file,
                              glshap::io::to_json_string(json(game.factors)));
  std::cerr << "wrote " << out_file << " (d=" << a.features << " seed=" << o.seed << ")\n";
}

void run_gen_instances(const Options& o, const GenInstancesArgs& a,
                       const std::string& out_file) {
  glshap::synthetic::Rng rng(o.seed);
  std::string text;
  for (int i = 0; i < a.count; ++i)
    text += glshap::io::csv_row(glshap::synthetic::random_instance(rng, a.features)) + "\n";
  glshap::io::write_text_file(out_file, text);
  std::cerr << "wrote " << out_file << " (rows=" << a.count << " seed=" << o.seed << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shapley attributions for product-form games, product-kernel models, "
               "and tree ensembles"};
  app.set_version_flag("--version", glshap::kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--budget", o.budget, "Quadrature rule order (default: derived)");
  app.add_flag("--exact", o.exact, "Force the exact-regime order ceil(d/2), ignoring --cap");
  app.add_option("--cap", o.cap, "Ceiling for derived budgets")->default_val(400);
  app.add_option("--threads", o.threads, "Worker threads (0: all hardware threads)")
      ->default_val(1);
  app.add_option("--seed", o.seed, "Seed for synthetic generation")->default_val(42);
  app.add_option("--timeout-s", o.timeout_s, "Per-instance bench timeout in seconds")
      ->default_val(300.0);
  app.add_option("--tolerance", o.tolerance, "Verification threshold")->default_val(1e-9);
  bool json_flag = false;
  app.add_flag("--json", json_flag, "JSON output (default)");
  app.add_flag("--csv", o.csv, "CSV output");
  app.add_option("-o,--out", o.out_path, "Write the report here instead of stdout");

  // rule
  int rule_order = 0;
  CLI::App* rule = app.add_subcommand("rule", "Print a Gauss-Legendre rule on [0,1]");
  rule->add_option("order,--order", rule_order, "Rule order (point count)");
  rule->callback([&]() {
    int order = rule_order > 0 ? rule_order : o.budget;
    if (order < 1) throw glshap::budget_error("rule needs an order (positional or --budget)");
    run_rule(o, order);
  });

  // explain-game
  std::string eg_factors;
  bool eg_oracle = false;
  CLI::App* eg = app.add_subcommand("explain-game", "Explain a product game");
  eg->add_option("--factors", eg_factors, "Factors file (JSON array or CSV)")->required();
  eg->add_flag("--oracle", eg_oracle, "Also run the subset brute force and compare");
  eg->callback([&]() { run_explain_game(o, eg_factors, eg_oracle); });

  // explain-kernel
  std::string ek_model, ek_x;
  bool ek_oracle = false;
  CLI::App* ek = app.add_subcommand("explain-kernel", "Explain a product-kernel model");
  ek->add_option("--model", ek_model, "Kernel model JSON")->required();
  ek->add_option("--x", ek_x, "Instance file (JSON array or CSV)")->required();
  ek->add_flag("--oracle", ek_oracle, "Also run the subset brute force and compare");
  ek->callback([&]() { run_explain_kernel(o, ek_model, ek_x, ek_oracle); });

  // explain-tree
  std::string et_model, et_x;
  bool et_oracle = false, et_direct = false;
  CLI::App* et = app.add_subcommand("explain-tree", "Explain a tree ensemble");
  et->add_option("--model", et_model, "Tree model JSON")->required();
  et->add_option("--x", et_x, "Instance file (JSON array or CSV)")->required();
  et->add_flag("--oracle", et_oracle, "Also run the subset brute force and compare");
  et->add_flag("--direct", et_direct, "Use the per-leaf evaluator instead of the DFS");
  et->callback([&]() { run_explain_tree(o, et_model, et_x, et_oracle, et_direct); });

  // oracle
  std::string or_model, or_x, or_factors;
  CLI::App* orc = app.add_subcommand("oracle", "Exact Shapley values by subset enumeration");
  orc->add_option("--model", or_model, "Model JSON (tree or kernel)");
  orc->add_option("--x", or_x, "Instance file");
  orc->add_option("--factors", or_factors, "Product game factors file");
  orc->callback([&]() { run_oracle(o, or_model, or_x, or_factors); });

  // verify
  std::string vf_model, vf_data;
  CLI::App* vf = app.add_subcommand("verify", "Check the additivity residual over a data set");
  vf->add_option("--model", vf_model, "Model JSON")->required();
  vf->add_option("--data", vf_data, "Instances, one CSV row (or JSON array) each")->required();
  vf->callback([&]() { run_verify_cmd(o, vf_model, vf_data); });

  // convergence
  std::string cv_model, cv_data;
  int cv_game_dim = 0, cv_reference = 0, cv_instances = 5;
  std::vector<int> cv_budgets;
  CLI::App* cv = app.add_subcommand("convergence", "Error vs. rule order against a reference");
  cv->add_option("--model", cv_model, "Model JSON");
  cv->add_option("--game-dim", cv_game_dim, "Random product games of this dimension instead");
  cv->add_option("--budgets", cv_budgets, "Comma-separated rule orders")->delimiter(',');
  cv->add_option("--reference", cv_reference, "Reference order (default ceil(d/2))");
  cv->add_option("--instances", cv_instances, "Synthetic instance count")->default_val(5);
  cv->add_option("--data", cv_data, "Instance rows (overrides --instances)");
  cv->callback([&]() {
    run_convergence_cmd(o, cv_model, cv_game_dim, cv_budgets, cv_reference, cv_instances,
                        cv_data);
  });

  // bench
  std::string bn_model, bn_data;
  int bn_repeats = 3, bn_instances = 10;
  CLI::App* bn = app.add_subcommand("bench", "Per-instance timing with determinism checks");
  bn->add_option("--model", bn_model, "Model JSON")->required();
  bn->add_option("--data", bn_data, "Instance rows");
  bn->add_option("--repeats", bn_repeats, "Timed passes")->default_val(3);
  bn->add_option("--instances", bn_instances, "Synthetic instances when --data is absent")
      ->default_val(10);
  bn->callback([&]() { run_bench_cmd(o, bn_model, bn_data, bn_repeats, bn_instances); });

  // gen
  CLI::App* gen = app.add_subcommand("gen", "Write synthetic models and data");
  gen->require_subcommand(1);

  GenTreeArgs gt;
  std::string gt_out;
  CLI::App* gen_tree = gen->add_subcommand("tree", "Random tree ensemble");
  gen_tree->add_option("--features", gt.features)->default_val(10);
  gen_tree->add_option("--trees", gt.trees)->default_val(1);
  gen_tree->add_option("--depth", gt.depth)->default_val(8);
  gen_tree->add_option("--leaves", gt.leaves, "Leaf target per tree")->default_val(32);
  gen_tree->add_option("--out", gt_out, "Output path")->required();
  gen_tree->callback([&]() { run_gen_tree(o, gt, gt_out); });

  GenKernelArgs gk;
  std::string gk_out;
  CLI::App* gen_kernel = gen->add_subcommand("kernel", "Random product-kernel model");
  gen_kernel->add_option("--n", gk.n, "Training rows")->default_val(20);
  gen_kernel->add_option("--features", gk.features)->default_val(8);
  gen_kernel->add_option("--family", gk.family, "rbf | laplace | polynomial")
      ->default_val("rbf");
  gen_kernel->add_option("--out", gk_out, "Output path")->required();
  gen_kernel->callback([&]() { run_gen_kernel(o, gk, gk_out); });

  GenGameArgs gg;
  std::string gg_out;
  CLI::App* gen_game = gen->add_subcommand("game", "Random product game factors");
  gen_game->add_option("--features", gg.features)->default_val(10);
  gen_game->add_option("--lo", gg.lo)->default_val(0.5);
  gen_game->add_option("--hi", gg.hi)->default_val(1.5);
  gen_game->add_option("--out", gg_out, "Output path")->required();
  gen_game->callback([&]() { run_gen_game(o, gg, gg_out); });

  GenInstancesArgs gi;
  std::string gi_out;
  CLI::App* gen_inst = gen->add_subcommand("instances", "Random instance rows (CSV)");
  gen_inst->add_option("--features", gi.features)->default_val(10);
  gen_inst->add_option("--count", gi.count)->default_val(10);
  gen_inst->add_option("--out", gi_out, "Output path")->required();
  gen_inst->callback([&]() { run_gen_instances(o, gi, gi_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const glshap::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return g_exit;
}
