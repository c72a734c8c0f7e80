#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crowdrank/csv.hpp"
#include "crowdrank/errors.hpp"
#include "crowdrank/fit.hpp"
#include "crowdrank/init.hpp"
#include "crowdrank/metrics.hpp"
#include "crowdrank/models.hpp"
#include "crowdrank/params_io.hpp"
#include "crowdrank/simulation.hpp"
#include "json.hpp"

using nlohmann::json;
using namespace crowdrank;

namespace {

struct FitOptions {
  std::string model;
  std::string data_path;
  std::string gold_path;
  std::string out_path;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  int max_iterations = 1000;
  double tolerance = 1e-5;
  std::optional<double> l1_penalty;
};

FitConfig to_fit_config(const FitOptions& opt) {
  FitConfig cfg;
  cfg.regularization_lambda = opt.lambda;
  cfg.seed = opt.seed;
  cfg.max_iterations = opt.max_iterations;
  cfg.gradient_tolerance = opt.tolerance;
  cfg.l1_penalty = opt.l1_penalty;
  return cfg;
}

std::vector<ModelKind> parse_models(const std::string& csv) {
  std::vector<ModelKind> models;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = csv.find(',', start);
    const std::string token =
        csv.substr(start, comma == std::string::npos ? std::string::npos
                                                     : comma - start);
    if (!token.empty()) models.push_back(model_kind_from_string(token));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (models.empty()) throw Error("InvalidModel", "no models given");
  return models;
}

SpammerSpec parse_spammer_spec(const std::string& path, int feature_dim) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot read '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  SpammerSpec spec;
  if (doc.contains("kinds")) {
    spec.kinds.clear();
    for (const json& entry : doc.at("kinds")) {
      SpammerPolicy policy;
      const std::string kind = entry.at("kind").get<std::string>();
      if (kind == "side") {
        policy.kind = SpammerPolicy::Kind::SideBias;
        policy.left = entry.value("side", std::string("left")) == "left";
      } else if (kind == "attribute") {
        policy.kind = SpammerPolicy::Kind::AttributeBias;
        // feature columns are named f_1..f_M; the spec uses the 1-based index
        const int feature = entry.at("feature").get<int>();
        if (feature < 1 || feature > feature_dim)
          throw UnknownFeature("feature index " + std::to_string(feature) +
                               " outside f_1..f_" +
                               std::to_string(feature_dim));
        policy.feature = feature - 1;
      } else {
        throw ParseError(path + ": unknown spammer kind '" + kind + "'");
      }
      policy.weight = entry.value("weight", 1.0);
      spec.kinds.push_back(policy);
    }
  }
  if (doc.contains("fractions"))
    spec.fractions = doc.at("fractions").get<std::vector<double>>();
  spec.trials = doc.value("trials", 10);
  spec.tasks_per_spammer = doc.value("tasks_per_spammer", 0);
  return spec;
}

int run_validate(const std::string& data_path) {
  const Dataset ds = read_comparisons_csv(data_path);
  json out;
  out["items"] = ds.num_items();
  out["workers"] = ds.num_workers();
  out["feature_dim"] = ds.feature_dim;
  out["comparisons"] = ds.num_comparisons();
  std::cout << out.dump() << '\n';
  return 0;
}

int run_fit(const FitOptions& opt) {
  Dataset ds = read_comparisons_csv(opt.data_path);
  if (!opt.gold_path.empty()) attach_gold(ds, read_gold_csv(opt.gold_path));
  const ModelKind kind = model_kind_from_string(opt.model);
  const FitResult fit = fit_model(ds, kind, to_fit_config(opt));
  write_params_json(fit.params, &fit.report, opt.out_path);
  json out;
  out["model"] = opt.model;
  out["out"] = opt.out_path;
  out["iterations_used"] = fit.report.iterations_used;
  out["converged"] = fit.report.converged;
  if (std::isfinite(fit.report.final_objective))
    out["final_objective"] = fit.report.final_objective;
  out["final_gradient_norm"] = fit.report.final_gradient_norm;
  std::cout << out.dump() << '\n';
  return 0;
}

int run_eval(const std::string& params_path, const std::string& gold_path,
             const std::string& pairs_path, bool half_credit) {
  const auto [params, report] = read_params_json(params_path);
  json out;
  json records = json::array();
  out["model"] = to_string(params.kind);
  if (!gold_path.empty()) {
    const double value =
        accuracy(params, read_gold_csv(gold_path), half_credit);
    out["accuracy"] = value;
    records.push_back({{"metric", "accuracy"},
                       {"value", value},
                       {"model", to_string(params.kind)}});
  }
  if (!pairs_path.empty()) {
    const double value = system_win_prob(params, read_pairs_csv(pairs_path));
    out["system_win_prob"] = value;
    records.push_back({{"metric", "system_win_prob"},
                       {"value", value},
                       {"model", to_string(params.kind)}});
  }
  out["records"] = std::move(records);
  std::cout << out.dump() << '\n';
  return 0;
}

int run_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& truth_path, const std::string& gold_path,
                 const std::string& pairs_path) {
  std::ifstream in(config_path);
  if (!in) throw Error("IoError", "cannot read '" + config_path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError(config_path + ": " + e.what());
  }
  const std::string kind = doc.value("kind", std::string("factorbt"));

  Dataset dataset;
  ModelParams truth;
  std::vector<std::pair<std::string, std::string>> pairs;
  if (kind == "factorbt") {
    SimConfig cfg;
    cfg.n_items = doc.value("n_items", cfg.n_items);
    cfg.n_pairs = doc.value("n_pairs", cfg.n_pairs);
    cfg.n_workers = doc.value("n_workers", cfg.n_workers);
    cfg.votes_per_pair = doc.value("votes_per_pair", cfg.votes_per_pair);
    cfg.n_features = doc.value("n_features", cfg.n_features);
    cfg.include_side_feature =
        doc.value("include_side_feature", cfg.include_side_feature);
    cfg.seed = doc.value("seed", std::uint64_t{0});
    SimOutput sim = generate(cfg);
    dataset = std::move(sim.dataset);
    truth = std::move(sim.truth);
  } else if (kind == "serp") {
    SerpConfig cfg;
    cfg.n_queries = doc.value("n_queries", cfg.n_queries);
    cfg.n_workers = doc.value("n_workers", cfg.n_workers);
    cfg.votes_per_task = doc.value("votes_per_task", cfg.votes_per_task);
    cfg.better_offset = doc.value("better_offset", cfg.better_offset);
    cfg.seed = doc.value("seed", std::uint64_t{0});
    SerpOutput sim = generate_serp(cfg);
    dataset = std::move(sim.dataset);
    truth = std::move(sim.truth);
    pairs = std::move(sim.system_pairs);
  } else {
    throw ParseError(config_path + ": kind must be 'factorbt' or 'serp'");
  }

  write_comparisons_csv(dataset, out_path);
  if (!truth_path.empty()) write_params_json(truth, nullptr, truth_path);
  if (!gold_path.empty()) write_gold_csv(dataset.gold_by_id(), gold_path);
  if (!pairs_path.empty()) {
    if (pairs.empty())
      throw Error("InvalidArgument",
                  "--pairs output is only available for the serp generator");
    write_pairs_csv(pairs, pairs_path);
  }

  json out;
  out["kind"] = kind;
  out["items"] = dataset.num_items();
  out["workers"] = dataset.num_workers();
  out["comparisons"] = dataset.num_comparisons();
  out["out"] = out_path;
  std::cout << out.dump() << '\n';
  return 0;
}

int run_sweep(const FitOptions& opt, const std::string& spammers_path,
              const std::string& models_csv, const std::string& metric_name,
              const std::string& pairs_path, const std::string& out_path,
              int jobs) {
  Dataset ds = read_comparisons_csv(opt.data_path);
  if (!opt.gold_path.empty()) attach_gold(ds, read_gold_csv(opt.gold_path));
  const SpammerSpec spec = parse_spammer_spec(spammers_path, ds.feature_dim);
  const std::vector<ModelKind> models = parse_models(models_csv);

  SweepMetric metric;
  if (metric_name == "accuracy")
    metric = SweepMetric::Accuracy;
  else if (metric_name == "system_win_prob")
    metric = SweepMetric::SystemWinProb;
  else
    throw Error("InvalidMetric", "metric must be accuracy or system_win_prob");

  std::vector<std::pair<std::string, std::string>> pairs;
  if (!pairs_path.empty()) pairs = read_pairs_csv(pairs_path);

  const SweepResult result =
      robustness_sweep(ds, spec, models, metric, to_fit_config(opt),
                       pairs.empty() ? nullptr : &pairs, jobs);
  write_sweep_csv(result, out_path);

  int failed = 0;
  for (const SweepCell& cell : result.cells) failed += cell.ok ? 0 : 1;
  json out;
  out["cells"] = result.cells.size();
  out["failed"] = failed;
  out["out"] = out_path;
  std::cout << out.dump() << '\n';
  return 0;
}

int run_gradcheck(const FitOptions& opt) {
  const Dataset ds = read_comparisons_csv(opt.data_path);
  const ModelKind kind = model_kind_from_string(opt.model);
  if (kind != ModelKind::BT && kind != ModelKind::CrowdBT &&
      kind != ModelKind::FactorBT)
    throw Error("InvalidModel", "gradcheck applies to bt, crowdbt, factorbt");
  const FitConfig cfg = to_fit_config(opt);

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> scores(-1.5, 1.5);
  std::uniform_real_distribution<double> etas(0.1, 0.9);
  ModelParams params = init_default(kind, ds, cfg);
  for (double& s : params.scores) s = scores(rng);
  params.virtual_score = scores(rng);
  for (double& e : params.worker_eta) e = etas(rng);
  for (double& g : params.worker_gamma) g = scores(rng);
  for (auto& r : params.worker_reaction)
    for (double& v : r) v = scores(rng);

  const double err = max_gradient_error(ds, params, kind, cfg, 1e-5);
  json out;
  out["model"] = opt.model;
  out["max_relative_error"] = err;
  out["threshold"] = 1e-6;
  out["pass"] = err < 1e-6;
  std::cout << out.dump() << '\n';
  return err < 1e-6 ? 0 : 1;
}

int run_convert_reading(const std::string& in_path,
                        const std::string& out_path,
                        const std::string& gold_path) {
  const ReadingConversion conv = convert_reading_difficulty(in_path);
  write_comparisons_csv(conv.dataset, out_path);
  if (!gold_path.empty()) write_gold_csv(conv.gold, gold_path);
  json out;
  out["rows"] = conv.rows_total;
  out["dropped"] = conv.rows_dropped;
  out["comparisons"] = conv.dataset.num_comparisons();
  out["items"] = conv.dataset.num_items();
  out["workers"] = conv.dataset.num_workers();
  std::cout << out.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crowdrank: rank aggregation from crowdsourced pairwise "
               "comparisons with worker-bias modeling"};
  app.require_subcommand(1);

  std::string data_path, params_path, gold_path, pairs_path, out_path;
  std::string truth_path, config_path, spammers_path, in_path;
  std::string models_csv = "bt,crowdbt,factorbt,hits,linear";
  std::string metric_name = "accuracy";
  bool half_credit = false;
  int jobs = 1;
  FitOptions opt;

  CLI::App* validate = app.add_subcommand(
      "validate", "Check a comparison CSV and print its dimensions");
  validate->add_option("data", data_path, "canonical comparison CSV")
      ->required();

  CLI::App* fit =
      app.add_subcommand("fit", "Fit a model and write its parameters");
  fit->add_option("--model", opt.model, "bt|crowdbt|factorbt|hits|linear")
      ->required();
  fit->add_option("--data", opt.data_path, "canonical comparison CSV")
      ->required();
  fit->add_option("--gold", opt.gold_path, "gold CSV (attached, not fitted)");
  fit->add_option("--lambda", opt.lambda,
                  "virtual-node regularization strength");
  fit->add_option("--seed", opt.seed, "seed for stochastic steps");
  fit->add_option("--max-iter", opt.max_iterations, "iteration budget");
  fit->add_option("--tol", opt.tolerance, "gradient stopping tolerance");
  double l1 = -1.0;
  fit->add_option("--l1", l1, "linear model penalty; omit for CV selection");
  fit->add_option("--out", opt.out_path, "output params.json")->required();

  CLI::App* eval = app.add_subcommand(
      "eval", "Evaluate fitted parameters against gold and/or system pairs");
  eval->add_option("--params", params_path, "params.json from fit")
      ->required();
  eval->add_option("--gold", gold_path, "gold CSV for ranking accuracy");
  eval->add_option("--pairs", pairs_path, "system pair CSV for win prob");
  eval->add_flag("--half-credit", half_credit,
                 "score ties count 1/2 in accuracy");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Generate a synthetic study (factorbt or serp)");
  simulate->add_option("--config", config_path, "JSON generator config")
      ->required();
  simulate->add_option("--out", out_path, "output comparison CSV")->required();
  simulate->add_option("--truth", truth_path, "output true-parameter JSON");
  simulate->add_option("--gold", gold_path, "output gold CSV");
  simulate->add_option("--pairs", pairs_path, "output system-pair CSV (serp)");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Spammer-robustness grid over fractions x trials x models");
  sweep->add_option("--data", opt.data_path, "canonical comparison CSV")
      ->required();
  sweep->add_option("--gold", opt.gold_path, "gold CSV (accuracy metric)");
  sweep->add_option("--pairs", pairs_path, "system pairs (win-prob metric)");
  sweep->add_option("--spammers", spammers_path, "spammer spec JSON")
      ->required();
  sweep->add_option("--models", models_csv, "comma-separated model list");
  sweep->add_option("--metric", metric_name, "accuracy|system_win_prob");
  sweep->add_option("--out", out_path, "output sweep CSV")->required();
  sweep->add_option("--jobs", jobs, "parallel cells");
  sweep->add_option("--lambda", opt.lambda, "regularization strength");
  sweep->add_option("--seed", opt.seed, "base seed for the cell grid");
  sweep->add_option("--max-iter", opt.max_iterations, "iteration budget");
  sweep->add_option("--tol", opt.tolerance, "gradient stopping tolerance");

  CLI::App* gradcheck = app.add_subcommand(
      "gradcheck", "Audit analytic gradients against finite differences");
  gradcheck->add_option("--model", opt.model, "bt|crowdbt|factorbt")
      ->required();
  gradcheck->add_option("--data", opt.data_path, "canonical comparison CSV")
      ->required();
  gradcheck->add_option("--lambda", opt.lambda, "regularization strength");
  gradcheck->add_option("--seed", opt.seed, "seed for the random parameters");

  CLI::App* convert = app.add_subcommand(
      "convert-reading",
      "Convert a reading-difficulty export to the canonical schema");
  convert->add_option("--in", in_path, "raw CSV")->required();
  convert->add_option("--out", out_path, "canonical comparison CSV")
      ->required();
  convert->add_option("--gold", gold_path, "output gold CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return run_validate(data_path);
    if (fit->parsed()) {
      if (l1 >= 0.0) opt.l1_penalty = l1;
      return run_fit(opt);
    }
    if (eval->parsed())
      return run_eval(params_path, gold_path, pairs_path, half_credit);
    if (simulate->parsed())
      return run_simulate(config_path, out_path, truth_path, gold_path,
                          pairs_path);
    if (sweep->parsed())
      return run_sweep(opt, spammers_path, models_csv, metric_name,
                       pairs_path, out_path, jobs);
    if (gradcheck->parsed()) return run_gradcheck(opt);
    if (convert->parsed())
      return run_convert_reading(in_path, out_path, gold_path);
  } catch (const Error& e) {
    json err;
    err["error"] = {{"type", e.type()}, {"message", e.what()}};
    std::cout << err.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    json err;
    err["error"] = {{"type", "Internal"}, {"message", e.what()}};
    std::cout << err.dump() << '\n';
    return 1;
  }
  return 1;
}
