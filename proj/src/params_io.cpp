#include "crowdrank/params_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "crowdrank/errors.hpp"
#include "json.hpp"

namespace crowdrank {

namespace {

using nlohmann::json;

json worker_entry(const ModelParams& p, std::size_t w) {
  json entry = json::object();
  switch (p.kind) {
    case ModelKind::BT:
      break;
    case ModelKind::CrowdBT:
      entry["eta"] = p.worker_eta[w];
      break;
    case ModelKind::FactorBT:
      entry["gamma"] = p.worker_gamma[w];
      entry["reaction"] = p.worker_reaction[w];
      break;
    case ModelKind::PairwiseHITS:
      entry["ability"] = p.worker_ability[w];
      break;
    case ModelKind::Linear:
      entry["gamma"] = p.worker_gamma[w];
      break;
  }
  return entry;
}

}  // namespace

void write_params_json(const ModelParams& params, const OptimizerReport* report,
                       const std::string& path) {
  json doc;
  doc["format_version"] = 1;
  doc["model"] = to_string(params.kind);
  json scores = json::object();
  for (std::size_t i = 0; i < params.scores.size(); ++i)
    scores[params.item_ids[i]] = params.scores[i];
  doc["scores"] = std::move(scores);
  doc["virtual_score"] = params.virtual_score;
  json workers = json::object();
  for (std::size_t w = 0; w < params.worker_ids.size(); ++w)
    workers[params.worker_ids[w]] = worker_entry(params, w);
  doc["worker_params"] = std::move(workers);
  if (report) {
    json rep;
    rep["iterations_used"] = report->iterations_used;
    if (std::isfinite(report->final_objective))
      rep["final_objective"] = report->final_objective;
    rep["final_gradient_norm"] = report->final_gradient_norm;
    rep["converged"] = report->converged;
    doc["report"] = std::move(rep);
  }
  std::ofstream out(path);
  if (!out) throw Error("IoError", "cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

std::pair<ModelParams, OptimizerReport> read_params_json(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot read '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!doc.contains("format_version") || doc["format_version"].get<int>() != 1)
    throw ParseError(path + ": unsupported format_version");

  ModelParams p;
  p.kind = model_kind_from_string(doc.at("model").get<std::string>());
  for (const auto& [id, value] : doc.at("scores").items()) {
    p.item_ids.push_back(id);
    p.scores.push_back(value.get<double>());
  }
  p.virtual_score = doc.value("virtual_score", 0.0);
  if (doc.contains("worker_params")) {
    for (const auto& [id, entry] : doc.at("worker_params").items()) {
      p.worker_ids.push_back(id);
      switch (p.kind) {
        case ModelKind::BT:
          break;
        case ModelKind::CrowdBT:
          p.worker_eta.push_back(entry.at("eta").get<double>());
          break;
        case ModelKind::FactorBT:
          p.worker_gamma.push_back(entry.at("gamma").get<double>());
          p.worker_reaction.push_back(
              entry.at("reaction").get<std::vector<double>>());
          break;
        case ModelKind::PairwiseHITS:
          p.worker_ability.push_back(entry.at("ability").get<double>());
          break;
        case ModelKind::Linear:
          p.worker_gamma.push_back(entry.at("gamma").get<double>());
          break;
      }
    }
  }

  OptimizerReport rep;
  if (doc.contains("report")) {
    const json& r = doc["report"];
    rep.iterations_used = r.value("iterations_used", 0);
    rep.final_objective =
        r.contains("final_objective")
            ? r["final_objective"].get<double>()
            : std::numeric_limits<double>::quiet_NaN();
    rep.final_gradient_norm = r.value("final_gradient_norm", 0.0);
    rep.converged = r.value("converged", false);
  }
  return {std::move(p), rep};
}

}  // namespace crowdrank
