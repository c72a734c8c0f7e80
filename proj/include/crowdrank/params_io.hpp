#ifndef CROWDRANK_PARAMS_IO_HPP
#define CROWDRANK_PARAMS_IO_HPP

#include <string>
#include <utility>

#include "crowdrank/optimizer.hpp"
#include "crowdrank/types.hpp"

namespace crowdrank {

/// Writes fitted parameters as JSON (format_version 1):
///   { format_version, model, scores: {id: s}, virtual_score,
///     worker_params: {id: {...}}, report: {...} }
/// Doubles are serialized shortest-round-trip, so a read-back reproduces the
/// values bit-exactly.
void write_params_json(const ModelParams& params, const OptimizerReport* report,
                       const std::string& path);

std::pair<ModelParams, OptimizerReport> read_params_json(
    const std::string& path);

}  // namespace crowdrank

#endif  // CROWDRANK_PARAMS_IO_HPP
