#pragma once

#include "sunco/homotopy.hpp"

#include <nlohmann/json_fwd.hpp>
#include <string>

namespace sunco {

using Json = nlohmann::json;

// Complex files: {"ambient_dim": d, "vertices": [["a/b", ...], ...],
// "facets": [[i, ...], ...], "labels": [...]?}. Rationals are "a/b" or "a"
// strings and are normalized on input, never rejected for being unreduced.
Json complex_to_json(const Complex& k);
Complex complex_from_json(const Json& j);

Json partition_to_json(const Partition& p);

// Problem files bundle X (with labels), Q, the two level ladders and the
// vertex map of F. Tower vertices are indexed level-major:
// id = level_index * |V| + vertex_index.
Json problem_to_json(const Concordance& c, const std::string& name, uint64_t seed);
Concordance problem_from_json(const Json& j);

Json gp_report_to_json(const GPReport& rep);

// The certificate bundle: configuration, problem echo, the sunny and stable
// collapses with their certificates and filtrations, endpoint data and the
// verification report. cmd_verify consumes exactly this format.
Json bundle_to_json(const PipelineResult& res, const RunConfig& cfg, const Json& problem_echo);

struct LoadedBundle {
    RunConfig cfg;
    Json problem;
    Json raw;
};

Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

// Independent re-check of a bundle: rebuilds the pipeline data structures
// deterministically from the embedded problem and configuration, replays both
// collapse sequences step by step, re-decides every recorded overshadow fact,
// re-evaluates witnesses, and re-runs the endpoint/level verification.
// Returns a list of discrepancies (empty = verified).
std::vector<std::string> verify_bundle(const Json& bundle);

Json run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const Json& j);

}  // namespace sunco
