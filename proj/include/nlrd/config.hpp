#pragma once

#include <string>

#include <json.hpp>

#include "nlrd/meanfield.hpp"
#include "nlrd/simulator.hpp"

namespace nlrd::config {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Kernel config fragment: {"profile": ..., "rate": ..., "lambda": ..., "dim": ...}
Kernel kernel_from_json(const json& j);
json kernel_to_json(const Kernel& k);

json model_params_to_json(const ModelParams& p);
ModelParams model_params_from_json(const json& j);

/// Simulation config. Required: model params, box, dim, t_max, seed.
/// Optional with defaults: dt (auto), record_per_decade, t_record_min,
/// pair_tol, max_particles, replicas.
struct SimRun {
    sim::SimConfig config;
    int replicas = 1;
};

SimRun sim_run_from_json(const json& j);

/// Resolved config with every default filled in; its dump feeds the digest.
json resolved_sim_run(const SimRun& run);

json load_json_file(const std::string& path);

/// Write the resolved config next to an output file (<out>.resolved.json)
/// and return its FNV-1a digest.
std::uint64_t emit_resolved_config(const std::string& out_path, const json& resolved);

}  // namespace nlrd::config
