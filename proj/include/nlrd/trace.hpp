#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nlrd {

/// Time series of number density, from simulation or ODE integration.
struct DensityTrace {
    std::vector<double> times;
    std::vector<double> densities;
    std::vector<double> stderrs;  // empty unless replica-averaged
    int replicas = 1;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
};

/// FNV-1a 64-bit digest, used to stamp outputs with their resolved config.
std::uint64_t fnv1a64(const std::string& data);

/// Serialize as CSV. with_stderr selects the simulation schema
/// `t,density,stderr,n_replicas`; otherwise the plain `t,density`.
/// A leading `# config_digest=...` comment carries the config hash.
std::string trace_to_csv(const DensityTrace& trace, bool with_stderr);

/// Atomic file write: temp file in the target directory, then rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace nlrd
