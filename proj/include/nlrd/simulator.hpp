#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlrd/fitting.hpp"
#include "nlrd/meanfield.hpp"
#include "nlrd/rng.hpp"
#include "nlrd/trace.hpp"

namespace nlrd::sim {

/// Configuration of a particle run in a periodic box of side L.
struct SimConfig {
    ModelParams params;
    double box = 0.0;
    int dim = 1;
    double dt = 0.0;  // <= 0 selects the documented auto timestep
    double t_max = 0.0;
    std::vector<double> record_times;
    std::uint64_t seed = 1;
    double pair_tol = 1e-4;
    std::size_t max_particles = 4000000;
    std::uint64_t config_hash = 0;

    void validate() const;

    /// Default timestep: min(0.1/(R lam^d V_d^-1 n r_c^d), 0.05/(D lam^2),
    /// 0.1/(D max(M, Q, B L^d / N))) over the terms whose rates are present.
    double auto_dt() const;
};

/// Particle positions (flat array, stride dim) plus RNG state and time.
struct SimState {
    std::vector<double> positions;
    int dim = 1;
    double t = 0.0;
    rng::Philox gen{1};

    std::size_t count() const { return positions.size() / dim; }
};

/// Values step() needs that are expensive to derive from the config
/// (kernel truncation radius, resolved dt). Built once per run.
struct StepContext {
    double dt = 0.0;
    double r_c = 0.0;
    StepContext() = default;
    explicit StepContext(const SimConfig& config);
};

/// Poisson(n0 L^d) particles placed i.i.d. uniformly in the box.
SimState init_poisson(const SimConfig& config, rng::Philox& gen);

/// One timestep: diffusion, pairwise annihilation (cell-list search,
/// minimum image, random-order conflict resolution), death, branching with
/// kernel-sampled offspring displacement, uniform birth.
void step(SimState& state, const SimConfig& config, const StepContext& ctx);
void step(SimState& state, const SimConfig& config);

/// Full run recording density at the configured record times
/// (snapped up to step boundaries). Same seed gives a bit-identical trace.
DensityTrace run(const SimConfig& config);

/// Replica-averaged trace with standard errors; replica i runs with
/// seed ^ i, replicas execute in parallel.
DensityTrace run_replicas(const SimConfig& config, int n_rep);

/// Least-squares slope of log(density) vs log(t) over [t_lo, t_hi].
FitResult fit_decay_exponent(const DensityTrace& trace, double t_lo, double t_hi);

/// Minimum-image metric on the d-torus of side L.
double min_image_distance(const double* a, const double* b, int dim, double L);

/// Per-step annihilation probability for a pair at separation r.
double pair_annihilation_probability(double r, const Kernel& Rk, double dt);

/// Binary snapshot: 16-byte header {magic "NLRD", u32 dim, u64 count}
/// followed by count*dim little-endian 64-bit floats.
void save_snapshot(const std::string& path, const SimState& state);
SimState load_snapshot(const std::string& path, std::uint64_t seed);

}  // namespace nlrd::sim
