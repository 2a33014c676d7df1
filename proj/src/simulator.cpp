#include "nlrd/simulator.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <thread>

#include "nlrd/errors.hpp"
#include "nlrd/specialfns.hpp"

namespace nlrd::sim {

namespace {

int env_thread_count() {
    if (const char* s = std::getenv("NLRD_THREADS")) {
        const int n = std::atoi(s);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 2;
}

double wrap(double x, double L) {
    x -= L * std::floor(x / L);
    if (x >= L) x -= L;  // guard the floor rounding edge
    return x;
}

}  // namespace

void SimConfig::validate() const {
    params.validate();
    if (dim < 1 || dim > 3) throw ValidationError("sim dim must be 1, 2 or 3");
    if (params.dim != static_cast<double>(dim))
        throw ValidationError("params.dim must equal sim dim");
    if (!(box > 0.0)) throw ValidationError("box side must be > 0");
    if (!(t_max > 0.0)) throw ValidationError("t_max must be > 0");
    if (dt < 0.0) throw ValidationError("dt must be >= 0");
    if (!(pair_tol > 0.0 && pair_tol < 1.0))
        throw ValidationError("pair_tol must lie in (0,1)");
    if (params.Rk.rate() > 0.0 && params.Rk.profile() == Profile::Local)
        throw ValidationError(
            "a delta-rate pair process is ill-defined in continuum; "
            "approximate Local with a Spherical kernel at large lambda");
    if (params.Qk.rate() > 0.0 && params.Qk.profile() == Profile::Local)
        throw ValidationError("branching offspring need a non-local kernel");
    if (params.Rk.rate() > 0.0) {
        const double rc = params.Rk.truncation_radius(pair_tol);
        if (box <= 10.0 * rc)
            throw ValidationError("box must exceed 10x the kernel truncation radius");
    }
}

double SimConfig::auto_dt() const {
    const double R = params.Rk.rate();
    const double D = params.D;
    double best = t_max / 1000.0;
    bool any = false;
    auto consider = [&](double v) {
        if (v > 0.0 && std::isfinite(v)) {
            best = any ? std::min(best, v) : v;
            any = true;
        }
    };
    if (R > 0.0 && params.Rk.profile() != Profile::Local) {
        const double lam = params.Rk.precision();
        const double rc = params.Rk.truncation_radius(pair_tol);
        const double vd = specialfns::ball_volume(dim);
        consider(0.1 / (R * std::pow(lam, dim) / vd * params.n0 * std::pow(rc, dim)));
    }
    double lam_max = 0.0;
    if (params.Rk.profile() != Profile::Local)
        lam_max = std::max(lam_max, params.Rk.precision());
    if (params.Qk.profile() != Profile::Local)
        lam_max = std::max(lam_max, params.Qk.precision());
    if (lam_max > 0.0) consider(0.05 / (D * lam_max * lam_max));
    const double n_expect = std::max(1.0, params.n0 * std::pow(box, dim));
    const double rate_coeff = std::max({params.M, params.Qk.rate() / D,
                                        params.B * std::pow(box, dim) / n_expect});
    if (rate_coeff > 0.0) consider(0.1 / (D * rate_coeff));
    return best;
}

StepContext::StepContext(const SimConfig& config) {
    dt = config.dt > 0.0 ? config.dt : config.auto_dt();
    r_c = config.params.Rk.rate() > 0.0
              ? config.params.Rk.truncation_radius(config.pair_tol)
              : 0.0;
}

SimState init_poisson(const SimConfig& config, rng::Philox& gen) {
    const double mean = config.params.n0 * std::pow(config.box, config.dim);
    const std::uint64_t n = gen.poisson(mean);
    if (n > config.max_particles)
        throw CapExceededError("init_poisson: " + std::to_string(n) +
                               " particles exceed the cap");
    SimState state;
    state.dim = config.dim;
    state.gen = gen;
    state.positions.resize(n * config.dim);
    for (double& x : state.positions) x = config.box * state.gen.uniform();
    return state;
}

double min_image_distance(const double* a, const double* b, int dim, double L) {
    double s = 0.0;
    for (int c = 0; c < dim; ++c) {
        double d = a[c] - b[c];
        d -= L * std::round(d / L);
        s += d * d;
    }
    return std::sqrt(s);
}

double pair_annihilation_probability(double r, const Kernel& Rk, double dt) {
    return -std::expm1(-Rk.real_space(r) * dt);
}

namespace {

// Pairwise annihilation pass. Collects the pairs whose per-step Bernoulli
// draw fired, shuffles them, then applies first-match-wins.
void annihilation_pass(SimState& state, const SimConfig& config,
                       const StepContext& ctx) {
    const double L = config.box;
    const int d = state.dim;
    const std::size_t n = state.count();
    if (n < 2 || ctx.r_c <= 0.0) return;
    const Kernel& Rk = config.params.Rk;
    const double rc2 = ctx.r_c * ctx.r_c;
    const double* pos = state.positions.data();

    std::vector<std::pair<std::uint32_t, std::uint32_t>> hits;

    auto try_pair = [&](std::uint32_t i, std::uint32_t j) {
        double s = 0.0;
        for (int c = 0; c < d; ++c) {
            double diff = pos[i * d + c] - pos[j * d + c];
            diff -= L * std::round(diff / L);
            s += diff * diff;
        }
        if (s > rc2) return;
        const double p = -std::expm1(-Rk.real_space(std::sqrt(s)) * ctx.dt);
        if (state.gen.uniform() < p) hits.emplace_back(i, j);
    };

    int ncell = static_cast<int>(std::floor(L / ctx.r_c));
    const int cap = std::max(
        3, static_cast<int>(std::ceil(std::pow(2.0 * n, 1.0 / d))));
    ncell = std::min(ncell, cap);

    if (ncell < 3) {
        for (std::uint32_t i = 0; i + 1 < n; ++i)
            for (std::uint32_t j = i + 1; j < n; ++j) try_pair(i, j);
    } else {
        const int total_cells = d == 1 ? ncell : d == 2 ? ncell * ncell
                                                        : ncell * ncell * ncell;
        std::vector<int> counts(total_cells + 1, 0);
        std::vector<std::uint32_t> order(n);
        std::vector<int> cell_of(n);
        const double inv_edge = ncell / L;
        for (std::size_t i = 0; i < n; ++i) {
            int idx = 0;
            for (int c = 0; c < d; ++c) {
                int cc = static_cast<int>(pos[i * d + c] * inv_edge);
                if (cc >= ncell) cc = ncell - 1;
                idx = idx * ncell + cc;
            }
            cell_of[i] = idx;
            ++counts[idx + 1];
        }
        for (int cidx = 0; cidx < total_cells; ++cidx) counts[cidx + 1] += counts[cidx];
        {
            std::vector<int> fill(counts.begin(), counts.end() - 1);
            for (std::size_t i = 0; i < n; ++i)
                order[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
        }

        // half-neighbor offsets (lexicographically positive)
        std::vector<std::array<int, 3>> offsets;
        for (int ox = -1; ox <= 1; ++ox)
            for (int oy = (d >= 2 ? -1 : 0); oy <= (d >= 2 ? 1 : 0); ++oy)
                for (int oz = (d >= 3 ? -1 : 0); oz <= (d >= 3 ? 1 : 0); ++oz) {
                    if (ox > 0 || (ox == 0 && oy > 0) ||
                        (ox == 0 && oy == 0 && oz > 0))
                        offsets.push_back({ox, oy, oz});
                }

        auto cell_index = [&](int cx, int cy, int cz) {
            int idx = cx;
            if (d >= 2) idx = idx * ncell + cy;
            if (d >= 3) idx = idx * ncell + cz;
            return idx;
        };

        for (int cx = 0; cx < ncell; ++cx) {
            for (int cy = 0; cy < (d >= 2 ? ncell : 1); ++cy) {
                for (int cz = 0; cz < (d >= 3 ? ncell : 1); ++cz) {
                    const int a = cell_index(cx, cy, cz);
                    // same-cell pairs
                    for (int u = counts[a]; u < counts[a + 1]; ++u)
                        for (int v = u + 1; v < counts[a + 1]; ++v)
                            try_pair(order[u], order[v]);
                    for (const auto& off : offsets) {
                        const int bx = (cx + off[0] + ncell) % ncell;
                        const int by = d >= 2 ? (cy + off[1] + ncell) % ncell : 0;
                        const int bz = d >= 3 ? (cz + off[2] + ncell) % ncell : 0;
                        const int b = cell_index(bx, by, bz);
                        for (int u = counts[a]; u < counts[a + 1]; ++u)
                            for (int v = counts[b]; v < counts[b + 1]; ++v)
                                try_pair(order[u], order[v]);
                    }
                }
            }
        }
    }

    if (hits.empty()) return;
    // random pair order, first match wins; each particle dies at most once
    for (std::size_t i = hits.size(); i > 1; --i) {
        const std::size_t j =
            static_cast<std::size_t>(state.gen.uniform() * i);
        std::swap(hits[i - 1], hits[j < i ? j : i - 1]);
    }
    std::vector<char> dead(n, 0);
    for (const auto& [i, j] : hits) {
        if (!dead[i] && !dead[j]) dead[i] = dead[j] = 1;
    }
    std::size_t w = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (dead[i]) continue;
        if (w != i)
            std::memcpy(&state.positions[w * d], &state.positions[i * d],
                        sizeof(double) * d);
        ++w;
    }
    state.positions.resize(w * d);
}

}  // namespace

void step(SimState& state, const SimConfig& config, const StepContext& ctx) {
    const double L = config.box;
    const int d = state.dim;
    const double dt = ctx.dt;
    const ModelParams& mp = config.params;

    // (1) diffusion
    if (mp.D > 0.0) {
        const double sigma = std::sqrt(2.0 * mp.D * dt);
        for (double& x : state.positions) x = wrap(x + sigma * state.gen.normal(), L);
    }

    // (2) annihilation
    if (mp.Rk.rate() > 0.0) annihilation_pass(state, config, ctx);

    // (3) death
    if (mp.M > 0.0) {
        const double p_death = -std::expm1(-mp.D * mp.M * dt);
        const std::size_t n = state.count();
        std::size_t w = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (state.gen.uniform() < p_death) continue;
            if (w != i)
                std::memcpy(&state.positions[w * d], &state.positions[i * d],
                            sizeof(double) * d);
            ++w;
        }
        state.positions.resize(w * d);
    }

    // (4) branching: survivors spawn kernel-displaced offspring
    if (mp.Qk.rate() > 0.0) {
        const double p_branch = -std::expm1(-mp.Qk.rate() * dt);
        const std::size_t n = state.count();
        std::vector<double> born;
        for (std::size_t i = 0; i < n; ++i) {
            if (state.gen.uniform() >= p_branch) continue;
            const auto disp = mp.Qk.sample_displacement(state.gen);
            for (int c = 0; c < d; ++c)
                born.push_back(wrap(state.positions[i * d + c] + disp[c], L));
        }
        state.positions.insert(state.positions.end(), born.begin(), born.end());
    }

    // (5) spontaneous birth
    if (mp.B > 0.0) {
        const double mean = mp.D * mp.B * std::pow(L, d) * dt;
        const std::uint64_t n_new = state.gen.poisson(mean);
        for (std::uint64_t i = 0; i < n_new; ++i)
            for (int c = 0; c < d; ++c)
                state.positions.push_back(L * state.gen.uniform());
    }

    if (state.count() > config.max_particles)
        throw CapExceededError("particle cap exceeded at t = " +
                               std::to_string(state.t));
    state.t += dt;
}

void step(SimState& state, const SimConfig& config) {
    const StepContext ctx(config);
    step(state, config, ctx);
}

DensityTrace run(const SimConfig& config) {
    config.validate();
    const StepContext ctx(config);
    const double vol = std::pow(config.box, config.dim);

    rng::Philox seeder(config.seed);
    SimState state = init_poisson(config, seeder);

    // snap record times up to step boundaries (identical for every replica)
    std::vector<long> record_steps;
    for (double tr : config.record_times) {
        if (tr < 0.0 || tr > config.t_max + 0.5 * ctx.dt) continue;
        record_steps.push_back(
            static_cast<long>(std::ceil(tr / ctx.dt - 1e-9)));
    }
    std::sort(record_steps.begin(), record_steps.end());
    record_steps.erase(std::unique(record_steps.begin(), record_steps.end()),
                       record_steps.end());

    DensityTrace trace;
    trace.seed = config.seed;
    trace.config_hash = config.config_hash;
    std::size_t next = 0;
    long stp = 0;
    if (next < record_steps.size() && record_steps[next] == 0) {
        trace.times.push_back(0.0);
        trace.densities.push_back(state.count() / vol);
        ++next;
    }
    const long last_step = record_steps.empty() ? 0 : record_steps.back();
    while (next < record_steps.size() && stp < last_step) {
        step(state, config, ctx);
        ++stp;
        if (record_steps[next] == stp) {
            trace.times.push_back(stp * ctx.dt);
            trace.densities.push_back(state.count() / vol);
            ++next;
        }
    }
    return trace;
}

DensityTrace run_replicas(const SimConfig& config, int n_rep) {
    if (n_rep < 1) throw ValidationError("n_rep must be >= 1");
    if (n_rep == 1) return run(config);

    std::vector<DensityTrace> traces(n_rep);
    const int workers = std::min(env_thread_count(), n_rep);
    std::atomic<int> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const int i = cursor.fetch_add(1);
                if (i >= n_rep) return;
                try {
                    SimConfig cfg = config;
                    cfg.seed = config.seed ^ static_cast<std::uint64_t>(i);
                    traces[i] = run(cfg);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);

    DensityTrace avg;
    avg.seed = config.seed;
    avg.config_hash = config.config_hash;
    avg.replicas = n_rep;
    avg.times = traces[0].times;
    const std::size_t m = avg.times.size();
    avg.densities.assign(m, 0.0);
    avg.stderrs.assign(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double mean = 0.0;
        for (const auto& tr : traces) mean += tr.densities[j];
        mean /= n_rep;
        double ss = 0.0;
        for (const auto& tr : traces) {
            const double e = tr.densities[j] - mean;
            ss += e * e;
        }
        avg.densities[j] = mean;
        avg.stderrs[j] = std::sqrt(ss / (static_cast<double>(n_rep) *
                                         std::max(1, n_rep - 1)));
    }
    return avg;
}

FitResult fit_decay_exponent(const DensityTrace& trace, double t_lo, double t_hi) {
    return fit_loglog(trace.times, trace.densities, t_lo, t_hi, 8);
}

void save_snapshot(const std::string& path, const SimState& state) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot open snapshot file: " + path);
    const char magic[4] = {'N', 'L', 'R', 'D'};
    const std::uint32_t dim = static_cast<std::uint32_t>(state.dim);
    const std::uint64_t count = state.count();
    f.write(magic, 4);
    f.write(reinterpret_cast<const char*>(&dim), 4);
    f.write(reinterpret_cast<const char*>(&count), 8);
    f.write(reinterpret_cast<const char*>(state.positions.data()),
            static_cast<std::streamsize>(sizeof(double) * state.positions.size()));
    if (!f) throw ValidationError("snapshot write failed: " + path);
}

SimState load_snapshot(const std::string& path, std::uint64_t seed) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open snapshot file: " + path);
    char magic[4];
    std::uint32_t dim = 0;
    std::uint64_t count = 0;
    f.read(magic, 4);
    f.read(reinterpret_cast<char*>(&dim), 4);
    f.read(reinterpret_cast<char*>(&count), 8);
    if (!f || std::memcmp(magic, "NLRD", 4) != 0)
        throw ValidationError("bad snapshot header: " + path);
    if (dim < 1 || dim > 3) throw ValidationError("bad snapshot dim");
    SimState state;
    state.dim = static_cast<int>(dim);
    state.gen = rng::Philox(seed);
    state.positions.resize(count * dim);
    f.read(reinterpret_cast<char*>(state.positions.data()),
           static_cast<std::streamsize>(sizeof(double) * state.positions.size()));
    if (!f) throw ValidationError("truncated snapshot: " + path);
    return state;
}

}  // namespace nlrd::sim
