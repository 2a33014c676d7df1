#include "nlrd/config.hpp"

#include <cmath>
#include <fstream>

#include "nlrd/errors.hpp"
#include "nlrd/trace.hpp"

namespace nlrd::config {

Kernel kernel_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("kernel config must be an object");
    for (const auto& key : {"profile", "rate", "dim"})
        if (!j.contains(key))
            throw ValidationError(std::string("kernel config missing field: ") + key);
    const Profile profile = profile_from_string(j.at("profile").get<std::string>());
    const double rate = j.at("rate").get<double>();
    const double lambda =
        profile == Profile::Local ? j.value("lambda", 1.0) : j.at("lambda").get<double>();
    const double dim = j.at("dim").get<double>();
    return Kernel(profile, rate, lambda, dim);
}

json kernel_to_json(const Kernel& k) {
    return json{{"profile", to_string(k.profile())},
                {"rate", k.rate()},
                {"lambda", k.precision()},
                {"dim", k.dim()}};
}

json model_params_to_json(const ModelParams& p) {
    return json{{"D", p.D},          {"R", kernel_to_json(p.Rk)},
                {"Q", kernel_to_json(p.Qk)},
                {"M_over_D", p.M},   {"B_over_D", p.B},
                {"n0", p.n0},        {"dim", p.dim}};
}

ModelParams model_params_from_json(const json& j) {
    for (const auto& key : {"D", "R", "dim"})
        if (!j.contains(key))
            throw ValidationError(std::string("model params missing field: ") + key);
    const double dim = j.at("dim").get<double>();
    const Kernel Rk = kernel_from_json(j.at("R"));
    const Kernel Qk = j.contains("Q") ? kernel_from_json(j.at("Q"))
                                      : Kernel(Profile::Local, 0.0, 1.0, dim);
    ModelParams p{j.at("D").get<double>(),
                  Rk,
                  Qk,
                  j.value("M_over_D", 0.0),
                  j.value("B_over_D", 0.0),
                  j.value("n0", 0.0),
                  dim};
    p.validate();
    return p;
}

SimRun sim_run_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("sim config must be an object");
    const int version = j.value("schema_version", kSchemaVersion);
    if (version != kSchemaVersion)
        throw ValidationError("unsupported schema_version " + std::to_string(version));
    for (const auto& key : {"box", "t_max", "seed"})
        if (!j.contains(key))
            throw ValidationError(std::string("sim config missing field: ") + key);

    SimRun run;
    run.config.params = model_params_from_json(j);
    run.config.dim = static_cast<int>(run.config.params.dim);
    run.config.box = j.at("box").get<double>();
    run.config.t_max = j.at("t_max").get<double>();
    run.config.dt = j.value("dt", 0.0);
    run.config.seed = j.at("seed").get<std::uint64_t>();
    run.config.pair_tol = j.value("pair_tol", 1e-4);
    run.config.max_particles = j.value("max_particles", std::uint64_t{4000000});
    run.replicas = j.value("replicas", 1);

    if (j.contains("record_times")) {
        run.config.record_times = j.at("record_times").get<std::vector<double>>();
    } else {
        const double per_decade = j.value("record_per_decade", 20.0);
        const double t_min = j.value("t_record_min", 1.0);
        std::vector<double> times{0.0};
        const double f = std::pow(10.0, 1.0 / per_decade);
        for (double t = t_min; t <= run.config.t_max * (1.0 + 1e-12); t *= f)
            times.push_back(t);
        run.config.record_times = times;
    }
    run.config.validate();
    return run;
}

json resolved_sim_run(const SimRun& run) {
    const sim::SimConfig& c = run.config;
    json j = model_params_to_json(c.params);
    j["schema_version"] = kSchemaVersion;
    j["box"] = c.box;
    j["t_max"] = c.t_max;
    j["dt"] = c.dt > 0.0 ? c.dt : c.auto_dt();
    j["dt_mode"] = c.dt > 0.0 ? "explicit" : "auto";
    j["seed"] = c.seed;
    j["pair_tol"] = c.pair_tol;
    j["max_particles"] = c.max_particles;
    j["replicas"] = run.replicas;
    j["record_times"] = c.record_times;
    return j;
}

json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot open config file: " + path);
    json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw ValidationError("config parse error in " + path + ": " + e.what());
    }
    return j;
}

std::uint64_t emit_resolved_config(const std::string& out_path, const json& resolved) {
    const std::string dump = resolved.dump(2);
    write_file_atomic(out_path + ".resolved.json", dump + "\n");
    return fnv1a64(dump);
}

}  // namespace nlrd::config
