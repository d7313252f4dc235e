#ifndef RUINSIM_CONFIG_HPP
#define RUINSIM_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ruinsim/model.hpp"

namespace ruinsim {

inline constexpr const char* kVersion = "1.0.0";

struct RunConfig {
    uint64_t seed = 1;
    long n_paths = 100000;
    double delta_a = 1e-9;
    long n_max = 10000;
    double base_step = 0.0; // 0 = adaptive default
    int refinement = 0;
    std::string u_grid = "auto"; // or "geom:lo:hi:count"
    int workers = 0;             // 0 = hardware concurrency
    double a_floor = 1e-6;
    long direct_paths = 0; // 0 = max(n_paths/5, 10000)
};

struct AnalysisConfig {
    std::string k_policy = "sqrt"; // k = floor(sqrt(n)) for the Hill estimator
    bool nonarithmetic_assertion = false;
};

struct ExperimentConfig {
    int version = 1;
    LevyModel model;
    InterarrivalLaw interarrival = InterarrivalLaw::exponential(1.0);
    ClaimLaw claim = ClaimLaw::exponential(1.0);
    double c = 1.0;
    RunConfig run;
    AnalysisConfig analysis;
    nlohmann::json resolved; // canonical resolved form, embedded in manifests

    uint64_t config_hash() const; // FNV-1a over the canonical dump
};

// command-line / environment overrides applied on top of the file
struct ConfigOverrides {
    std::optional<uint64_t> seed;
    std::optional<int> workers;
    std::optional<long> n_paths;
    std::optional<std::string> u_grid;
};

// parses a config file or a manifest (a manifest re-runs its resolved config);
// parse errors carry line and field diagnostics
ExperimentConfig load_config(const std::string& path, const ConfigOverrides& ov = {});
ExperimentConfig parse_config(const nlohmann::json& j, const ConfigOverrides& ov = {});

// environment overrides RUINSIM_SEED / RUINSIM_WORKERS (weaker than flags)
ConfigOverrides env_overrides();

struct RunManifest {
    std::string command;
    std::string artifact_version = kVersion;
    uint64_t config_hash = 0;
    uint64_t seed = 0;
    int workers = 0;
    double wall_seconds = 0.0;
    long n_paths = 0;
    long flagged = 0;
    long censored = 0;
    std::vector<std::string> outputs;
    nlohmann::json resolved_config;

    void write(const std::string& path) const;
};

} // namespace ruinsim

#endif
