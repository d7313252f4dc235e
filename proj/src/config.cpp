#include "ruinsim/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ruinsim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::invalid_argument("config: " + where + ": " + what);
}

double need_number(const json& j, const std::string& where, const char* key) {
    if (!j.contains(key)) fail(where, std::string("missing field '") + key + "'");
    if (!j[key].is_number()) fail(where + "." + key, "must be a number");
    return j[key].get<double>();
}

double opt_number(const json& j, const std::string& where, const char* key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number()) fail(where + "." + key, "must be a number");
    return j[key].get<double>();
}

std::string need_string(const json& j, const std::string& where, const char* key) {
    if (!j.contains(key)) fail(where, std::string("missing field '") + key + "'");
    if (!j[key].is_string()) fail(where + "." + key, "must be a string");
    return j[key].get<std::string>();
}

JumpMeasure parse_jumps(const json& j, const std::string& where) {
    JumpMeasure out;
    std::string fam = need_string(j, where, "family");
    if (fam == "none") {
        out.intensity = 0.0;
        return out;
    }
    out.intensity = need_number(j, where, "intensity");
    if (!(out.intensity > 0.0)) fail(where + ".intensity", "must be > 0 for family " + fam);
    if (fam == "atomic") {
        if (!j.contains("points") || !j["points"].is_array())
            fail(where, "atomic family needs a 'points' array");
        if (!j.contains("weights") || !j["weights"].is_array())
            fail(where, "atomic family needs a 'weights' array");
        out.law = JumpLaw::atomic(j["points"].get<std::vector<double>>(),
                                  j["weights"].get<std::vector<double>>());
    } else if (fam == "uniform") {
        out.law = JumpLaw::uniform_on_interval(need_number(j, where, "lo"),
                                               need_number(j, where, "hi"));
    } else if (fam == "double_exp_log") {
        out.law = JumpLaw::double_exponential_on_log(need_number(j, where, "eta_plus"),
                                                     need_number(j, where, "eta_minus"),
                                                     need_number(j, where, "p_up"));
    } else {
        fail(where + ".family", "unknown jump family '" + fam + "'");
    }
    return out;
}

InterarrivalLaw parse_interarrival(const json& j, const std::string& where) {
    std::string fam = need_string(j, where, "family");
    if (fam == "exponential") return InterarrivalLaw::exponential(need_number(j, where, "rate"));
    if (fam == "gamma")
        return InterarrivalLaw::gamma(need_number(j, where, "shape"),
                                      need_number(j, where, "rate"));
    if (fam == "deterministic")
        return InterarrivalLaw::deterministic(need_number(j, where, "value"));
    if (fam == "uniform")
        return InterarrivalLaw::uniform(need_number(j, where, "lo"), need_number(j, where, "hi"));
    fail(where + ".family", "unknown interarrival family '" + fam + "'");
}

ClaimLaw parse_claim(const json& j, const std::string& where) {
    std::string fam = need_string(j, where, "family");
    if (fam == "exponential") return ClaimLaw::exponential(need_number(j, where, "rate"));
    if (fam == "pareto")
        return ClaimLaw::pareto(need_number(j, where, "scale"), need_number(j, where, "alpha"));
    if (fam == "lognormal")
        return ClaimLaw::lognormal(need_number(j, where, "mu"), need_number(j, where, "sigma"));
    if (fam == "uniform")
        return ClaimLaw::uniform_bounded(need_number(j, where, "lo"),
                                         need_number(j, where, "hi"));
    fail(where + ".family", "unknown claim family '" + fam + "'");
}

json law_to_json(const InterarrivalLaw& law) {
    json j;
    std::visit(
        [&](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, InterarrivalLaw::Exponential>) {
                j = {{"family", "exponential"}, {"rate", f.rate}};
            } else if constexpr (std::is_same_v<F, InterarrivalLaw::Gamma>) {
                j = {{"family", "gamma"}, {"shape", f.shape}, {"rate", f.rate}};
            } else if constexpr (std::is_same_v<F, InterarrivalLaw::Deterministic>) {
                j = {{"family", "deterministic"}, {"value", f.value}};
            } else {
                j = {{"family", "uniform"}, {"lo", f.lo}, {"hi", f.hi}};
            }
        },
        law.family);
    return j;
}

json law_to_json(const ClaimLaw& law) {
    json j;
    std::visit(
        [&](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, ClaimLaw::Exponential>) {
                j = {{"family", "exponential"}, {"rate", f.rate}};
            } else if constexpr (std::is_same_v<F, ClaimLaw::Pareto>) {
                j = {{"family", "pareto"}, {"scale", f.scale}, {"alpha", f.alpha}};
            } else if constexpr (std::is_same_v<F, ClaimLaw::LogNormal>) {
                j = {{"family", "lognormal"}, {"mu", f.mu}, {"sigma", f.sigma}};
            } else {
                j = {{"family", "uniform"}, {"lo", f.lo}, {"hi", f.hi}};
            }
        },
        law.family);
    return j;
}

json jumps_to_json(const JumpMeasure& jm) {
    if (jm.empty()) return {{"family", "none"}};
    json j;
    std::visit(
        [&](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, JumpLaw::Atomic>) {
                j = {{"family", "atomic"},
                     {"intensity", jm.intensity},
                     {"points", f.points},
                     {"weights", f.weights}};
            } else if constexpr (std::is_same_v<F, JumpLaw::UniformOnInterval>) {
                j = {{"family", "uniform"}, {"intensity", jm.intensity}, {"lo", f.lo},
                     {"hi", f.hi}};
            } else {
                j = {{"family", "double_exp_log"},
                     {"intensity", jm.intensity},
                     {"eta_plus", f.eta_plus},
                     {"eta_minus", f.eta_minus},
                     {"p_up", f.p_up}};
            }
        },
        jm.law->family);
    return j;
}

} // namespace

uint64_t ExperimentConfig::config_hash() const {
    std::string dump = resolved.dump();
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

ConfigOverrides env_overrides() {
    ConfigOverrides ov;
    if (const char* s = std::getenv("RUINSIM_SEED")) ov.seed = std::strtoull(s, nullptr, 10);
    if (const char* s = std::getenv("RUINSIM_WORKERS"))
        ov.workers = static_cast<int>(std::strtol(s, nullptr, 10));
    return ov;
}

ExperimentConfig parse_config(const json& input, const ConfigOverrides& ov) {
    const json& j = input.contains("resolved_config") ? input["resolved_config"] : input;

    ExperimentConfig cfg;
    if (j.contains("version")) {
        if (!j["version"].is_number_integer()) fail("version", "must be an integer");
        cfg.version = j["version"].get<int>();
        if (cfg.version != 1) fail("version", "unsupported version");
    }
    if (!j.contains("model")) fail("model", "missing block");
    if (!j.contains("insurance")) fail("insurance", "missing block");
    const json& jm = j["model"];
    const json& ji = j["insurance"];

    double a = need_number(jm, "model", "a");
    double sigma2 = need_number(jm, "model", "sigma2");
    if (sigma2 < 0) fail("model.sigma2", "must be >= 0");
    JumpMeasure jumps =
        jm.contains("jumps") ? parse_jumps(jm["jumps"], "model.jumps") : JumpMeasure{};
    cfg.model = derive_log_price_model(a, sigma2, std::move(jumps));

    cfg.c = need_number(ji, "insurance", "c");
    if (!(cfg.c > 0)) fail("insurance.c", "must be > 0");
    if (!ji.contains("claim")) fail("insurance.claim", "missing block");
    if (!ji.contains("interarrival")) fail("insurance.interarrival", "missing block");
    cfg.claim = parse_claim(ji["claim"], "insurance.claim");
    cfg.interarrival = parse_interarrival(ji["interarrival"], "insurance.interarrival");

    if (j.contains("run")) {
        const json& jr = j["run"];
        cfg.run.seed = static_cast<uint64_t>(opt_number(jr, "run", "seed", 1));
        cfg.run.n_paths = static_cast<long>(opt_number(jr, "run", "n_paths", 100000));
        if (cfg.run.n_paths < 1) fail("run.n_paths", "must be >= 1");
        cfg.run.delta_a = opt_number(jr, "run", "delta_a", 1e-9);
        if (!(cfg.run.delta_a > 0 && cfg.run.delta_a < 1)) fail("run.delta_a", "must be in (0,1)");
        cfg.run.n_max = static_cast<long>(opt_number(jr, "run", "n_max", 10000));
        if (cfg.run.n_max < 1) fail("run.n_max", "must be >= 1");
        cfg.run.base_step = opt_number(jr, "run", "base_step", 0.0);
        if (cfg.run.base_step < 0) fail("run.base_step", "must be >= 0");
        cfg.run.refinement = static_cast<int>(opt_number(jr, "run", "refinement", 0));
        if (jr.contains("u_grid")) {
            if (!jr["u_grid"].is_string()) fail("run.u_grid", "must be a string");
            cfg.run.u_grid = jr["u_grid"].get<std::string>();
        }
        cfg.run.workers = static_cast<int>(opt_number(jr, "run", "workers", 0));
        cfg.run.a_floor = opt_number(jr, "run", "a_floor", 1e-6);
        if (!(cfg.run.a_floor > 0 && cfg.run.a_floor < 1)) fail("run.a_floor", "must be in (0,1)");
        cfg.run.direct_paths = static_cast<long>(opt_number(jr, "run", "direct_paths", 0));
    }
    if (j.contains("analysis")) {
        const json& ja = j["analysis"];
        if (ja.contains("k_policy")) {
            if (!ja["k_policy"].is_string()) fail("analysis.k_policy", "must be a string");
            cfg.analysis.k_policy = ja["k_policy"].get<std::string>();
            if (cfg.analysis.k_policy != "sqrt")
                fail("analysis.k_policy", "only 'sqrt' is supported");
        }
        if (ja.contains("nonarithmetic_assertion")) {
            if (!ja["nonarithmetic_assertion"].is_boolean())
                fail("analysis.nonarithmetic_assertion", "must be a boolean");
            cfg.analysis.nonarithmetic_assertion = ja["nonarithmetic_assertion"].get<bool>();
        }
    }

    // overrides: flags beat environment beats file (callers pre-merge env)
    if (ov.seed) cfg.run.seed = *ov.seed;
    if (ov.workers) cfg.run.workers = *ov.workers;
    if (ov.n_paths) cfg.run.n_paths = *ov.n_paths;
    if (ov.u_grid) cfg.run.u_grid = *ov.u_grid;

    // canonical resolved form
    json r;
    r["version"] = cfg.version;
    r["model"] = {{"a", cfg.model.a}, {"sigma2", cfg.model.sigma2},
                  {"jumps", jumps_to_json(cfg.model.jumps)}};
    r["insurance"] = {{"c", cfg.c},
                      {"claim", law_to_json(cfg.claim)},
                      {"interarrival", law_to_json(cfg.interarrival)}};
    r["run"] = {{"seed", cfg.run.seed},         {"n_paths", cfg.run.n_paths},
                {"delta_a", cfg.run.delta_a},   {"n_max", cfg.run.n_max},
                {"base_step", cfg.run.base_step}, {"refinement", cfg.run.refinement},
                {"u_grid", cfg.run.u_grid},     {"workers", cfg.run.workers},
                {"a_floor", cfg.run.a_floor},   {"direct_paths", cfg.run.direct_paths}};
    r["analysis"] = {{"k_policy", cfg.analysis.k_policy},
                     {"nonarithmetic_assertion", cfg.analysis.nonarithmetic_assertion}};
    cfg.resolved = std::move(r);
    return cfg;
}

ExperimentConfig load_config(const std::string& path, const ConfigOverrides& ov) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // translate the byte offset into a line number
        size_t line = 1;
        for (size_t i = 0; i < e.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        throw std::invalid_argument("config: " + path + ":" + std::to_string(line) + ": " +
                                    e.what());
    }
    return parse_config(j, ov);
}

void RunManifest::write(const std::string& path) const {
    json j;
    j["command"] = command;
    j["artifact_version"] = artifact_version;
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    j["workers"] = workers;
    j["wall_seconds"] = wall_seconds;
    j["n_paths"] = n_paths;
    j["tallies"] = {{"flagged", flagged}, {"censored", censored}};
    j["outputs"] = outputs;
    j["resolved_config"] = resolved_config;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << j.dump(2) << "\n";
}

} // namespace ruinsim
