#include "ruinsim/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "ruinsim/parallel.hpp"
#include "ruinsim/stats.hpp"

namespace ruinsim {

Experiment make_experiment(const ExperimentConfig& cfg) {
    Experiment ex;
    ex.model = cfg.model;
    ex.interarrival = cfg.interarrival;
    ex.claim = cfg.claim;
    ex.c = cfg.c;
    ex.grid.base_step = cfg.run.base_step;
    ex.grid.refinement = cfg.run.refinement;
    ex.trunc.delta_a = cfg.run.delta_a;
    ex.trunc.n_max = cfg.run.n_max;
    ex.direct.a_floor = cfg.run.a_floor;
    ex.direct.n_max = cfg.run.n_max;
    ex.seed = cfg.run.seed;
    ex.workers = cfg.run.workers;
    return ex;
}

CycleSource make_cycle_source(const Experiment& ex) {
    // capture by value: the source is self-contained and thread-safe
    LevyModel model = ex.model;
    InterarrivalLaw inter = ex.interarrival;
    ClaimLaw claim = ex.claim;
    double c = ex.c;
    PathGridConfig grid = ex.grid;
    return [model, inter, claim, c, grid](RngStream& rng) {
        return simulate_cycle(model, inter, claim, c, grid, rng);
    };
}

std::vector<CycleSample> run_cycles(const Experiment& ex, long n) {
    std::vector<CycleSample> out(static_cast<size_t>(n));
    parallel_for(static_cast<size_t>(n), ex.workers, [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            RngStream rng(ex.seed, StreamPurpose::cycles, i);
            out[i] = simulate_cycle(ex.model, ex.interarrival, ex.claim, ex.c, ex.grid, rng);
        }
    });
    return out;
}

std::vector<PerpetuitySample> run_perpetuities(const Experiment& ex, long n) {
    std::vector<PerpetuitySample> out(static_cast<size_t>(n));
    parallel_for(static_cast<size_t>(n), ex.workers, [&](size_t begin, size_t end) {
        CycleSource src = make_cycle_source(ex);
        for (size_t i = begin; i < end; ++i) {
            RngStream rng(ex.seed, StreamPurpose::perpetuity, i);
            out[i] = sample_perpetuity(src, ex.trunc, rng);
        }
    });
    return out;
}

std::vector<DirectPathRecord> run_direct_paths(const Experiment& ex, long n, double u_max) {
    std::vector<DirectPathRecord> out(static_cast<size_t>(n));
    parallel_for(static_cast<size_t>(n), ex.workers, [&](size_t begin, size_t end) {
        CycleSource src = make_cycle_source(ex);
        for (size_t i = begin; i < end; ++i) {
            RngStream rng(ex.seed, StreamPurpose::direct, i);
            out[i] = direct_walk(src, ex.direct, u_max, rng);
        }
    });
    return out;
}

std::vector<double> run_terminal_log_prices(const Experiment& ex, double t, long n) {
    std::vector<double> out(static_cast<size_t>(n));
    // fold the horizon into the stream index so different t draw independently
    uint64_t tstamp = static_cast<uint64_t>(std::llround(t * 4096.0));
    parallel_for(static_cast<size_t>(n), ex.workers, [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            RngStream rng(ex.seed, StreamPurpose::terminal, (tstamp << 32) ^ i);
            out[i] = sample_log_price_terminal(ex.model, t, rng);
        }
    });
    return out;
}

std::vector<double> resolve_u_grid(const std::string& spec,
                                   std::span<const PerpetuitySample> samples) {
    if (spec.rfind("geom:", 0) == 0) {
        double lo, hi;
        long count;
        char colon1, colon2;
        std::string body = spec.substr(5);
        std::istringstream ss(body);
        if (!(ss >> lo >> colon1 >> hi >> colon2 >> count) || colon1 != ':' || colon2 != ':' ||
            !(lo > 0) || !(hi > lo) || count < 2)
            throw std::invalid_argument("u grid spec must be geom:lo:hi:count with 0<lo<hi, "
                                        "count>=2; got '" +
                                        spec + "'");
        std::vector<double> u(static_cast<size_t>(count));
        double ratio = std::pow(hi / lo, 1.0 / (count - 1));
        double v = lo;
        for (long i = 0; i < count; ++i) {
            u[static_cast<size_t>(i)] = v;
            v *= ratio;
        }
        u.back() = hi;
        return u;
    }
    if (spec != "auto")
        throw std::invalid_argument("u grid spec must be 'auto' or 'geom:lo:hi:count'");

    // auto: geometric grid across the upper tail of the sampled perpetuity
    std::vector<double> pos;
    for (const auto& s : samples)
        if (!s.flagged && s.y_inf > 0.0) pos.push_back(s.y_inf);
    if (pos.size() < 100)
        throw std::invalid_argument("auto u grid needs at least 100 positive samples");
    std::sort(pos.begin(), pos.end());
    double lo = quantile_sorted(pos, 0.90);
    double hi = quantile_sorted(pos, 0.9999);
    if (!(lo > 0.0)) lo = pos.front() > 0 ? pos.front() : 1e-6;
    if (!(hi > lo)) hi = lo * 100.0;
    const long count = 16;
    std::vector<double> u(count);
    double ratio = std::pow(hi / lo, 1.0 / (count - 1));
    double v = lo;
    for (long i = 0; i < count; ++i) {
        u[static_cast<size_t>(i)] = v;
        v *= ratio;
    }
    u.back() = hi;
    return u;
}

std::function<double(double)> make_empirical_gbar(std::span<const PerpetuitySample> samples) {
    auto ys = std::make_shared<std::vector<double>>();
    ys->reserve(samples.size());
    for (const auto& s : samples)
        if (!s.flagged) ys->push_back(s.y_inf);
    std::sort(ys->begin(), ys->end());
    return [ys](double u) {
        if (ys->empty()) return 0.0;
        auto it = std::upper_bound(ys->begin(), ys->end(), u);
        return static_cast<double>(ys->end() - it) / static_cast<double>(ys->size());
    };
}

long count_flagged(std::span<const PerpetuitySample> samples) {
    long f = 0;
    for (const auto& s : samples)
        if (s.flagged) ++f;
    return f;
}

} // namespace ruinsim
