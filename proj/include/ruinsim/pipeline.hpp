#ifndef RUINSIM_PIPELINE_HPP
#define RUINSIM_PIPELINE_HPP

#include <functional>
#include <string>
#include <vector>

#include "ruinsim/config.hpp"
#include "ruinsim/ruin.hpp"

namespace ruinsim {

// fully resolved run inputs; built once from a config
struct Experiment {
    LevyModel model;
    InterarrivalLaw interarrival = InterarrivalLaw::exponential(1.0);
    ClaimLaw claim = ClaimLaw::exponential(1.0);
    double c = 1.0;
    PathGridConfig grid;
    TruncationPolicy trunc;
    DirectOptions direct;
    uint64_t seed = 1;
    int workers = 0;
};

Experiment make_experiment(const ExperimentConfig& cfg);

CycleSource make_cycle_source(const Experiment& ex);

// every run is embarrassingly parallel over paths: path i draws from the
// stream (seed, purpose, i), results land in slot i, so outputs are identical
// for any worker count
std::vector<CycleSample> run_cycles(const Experiment& ex, long n);
std::vector<PerpetuitySample> run_perpetuities(const Experiment& ex, long n);
std::vector<DirectPathRecord> run_direct_paths(const Experiment& ex, long n, double u_max);
std::vector<double> run_terminal_log_prices(const Experiment& ex, double t, long n);

// u grid: "auto" = 16 geometric points between the 90% and 99.99% quantiles
// of the positive part of the sample; or "geom:lo:hi:count"
std::vector<double> resolve_u_grid(const std::string& spec,
                                   std::span<const PerpetuitySample> samples);

// empirical tail callable over a perpetuity sample (for censoring residuals)
std::function<double(double)> make_empirical_gbar(std::span<const PerpetuitySample> samples);

long count_flagged(std::span<const PerpetuitySample> samples);

} // namespace ruinsim

#endif
