#ifndef RUINSIM_RUIN_HPP
#define RUINSIM_RUIN_HPP

#include <functional>
#include <span>
#include <vector>

#include "ruinsim/cycle.hpp"

namespace ruinsim {

// anything that produces i.i.d. renewal cycles from a stream
using CycleSource = std::function<CycleSample(RngStream&)>;

// truncated realization of Y_inf = sum_n A_n Q_{n+1}, A_n = M_1...M_n
struct PerpetuitySample {
    double y_inf = 0.0;
    long n_trunc = 0;     // cycles consumed
    double a_trunc = 1.0; // A at the stop
    bool flagged = false; // n_max hit with A still above delta_a, or saturation
};

struct TruncationPolicy {
    double delta_a = 1e-9;
    long n_max = 10000;
};

PerpetuitySample sample_perpetuity(const CycleSource& src, const TruncationPolicy& trunc,
                                   RngStream& rng);

// empirical tail of Y_inf at one grid point
struct GbarPoint {
    double u = 0.0;
    double gbar = 0.0;
    double se = 0.0;
    long count = 0; // exceedances
    long n = 0;     // unflagged samples used
};

// exceedance frequencies over a u grid; flagged samples are excluded and the
// unflagged fraction must be at least 99.99%
std::vector<GbarPoint> estimate_gbar(std::span<const PerpetuitySample> samples,
                                     std::span<const double> u_grid);

// sandwich bounds for the ruin probability from the perpetuity tail
struct RuinBounds {
    double lower = 0.0;
    double upper = 0.0;
    bool upper_defined = false; // false when Gbar(0) = 0 in-sample
};
RuinBounds ruin_bounds(const GbarPoint& at_u, const GbarPoint& at_zero);

// per-u assembled estimate, one row of the ruin table
struct RuinEstimate {
    double u = 0.0;
    GbarPoint gbar_u;
    GbarPoint gbar_0;
    RuinBounds bounds;
    double direct = -1.0; // crossing frequency; < 0 when not computed
    double direct_se = 0.0;
    long n_paths = 0;
};

// one path of the crossing chain Y_n, stopped at crossing of u_stop_max,
// A < a_floor, or n_max
struct DirectOptions {
    long n_max = 10000;
    double a_floor = 1e-6;
};
struct DirectPathRecord {
    double y_max = 0.0;   // running max of Y_n over the walked horizon
    double y_final = 0.0; // Y at stop
    double a_final = 1.0; // A at stop
    long n_steps = 0;
    bool censored = false; // stopped without reaching u_stop_max
    bool flagged = false;
};
DirectPathRecord direct_walk(const CycleSource& src, const DirectOptions& opt,
                             double u_stop_max, RngStream& rng);

// crossing-frequency estimate at one u assembled from path records; the
// censoring residual is quantified through an empirical tail callable
struct DirectEstimate {
    double u = 0.0;
    double frequency = 0.0;
    double se = 0.0;
    long crossings = 0;
    long n_paths = 0;
    long censored = 0;
    double unexplained_mass = 0.0; // mean over paths of Gbar((u - Y)/A) at censoring
};
DirectEstimate assemble_direct(std::span<const DirectPathRecord> records, double u,
                               const std::function<double(double)>& gbar);

// sample moments of the Kesten conditions at a given beta
struct KestenDiagnostics {
    double e_m_beta = 0.0, se_m_beta = 0.0;
    double e_m_beta_logm_plus = 0.0, se_m_beta_logm_plus = 0.0;
    double e_q_beta = 0.0, se_q_beta = 0.0;
    long n = 0;
};
KestenDiagnostics kesten_diagnostics(std::span<const CycleSample> cycles, double beta);

// reporting-only probe of whether the sampled Y_inf looks unbounded above
struct UnboundednessReport {
    double max_y = 0.0;
    std::vector<GbarPoint> fractions;
    bool exceptional_class = false; // the sigma=0 / bounded / one-sided regime
    bool interarrival_reaches_zero = true;
};
UnboundednessReport unboundedness_probe(std::span<const PerpetuitySample> samples,
                                        std::span<const double> u_grid,
                                        bool exceptional_class,
                                        bool interarrival_reaches_zero);

} // namespace ruinsim

#endif
