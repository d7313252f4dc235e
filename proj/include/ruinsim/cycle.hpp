#ifndef RUINSIM_CYCLE_HPP
#define RUINSIM_CYCLE_HPP

#include <span>
#include <vector>

#include "ruinsim/model.hpp"

namespace ruinsim {

// one renewal cycle: M = e^{-V_{T1}}, Q = M|xi| - c * int_0^{T1} e^{-V_r} dr
struct CycleSample {
    double m = 0.0;
    double q = 0.0;
    double t = 0.0;
    double v_terminal = 0.0; // V_{T1}, kept for exactness checks and diagnostics
    bool saturated = false;  // |exponent| of e^{-V} exceeded 700 somewhere
};

struct PathGridConfig {
    // absolute time step for the Brownian grid; 0 selects the adaptive
    // default min(T1, 1)/512. `refinement` halves the step that many times.
    double base_step = 0.0;
    int refinement = 0;

    double step_for(double t1) const;
};

// piecewise-linear stretch of the log price: V(s) = v0 + slope * s on [0, duration]
struct LinearSegment {
    double duration;
    double v0;
    double slope;
};

// exact int e^{-V} over consecutive linear segments (sigma = 0 paths)
double discounted_integral_exact(std::span<const LinearSegment> segs);

// a path observed on discrete nodes; v_left carries the pre-jump limit when a
// node sits on a jump time, otherwise v_left == v_right
struct GridPath {
    std::vector<double> t;
    std::vector<double> v_left;
    std::vector<double> v_right;
};

// trapezoid for int e^{-V_{s-}} ds over the nodes of the path
double discounted_integral_grid(const GridPath& path);

// sample the exact sigma=0 pure-jump path at uniform nodes of width `step`
// (plus the terminal time); jump times are not revealed to the grid
GridPath observe_on_uniform_grid(double slope, std::span<const double> jump_times,
                                 std::span<const double> jump_sizes_y, double t1, double step);

// same path observed with the jump times inserted as extra nodes
GridPath observe_with_jump_nodes(double slope, std::span<const double> jump_times,
                                 std::span<const double> jump_sizes_y, double t1, double step);

CycleSample simulate_cycle(const LevyModel& m, const InterarrivalLaw& inter,
                           const ClaimLaw& claim, double c, const PathGridConfig& grid,
                           RngStream& rng);

// V_t at a fixed horizon: a_v t + sigma W_t + compound Poisson jumps (exact in law)
double sample_log_price_terminal(const LevyModel& m, double t, RngStream& rng);

} // namespace ruinsim

#endif
