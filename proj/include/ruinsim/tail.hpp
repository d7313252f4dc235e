#ifndef RUINSIM_TAIL_HPP
#define RUINSIM_TAIL_HPP

#include <span>
#include <vector>

#include "ruinsim/rng.hpp"
#include "ruinsim/ruin.hpp"

namespace ruinsim {

struct HillEstimate {
    double beta_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    long k_used = 0;
};

// Hill estimator on the top k order statistics of a sorted positive sample;
// CI from asymptotic normality beta_hat * (1 +/- z/sqrt(k)) at 95%
HillEstimate hill_estimator(std::span<const double> sorted_positive, long k);

struct HillScan {
    std::vector<long> ks;
    std::vector<double> beta_hats;
    double rel_range = 0.0; // (max-min)/mid over the scan window
    bool stable = false;    // rel_range < 0.20
};
// k-stability scan over k in [n^0.4, n^0.6]
HillScan hill_stability_scan(std::span<const double> sorted_positive);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double se = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    long n_used = 0;
};

// weighted LS of ln Gbar on ln u over points with enough exceedances;
// weights from the delta-method error of ln Gbar
SlopeFit loglog_slope(std::span<const GbarPoint> table, long min_count = 50);

struct CPlusEstimate {
    double c_plus = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double u_lo = 0.0, u_hi = 0.0; // window used
    bool trend_flag = false;        // u^beta Gbar(u) trends across the window
    bool conditional = true;        // valid only under the non-arithmetic assertion
};

// median of u^beta Gbar(u) over the usable window with a bootstrap CI;
// the estimate is conditional on ln M being non-arithmetic
CPlusEstimate estimate_c_plus(std::span<const GbarPoint> table, double beta,
                              bool nonarithmetic_asserted, RngStream& rng,
                              long min_count = 50, long n_boot = 1000);

// crude lattice detector on ln M samples: scans candidate spans and reports
// the strongest concentration of fractional parts
struct LatticeScan {
    bool lattice_suspected = false;
    double best_span = 0.0;
    double concentration = 0.0; // KS distance of frac parts from uniform
};
LatticeScan detect_lattice(std::span<const double> log_m_samples);

} // namespace ruinsim

#endif
