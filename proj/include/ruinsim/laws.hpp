#ifndef RUINSIM_LAWS_HPP
#define RUINSIM_LAWS_HPP

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "ruinsim/rng.hpp"

namespace ruinsim {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// interarrival times T > 0
// ---------------------------------------------------------------------------

struct InterarrivalLaw {
    struct Exponential { double rate; };
    struct Gamma { double shape, rate; };
    struct Deterministic { double value; };
    struct Uniform { double lo, hi; }; // 0 <= lo < hi

    std::variant<Exponential, Gamma, Deterministic, Uniform> family;

    static InterarrivalLaw exponential(double rate);
    static InterarrivalLaw gamma(double shape, double rate);
    static InterarrivalLaw deterministic(double value);
    static InterarrivalLaw uniform(double lo, double hi);

    double sample(RngStream& rng) const;
    double mean() const;
    // E exp(eps T); +inf past the mgf abscissa
    double exp_moment(double eps) const;
    // sup{eps : E exp(eps T) < inf}
    double mgf_abscissa() const;
    // whether P(T <= t) > 0 for every t > 0
    bool support_reaches_zero() const;
    std::string describe() const;
};

// ---------------------------------------------------------------------------
// claim magnitudes |xi| > 0 (the sign is applied by the cycle simulator)
// ---------------------------------------------------------------------------

struct ClaimLaw {
    struct Exponential { double rate; };
    struct Pareto { double scale, alpha; }; // P(X > x) = (scale/x)^alpha, x >= scale
    struct LogNormal { double mu, sigma; };
    struct UniformBounded { double lo, hi; }; // 0 <= lo < hi

    std::variant<Exponential, Pareto, LogNormal, UniformBounded> family;

    static ClaimLaw exponential(double rate);
    static ClaimLaw pareto(double scale, double alpha);
    static ClaimLaw lognormal(double mu, double sigma);
    static ClaimLaw uniform_bounded(double lo, double hi);

    double sample(RngStream& rng) const;
    // E |xi|^p, closed form; +inf where the moment diverges
    double fractional_moment(double p) const;
    // sup{p : E|xi|^p < inf}
    double sup_moment_order() const;
    bool bounded_support() const;
    std::string describe() const;
};

// ---------------------------------------------------------------------------
// price jump sizes of the relative price process R, support in (-1, inf).
// Y := ln(1+X) is the corresponding jump of the log price V; the law exposes
// both coordinates analytically so the cumulant and drift corrections are
// closed-form for every shipped family.
// ---------------------------------------------------------------------------

struct JumpLaw {
    struct Atomic {
        std::vector<double> points;  // x-values, each > -1
        std::vector<double> weights; // positive, summing to 1
    };
    struct UniformOnInterval { double lo, hi; }; // -1 < lo < hi
    // density of Y = ln(1+X): p_up * ep * exp(-ep*y) on y>0,
    // (1-p_up) * em * exp(em*y) on y<0
    struct DoubleExponentialOnLog { double eta_plus, eta_minus, p_up; };

    std::variant<Atomic, UniformOnInterval, DoubleExponentialOnLog> family;

    static JumpLaw atomic(std::vector<double> points, std::vector<double> weights);
    static JumpLaw uniform_on_interval(double lo, double hi);
    static JumpLaw double_exponential_on_log(double eta_plus, double eta_minus, double p_up);

    double sample_x(RngStream& rng) const; // jump of R
    double sample_y(RngStream& rng) const; // jump of V, law of ln(1+X)

    // per-unit-intensity functionals (multiply by the intensity for the
    // Levy-measure integrals)
    double mean_h_x() const;     // E[X 1{|X|<=1}]
    double mean_abs_h_x() const; // E[|X| 1{|X|<=1}]
    double prob_neg() const;     // P(X < 0)
    double prob_pos() const;     // P(X > 0)

    double mgf_neg_y(double q) const; // E exp(-qY) = E (1+X)^{-q}; +inf out of domain
    double mean_h_y() const;          // E[Y 1{|Y|<=1}]
    double mean_hbar_y() const;       // E[Y 1{|Y|>1}]
    double mean_y() const;
    // E[1{|Y|>1} exp(-qY)], the large-jump integral that cuts the domain
    double large_jump_integral(double q) const;
    // open interval (q_lo, q_hi) on which E exp(-qY) is finite
    std::pair<double, double> q_domain() const;

    bool bounded_y() const; // Y has bounded support
    std::string describe() const;
};

// pushforward view: the law of V-jumps with its own sampler, used where the
// derived triplet is wanted as a first-class object
struct LogJumpLaw {
    JumpLaw source;
    double sample(RngStream& rng) const { return source.sample_y(rng); }
};

} // namespace ruinsim

#endif
