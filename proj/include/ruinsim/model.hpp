#ifndef RUINSIM_MODEL_HPP
#define RUINSIM_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "ruinsim/laws.hpp"

namespace ruinsim {

// finite-activity jump measure: intensity * jump_law
struct JumpMeasure {
    double intensity = 0.0;          // jumps per unit time; 0 = no jumps
    std::optional<JumpLaw> law;      // present iff intensity > 0

    bool empty() const { return intensity == 0.0; }
};

// Levy triplet (a, sigma2, Pi) of the relative price process R with the
// standard truncation h(x) = x 1{|x|<=1}, plus the derived triplet
// (a_v, sigma2, Pi_V) of the log price V = ln E(R).
struct LevyModel {
    double a = 0.0;
    double sigma2 = 0.0;
    JumpMeasure jumps;      // of R, support in (-1, inf)

    double a_v = 0.0;       // derived drift of V
    JumpMeasure jumps_v() const; // pushforward under x -> ln(1+x), as a measure view

    double sigma() const;
    // linear drift of V in the uncompensated representation
    // V_t = b t + sigma W_t + sum of jumps; b = a_v - Pi(h(ln(1+x)))
    double path_drift() const;
};

struct CumulantDomain {
    double q_lower; // <= 0, possibly -inf
    double q_upper; // >= 0, possibly +inf
};

struct BetaResult {
    enum class Status { found, no_positive_root, degenerate_nonpositive };
    Status status;
    double beta = 0.0;                   // valid when status == found
    double h_right_derivative_at_zero;   // D+H(0), may be -inf
    std::string note;                    // boundary warnings etc.

    bool found() const { return status == Status::found; }
};

struct ConditionEntry {
    std::string name;
    bool pass;
    bool warning;      // pass==true with caveat, or soft failure
    std::string detail;
};

struct ConditionReport {
    std::vector<ConditionEntry> entries;
    bool degenerate_class = false;  // sigma=0, bounded claims, one-sided jumps
                                    // with 0 < Pi(|h|) < inf
    bool all_pass() const;
    bool any_warning() const;
};

// validated constructor for the model: computes a_v and rejects unusable input
LevyModel derive_log_price_model(double a, double sigma2, JumpMeasure jumps);

// H(q) = -a_v q + sigma2/2 q^2 + Pi(e^{-q ln(1+x)} - 1 + q h(ln(1+x)));
// +inf outside the effective domain
double cumulant(const LevyModel& m, double q);

// the large-jump integral J(q) deciding finiteness of H
double large_jump_integral(const LevyModel& m, double q);

CumulantDomain domain_bounds(const LevyModel& m);

// D+H(0) = -a_v - Pi(hbar(ln(1+x)))
double cumulant_right_derivative_at_zero(const LevyModel& m);

struct BetaOptions {
    double tol_h = 1e-10;        // |H(beta)| tolerance
    double tol_width = 1e-12;    // bracket width tolerance
    int max_boundary_halvings = 40; // expansion q_upper*(1 - 2^-k)
};

BetaResult find_beta(const LevyModel& m, double tol = 1e-10);
BetaResult find_beta(const LevyModel& m, const BetaOptions& opt);

// checkable hypotheses of the power-law asymptotics for a given beta
ConditionReport validate_theorem_conditions(const LevyModel& m, const ClaimLaw& claim,
                                            const InterarrivalLaw& inter,
                                            const BetaResult& beta);

} // namespace ruinsim

#endif
