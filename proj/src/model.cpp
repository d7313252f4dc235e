#include "ruinsim/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ruinsim {

double LevyModel::sigma() const { return std::sqrt(sigma2); }

double LevyModel::path_drift() const {
    if (jumps.empty()) return a_v;
    return a_v - jumps.intensity * jumps.law->mean_h_y();
}

JumpMeasure LevyModel::jumps_v() const { return jumps; } // same intensity; law read in y

LevyModel derive_log_price_model(double a, double sigma2, JumpMeasure jumps) {
    if (sigma2 < 0.0) throw std::invalid_argument("sigma2 must be >= 0");
    if (jumps.intensity < 0.0) throw std::invalid_argument("jump intensity must be >= 0");
    if (jumps.intensity > 0.0 && !jumps.law)
        throw std::invalid_argument("positive jump intensity requires a jump law");
    if (jumps.intensity == 0.0) jumps.law.reset();
    if (sigma2 == 0.0 && jumps.empty())
        throw std::invalid_argument(
            "deterministic R excluded: sigma2 and jump intensity cannot both be zero");

    LevyModel m;
    m.a = a;
    m.sigma2 = sigma2;
    m.jumps = std::move(jumps);
    // a_v = a - sigma^2/2 + Pi(h(ln(1+x)) - h(x))
    double corr = 0.0;
    if (!m.jumps.empty())
        corr = m.jumps.intensity * (m.jumps.law->mean_h_y() - m.jumps.law->mean_h_x());
    m.a_v = a - 0.5 * sigma2 + corr;
    return m;
}

double cumulant(const LevyModel& m, double q) {
    double h = -m.a_v * q + 0.5 * m.sigma2 * q * q;
    if (!m.jumps.empty()) {
        double mgf = m.jumps.law->mgf_neg_y(q);
        if (!std::isfinite(mgf)) return kInf;
        h += m.jumps.intensity * (mgf - 1.0 + q * m.jumps.law->mean_h_y());
    }
    return h;
}

double large_jump_integral(const LevyModel& m, double q) {
    if (m.jumps.empty()) return 0.0;
    return m.jumps.intensity * m.jumps.law->large_jump_integral(q);
}

CumulantDomain domain_bounds(const LevyModel& m) {
    if (m.jumps.empty()) return {-kInf, kInf};
    auto [lo, hi] = m.jumps.law->q_domain();
    return {lo, hi};
}

double cumulant_right_derivative_at_zero(const LevyModel& m) {
    double d = -m.a_v;
    if (!m.jumps.empty()) d -= m.jumps.intensity * m.jumps.law->mean_hbar_y();
    return d;
}

BetaResult find_beta(const LevyModel& m, double tol) {
    BetaOptions opt;
    opt.tol_h = tol;
    return find_beta(m, opt);
}

BetaResult find_beta(const LevyModel& m, const BetaOptions& opt) {
    if (!(opt.tol_h > 0.0)) throw std::invalid_argument("find_beta: tol must be > 0");

    BetaResult res;
    res.h_right_derivative_at_zero = cumulant_right_derivative_at_zero(m);
    if (res.h_right_derivative_at_zero >= 0.0) {
        res.status = BetaResult::Status::degenerate_nonpositive;
        res.note = "D+H(0) >= 0: H is nonnegative near 0+, no positive root";
        return res;
    }

    const double q_up = domain_bounds(m).q_upper;
    auto H = [&](double q) {
        double v = cumulant(m, q);
        if (std::isnan(v)) throw std::runtime_error("cumulant evaluation failed (NaN)");
        return v;
    };

    // expand toward q_upper looking for a sign change; H(0)=0 and H<0 just
    // right of 0, so the last nonpositive point brackets from below
    double lo = 0.0, hi = 0.0;
    bool bracketed = false;
    if (std::isfinite(q_up)) {
        for (int k = 1; k <= opt.max_boundary_halvings; ++k) {
            double q = q_up * (1.0 - std::ldexp(1.0, -k));
            double hq = H(q);
            if (hq > 0.0) {
                hi = q;
                bracketed = true;
                break;
            }
            lo = q;
        }
        if (!bracketed) {
            res.status = BetaResult::Status::no_positive_root;
            std::ostringstream os;
            os << "H <= 0 on (0, q_upper(1-2^-" << opt.max_boundary_halvings
               << ")); a root may lie within 2^-" << opt.max_boundary_halvings
               << " * q_upper of the boundary, which is out of contract";
            res.note = os.str();
            return res;
        }
    } else {
        for (int k = 0; k <= opt.max_boundary_halvings; ++k) {
            double q = std::ldexp(1.0, k); // 1, 2, 4, ...
            double hq = H(q);
            if (hq > 0.0) {
                hi = q;
                bracketed = true;
                break;
            }
            lo = q;
        }
        if (!bracketed) {
            res.status = BetaResult::Status::no_positive_root;
            std::ostringstream os;
            os << "H <= 0 on (0, 2^" << opt.max_boundary_halvings
               << "]; no positive root found on the searched range";
            res.note = os.str();
            return res;
        }
    }

    // bisection: H(lo) <= 0 < H(hi); the nonzero root is in (lo, hi] because
    // D+H(0) < 0 keeps H negative in a right neighbourhood of 0
    double mid = 0.5 * (lo + hi), hmid = H(mid);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        hmid = H(mid);
        if (hmid > 0.0) hi = mid;
        else lo = mid;
        if (hi - lo <= opt.tol_width && std::fabs(hmid) <= opt.tol_h) break;
        if (hi - lo <= 1e-16 * std::max(1.0, hi)) break; // double-precision floor
    }
    if (std::fabs(hmid) > opt.tol_h) {
        // refuse to report a pseudo-root: the bracket collapsed but H is not
        // small, so the evaluation is inconsistent with a crossing
        throw std::runtime_error("find_beta: bracket collapsed without |H| <= tol");
    }
    res.status = BetaResult::Status::found;
    res.beta = mid;
    return res;
}

bool ConditionReport::all_pass() const {
    for (const auto& e : entries)
        if (!e.pass) return false;
    return true;
}

bool ConditionReport::any_warning() const {
    for (const auto& e : entries)
        if (e.warning) return true;
    return false;
}

ConditionReport validate_theorem_conditions(const LevyModel& m, const ClaimLaw& claim,
                                            const InterarrivalLaw& inter,
                                            const BetaResult& beta) {
    if (!beta.found())
        throw std::invalid_argument("validate_theorem_conditions: beta must be found");
    ConditionReport rep;

    // (i) beta strictly inside (0, q_upper)
    {
        double q_up = domain_bounds(m).q_upper;
        bool interior = std::isfinite(q_up)
                            ? beta.beta < q_up * (1.0 - std::ldexp(1.0, -40))
                            : true;
        std::ostringstream os;
        os << "beta=" << beta.beta << ", q_upper=" << q_up;
        rep.entries.push_back({"beta_interior", interior, !interior, os.str()});
    }

    // (ii) E|xi|^beta < inf
    {
        double sup_p = claim.sup_moment_order();
        bool ok = beta.beta < sup_p;
        std::ostringstream os;
        os << "E|xi|^p finite for p < " << sup_p << ", need p = " << beta.beta;
        rep.entries.push_back({"claim_moment", ok, !ok, os.str()});
    }

    // (iii) E exp(eps T1) < inf for some eps > 0
    {
        double absc = inter.mgf_abscissa();
        bool ok = absc > 0.0;
        std::ostringstream os;
        os << "exponential moments of T1 finite for eps < " << absc;
        rep.entries.push_back({"interarrival_exp_moment", ok, !ok, os.str()});
    }

    // (iv) degenerate-case classifier: sigma=0, bounded claims, one-sided
    // jumps with 0 < Pi(|h|) < inf need P(T1 <= t) > 0 for all t > 0
    {
        bool sigma_zero = m.sigma2 == 0.0;
        bool claims_bounded = claim.bounded_support();
        double pi_abs_h = m.jumps.empty() ? 0.0
                                          : m.jumps.intensity * m.jumps.law->mean_abs_h_x();
        double mass_neg = m.jumps.empty() ? 0.0 : m.jumps.intensity * m.jumps.law->prob_neg();
        double mass_pos = m.jumps.empty() ? 0.0 : m.jumps.intensity * m.jumps.law->prob_pos();
        bool one_sided = mass_neg * mass_pos == 0.0;
        bool exceptional = sigma_zero && claims_bounded && pi_abs_h > 0.0 &&
                           std::isfinite(pi_abs_h) && one_sided;
        rep.degenerate_class = exceptional;
        if (exceptional) {
            bool t_cond = inter.support_reaches_zero();
            std::ostringstream os;
            os << "sigma=0, bounded claims, one-sided jumps, Pi(|h|)=" << pi_abs_h
               << "; requires P(T1<=t)>0 for all t>0: "
               << (t_cond ? "holds" : "FAILS for " + inter.describe());
            rep.entries.push_back({"exceptional_class_interarrival", t_cond, !t_cond, os.str()});
        } else {
            rep.entries.push_back(
                {"exceptional_class_interarrival", true, false,
                 "classifier inactive (not in the sigma=0 bounded one-sided class)"});
        }
    }
    return rep;
}

} // namespace ruinsim
