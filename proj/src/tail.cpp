#include "ruinsim/tail.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ruinsim/stats.hpp"

namespace ruinsim {

namespace {
constexpr double kZ95 = 1.959963984540054;
}

HillEstimate hill_estimator(std::span<const double> sorted, long k) {
    if (k < 10) throw std::invalid_argument("hill_estimator: k must be >= 10");
    const long n = static_cast<long>(sorted.size());
    if (n < k + 1) throw std::invalid_argument("hill_estimator: need at least k+1 samples");
    const double x_nk = sorted[n - k - 1];
    if (!(x_nk > 0.0))
        throw std::invalid_argument("hill_estimator: order statistic X_(n-k) must be > 0");
    double s = 0.0;
    for (long i = 0; i < k; ++i) s += std::log(sorted[n - 1 - i] / x_nk);
    HillEstimate est;
    est.k_used = k;
    est.beta_hat = static_cast<double>(k) / s;
    double half = kZ95 / std::sqrt(static_cast<double>(k));
    est.ci_lo = est.beta_hat * (1.0 - half);
    est.ci_hi = est.beta_hat * (1.0 + half);
    return est;
}

HillScan hill_stability_scan(std::span<const double> sorted) {
    const double n = static_cast<double>(sorted.size());
    long k_lo = std::max<long>(10, static_cast<long>(std::pow(n, 0.4)));
    long k_hi = static_cast<long>(std::pow(n, 0.6));
    if (k_hi >= static_cast<long>(n)) k_hi = static_cast<long>(n) - 1;
    HillScan scan;
    if (k_hi <= k_lo) return scan;
    const int points = 16;
    double lmin = kInf, lmax = -kInf;
    for (int i = 0; i < points; ++i) {
        long k = static_cast<long>(
            std::lround(k_lo * std::pow(static_cast<double>(k_hi) / k_lo,
                                        i / static_cast<double>(points - 1))));
        if (!scan.ks.empty() && k == scan.ks.back()) continue;
        HillEstimate e = hill_estimator(sorted, k);
        scan.ks.push_back(k);
        scan.beta_hats.push_back(e.beta_hat);
        lmin = std::min(lmin, e.beta_hat);
        lmax = std::max(lmax, e.beta_hat);
    }
    double mid = 0.5 * (lmin + lmax);
    scan.rel_range = mid > 0.0 ? (lmax - lmin) / mid : kInf;
    scan.stable = scan.rel_range < 0.20;
    return scan;
}

SlopeFit loglog_slope(std::span<const GbarPoint> table, long min_count) {
    std::vector<double> x, y, se;
    for (const auto& p : table) {
        if (p.count < min_count || !(p.u > 0.0) || !(p.gbar > 0.0)) continue;
        x.push_back(std::log(p.u));
        y.push_back(std::log(p.gbar));
        se.push_back(p.se > 0.0 ? p.se / p.gbar : 0.0); // delta method for ln
    }
    if (x.size() < 5)
        throw std::invalid_argument("loglog_slope: need >= 5 usable grid points (count >= " +
                                    std::to_string(min_count) + ")");
    LineFit f = fit_line_weighted(x, y, se);
    SlopeFit out;
    out.slope = f.slope;
    out.intercept = f.intercept;
    out.se = f.se_slope;
    out.ci_lo = f.slope - kZ95 * f.se_slope;
    out.ci_hi = f.slope + kZ95 * f.se_slope;
    out.n_used = f.n_used;
    return out;
}

CPlusEstimate estimate_c_plus(std::span<const GbarPoint> table, double beta,
                              bool nonarithmetic_asserted, RngStream& rng, long min_count,
                              long n_boot) {
    if (!(beta > 0.0)) throw std::invalid_argument("estimate_c_plus: beta must be > 0");
    std::vector<double> vals, lus;
    double u_lo = kInf, u_hi = -kInf;
    for (const auto& p : table) {
        if (p.count < min_count || !(p.u > 0.0) || !(p.gbar > 0.0)) continue;
        vals.push_back(std::pow(p.u, beta) * p.gbar);
        lus.push_back(std::log(p.u));
        u_lo = std::min(u_lo, p.u);
        u_hi = std::max(u_hi, p.u);
    }
    if (vals.empty()) throw std::invalid_argument("estimate_c_plus: empty window");

    auto median_of = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };

    CPlusEstimate est;
    est.c_plus = median_of(vals);
    est.u_lo = u_lo;
    est.u_hi = u_hi;
    est.conditional = !nonarithmetic_asserted;

    // bootstrap over window points
    std::vector<double> boots(n_boot);
    std::vector<double> resample(vals.size());
    for (long b = 0; b < n_boot; ++b) {
        for (size_t i = 0; i < vals.size(); ++i)
            resample[i] = vals[static_cast<size_t>(rng.u01() * vals.size())];
        boots[b] = median_of(resample);
    }
    std::sort(boots.begin(), boots.end());
    est.ci_lo = quantile_sorted(boots, 0.025);
    est.ci_hi = quantile_sorted(boots, 0.975);

    // trend test: regression of ln(u^beta Gbar) on ln u should be flat when
    // beta matches the true exponent; the 0.05/decade floor keeps pure
    // floating-point residue from flagging exact tables
    if (vals.size() >= 3) {
        std::vector<double> ly(vals.size());
        for (size_t i = 0; i < vals.size(); ++i) ly[i] = std::log(vals[i]);
        LineFit f = fit_line_weighted(lus, ly, {});
        est.trend_flag = std::fabs(f.slope) > std::max(2.0 * f.se_slope, 0.05 / std::log(10.0));
    }
    return est;
}

LatticeScan detect_lattice(std::span<const double> log_m_samples) {
    LatticeScan scan;
    if (log_m_samples.size() < 16) return scan;
    std::vector<double> xs(log_m_samples.begin(), log_m_samples.end());
    std::sort(xs.begin(), xs.end());
    double range = xs.back() - xs.front();
    if (!(range > 0.0)) {
        // a single atom is trivially lattice
        scan.lattice_suspected = true;
        scan.concentration = 1.0;
        return scan;
    }
    // candidate spans: smallest distinct gaps and divisors of the range
    std::vector<double> candidates;
    for (size_t i = 1; i < xs.size() && candidates.size() < 8; ++i) {
        double gap = xs[i] - xs[i - 1];
        if (gap > 1e-9 * range) candidates.push_back(gap);
    }
    for (int k = 2; k <= 8; ++k) candidates.push_back(range / k);

    auto frac_ks = [&](double span) {
        std::vector<double> fr(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) {
            double f = std::fmod(xs[i] - xs.front(), span) / span;
            fr[i] = f < 0.0 ? f + 1.0 : f;
        }
        std::sort(fr.begin(), fr.end());
        double d = 0.0;
        const double n = static_cast<double>(fr.size());
        for (size_t i = 0; i < fr.size(); ++i) {
            d = std::max(d, std::fabs((i + 1) / n - fr[i]));
            d = std::max(d, std::fabs(fr[i] - i / n));
        }
        return d;
    };

    for (double s : candidates) {
        if (!(s > 0.0) || s > range) continue;
        double d = frac_ks(s);
        if (d > scan.concentration) {
            scan.concentration = d;
            scan.best_span = s;
        }
    }
    scan.lattice_suspected = scan.concentration > 0.5;
    return scan;
}

} // namespace ruinsim
