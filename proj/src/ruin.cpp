#include "ruinsim/ruin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ruinsim/stats.hpp"

namespace ruinsim {

PerpetuitySample sample_perpetuity(const CycleSource& src, const TruncationPolicy& trunc,
                                   RngStream& rng) {
    if (!(trunc.delta_a > 0.0 && trunc.delta_a < 1.0))
        throw std::invalid_argument("sample_perpetuity: delta_a must be in (0,1)");
    if (trunc.n_max < 1) throw std::invalid_argument("sample_perpetuity: n_max must be >= 1");

    PerpetuitySample out;
    double y = 0.0, a = 1.0, comp = 0.0;
    bool saturated = false;
    long n = 0;
    while (n < trunc.n_max) {
        CycleSample c = src(rng);
        ++n;
        saturated |= c.saturated;
        // y += a * q, compensated: the terms span many orders of magnitude
        double term = a * c.q - comp;
        double t = y + term;
        comp = (t - y) - term;
        y = t;
        a *= c.m;
        if (!(a < 1e290)) saturated = true;
        if (a <= trunc.delta_a) break;
    }
    out.y_inf = y;
    out.n_trunc = n;
    out.a_trunc = a;
    out.flagged = saturated || (a > trunc.delta_a);
    return out;
}

std::vector<GbarPoint> estimate_gbar(std::span<const PerpetuitySample> samples,
                                     std::span<const double> u_grid) {
    if (samples.empty()) throw std::invalid_argument("estimate_gbar: empty sample set");
    std::vector<double> ys;
    ys.reserve(samples.size());
    long flagged = 0;
    for (const auto& s : samples) {
        if (s.flagged) ++flagged;
        else ys.push_back(s.y_inf);
    }
    double bad = static_cast<double>(flagged) / samples.size();
    if (bad > 1e-4)
        throw std::runtime_error("estimate_gbar: flagged fraction " + std::to_string(bad) +
                                 " exceeds 0.01%");
    std::sort(ys.begin(), ys.end());
    const long n = static_cast<long>(ys.size());
    std::vector<GbarPoint> out;
    out.reserve(u_grid.size());
    for (double u : u_grid) {
        auto it = std::upper_bound(ys.begin(), ys.end(), u);
        long count = n - static_cast<long>(it - ys.begin());
        GbarPoint p;
        p.u = u;
        p.n = n;
        p.count = count;
        p.gbar = static_cast<double>(count) / n;
        p.se = binomial_stderr(p.gbar, n);
        out.push_back(p);
    }
    return out;
}

RuinBounds ruin_bounds(const GbarPoint& at_u, const GbarPoint& at_zero) {
    RuinBounds b;
    b.lower = at_u.gbar;
    if (at_zero.gbar > 0.0) {
        b.upper = at_u.gbar / at_zero.gbar;
        b.upper_defined = true;
    } else {
        // the sandwich needs Gbar(0) > 0 (Y_inf unbounded above); report the
        // upper bound as undefined rather than inventing one
        b.upper = kInf;
        b.upper_defined = false;
    }
    return b;
}

DirectPathRecord direct_walk(const CycleSource& src, const DirectOptions& opt,
                             double u_stop_max, RngStream& rng) {
    DirectPathRecord rec;
    double y = 0.0, a = 1.0, comp = 0.0;
    double y_max = -kInf;
    long n = 0;
    while (n < opt.n_max) {
        CycleSample c = src(rng);
        ++n;
        rec.flagged |= c.saturated;
        double term = a * c.q - comp;
        double t = y + term;
        comp = (t - y) - term;
        y = t;
        if (y > y_max) y_max = y;
        if (y_max >= u_stop_max) break; // every requested level crossed
        a *= c.m;
        if (!(a < 1e290)) {
            rec.flagged = true;
            break;
        }
        if (a < opt.a_floor) break;
    }
    rec.y_max = y_max;
    rec.y_final = y;
    rec.a_final = a;
    rec.n_steps = n;
    rec.censored = y_max < u_stop_max;
    return rec;
}

DirectEstimate assemble_direct(std::span<const DirectPathRecord> records, double u,
                               const std::function<double(double)>& gbar) {
    if (records.empty()) throw std::invalid_argument("assemble_direct: no path records");
    DirectEstimate est;
    est.u = u;
    est.n_paths = static_cast<long>(records.size());
    double resid = 0.0;
    for (const auto& r : records) {
        if (r.y_max >= u) {
            ++est.crossings;
        } else if (r.censored) {
            ++est.censored;
            // a later crossing of u needs Y_residual >= (u - Y)/A, and the
            // residual series has the law of Y_inf
            if (r.a_final > 0.0) resid += gbar((u - r.y_final) / r.a_final);
        }
    }
    est.frequency = static_cast<double>(est.crossings) / est.n_paths;
    est.se = binomial_stderr(est.frequency, est.n_paths);
    est.unexplained_mass = resid / est.n_paths;
    return est;
}

KestenDiagnostics kesten_diagnostics(std::span<const CycleSample> cycles, double beta) {
    if (cycles.empty()) throw std::invalid_argument("kesten_diagnostics: no cycles");
    if (!(beta > 0.0)) throw std::invalid_argument("kesten_diagnostics: beta must be > 0");
    RunningStat mb, mblog, qb;
    for (const auto& c : cycles) {
        if (c.saturated) continue;
        double m_beta = std::pow(c.m, beta);
        double lm = std::log(c.m);
        mb.add(m_beta);
        mblog.add(lm > 0.0 ? m_beta * lm : 0.0);
        qb.add(std::pow(std::fabs(c.q), beta));
    }
    KestenDiagnostics d;
    d.e_m_beta = mb.mean();
    d.se_m_beta = mb.stderr_mean();
    d.e_m_beta_logm_plus = mblog.mean();
    d.se_m_beta_logm_plus = mblog.stderr_mean();
    d.e_q_beta = qb.mean();
    d.se_q_beta = qb.stderr_mean();
    d.n = mb.count();
    return d;
}

UnboundednessReport unboundedness_probe(std::span<const PerpetuitySample> samples,
                                        std::span<const double> u_grid,
                                        bool exceptional_class,
                                        bool interarrival_reaches_zero) {
    UnboundednessReport rep;
    rep.exceptional_class = exceptional_class;
    rep.interarrival_reaches_zero = interarrival_reaches_zero;
    rep.max_y = -kInf;
    for (const auto& s : samples)
        if (!s.flagged && s.y_inf > rep.max_y) rep.max_y = s.y_inf;
    rep.fractions = estimate_gbar(samples, u_grid);
    return rep;
}

} // namespace ruinsim
