#include "ruinsim/cycle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#if defined(RUINSIM_USE_MVEC) && defined(__AVX512F__) && defined(__AVX512DQ__)
#define RUINSIM_MVEC_ACTIVE 1
#include <immintrin.h>
extern "C" __m512d _ZGVeN8v_exp(__m512d);
#endif

namespace ruinsim {

namespace {
constexpr double kSatExponent = 700.0;
constexpr int kBatch = 512;

#ifdef RUINSIM_MVEC_ACTIVE
inline void exp_neg_block(const double* d, double* out, int n) {
    int i = 0;
    for (; i + 8 <= n; i += 8) {
        __m512d v = _mm512_loadu_pd(d + i);
        _mm512_storeu_pd(out + i, _ZGVeN8v_exp(_mm512_sub_pd(_mm512_setzero_pd(), v)));
    }
    for (; i < n; ++i) out[i] = std::exp(-d[i]);
}
#else
inline void exp_neg_block(const double* d, double* out, int n) {
    for (int i = 0; i < n; ++i) out[i] = std::exp(-d[i]);
}
#endif

// running state of one simulated path: V, w = e^{-V}, accumulated integral
struct PathState {
    double v = 0.0;
    double w = 1.0;
    double integral = 0.0;
    bool saturated = false;

    void check() {
        if (std::fabs(v) > kSatExponent) saturated = true;
    }

    // one Gaussian step of width dt
    void step(double a_v, double sigma, double dt, double z) {
        double d = a_v * dt + sigma * std::sqrt(dt) * z;
        double wn = w * std::exp(-d);
        integral += 0.5 * dt * (w + wn);
        w = wn;
        v += d;
    }

    // n equal Gaussian steps of width h, batched
    void run(RngStream& rng, long n, double a_v, double sigma, double h) {
        const double drift = a_v * h;
        const double s = sigma * std::sqrt(h);
        alignas(64) double z[kBatch], d[kBatch], f[kBatch];
        while (n > 0) {
            int b = static_cast<int>(std::min<long>(n, kBatch));
            rng.normals(z, b);
            double zs0 = 0, zs1 = 0, zs2 = 0, zs3 = 0;
            int i = 0;
            for (; i + 4 <= b; i += 4) {
                d[i] = drift + s * z[i];
                d[i + 1] = drift + s * z[i + 1];
                d[i + 2] = drift + s * z[i + 2];
                d[i + 3] = drift + s * z[i + 3];
                zs0 += z[i];
                zs1 += z[i + 1];
                zs2 += z[i + 2];
                zs3 += z[i + 3];
            }
            for (; i < b; ++i) {
                d[i] = drift + s * z[i];
                zs0 += z[i];
            }
            exp_neg_block(d, f, b);
            // prefix products of f folded into the trapezoid sum; the pairwise
            // split halves the serial multiply chain
            double se = 0, so = 0, wc = w;
            int j = 0;
            for (; j + 1 < b; j += 2) {
                double g = f[j] * f[j + 1];
                double we = wc * f[j];
                wc *= g;
                se += we;
                so += wc;
            }
            if (j < b) {
                wc *= f[j];
                so += wc;
            }
            integral += h * (0.5 * (w - wc) + se + so);
            v += b * drift + s * ((zs0 + zs1) + (zs2 + zs3));
            w = wc;
            check();
            n -= b;
        }
    }

    void jump(double y) {
        v += y;
        w *= std::exp(-y);
        check();
    }

    // advance from *pos to target, placing nodes on multiples of h
    void advance(RngStream& rng, double* pos, double target, double a_v, double sigma,
                 double h) {
        long k = static_cast<long>(std::floor(*pos / h)) + 1;
        while (k * h <= *pos) ++k;
        long k_last = static_cast<long>(std::ceil(target / h)) - 1;
        while (k_last >= k && k_last * h >= target) --k_last;
        if (k <= k_last) {
            step(a_v, sigma, k * h - *pos, rng.normal());
            run(rng, k_last - k, a_v, sigma, h);
            *pos = k_last * h;
        }
        if (target > *pos) {
            step(a_v, sigma, target - *pos, rng.normal());
            *pos = target;
        }
    }
};

} // namespace

double PathGridConfig::step_for(double t1) const {
    double h = base_step > 0.0 ? base_step : std::min(t1, 1.0) / 512.0;
    return std::ldexp(h, -refinement);
}

double discounted_integral_exact(std::span<const LinearSegment> segs) {
    double total = 0.0;
    for (const auto& s : segs) {
        if (!(s.duration >= 0.0)) throw std::invalid_argument("segment duration must be >= 0");
        if (s.duration == 0.0) continue;
        double x = s.slope * s.duration;
        double val;
        if (std::fabs(x) < 1e-8) {
            // series branch of (1 - e^{-x})/slope, also covers slope == 0
            val = s.duration * (1.0 - 0.5 * x + x * x / 6.0);
        } else {
            val = -std::expm1(-x) / s.slope;
        }
        total += std::exp(-s.v0) * val;
    }
    return total;
}

double discounted_integral_grid(const GridPath& path) {
    const size_t n = path.t.size();
    if (n < 2) throw std::invalid_argument("grid path needs at least two nodes");
    if (path.v_left.size() != n || path.v_right.size() != n)
        throw std::invalid_argument("grid path arrays must have equal length");
    double total = 0.0;
    for (size_t k = 0; k + 1 < n; ++k) {
        double dt = path.t[k + 1] - path.t[k];
        if (!(dt > 0.0)) throw std::invalid_argument("grid path times must increase");
        total += 0.5 * dt * (std::exp(-path.v_right[k]) + std::exp(-path.v_left[k + 1]));
    }
    return total;
}

namespace {
// exact sigma=0 path values around time s
double pure_jump_v_left(double slope, std::span<const double> jt, std::span<const double> jy,
                        double s) {
    double v = slope * s;
    for (size_t i = 0; i < jt.size() && jt[i] < s; ++i) v += jy[i];
    return v;
}
double pure_jump_v_right(double slope, std::span<const double> jt, std::span<const double> jy,
                         double s) {
    double v = slope * s;
    for (size_t i = 0; i < jt.size() && jt[i] <= s; ++i) v += jy[i];
    return v;
}
} // namespace

GridPath observe_on_uniform_grid(double slope, std::span<const double> jump_times,
                                 std::span<const double> jump_sizes_y, double t1, double step) {
    if (!(step > 0.0) || !(t1 > 0.0))
        throw std::invalid_argument("observe_on_uniform_grid: need step > 0 and t1 > 0");
    GridPath p;
    for (long k = 0; k * step < t1; ++k) {
        double t = k * step;
        double v = pure_jump_v_right(slope, jump_times, jump_sizes_y, t);
        p.t.push_back(t);
        p.v_left.push_back(v);
        p.v_right.push_back(v);
    }
    p.t.push_back(t1);
    p.v_left.push_back(pure_jump_v_left(slope, jump_times, jump_sizes_y, t1));
    p.v_right.push_back(pure_jump_v_right(slope, jump_times, jump_sizes_y, t1));
    return p;
}

GridPath observe_with_jump_nodes(double slope, std::span<const double> jump_times,
                                 std::span<const double> jump_sizes_y, double t1, double step) {
    GridPath p = observe_on_uniform_grid(slope, jump_times, jump_sizes_y, t1, step);
    for (double jt : jump_times) {
        if (jt <= 0.0 || jt >= t1) continue;
        auto it = std::lower_bound(p.t.begin(), p.t.end(), jt);
        size_t idx = static_cast<size_t>(it - p.t.begin());
        if (it != p.t.end() && *it == jt) {
            p.v_left[idx] = pure_jump_v_left(slope, jump_times, jump_sizes_y, jt);
            continue;
        }
        p.t.insert(p.t.begin() + idx, jt);
        p.v_left.insert(p.v_left.begin() + idx,
                        pure_jump_v_left(slope, jump_times, jump_sizes_y, jt));
        p.v_right.insert(p.v_right.begin() + idx,
                         pure_jump_v_right(slope, jump_times, jump_sizes_y, jt));
    }
    return p;
}

CycleSample simulate_cycle(const LevyModel& m, const InterarrivalLaw& inter,
                           const ClaimLaw& claim, double c, const PathGridConfig& grid,
                           RngStream& rng) {
    if (!(c > 0.0)) throw std::invalid_argument("simulate_cycle: premium rate c must be > 0");

    const double t1 = inter.sample(rng);

    // compound-Poisson jump times (uniform order statistics) and V-jump sizes
    thread_local std::vector<double> jt, jy;
    jt.clear();
    jy.clear();
    if (!m.jumps.empty()) {
        long nj = rng.poisson(m.jumps.intensity * t1);
        jt.reserve(nj);
        for (long i = 0; i < nj; ++i) jt.push_back(rng.uniform(0.0, t1));
        std::sort(jt.begin(), jt.end());
        jy.reserve(nj);
        for (long i = 0; i < nj; ++i) jy.push_back(m.jumps.law->sample_y(rng));
    }

    CycleSample out;
    out.t = t1;
    const double b_drift = m.path_drift();

    if (m.sigma2 == 0.0) {
        // pure jump: V is piecewise linear between jumps, integral is exact
        double v = 0.0, integral = 0.0;
        bool saturated = false;
        double prev = 0.0;
        for (size_t i = 0; i <= jt.size(); ++i) {
            double end = (i < jt.size()) ? jt[i] : t1;
            LinearSegment seg{end - prev, v, b_drift};
            integral += discounted_integral_exact(std::span<const LinearSegment>(&seg, 1));
            v += b_drift * (end - prev);
            if (i < jt.size()) v += jy[i];
            if (std::fabs(v) > kSatExponent) saturated = true;
            prev = end;
        }
        out.v_terminal = v;
        out.m = std::exp(-v);
        out.saturated = saturated;
        out.q = out.m * claim.sample(rng) - c * integral;
        return out;
    }

    // Brownian component: equal steps with jump times and the terminal time
    // inserted as extra nodes; e^{-V_{s-}} uses the pre-jump value at jumps
    const double h = grid.step_for(t1);
    const double sigma = m.sigma();
    PathState st;
    double pos = 0.0;
    for (size_t i = 0; i <= jt.size(); ++i) {
        double target = (i < jt.size()) ? jt[i] : t1;
        st.advance(rng, &pos, target, b_drift, sigma, h);
        if (i < jt.size()) st.jump(jy[i]);
    }
    st.check();

    out.v_terminal = st.v;
    out.m = std::exp(-st.v);
    out.saturated = st.saturated || !std::isfinite(st.w) || !std::isfinite(st.integral);
    out.q = out.m * claim.sample(rng) - c * st.integral;
    return out;
}

double sample_log_price_terminal(const LevyModel& m, double t, RngStream& rng) {
    if (!(t > 0.0)) throw std::invalid_argument("sample_log_price_terminal: t must be > 0");
    double v = m.path_drift() * t + m.sigma() * std::sqrt(t) * rng.normal();
    if (!m.jumps.empty()) {
        long nj = rng.poisson(m.jumps.intensity * t);
        for (long i = 0; i < nj; ++i) v += m.jumps.law->sample_y(rng);
    }
    return v;
}

} // namespace ruinsim
