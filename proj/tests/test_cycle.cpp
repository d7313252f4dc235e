#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ruinsim/cycle.hpp"
#include "ruinsim/stats.hpp"
#include "oracles.hpp"

using namespace ruinsim;

namespace {

LevyModel gbm(double a, double sigma2) { return derive_log_price_model(a, sigma2, {}); }

// raw fixture for degenerate test paths that the validated factory rejects
LevyModel raw_drift_model(double a_v) {
    LevyModel m;
    m.a = a_v;
    m.sigma2 = 0.0;
    m.a_v = a_v;
    return m;
}

// step-by-step reference simulator: identical draw sequence, scalar libm
// arithmetic, no batching, w recomputed from V at every node
CycleSample naive_cycle(const LevyModel& m, const InterarrivalLaw& inter, const ClaimLaw& claim,
                        double c, const PathGridConfig& grid, RngStream& rng) {
    const double t1 = inter.sample(rng);
    std::vector<double> jt, jy;
    if (!m.jumps.empty()) {
        long nj = rng.poisson(m.jumps.intensity * t1);
        for (long i = 0; i < nj; ++i) jt.push_back(rng.uniform(0.0, t1));
        std::sort(jt.begin(), jt.end());
        for (long i = 0; i < nj; ++i) jy.push_back(m.jumps.law->sample_y(rng));
    }
    const double b = m.path_drift();
    const double sigma = m.sigma();
    const double h = grid.step_for(t1);

    std::vector<double> events = jt;
    events.push_back(t1);
    double v = 0.0, integral = 0.0, pos = 0.0;
    size_t ji = 0;
    for (double target : events) {
        std::vector<double> nodes;
        long k = static_cast<long>(std::floor(pos / h)) + 1;
        while (k * h <= pos) ++k;
        for (; k * h < target; ++k) nodes.push_back(k * h);
        nodes.push_back(target);
        for (double tn : nodes) {
            double dt = tn - pos;
            if (dt <= 0.0) continue;
            double z = rng.normal();
            double v_next = v + b * dt + sigma * std::sqrt(dt) * z;
            integral += 0.5 * dt * (std::exp(-v) + std::exp(-v_next));
            v = v_next;
            pos = tn;
        }
        if (ji < jt.size()) v += jy[ji++];
    }
    CycleSample out;
    out.t = t1;
    out.v_terminal = v;
    out.m = std::exp(-v);
    out.q = out.m * claim.sample(rng) - c * integral;
    return out;
}

} // namespace

TEST_CASE("exact discounted integral: closed forms and additivity") {
    LinearSegment flat{1.0, 0.0, 0.0};
    CHECK(discounted_integral_exact({&flat, 1}) == doctest::Approx(1.0).epsilon(1e-15));

    LinearSegment unit{1.0, 0.0, 1.0};
    CHECK(discounted_integral_exact({&unit, 1}) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));

    // splitting a segment must not change the value beyond 1e-14
    LinearSegment whole{1.0, 0.2, 0.7};
    std::vector<LinearSegment> split{{0.4, 0.2, 0.7}, {0.6, 0.2 + 0.7 * 0.4, 0.7}};
    double a = discounted_integral_exact({&whole, 1});
    double bb = discounted_integral_exact(split);
    CHECK(std::fabs(a - bb) < 1e-14);

    // tiny-slope series branch agrees with the expm1 form at the same slope
    for (double s : {1e-12, 1e-10, 9.9e-9}) {
        LinearSegment seg{1.0, 0.0, s};
        double got = discounted_integral_exact({&seg, 1});
        double ref = -std::expm1(-s) / s;
        CHECK(std::fabs(got - ref) < 1e-15);
    }
    // and against quadrature
    double want = oracle::integrate([](double s) { return std::exp(-(0.2 + 0.7 * s)); }, 0, 1.0);
    CHECK(a == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("deterministic cycle: linear log price") {
    // sigma=0, no jumps, unit drift, T=1, claim pinned to 1 by a hair-width
    // uniform: M = e^{-1}, I = 1 - e^{-1}, Q = 2 e^{-1} - 1
    LevyModel m = raw_drift_model(1.0);
    auto inter = InterarrivalLaw::deterministic(1.0);
    auto claim = ClaimLaw::uniform_bounded(1.0 - 1e-12, 1.0 + 1e-12);
    RngStream rng(21, StreamPurpose::test, 0);
    CycleSample c = simulate_cycle(m, inter, claim, 1.0, {}, rng);
    CHECK(c.t == 1.0);
    CHECK(c.m == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(c.q == doctest::Approx(2.0 * std::exp(-1.0) - 1.0).epsilon(1e-10));
    CHECK(c.q == doctest::Approx(-0.26424).epsilon(1e-4));
    CHECK_FALSE(c.saturated);

    // a_v = 0: M = 1, I = T, Q = xi - cT
    LevyModel flat = raw_drift_model(0.0);
    auto inter2 = InterarrivalLaw::deterministic(2.0);
    auto claim2 = ClaimLaw::uniform_bounded(1.5 - 1e-12, 1.5 + 1e-12);
    CycleSample c2 = simulate_cycle(flat, inter2, claim2, 0.7, {}, rng);
    CHECK(c2.m == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c2.q == doctest::Approx(1.5 - 0.7 * 2.0).epsilon(1e-10));
}

TEST_CASE("grid config: adaptive default and refinement") {
    PathGridConfig g;
    CHECK(g.step_for(0.5) == doctest::Approx(0.5 / 512.0));
    CHECK(g.step_for(3.0) == doctest::Approx(1.0 / 512.0));
    g.refinement = 1;
    CHECK(g.step_for(3.0) == doctest::Approx(1.0 / 1024.0));
    PathGridConfig e{0.01, 0};
    CHECK(e.step_for(100.0) == doctest::Approx(0.01));
}

TEST_CASE("batched kernel agrees with the naive reference simulator") {
    // same streams, same draw order; only the arithmetic organisation differs
    std::vector<LevyModel> models{
        gbm(0.08, 0.04),
        derive_log_price_model(0.3, 0.04,
                               {1.3, JumpLaw::double_exponential_on_log(3.0, 2.0, 0.4)}),
        derive_log_price_model(0.1, 0.09, {2.0, JumpLaw::uniform_on_interval(-0.4, 0.6)}),
    };
    auto inter = InterarrivalLaw::exponential(1.0);
    auto claim = ClaimLaw::exponential(2.0);
    for (const auto& m : models) {
        for (uint64_t path = 0; path < 200; ++path) {
            RngStream r1(22, StreamPurpose::test, path);
            RngStream r2(22, StreamPurpose::test, path);
            CycleSample fast = simulate_cycle(m, inter, claim, 1.0, {}, r1);
            CycleSample ref = naive_cycle(m, inter, claim, 1.0, {}, r2);
            REQUIRE(fast.t == ref.t);
            CHECK(std::fabs(fast.v_terminal - ref.v_terminal) <
                  1e-10 * (1.0 + std::fabs(ref.v_terminal)));
            CHECK(std::fabs(fast.m - ref.m) < 1e-9 * (1.0 + ref.m));
            CHECK(std::fabs(fast.q - ref.q) < 1e-8 * (1.0 + std::fabs(ref.q)));
        }
    }
}

TEST_CASE("M equals exp(-V_terminal) exactly as stored") {
    LevyModel m = gbm(0.08, 0.04);
    auto inter = InterarrivalLaw::exponential(1.0);
    auto claim = ClaimLaw::exponential(2.0);
    for (uint64_t i = 0; i < 1000; ++i) {
        RngStream rng(23, StreamPurpose::test, i);
        CycleSample c = simulate_cycle(m, inter, claim, 1.0, {}, rng);
        CHECK(std::fabs(c.m - std::exp(-c.v_terminal)) <= 1e-14 * c.m);
    }
}

TEST_CASE("lognormal terminal law for GBM with fixed interarrival") {
    // T = t fixed: ln M ~ Normal(-a_v t, sigma^2 t)
    LevyModel m = gbm(0.08, 0.04);
    const double t = 0.8;
    auto inter = InterarrivalLaw::deterministic(t);
    auto claim = ClaimLaw::exponential(2.0);
    const long n = 200'000;
    RunningStat st;
    std::vector<double> lnm(n);
    for (long i = 0; i < n; ++i) {
        RngStream rng(24, StreamPurpose::test, static_cast<uint64_t>(i));
        CycleSample c = simulate_cycle(m, inter, claim, 1.0, {}, rng);
        lnm[i] = std::log(c.m);
        st.add(lnm[i]);
    }
    double want_mean = -m.a_v * t;
    double want_var = m.sigma2 * t;
    CHECK(std::fabs(st.mean() - want_mean) < 4.0 * std::sqrt(want_var / n));
    CHECK(std::fabs(st.variance() - want_var) < 4.0 * want_var * std::sqrt(2.0 / n));
    // full law, not only two moments
    double mu = want_mean, sd = std::sqrt(want_var);
    auto cdf = [&](double x) { return oracle::norm_cdf((x - mu) / sd); };
    CHECK_FALSE(ks_one_sample(lnm, cdf, 0.001).reject);
}

TEST_CASE("cycle moments match the cumulant formulas (4 se)") {
    // for Exp(1) interarrivals, E M = 1/(1 - H(1)) and E I = 1/(1 - H(1))
    LevyModel m = gbm(0.08, 0.04);
    double h1 = cumulant(m, 1.0);
    double want = 1.0 / (1.0 - h1);
    auto inter = InterarrivalLaw::exponential(1.0);
    auto claim = ClaimLaw::exponential(2.0);
    const double c_rate = 1.0, claim_mean = 0.5;
    const long n = 200'000;
    RunningStat sm, si;
    for (long i = 0; i < n; ++i) {
        RngStream rng(25, StreamPurpose::test, static_cast<uint64_t>(i));
        CycleSample c = simulate_cycle(m, inter, claim, c_rate, {}, rng);
        sm.add(c.m);
        si.add(c.q); // E Q = E M E|xi| - c E I
    }
    CHECK(std::fabs(sm.mean() - want) < 4.0 * sm.stderr_mean());
    double want_q = want * claim_mean - c_rate * want;
    CHECK(std::fabs(si.mean() - want_q) < 4.0 * si.stderr_mean());
}

TEST_CASE("two disjoint batches are distributionally identical (KS)") {
    LevyModel m = gbm(0.08, 0.04);
    auto inter = InterarrivalLaw::exponential(1.0);
    auto claim = ClaimLaw::exponential(2.0);
    const long n = 100'000;
    std::vector<double> m1(n), m2(n), q1(n), q2(n);
    for (long i = 0; i < n; ++i) {
        RngStream ra(26, StreamPurpose::test, static_cast<uint64_t>(i));
        RngStream rb(26, StreamPurpose::test, static_cast<uint64_t>(i) + 1'000'000);
        CycleSample ca = simulate_cycle(m, inter, claim, 1.0, {}, ra);
        CycleSample cb = simulate_cycle(m, inter, claim, 1.0, {}, rb);
        m1[i] = ca.m; q1[i] = ca.q;
        m2[i] = cb.m; q2[i] = cb.q;
    }
    CHECK_FALSE(ks_two_sample(m1, m2, 0.01).reject);
    CHECK_FALSE(ks_two_sample(q1, q2, 0.01).reject);
}

TEST_CASE("cycle invariants hold on every sample") {
    // Q <= M xi_max for bounded claims (the integral term is nonnegative),
    // and Q >= M xi_min - c T sup e^{-V} with the sup bounded through the
    // naive reference walk
    LevyModel m = gbm(0.08, 0.04);
    auto inter = InterarrivalLaw::exponential(1.0);
    auto claim = ClaimLaw::uniform_bounded(0.5, 2.0);
    for (uint64_t i = 0; i < 20'000; ++i) {
        RngStream rng(30, StreamPurpose::test, i);
        CycleSample c = simulate_cycle(m, inter, claim, 1.0, {}, rng);
        CHECK(c.m > 0.0);
        CHECK(c.q <= 2.0 * c.m + 1e-12);
    }
}

TEST_CASE("saturation is flagged, not silently overflowed") {
    LevyModel m = raw_drift_model(-800.0); // e^{-V} overflows within one unit of time
    auto inter = InterarrivalLaw::deterministic(1.0);
    auto claim = ClaimLaw::exponential(2.0);
    RngStream rng(27, StreamPurpose::test, 0);
    CycleSample c = simulate_cycle(m, inter, claim, 1.0, {}, rng);
    CHECK(c.saturated);

    LevyModel mg = gbm(-800.0, 0.04);
    RngStream rng2(27, StreamPurpose::test, 1);
    CycleSample cg = simulate_cycle(mg, inter, claim, 1.0, {}, rng2);
    CHECK(cg.saturated);
}

TEST_CASE("grid integrator: trapezoid on a constant path") {
    for (double step : {0.5, 0.13, 0.01}) {
        GridPath p = observe_on_uniform_grid(0.0, {}, {}, 1.0, step);
        CHECK(discounted_integral_grid(p) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("grid integrator: first-order convergence on uniformly sampled jump paths") {
    // sigma = 0 pure-jump paths observed at uniform nodes; jump times fall
    // between nodes, so the trapezoid misses them at O(step): halving the
    // step halves the error (ratio of mean errors in [1.6, 2.4] over 100
    // paths), measured against the exact piecewise integrator
    LevyModel m = derive_log_price_model(0.4, 0.0,
                                         {2.0, JumpLaw::uniform_on_interval(-0.5, 0.8)});
    const double b = m.path_drift();
    double err_h = 0.0, err_h2 = 0.0;
    const int paths = 100;
    for (int p = 0; p < paths; ++p) {
        RngStream rng(28, StreamPurpose::test, static_cast<uint64_t>(p));
        double t1 = rng.exponential(1.0);
        long nj = rng.poisson(2.0 * t1);
        std::vector<double> jt(nj), jy(nj);
        for (long i = 0; i < nj; ++i) jt[i] = rng.uniform(0.0, t1);
        std::sort(jt.begin(), jt.end());
        for (long i = 0; i < nj; ++i) jy[i] = m.jumps.law->sample_y(rng);

        // exact value via linear segments between jumps
        std::vector<LinearSegment> segs;
        double v = 0.0, prev = 0.0;
        for (long i = 0; i <= nj; ++i) {
            double end = (i < nj) ? jt[i] : t1;
            segs.push_back({end - prev, v, b});
            v += b * (end - prev);
            if (i < nj) v += jy[i];
            prev = end;
        }
        double exact = discounted_integral_exact(segs);

        double h = std::min(t1, 1.0) / 512.0;
        double g1 = discounted_integral_grid(observe_on_uniform_grid(b, jt, jy, t1, h));
        double g2 = discounted_integral_grid(observe_on_uniform_grid(b, jt, jy, t1, 0.5 * h));
        err_h += std::fabs(g1 - exact);
        err_h2 += std::fabs(g2 - exact);
    }
    double ratio = err_h / err_h2;
    INFO("mean error at h: ", err_h / paths, ", at h/2: ", err_h2 / paths, ", ratio ", ratio);
    CHECK(ratio > 1.6);
    CHECK(ratio < 2.4);
}

TEST_CASE("grid integrator: refinement sequence is Cauchy and jump nodes help") {
    LevyModel m = derive_log_price_model(0.4, 0.0,
                                         {2.0, JumpLaw::uniform_on_interval(-0.5, 0.8)});
    const double b = m.path_drift();
    RngStream rng(29, StreamPurpose::test, 7);
    double t1 = 1.37;
    long nj = 4;
    std::vector<double> jt(nj), jy(nj);
    for (long i = 0; i < nj; ++i) jt[i] = rng.uniform(0.0, t1);
    std::sort(jt.begin(), jt.end());
    for (long i = 0; i < nj; ++i) jy[i] = m.jumps.law->sample_y(rng);

    std::vector<double> vals;
    for (int k = 0; k < 5; ++k) {
        double h = 0.02 / std::pow(2.0, k);
        vals.push_back(discounted_integral_grid(observe_on_uniform_grid(b, jt, jy, t1, h)));
    }
    double d_prev = kInf;
    for (size_t k = 0; k + 1 < vals.size(); ++k) {
        double d = std::fabs(vals[k] - vals[k + 1]);
        CHECK(d < d_prev);
        d_prev = d;
    }

    // inserting the jump times as nodes removes the first-order error
    std::vector<LinearSegment> segs;
    double v = 0.0, prev = 0.0;
    for (long i = 0; i <= nj; ++i) {
        double end = (i < nj) ? jt[i] : t1;
        segs.push_back({end - prev, v, b});
        v += b * (end - prev);
        if (i < nj) v += jy[i];
        prev = end;
    }
    double exact = discounted_integral_exact(segs);
    double h = 0.005;
    double e_plain = std::fabs(
        discounted_integral_grid(observe_on_uniform_grid(b, jt, jy, t1, h)) - exact);
    double e_nodes = std::fabs(
        discounted_integral_grid(observe_with_jump_nodes(b, jt, jy, t1, h)) - exact);
    CHECK(e_nodes < e_plain / 5.0);
}
