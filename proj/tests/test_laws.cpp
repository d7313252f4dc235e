#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ruinsim/laws.hpp"
#include "ruinsim/stats.hpp"
#include "oracles.hpp"

using namespace ruinsim;

namespace {
// quadrature versions of the y-space functionals for the double-exponential
// family, independent of the closed forms in the library
double dexp_expectation(const JumpLaw::DoubleExponentialOnLog& f,
                        const std::function<double(double)>& g) {
    // once the density underflows the product is forced to 0: for the g used
    // here (|g| <= e^{2.9 y}) the clipped tail is < 1e-9, far below the
    // comparison tolerances; avoids inf * 0 = NaN in the far tail
    const double y_max = 800.0;
    auto up_i = [&](double y) {
        double dens = f.eta_plus * std::exp(-f.eta_plus * y);
        return dens == 0.0 ? 0.0 : g(y) * dens;
    };
    auto dn_i = [&](double y) {
        double dens = f.eta_minus * std::exp(-f.eta_minus * y);
        return dens == 0.0 ? 0.0 : g(-y) * dens;
    };
    return f.p_up * oracle::integrate_geometric(up_i, y_max, 1e-13) +
           (1.0 - f.p_up) * oracle::integrate_geometric(dn_i, y_max, 1e-13);
}
double h(double x) { return std::fabs(x) <= 1.0 ? x : 0.0; }
} // namespace

TEST_CASE("interarrival: deterministic point mass and invariants") {
    auto law = InterarrivalLaw::deterministic(1.0);
    RngStream rng(1, StreamPurpose::test, 0);
    for (int i = 0; i < 100; ++i) CHECK(law.sample(rng) == 1.0);
    CHECK(law.exp_moment(3.0) == doctest::Approx(std::exp(3.0)));
    CHECK(law.mgf_abscissa() == kInf);
    CHECK_FALSE(law.support_reaches_zero());
}

TEST_CASE("interarrival: exponential moments") {
    auto law = InterarrivalLaw::exponential(2.0);
    CHECK(law.exp_moment(1.0) == doctest::Approx(2.0)); // rate/(rate-eps)
    CHECK(law.exp_moment(2.0) == kInf);
    CHECK(law.exp_moment(2.5) == kInf);
    CHECK(law.mean() == doctest::Approx(0.5));
    CHECK(law.support_reaches_zero());

    RngStream rng(2, StreamPurpose::test, 0);
    const long n = 1'000'000;
    RunningStat st;
    for (long i = 0; i < n; ++i) st.add(law.sample(rng));
    CHECK(std::fabs(st.mean() - 0.5) < 3.0 * (0.5 / 1000.0));
}

TEST_CASE("interarrival: gamma mgf pole and uniform support flag") {
    auto g = InterarrivalLaw::gamma(3.0, 2.0);
    CHECK(g.exp_moment(1.0) == doctest::Approx(std::pow(2.0, 3.0)));
    CHECK(g.exp_moment(2.0) == kInf);
    CHECK(g.exp_moment(5.0) == kInf);

    CHECK(InterarrivalLaw::uniform(0.0, 2.0).support_reaches_zero());
    CHECK_FALSE(InterarrivalLaw::uniform(0.5, 2.0).support_reaches_zero());
    // uniform mgf against quadrature
    auto u = InterarrivalLaw::uniform(0.5, 2.0);
    double q = oracle::integrate([](double t) { return std::exp(0.7 * t) / 1.5; }, 0.5, 2.0);
    CHECK(u.exp_moment(0.7) == doctest::Approx(q).epsilon(1e-10));
}

TEST_CASE("claim fractional moments: closed forms") {
    CHECK(ClaimLaw::exponential(1.0).fractional_moment(1.0) == doctest::Approx(1.0));
    CHECK(ClaimLaw::exponential(2.0).fractional_moment(3.0) ==
          doctest::Approx(std::tgamma(4.0) / 8.0));
    CHECK(ClaimLaw::pareto(1.0, 2.0).fractional_moment(3.0) == kInf);
    CHECK(ClaimLaw::pareto(1.0, 2.0).fractional_moment(2.0) == kInf); // p = alpha diverges
    CHECK(ClaimLaw::pareto(1.0, 2.5).fractional_moment(2.0) == doctest::Approx(5.0));
    CHECK(ClaimLaw::lognormal(0.3, 0.5).fractional_moment(2.0) ==
          doctest::Approx(std::exp(0.6 + 0.5)));
    // uniform against quadrature
    auto ub = ClaimLaw::uniform_bounded(0.5, 3.0);
    double q = oracle::integrate([](double x) { return std::pow(x, 1.7) / 2.5; }, 0.5, 3.0);
    CHECK(ub.fractional_moment(1.7) == doctest::Approx(q).epsilon(1e-10));

    CHECK(ClaimLaw::pareto(1.0, 2.5).sup_moment_order() == doctest::Approx(2.5));
    CHECK(ClaimLaw::exponential(1.0).sup_moment_order() == kInf);
    CHECK(ClaimLaw::uniform_bounded(0.0, 1.0).bounded_support());
    CHECK_FALSE(ClaimLaw::lognormal(0.0, 1.0).bounded_support());
}

TEST_CASE("claim sampling matches analytic fractional moments (4 se)") {
    RngStream rng(3, StreamPurpose::test, 0);
    const long n = 1'000'000;
    // every shipped family; the Pareto index is high enough that p=2 has a CLT
    std::vector<ClaimLaw> laws{ClaimLaw::exponential(2.0), ClaimLaw::pareto(1.0, 6.0),
                               ClaimLaw::lognormal(0.1, 0.4),
                               ClaimLaw::uniform_bounded(0.2, 2.2)};
    for (const auto& law : laws) {
        for (double p : {0.5, 1.0, 2.0}) {
            RunningStat st;
            for (long i = 0; i < n; ++i) st.add(std::pow(law.sample(rng), p));
            double want = law.fractional_moment(p);
            INFO(law.describe(), " p=", p);
            CHECK(std::fabs(st.mean() - want) < 4.0 * st.stderr_mean());
        }
    }
}

TEST_CASE("interarrival sampling matches analytic exp moments (4 se)") {
    RngStream rng(4, StreamPurpose::test, 0);
    const long n = 1'000'000;
    std::vector<InterarrivalLaw> laws{
        InterarrivalLaw::exponential(1.0), InterarrivalLaw::gamma(2.0, 3.0),
        InterarrivalLaw::deterministic(0.7), InterarrivalLaw::uniform(0.0, 1.5)};
    for (const auto& law : laws) {
        double eps = 0.25;
        RunningStat st;
        for (long i = 0; i < n; ++i) st.add(std::exp(eps * law.sample(rng)));
        double want = law.exp_moment(eps);
        INFO(law.describe());
        CHECK(std::fabs(st.mean() - want) < 4.0 * st.stderr_mean() + 1e-12);
    }
}

TEST_CASE("jump law: atomic point mass pushes forward to a log point mass") {
    auto law = JumpLaw::atomic({std::exp(1.0) - 1.0}, {1.0});
    RngStream rng(5, StreamPurpose::test, 0);
    for (int i = 0; i < 50; ++i) CHECK(law.sample_y(rng) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(law.mean_h_y() == doctest::Approx(1.0)); // |ln(1+x)| = 1 <= 1
    CHECK(law.mean_h_x() == doctest::Approx(0.0)); // |x| = e-1 > 1
    CHECK(law.mean_hbar_y() == doctest::Approx(0.0));
    auto [qlo, qhi] = law.q_domain();
    CHECK(qlo == -kInf);
    CHECK(qhi == kInf);
}

TEST_CASE("jump law: uniform functionals against quadrature") {
    auto law = JumpLaw::uniform_on_interval(-0.5, 2.0);
    const double L = 2.5;
    auto expect = [&](const std::function<double(double)>& g) {
        return oracle::integrate([&](double x) { return g(x) / L; }, -0.5, 2.0, 1e-13);
    };
    CHECK(law.mean_h_x() ==
          doctest::Approx(expect([](double x) { return h(x); })).epsilon(1e-10));
    CHECK(law.mean_abs_h_x() ==
          doctest::Approx(expect([](double x) { return std::fabs(h(x)); })).epsilon(1e-10));
    CHECK(law.mean_h_y() ==
          doctest::Approx(expect([](double x) { return h(std::log1p(x)); })).epsilon(1e-10));
    CHECK(law.mean_y() ==
          doctest::Approx(expect([](double x) { return std::log1p(x); })).epsilon(1e-10));
    for (double q : {-1.5, -1.0, 0.3, 1.0, 2.7}) {
        double want = expect([&](double x) { return std::pow(1.0 + x, -q); });
        CHECK(law.mgf_neg_y(q) == doctest::Approx(want).epsilon(1e-10));
    }
    for (double q : {-0.8, 0.0, 1.0, 1.9}) {
        double want = expect([&](double x) {
            double y = std::log1p(x);
            return std::fabs(y) > 1.0 ? std::exp(-q * y) : 0.0;
        });
        CHECK(law.large_jump_integral(q) == doctest::Approx(want).epsilon(1e-9));
    }
    CHECK(law.prob_neg() == doctest::Approx(0.2));
    CHECK(law.prob_pos() == doctest::Approx(0.8));
}

TEST_CASE("jump law: double-exponential functionals against quadrature") {
    JumpLaw law = JumpLaw::double_exponential_on_log(3.0, 2.0, 0.4);
    const auto& f = std::get<JumpLaw::DoubleExponentialOnLog>(law.family);

    CHECK(law.mean_y() ==
          doctest::Approx(dexp_expectation(f, [](double y) { return y; })).epsilon(1e-10));
    CHECK(law.mean_h_y() ==
          doctest::Approx(dexp_expectation(f, [](double y) { return h(y); })).epsilon(1e-10));
    CHECK(law.mean_hbar_y() ==
          doctest::Approx(dexp_expectation(f, [](double y) { return y - h(y); })).epsilon(1e-9));
    CHECK(law.mean_h_x() ==
          doctest::Approx(dexp_expectation(f, [](double y) { return h(std::expm1(y)); }))
              .epsilon(1e-10));
    CHECK(law.mean_abs_h_x() ==
          doctest::Approx(
              dexp_expectation(f, [](double y) { return std::fabs(h(std::expm1(y))); }))
              .epsilon(1e-10));
    // exponential-kernel integrands are folded into a single exp so the
    // quadrature never multiplies an overflow by an underflow
    auto up_rate = [&](double q) { return f.eta_plus + q; };
    auto dn_rate = [&](double q) { return f.eta_minus - q; };
    for (double q : {-2.9, -1.0, 0.0, 1.0, 1.9}) {
        double want =
            f.p_up * oracle::integrate_geometric(
                         [&](double y) { return f.eta_plus * std::exp(-up_rate(q) * y); },
                         8000.0, 1e-12) +
            (1.0 - f.p_up) *
                oracle::integrate_geometric(
                    [&](double y) { return f.eta_minus * std::exp(-dn_rate(q) * y); }, 8000.0,
                    1e-12);
        CHECK(law.mgf_neg_y(q) == doctest::Approx(want).epsilon(1e-8));
        double wantJ =
            f.p_up * oracle::integrate_geometric(
                         [&](double y) {
                             return y > 1.0 ? f.eta_plus * std::exp(-up_rate(q) * y) : 0.0;
                         },
                         8000.0, 1e-12) +
            (1.0 - f.p_up) *
                oracle::integrate_geometric(
                    [&](double y) {
                        return y > 1.0 ? f.eta_minus * std::exp(-dn_rate(q) * y) : 0.0;
                    },
                    8000.0, 1e-12);
        CHECK(law.large_jump_integral(q) == doctest::Approx(wantJ).epsilon(1e-7));
    }
    // domain edges
    CHECK(law.mgf_neg_y(2.0) == kInf);
    CHECK(law.mgf_neg_y(-3.0) == kInf);
    auto [qlo, qhi] = law.q_domain();
    CHECK(qlo == doctest::Approx(-3.0));
    CHECK(qhi == doctest::Approx(2.0));

    // one-sided variants keep the inactive tail out of the domain cut
    auto down_only = JumpLaw::double_exponential_on_log(3.0, 2.0, 0.0);
    auto [dlo, dhi] = down_only.q_domain();
    CHECK(dlo == -kInf);
    CHECK(dhi == doctest::Approx(2.0));
    CHECK(down_only.mgf_neg_y(-10.0) < kInf);
}

TEST_CASE("pushforward consistency: x samples mapped through ln(1+x) match y samples") {
    // two-sample KS at alpha=0.01, n=1e4, per the derived-triplet contract
    std::vector<JumpLaw> laws{
        JumpLaw::uniform_on_interval(-0.6, 1.5),
        JumpLaw::double_exponential_on_log(3.0, 2.0, 0.4),
        JumpLaw::atomic({-0.3, 0.5, 2.0}, {0.25, 0.5, 0.25}),
    };
    for (const auto& law : laws) {
        RngStream rx(6, StreamPurpose::test, 1);
        RngStream ry(6, StreamPurpose::test, 2);
        const long n = 10'000;
        std::vector<double> mapped(n), direct(n);
        for (long i = 0; i < n; ++i) {
            mapped[i] = std::log1p(law.sample_x(rx));
            direct[i] = law.sample_y(ry);
        }
        INFO(law.describe());
        CHECK_FALSE(ks_two_sample(mapped, direct, 0.01).reject);
    }
}

TEST_CASE("sampled jump moments match the analytic functionals (4 se)") {
    std::vector<JumpLaw> laws{
        JumpLaw::uniform_on_interval(-0.6, 1.5),
        JumpLaw::double_exponential_on_log(3.0, 2.0, 0.4),
        JumpLaw::atomic({-0.3, 0.5, 2.0}, {0.25, 0.5, 0.25}),
    };
    const long n = 400'000;
    for (const auto& law : laws) {
        RngStream rng(7, StreamPurpose::test, 3);
        RunningStat hy, hx, yy;
        for (long i = 0; i < n; ++i) {
            double x = law.sample_x(rng);
            double y = std::log1p(x);
            hx.add(h(x));
            hy.add(h(y));
            yy.add(y);
        }
        INFO(law.describe());
        CHECK(std::fabs(hx.mean() - law.mean_h_x()) < 4.0 * hx.stderr_mean() + 1e-12);
        CHECK(std::fabs(hy.mean() - law.mean_h_y()) < 4.0 * hy.stderr_mean() + 1e-12);
        CHECK(std::fabs(yy.mean() - law.mean_y()) < 4.0 * yy.stderr_mean() + 1e-12);
    }
}

TEST_CASE("invalid law parameters are rejected") {
    CHECK_THROWS_AS(InterarrivalLaw::exponential(0.0), std::invalid_argument);
    CHECK_THROWS_AS(InterarrivalLaw::uniform(-0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ClaimLaw::pareto(0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(ClaimLaw::uniform_bounded(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(JumpLaw::atomic({-1.0}, {1.0}), std::invalid_argument); // touches -1
    CHECK_THROWS_AS(JumpLaw::atomic({-1.5}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(JumpLaw::uniform_on_interval(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(JumpLaw::atomic({0.5, 1.0}, {0.4, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(JumpLaw::double_exponential_on_log(0.0, 1.0, 0.5), std::invalid_argument);
}
