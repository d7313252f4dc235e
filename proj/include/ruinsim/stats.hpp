#ifndef RUINSIM_STATS_HPP
#define RUINSIM_STATS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace ruinsim {

// streaming mean / variance with compensated accumulation
class RunningStat {
  public:
    void add(double x);
    long count() const { return n_; }
    double mean() const { return n_ ? mean_ : 0.0; }
    double variance() const;          // sample variance (n-1)
    double stderr_mean() const;       // sqrt(var/n)

  private:
    long n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double comp_ = 0.0; // Kahan compensation on the mean update
};

double kahan_sum(std::span<const double> xs);

// order-statistic quantile of a sorted sample (p in [0,1], linear interpolation)
double quantile_sorted(std::span<const double> sorted, double p);

struct KsResult {
    double statistic;   // sup |F1 - F2| (or |Fn - F|)
    double threshold;   // rejection threshold at the given alpha
    bool reject;
};

// two-sample Kolmogorov-Smirnov; inputs need not be sorted
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha);

// one-sample KS against a callable CDF
KsResult ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf,
                       double alpha);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double se_slope = 0.0;
    double se_intercept = 0.0;
    long n_used = 0;
};

// weighted least squares of y on x; weights ~ 1/se^2 (all-zero se means unweighted)
LineFit fit_line_weighted(std::span<const double> x, std::span<const double> y,
                          std::span<const double> se);

// binomial proportion standard error
double binomial_stderr(double p_hat, long n);

} // namespace ruinsim

#endif
