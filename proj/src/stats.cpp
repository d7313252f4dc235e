#include "ruinsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ruinsim {

void RunningStat::add(double x) {
    ++n_;
    double delta = x - mean_;
    double y = delta / n_ - comp_;
    double t = mean_ + y;
    comp_ = (t - mean_) - y;
    mean_ = t;
    m2_ += delta * (x - mean_);
}

double RunningStat::variance() const { return n_ > 1 ? m2_ / (n_ - 1) : 0.0; }

double RunningStat::stderr_mean() const {
    return n_ > 1 ? std::sqrt(variance() / n_) : 0.0;
}

double kahan_sum(std::span<const double> xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
    if (p <= 0.0) return sorted.front();
    if (p >= 1.0) return sorted.back();
    double idx = p * (sorted.size() - 1);
    size_t lo = static_cast<size_t>(idx);
    double frac = idx - lo;
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

namespace {
double ks_coefficient(double alpha) { return std::sqrt(-0.5 * std::log(alpha / 2.0)); }
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(i / na - j / nb));
    }
    double thr = ks_coefficient(alpha) * std::sqrt((na + nb) / (na * nb));
    return {d, thr, d > thr};
}

KsResult ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf,
                       double alpha) {
    if (a.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
    std::sort(a.begin(), a.end());
    const double n = static_cast<double>(a.size());
    double d = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double f = cdf(a[i]);
        d = std::max(d, std::fabs((i + 1) / n - f));
        d = std::max(d, std::fabs(f - i / n));
    }
    double thr = ks_coefficient(alpha) / std::sqrt(n);
    return {d, thr, d > thr};
}

LineFit fit_line_weighted(std::span<const double> x, std::span<const double> y,
                          std::span<const double> se) {
    if (x.size() != y.size() || (se.size() != 0 && se.size() != x.size()))
        throw std::invalid_argument("fit_line_weighted: size mismatch");
    if (x.size() < 2) throw std::invalid_argument("fit_line_weighted: need >= 2 points");

    bool weighted = false;
    for (double s : se)
        if (s > 0.0) weighted = true;

    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    long n = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double w = 1.0;
        if (weighted) {
            if (!(se[i] > 0.0)) continue; // points with no usable error drop out
            w = 1.0 / (se[i] * se[i]);
        }
        sw += w;
        swx += w * x[i];
        swy += w * y[i];
        swxx += w * x[i] * x[i];
        swxy += w * x[i] * y[i];
        ++n;
    }
    if (n < 2) throw std::invalid_argument("fit_line_weighted: fewer than 2 usable points");
    double det = sw * swxx - swx * swx;
    if (det <= 0.0) throw std::runtime_error("fit_line_weighted: degenerate design");

    LineFit fit;
    fit.slope = (sw * swxy - swx * swy) / det;
    fit.intercept = (swxx * swy - swx * swxy) / det;
    fit.n_used = n;
    if (weighted) {
        fit.se_slope = std::sqrt(sw / det);
        fit.se_intercept = std::sqrt(swxx / det);
    } else {
        // scale by residual variance when no per-point errors were given
        double rss = 0;
        for (size_t i = 0; i < x.size(); ++i) {
            double r = y[i] - fit.intercept - fit.slope * x[i];
            rss += r * r;
        }
        double s2 = (n > 2) ? rss / (n - 2) : 0.0;
        fit.se_slope = std::sqrt(s2 * sw / det);
        fit.se_intercept = std::sqrt(s2 * swxx / det);
    }
    return fit;
}

double binomial_stderr(double p_hat, long n) {
    if (n <= 0) return 0.0;
    double v = p_hat * (1.0 - p_hat) / static_cast<double>(n);
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

} // namespace ruinsim
