#include "ruinsim/laws.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ruinsim {

namespace {
void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}
} // namespace

// ------------------------------ InterarrivalLaw ---------------------------

InterarrivalLaw InterarrivalLaw::exponential(double rate) {
    require(rate > 0, "interarrival exponential: rate must be > 0");
    return {Exponential{rate}};
}
InterarrivalLaw InterarrivalLaw::gamma(double shape, double rate) {
    require(shape > 0 && rate > 0, "interarrival gamma: shape and rate must be > 0");
    return {Gamma{shape, rate}};
}
InterarrivalLaw InterarrivalLaw::deterministic(double value) {
    require(value > 0, "interarrival deterministic: value must be > 0");
    return {Deterministic{value}};
}
InterarrivalLaw InterarrivalLaw::uniform(double lo, double hi) {
    require(lo >= 0 && hi > lo, "interarrival uniform: need 0 <= lo < hi");
    return {Uniform{lo, hi}};
}

double InterarrivalLaw::sample(RngStream& rng) const {
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Exponential>) return rng.exponential(f.rate);
            else if constexpr (std::is_same_v<F, Gamma>) return rng.gamma(f.shape, f.rate);
            else if constexpr (std::is_same_v<F, Deterministic>) return f.value;
            else return rng.uniform(f.lo, f.hi);
        },
        family);
}

double InterarrivalLaw::mean() const {
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Exponential>) return 1.0 / f.rate;
            else if constexpr (std::is_same_v<F, Gamma>) return f.shape / f.rate;
            else if constexpr (std::is_same_v<F, Deterministic>) return f.value;
            else return 0.5 * (f.lo + f.hi);
        },
        family);
}

double InterarrivalLaw::exp_moment(double eps) const {
    if (eps <= 0) throw std::invalid_argument("exp_moment: eps must be > 0");
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Exponential>) {
                return eps < f.rate ? f.rate / (f.rate - eps) : kInf;
            } else if constexpr (std::is_same_v<F, Gamma>) {
                return eps < f.rate ? std::pow(f.rate / (f.rate - eps), f.shape) : kInf;
            } else if constexpr (std::is_same_v<F, Deterministic>) {
                return std::exp(eps * f.value);
            } else {
                return (std::exp(eps * f.hi) - std::exp(eps * f.lo)) / (eps * (f.hi - f.lo));
            }
        },
        family);
}

double InterarrivalLaw::mgf_abscissa() const {
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Exponential>) return f.rate;
            else if constexpr (std::is_same_v<F, Gamma>) return f.rate;
            else return kInf;
        },
        family);
}

bool InterarrivalLaw::support_reaches_zero() const {
    return std::visit(
        [&](const auto& f) -> bool {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Exponential>) return true;
            else if constexpr (std::is_same_v<F, Gamma>) return true;
            else if constexpr (std::is_same_v<F, Deterministic>) return false;
            else return f.lo == 0.0;
        },
        family);
}

std::string InterarrivalLaw::describe() const {
    std::ostringstream os;
    std::visit(
        [&](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Exponential>) os << "exponential(rate=" << f.rate << ")";
            else if constexpr (std::is_same_v<F, Gamma>)
                os << "gamma(shape=" << f.shape << ",rate=" << f.rate << ")";
            else if constexpr (std::is_same_v<F, Deterministic>)
                os << "deterministic(" << f.value << ")";
            else os << "uniform(" << f.lo << "," << f.hi << ")";
        },
        family);
    return os.str();
}

// --------------------------------- ClaimLaw -------------------------------

ClaimLaw ClaimLaw::exponential(double rate) {
    require(rate > 0, "claim exponential: rate must be > 0");
    return {Exponential{rate}};
}
ClaimLaw ClaimLaw::pareto(double scale, double alpha) {
    require(scale > 0 && alpha > 0, "claim pareto: scale and alpha must be > 0");
    return {Pareto{scale, alpha}};
}
ClaimLaw ClaimLaw::lognormal(double mu, double sigma) {
    require(sigma > 0, "claim lognormal: sigma must be > 0");
    return {LogNormal{mu, sigma}};
}
ClaimLaw ClaimLaw::uniform_bounded(double lo, double hi) {
    require(lo >= 0 && hi > lo, "claim uniform: need 0 <= lo < hi");
    return {UniformBounded{lo, hi}};
}

double ClaimLaw::sample(RngStream& rng) const {
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Exponential>) return rng.exponential(f.rate);
            else if constexpr (std::is_same_v<F, Pareto>)
                return f.scale * std::pow(rng.u01(), -1.0 / f.alpha);
            else if constexpr (std::is_same_v<F, LogNormal>)
                return std::exp(f.mu + f.sigma * rng.normal());
            else return rng.uniform(f.lo, f.hi);
        },
        family);
}

double ClaimLaw::fractional_moment(double p) const {
    if (p <= 0) throw std::invalid_argument("fractional_moment: p must be > 0");
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Exponential>) {
                return std::tgamma(p + 1.0) / std::pow(f.rate, p);
            } else if constexpr (std::is_same_v<F, Pareto>) {
                return p < f.alpha ? std::pow(f.scale, p) * f.alpha / (f.alpha - p) : kInf;
            } else if constexpr (std::is_same_v<F, LogNormal>) {
                return std::exp(p * f.mu + 0.5 * p * p * f.sigma * f.sigma);
            } else {
                // (hi^{p+1} - lo^{p+1}) / ((p+1)(hi-lo))
                return (std::pow(f.hi, p + 1.0) - std::pow(f.lo, p + 1.0)) /
                       ((p + 1.0) * (f.hi - f.lo));
            }
        },
        family);
}

double ClaimLaw::sup_moment_order() const {
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Pareto>) return f.alpha;
            else return kInf;
        },
        family);
}

bool ClaimLaw::bounded_support() const {
    return std::holds_alternative<UniformBounded>(family);
}

std::string ClaimLaw::describe() const {
    std::ostringstream os;
    std::visit(
        [&](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Exponential>) os << "exponential(rate=" << f.rate << ")";
            else if constexpr (std::is_same_v<F, Pareto>)
                os << "pareto(scale=" << f.scale << ",alpha=" << f.alpha << ")";
            else if constexpr (std::is_same_v<F, LogNormal>)
                os << "lognormal(mu=" << f.mu << ",sigma=" << f.sigma << ")";
            else os << "uniform(" << f.lo << "," << f.hi << ")";
        },
        family);
    return os.str();
}

// --------------------------------- JumpLaw --------------------------------

JumpLaw JumpLaw::atomic(std::vector<double> points, std::vector<double> weights) {
    require(!points.empty() && points.size() == weights.size(),
            "jump atomic: points/weights must be non-empty and equal length");
    double wsum = 0;
    for (size_t i = 0; i < points.size(); ++i) {
        require(points[i] > -1.0, "jump atomic: every point must be > -1");
        require(weights[i] > 0.0, "jump atomic: weights must be > 0");
        wsum += weights[i];
    }
    require(std::fabs(wsum - 1.0) < 1e-12, "jump atomic: weights must sum to 1");
    return {Atomic{std::move(points), std::move(weights)}};
}

JumpLaw JumpLaw::uniform_on_interval(double lo, double hi) {
    require(lo > -1.0 && hi > lo, "jump uniform: need -1 < lo < hi");
    return {UniformOnInterval{lo, hi}};
}

JumpLaw JumpLaw::double_exponential_on_log(double eta_plus, double eta_minus, double p_up) {
    require(eta_plus > 0 && eta_minus > 0, "jump double-exp: rates must be > 0");
    require(p_up >= 0 && p_up <= 1, "jump double-exp: p_up must be in [0,1]");
    return {DoubleExponentialOnLog{eta_plus, eta_minus, p_up}};
}

double JumpLaw::sample_y(RngStream& rng) const {
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Atomic>) {
                double u = rng.u01(), acc = 0;
                for (size_t i = 0; i < f.points.size(); ++i) {
                    acc += f.weights[i];
                    if (u <= acc) return std::log1p(f.points[i]);
                }
                return std::log1p(f.points.back());
            } else if constexpr (std::is_same_v<F, UniformOnInterval>) {
                return std::log1p(rng.uniform(f.lo, f.hi));
            } else {
                if (rng.u01() < f.p_up) return rng.exponential(f.eta_plus);
                return -rng.exponential(f.eta_minus);
            }
        },
        family);
}

double JumpLaw::sample_x(RngStream& rng) const {
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Atomic>) {
                double u = rng.u01(), acc = 0;
                for (size_t i = 0; i < f.points.size(); ++i) {
                    acc += f.weights[i];
                    if (u <= acc) return f.points[i];
                }
                return f.points.back();
            } else if constexpr (std::is_same_v<F, UniformOnInterval>) {
                return rng.uniform(f.lo, f.hi);
            } else {
                if (rng.u01() < f.p_up) return std::expm1(rng.exponential(f.eta_plus));
                return std::expm1(-rng.exponential(f.eta_minus));
            }
        },
        family);
}

namespace {
// int |x| dx over [a,b]: antiderivative x|x|/2
double abs_integral(double a, double b) { return 0.5 * (b * std::fabs(b) - a * std::fabs(a)); }
// int y e^y dy: antiderivative (y-1)e^y
double y_exp_integral(double a, double b) {
    return (b - 1.0) * std::exp(b) - (a - 1.0) * std::exp(a);
}
// int_0^{ln 2} (e^y - 1) eta e^{-eta y} dy
double dexp_pos_h(double eta) {
    if (std::fabs(eta - 1.0) < 1e-12) return std::log(2.0) - 0.5;
    return eta * (std::pow(2.0, 1.0 - eta) - 1.0) / (1.0 - eta) -
           (1.0 - std::pow(2.0, -eta));
}
// int y eta e^{-eta y} dy on [0,1]  (mean of Exp(eta) truncated at 1)
double dexp_trunc_mean(double eta) {
    return -std::exp(-eta) + (1.0 - std::exp(-eta)) / eta;
}
} // namespace

double JumpLaw::mean_h_x() const {
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Atomic>) {
                double s = 0;
                for (size_t i = 0; i < f.points.size(); ++i)
                    if (std::fabs(f.points[i]) <= 1.0) s += f.weights[i] * f.points[i];
                return s;
            } else if constexpr (std::is_same_v<F, UniformOnInterval>) {
                double a = std::max(f.lo, -1.0), b = std::min(f.hi, 1.0);
                if (b <= a) return 0.0;
                return 0.5 * (b * b - a * a) / (f.hi - f.lo);
            } else {
                // h(X) = (e^Y - 1) 1{Y <= ln 2}
                return f.p_up * dexp_pos_h(f.eta_plus) -
                       (1.0 - f.p_up) / (f.eta_minus + 1.0);
            }
        },
        family);
}

double JumpLaw::mean_abs_h_x() const {
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Atomic>) {
                double s = 0;
                for (size_t i = 0; i < f.points.size(); ++i)
                    if (std::fabs(f.points[i]) <= 1.0) s += f.weights[i] * std::fabs(f.points[i]);
                return s;
            } else if constexpr (std::is_same_v<F, UniformOnInterval>) {
                double a = std::max(f.lo, -1.0), b = std::min(f.hi, 1.0);
                if (b <= a) return 0.0;
                return abs_integral(a, b) / (f.hi - f.lo);
            } else {
                return f.p_up * dexp_pos_h(f.eta_plus) +
                       (1.0 - f.p_up) / (f.eta_minus + 1.0);
            }
        },
        family);
}

double JumpLaw::prob_neg() const {
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Atomic>) {
                double s = 0;
                for (size_t i = 0; i < f.points.size(); ++i)
                    if (f.points[i] < 0.0) s += f.weights[i];
                return s;
            } else if constexpr (std::is_same_v<F, UniformOnInterval>) {
                if (f.hi <= 0) return 1.0;
                if (f.lo >= 0) return 0.0;
                return -f.lo / (f.hi - f.lo);
            } else {
                return 1.0 - f.p_up;
            }
        },
        family);
}

double JumpLaw::prob_pos() const {
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Atomic>) {
                double s = 0;
                for (size_t i = 0; i < f.points.size(); ++i)
                    if (f.points[i] > 0.0) s += f.weights[i];
                return s;
            } else if constexpr (std::is_same_v<F, UniformOnInterval>) {
                if (f.lo >= 0) return 1.0;
                if (f.hi <= 0) return 0.0;
                return f.hi / (f.hi - f.lo);
            } else {
                return f.p_up;
            }
        },
        family);
}

double JumpLaw::mgf_neg_y(double q) const {
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Atomic>) {
                double s = 0;
                for (size_t i = 0; i < f.points.size(); ++i)
                    s += f.weights[i] * std::pow(1.0 + f.points[i], -q);
                return s;
            } else if constexpr (std::is_same_v<F, UniformOnInterval>) {
                // E (1+X)^{-q} over uniform X
                double L = f.hi - f.lo;
                if (std::fabs(q - 1.0) < 1e-12)
                    return std::log((1.0 + f.hi) / (1.0 + f.lo)) / L;
                return (std::pow(1.0 + f.hi, 1.0 - q) - std::pow(1.0 + f.lo, 1.0 - q)) /
                       ((1.0 - q) * L);
            } else {
                if ((f.p_up > 0.0 && q <= -f.eta_plus) || (f.p_up < 1.0 && q >= f.eta_minus))
                    return kInf;
                double s = 0;
                if (f.p_up > 0.0) s += f.p_up * f.eta_plus / (f.eta_plus + q);
                if (f.p_up < 1.0) s += (1.0 - f.p_up) * f.eta_minus / (f.eta_minus - q);
                return s;
            }
        },
        family);
}

double JumpLaw::mean_y() const {
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Atomic>) {
                double s = 0;
                for (size_t i = 0; i < f.points.size(); ++i)
                    s += f.weights[i] * std::log1p(f.points[i]);
                return s;
            } else if constexpr (std::is_same_v<F, UniformOnInterval>) {
                double a = std::log1p(f.lo), b = std::log1p(f.hi);
                return y_exp_integral(a, b) / (f.hi - f.lo);
            } else {
                return f.p_up / f.eta_plus - (1.0 - f.p_up) / f.eta_minus;
            }
        },
        family);
}

double JumpLaw::mean_h_y() const {
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Atomic>) {
                double s = 0;
                for (size_t i = 0; i < f.points.size(); ++i) {
                    double y = std::log1p(f.points[i]);
                    if (std::fabs(y) <= 1.0) s += f.weights[i] * y;
                }
                return s;
            } else if constexpr (std::is_same_v<F, UniformOnInterval>) {
                // density of Y on [ln(1+lo), ln(1+hi)] is e^y/(hi-lo)
                double a = std::max(std::log1p(f.lo), -1.0);
                double b = std::min(std::log1p(f.hi), 1.0);
                if (b <= a) return 0.0;
                return y_exp_integral(a, b) / (f.hi - f.lo);
            } else {
                return f.p_up * dexp_trunc_mean(f.eta_plus) -
                       (1.0 - f.p_up) * dexp_trunc_mean(f.eta_minus);
            }
        },
        family);
}

double JumpLaw::mean_hbar_y() const { return mean_y() - mean_h_y(); }

double JumpLaw::large_jump_integral(double q) const {
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Atomic>) {
                double s = 0;
                for (size_t i = 0; i < f.points.size(); ++i) {
                    double y = std::log1p(f.points[i]);
                    if (std::fabs(y) > 1.0) s += f.weights[i] * std::exp(-q * y);
                }
                return s;
            } else if constexpr (std::is_same_v<F, UniformOnInterval>) {
                double a = std::log1p(f.lo), b = std::log1p(f.hi);
                double L = f.hi - f.lo;
                auto piece = [&](double u, double v) -> double {
                    // int_u^v e^{-qy} e^y dy / L
                    if (v <= u) return 0.0;
                    if (std::fabs(q - 1.0) < 1e-12) return (v - u) / L;
                    return (std::exp((1.0 - q) * v) - std::exp((1.0 - q) * u)) / ((1.0 - q) * L);
                };
                return piece(a, std::min(b, -1.0)) + piece(std::max(a, 1.0), b);
            } else {
                if ((f.p_up > 0.0 && q <= -f.eta_plus) || (f.p_up < 1.0 && q >= f.eta_minus))
                    return kInf;
                double s = 0;
                if (f.p_up > 0.0)
                    s += f.p_up * f.eta_plus * std::exp(-(f.eta_plus + q)) / (f.eta_plus + q);
                if (f.p_up < 1.0)
                    s += (1.0 - f.p_up) * f.eta_minus * std::exp(-(f.eta_minus - q)) /
                         (f.eta_minus - q);
                return s;
            }
        },
        family);
}

std::pair<double, double> JumpLaw::q_domain() const {
    return std::visit(
        [&](const auto& f) -> std::pair<double, double> {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, DoubleExponentialOnLog>) {
                double lo = f.p_up > 0.0 ? -f.eta_plus : -kInf;
                double hi = f.p_up < 1.0 ? f.eta_minus : kInf;
                return {lo, hi};
            } else {
                (void)f;
                return {-kInf, kInf}; // bounded jumps
            }
        },
        family);
}

bool JumpLaw::bounded_y() const {
    return !std::holds_alternative<DoubleExponentialOnLog>(family);
}

std::string JumpLaw::describe() const {
    std::ostringstream os;
    std::visit(
        [&](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Atomic>) {
                os << "atomic(" << f.points.size() << " atoms)";
            } else if constexpr (std::is_same_v<F, UniformOnInterval>) {
                os << "uniform(" << f.lo << "," << f.hi << ")";
            } else {
                os << "double_exp_log(eta+=" << f.eta_plus << ",eta-=" << f.eta_minus
                   << ",p_up=" << f.p_up << ")";
            }
        },
        family);
    return os.str();
}

} // namespace ruinsim
