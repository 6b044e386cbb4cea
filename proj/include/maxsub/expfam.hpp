#pragma once

// Exponential-family models in canonical form
//
//     f(w) = h(w) exp(eta * w + eta' T(w) - A(eta, eta'))
//
// where w itself is a sufficient statistic with natural parameter eta. The
// nuisance parameter eta' (Gaussian sigma, Gamma shape) is fixed per model
// and shared by background and planted region, so h and T cancel from the
// localization objective and only A is represented here.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>

#include "maxsub/core1d.hpp"
#include "maxsub/error.hpp"
#include "maxsub/rng.hpp"

namespace maxsub {

enum class Family { Gaussian, Poisson, GammaFixedShape, Bernoulli };

inline std::string_view family_name(Family f) noexcept {
    switch (f) {
        case Family::Gaussian: return "gaussian";
        case Family::Poisson: return "poisson";
        case Family::GammaFixedShape: return "gamma";
        case Family::Bernoulli: return "bernoulli";
    }
    return "unknown";
}

inline Family parse_family(std::string_view name) {
    if (name == "gaussian" || name == "normal") return Family::Gaussian;
    if (name == "poisson") return Family::Poisson;
    if (name == "gamma") return Family::GammaFixedShape;
    if (name == "bernoulli") return Family::Bernoulli;
    throw InvalidInput("unknown family '" + std::string(name) + "'");
}

/// Natural parameters used for Bernoulli probabilities of exactly 0 or 1.
inline constexpr double kBernoulliEtaCap = 40.0;

/// Poisson sampling uses multiplicative inversion, accurate up to this rate.
inline constexpr double kPoissonMaxRate = 60.0;

class ExpFamilyModel {
public:
    static ExpFamilyModel gaussian(double sigma) {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("gaussian sigma must be positive");
        return ExpFamilyModel(Family::Gaussian, sigma);
    }
    static ExpFamilyModel poisson() { return ExpFamilyModel(Family::Poisson, 0.0); }
    static ExpFamilyModel gamma_fixed_shape(double shape) {
        if (!(shape > 0.0) || !std::isfinite(shape)) throw InvalidInput("gamma shape must be positive");
        return ExpFamilyModel(Family::GammaFixedShape, shape);
    }
    static ExpFamilyModel bernoulli() { return ExpFamilyModel(Family::Bernoulli, 0.0); }

    Family family() const noexcept { return family_; }
    /// Gaussian standard deviation; only meaningful for Family::Gaussian.
    double sigma() const noexcept { return param_; }
    /// Gamma shape; only meaningful for Family::GammaFixedShape.
    double shape() const noexcept { return param_; }
    /// eta' = -1 / (2 sigma^2) for the Gaussian; the other families have none.
    double nuisance_eta() const noexcept {
        return family_ == Family::Gaussian ? -1.0 / (2.0 * param_ * param_) : 0.0;
    }

    /// Throws unless eta lies in the natural-parameter domain.
    void check_eta(double eta) const {
        if (!std::isfinite(eta)) throw InvalidInput("natural parameter must be finite");
        if (family_ == Family::GammaFixedShape && !(eta < 0.0)) {
            throw InvalidInput("gamma natural parameter must be negative");
        }
    }

    friend bool operator==(const ExpFamilyModel&, const ExpFamilyModel&) = default;

private:
    ExpFamilyModel(Family f, double p) : family_(f), param_(p) {}

    Family family_;
    double param_;
};

namespace detail {

inline double softplus(double x) noexcept { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace detail

/// Log-partition A(eta, eta') in closed form.
inline double log_partition(const ExpFamilyModel& model, double eta) {
    model.check_eta(eta);
    switch (model.family()) {
        case Family::Gaussian: {
            const double eta2 = model.nuisance_eta();
            return -eta * eta / (4.0 * eta2) - 0.5 * std::log(-2.0 * eta2);
        }
        case Family::Poisson: return std::exp(eta);
        case Family::GammaFixedShape: return -model.shape() * std::log(-eta);
        case Family::Bernoulli: return detail::softplus(eta);
    }
    throw InvalidInput("unknown family");
}

/// dA/deta, the mean of w at natural parameter eta.
inline double mean(const ExpFamilyModel& model, double eta) {
    model.check_eta(eta);
    switch (model.family()) {
        case Family::Gaussian: return eta * model.sigma() * model.sigma();
        case Family::Poisson: return std::exp(eta);
        case Family::GammaFixedShape: return -model.shape() / eta;
        case Family::Bernoulli: {
            if (eta < 0.0) return std::exp(eta) / (1.0 + std::exp(eta));
            const double t = std::exp(-eta);
            return 1.0 - t / (1.0 + t);
        }
    }
    throw InvalidInput("unknown family");
}

/// Inverse of mean(): the natural parameter whose mean is mu.
inline double natural_from_mean(const ExpFamilyModel& model, double mu) {
    if (!std::isfinite(mu)) throw InvalidInput("mean must be finite");
    switch (model.family()) {
        case Family::Gaussian: return mu / (model.sigma() * model.sigma());
        case Family::Poisson:
            if (!(mu > 0.0)) throw InvalidInput("poisson rate must be positive, got " + std::to_string(mu));
            return std::log(mu);
        case Family::GammaFixedShape:
            if (!(mu > 0.0)) throw InvalidInput("gamma mean must be positive, got " + std::to_string(mu));
            return -model.shape() / mu;
        case Family::Bernoulli:
            if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidInput("bernoulli mean must lie in [0,1]");
            if (mu == 0.0) return -kBernoulliEtaCap;
            if (mu == 1.0) return kBernoulliEtaCap;
            return std::clamp(std::log(mu) - std::log1p(-mu), -kBernoulliEtaCap, kBernoulliEtaCap);
    }
    throw InvalidInput("unknown family");
}

/// A(eta1) - A(eta0), arranged per family to avoid cancellation when the
/// two parameters are close.
inline double log_partition_difference(const ExpFamilyModel& model, double eta0, double eta1) {
    model.check_eta(eta0);
    model.check_eta(eta1);
    switch (model.family()) {
        case Family::Gaussian:
            return 0.5 * model.sigma() * model.sigma() * (eta1 - eta0) * (eta1 + eta0);
        case Family::Poisson: return std::exp(eta0) * std::expm1(eta1 - eta0);
        case Family::GammaFixedShape: return -model.shape() * std::log1p((eta1 - eta0) / eta0);
        case Family::Bernoulli: return std::log1p(mean(model, eta0) * std::expm1(eta1 - eta0));
    }
    throw InvalidInput("unknown family");
}

/// Background/foreground natural parameters for one model, eta0 < eta1.
struct ParamPair {
    ExpFamilyModel model;
    double eta0;
    double eta1;

    ParamPair(ExpFamilyModel m, double e0, double e1) : model(m), eta0(e0), eta1(e1) {
        model.check_eta(eta0);
        model.check_eta(eta1);
        if (!(eta0 < eta1)) throw InvalidInput("parameter pair requires eta0 < eta1");
    }

    static ParamPair from_means(const ExpFamilyModel& m, double mu0, double mu1) {
        return ParamPair(m, natural_from_mean(m, mu0), natural_from_mean(m, mu1));
    }

    double mean0() const { return mean(model, eta0); }
    double mean1() const { return mean(model, eta1); }
};

/// Likelihood-ratio threshold (A(eta1) - A(eta0)) / (eta1 - eta0): the slope
/// of the chord of A, which lies between the two means.
inline double optimal_penalty(const ParamPair& pair) {
    if (!(pair.eta0 < pair.eta1)) throw InvalidInput("optimal penalty requires eta0 < eta1");
    if (pair.model.family() == Family::Bernoulli && pair.eta0 >= 0.0) {
        // Both means sit just below 1; work with the distance from 1.
        const double d = pair.eta1 - pair.eta0;
        const double gap = -std::expm1(-d) * std::exp(-pair.eta0) / (1.0 + std::exp(-pair.eta1));
        return 1.0 - std::log1p(gap) / d;
    }
    return log_partition_difference(pair.model, pair.eta0, pair.eta1) / (pair.eta1 - pair.eta0);
}

/// Penalty for a known background mean and a prior on the mean shift.
inline double penalty_from_prior(const ExpFamilyModel& model, double mu0, double delta_mu) {
    if (!(delta_mu > 0.0) || !std::isfinite(delta_mu)) throw InvalidInput("mean shift must be positive");
    return optimal_penalty(ParamPair::from_means(model, mu0, mu0 + delta_mu));
}

/// GLR statistic with the pair's optimal penalty.
inline double glr_statistic(std::span<const double> w, const ParamPair& pair) {
    return glr_statistic(w, pair.eta0, pair.eta1, optimal_penalty(pair));
}

/// Standard normal draw by Box-Muller from two uniforms.
inline double standard_normal(RngStream& rng) noexcept {
    const double u1 = rng.uniform_open_zero();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace detail {

// Marsaglia-Tsang rejection for shape >= 1; unit rate.
inline double gamma_unit_rate(double shape, RngStream& rng) {
    if (shape < 1.0) {
        const double g = gamma_unit_rate(shape + 1.0, rng);
        return g * std::pow(rng.uniform_open_zero(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = standard_normal(rng);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = rng.uniform_open_zero();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
}

}  // namespace detail

/// One draw at natural parameter eta. Deterministic given the stream state.
inline double sample(const ExpFamilyModel& model, double eta, RngStream& rng) {
    model.check_eta(eta);
    switch (model.family()) {
        case Family::Gaussian: return mean(model, eta) + model.sigma() * standard_normal(rng);
        case Family::Poisson: {
            const double rate = std::exp(eta);
            if (rate > kPoissonMaxRate) {
                throw InvalidInput("poisson sampler supports rates up to " + std::to_string(kPoissonMaxRate));
            }
            const double limit = std::exp(-rate);
            double p = 1.0;
            int k = -1;
            do {
                ++k;
                p *= rng.uniform();
            } while (p > limit);
            return static_cast<double>(k);
        }
        case Family::GammaFixedShape: return detail::gamma_unit_rate(model.shape(), rng) / (-eta);
        case Family::Bernoulli: return rng.uniform() < mean(model, eta) ? 1.0 : 0.0;
    }
    throw InvalidInput("unknown family");
}

}  // namespace maxsub
