#pragma once

// Seeded Monte Carlo experiments on planted intervals.
//
// Trial t of an experiment draws from RngStream::substream(seed, t), and
// every aggregate is accumulated in trial order, so results are identical
// for any thread count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "maxsub/core1d.hpp"
#include "maxsub/error.hpp"
#include "maxsub/expfam.hpp"
#include "maxsub/rng.hpp"

namespace maxsub {

struct PlantedConfig {
    std::size_t n = 1000;
    Interval planted{450, 549};
    ExpFamilyModel model = ExpFamilyModel::gaussian(1.0);
    double eta0 = 0.0;
    double eta1 = 1.0;
    std::uint64_t seed = 1;
    std::size_t trials = 100;

    /// eta1 == eta0 is accepted: it plants nothing, which is the no-signal baseline.
    void validate() const {
        if (n < 1) throw InvalidInput("array length must be positive");
        validate_interval(planted, n);
        model.check_eta(eta0);
        model.check_eta(eta1);
        if (eta1 < eta0) throw InvalidInput("planted natural parameter must not be below the background");
        if (trials < 1) throw InvalidInput("trials must be positive");
    }
};

struct PlantedSample {
    std::vector<double> values;
    Interval truth;
};

inline PlantedSample generate_planted(const PlantedConfig& cfg, std::uint64_t trial) {
    cfg.validate();
    RngStream rng = RngStream::substream(cfg.seed, trial);
    PlantedSample out{std::vector<double>(cfg.n), cfg.planted};
    for (std::size_t t = 0; t < cfg.n; ++t) {
        out.values[t] = sample(cfg.model, cfg.planted.contains(t) ? cfg.eta1 : cfg.eta0, rng);
    }
    return out;
}

/// Jaccard index |a ∩ b| / |a ∪ b| of two index ranges.
inline double overlap(const Interval& a, const Interval& b) {
    if (a.lo > a.hi || b.lo > b.hi) throw InvalidInput("overlap of an invalid interval");
    const std::size_t lo = std::max(a.lo, b.lo);
    const std::size_t hi = std::min(a.hi, b.hi);
    const std::size_t inter = lo <= hi ? hi - lo + 1 : 0;
    const std::size_t uni = a.length() + b.length() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t count = 0;
};

inline MeanStderr summarize(std::span<const double> xs) {
    MeanStderr out;
    out.count = xs.size();
    if (xs.empty()) return out;
    double sum = 0.0;
    for (double x : xs) sum += x;
    out.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.stderr_ = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
    }
    return out;
}

/// Runs body(trial) for trial in [0, trials) on up to `threads` workers.
/// Trials are striped across workers; body must write only to its own slot.
inline void for_each_trial(std::size_t trials, std::size_t threads, const std::function<void(std::size_t)>& body) {
    threads = std::max<std::size_t>(1, std::min(threads, trials));
    if (threads == 1) {
        for (std::size_t t = 0; t < trials; ++t) body(t);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t k = 0; k < threads; ++k) {
            pool.emplace_back([&, k] {
                try {
                    for (std::size_t t = k; t < trials; t += threads) body(t);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

struct OverlapCurve {
    std::vector<double> delta_grid;
    std::vector<double> mean_overlap;
    std::vector<double> stderr_;
};

/// Mean overlap of the penalized solution with the planted interval, per
/// penalty. Each trial's array is shared by all penalties.
inline OverlapCurve overlap_vs_delta(const PlantedConfig& cfg, std::span<const double> delta_grid,
                                     std::size_t threads = 1) {
    cfg.validate();
    for (double d : delta_grid) {
        if (!std::isfinite(d)) throw InvalidInput("penalty grid values must be finite");
    }
    const std::size_t g = delta_grid.size();
    std::vector<double> per_trial(cfg.trials * g);
    for_each_trial(cfg.trials, threads, [&](std::size_t trial) {
        const PlantedSample s = generate_planted(cfg, trial);
        for (std::size_t j = 0; j < g; ++j) {
            const Solution sol = max_subarray_penalized(s.values, delta_grid[j]);
            per_trial[trial * g + j] = overlap(sol.interval, s.truth);
        }
    });

    OverlapCurve curve{std::vector<double>(delta_grid.begin(), delta_grid.end()), {}, {}};
    std::vector<double> column(cfg.trials);
    for (std::size_t j = 0; j < g; ++j) {
        for (std::size_t t = 0; t < cfg.trials; ++t) column[t] = per_trial[t * g + j];
        const MeanStderr m = summarize(column);
        curve.mean_overlap.push_back(m.mean);
        curve.stderr_.push_back(m.stderr_);
    }
    return curve;
}

/// How the mu-sweep experiment picks its penalty.
enum class PenaltyPolicy {
    Optimal,         // optimal_penalty of the pair
    FlooredOptimal,  // max(optimal_penalty, floor)
};

inline double policy_penalty(const ParamPair& pair, PenaltyPolicy policy, double floor = 0.25) {
    const double d = optimal_penalty(pair);
    return policy == PenaltyPolicy::FlooredOptimal ? std::max(d, floor) : d;
}

struct RunLengthHistogram {
    double delta = 0.0;
    std::vector<std::size_t> lengths;           // per trial, in trial order
    std::map<std::size_t, std::size_t> counts;  // length -> number of trials

    double median() const {
        if (lengths.empty()) return 0.0;
        std::vector<std::size_t> sorted = lengths;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t mid = sorted.size() / 2;
        if (sorted.size() % 2 == 1) return static_cast<double>(sorted[mid]);
        return 0.5 * static_cast<double>(sorted[mid - 1] + sorted[mid]);
    }
};

/// Lengths of penalized solutions on pure background noise.
inline RunLengthHistogram run_length_histogram(std::size_t n, const ExpFamilyModel& model, double eta0,
                                               double delta, std::size_t trials, std::uint64_t seed,
                                               std::size_t threads = 1) {
    PlantedConfig cfg;
    cfg.n = n;
    cfg.planted = Interval{0, 0};
    cfg.model = model;
    cfg.eta0 = eta0;
    cfg.eta1 = eta0;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.validate();
    if (!std::isfinite(delta)) throw InvalidInput("penalty delta must be finite");

    RunLengthHistogram h;
    h.delta = delta;
    h.lengths.resize(trials);
    for_each_trial(trials, threads, [&](std::size_t trial) {
        const PlantedSample s = generate_planted(cfg, trial);
        h.lengths[trial] = max_subarray_penalized(s.values, delta).length();
    });
    for (std::size_t len : h.lengths) ++h.counts[len];
    return h;
}

struct BoundaryErrorSummary {
    std::size_t trials = 0;
    std::size_t kept = 0;              // trials with estimated right boundary >= true one
    double discard_rate = 0.0;
    double mean_overshoot = 0.0;       // mean of (M_hat - M) over kept trials
    double stderr_overshoot = 0.0;
    double mean_abs_error = 0.0;       // mean |M_hat - M| over all trials
};

/// Right-boundary error of the penalized solver, M = cfg.planted.hi.
/// Trials with M_hat < M are discarded from the conditional mean.
inline BoundaryErrorSummary boundary_error_study(const PlantedConfig& cfg, double delta, std::size_t threads = 1) {
    cfg.validate();
    if (!std::isfinite(delta)) throw InvalidInput("penalty delta must be finite");
    const auto true_hi = static_cast<double>(cfg.planted.hi);
    std::vector<double> signed_err(cfg.trials);
    for_each_trial(cfg.trials, threads, [&](std::size_t trial) {
        const PlantedSample s = generate_planted(cfg, trial);
        signed_err[trial] = static_cast<double>(max_subarray_penalized(s.values, delta).interval.hi) - true_hi;
    });

    BoundaryErrorSummary out;
    out.trials = cfg.trials;
    std::vector<double> kept;
    double abs_sum = 0.0;
    for (double e : signed_err) {
        abs_sum += std::abs(e);
        if (e >= 0.0) kept.push_back(e);
    }
    const MeanStderr m = summarize(kept);
    out.kept = kept.size();
    out.discard_rate = 1.0 - static_cast<double>(kept.size()) / static_cast<double>(cfg.trials);
    out.mean_overshoot = m.mean;
    out.stderr_overshoot = m.stderr_;
    out.mean_abs_error = abs_sum / static_cast<double>(cfg.trials);
    return out;
}

}  // namespace maxsub
