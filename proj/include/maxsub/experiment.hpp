#pragma once

// Declarative Monte Carlo experiments: a JSON config in, a CSV table plus a
// JSON metadata document out. Requires nlohmann/json.
//
// Common keys
//   experiment   overlap_vs_delta | overlap_vs_mu | run_length | boundary_error
//   family       gaussian (default) | poisson | gamma | bernoulli
//   sigma        gaussian standard deviation (default 1)
//   shape        gamma shape (required for gamma)
//   mu0          background mean (default 0 for gaussian, required otherwise)
//   N            array length (boundary_error also takes a list)
//   trials       positive trial count
//   seed         unsigned 64-bit seed (default 1)
//
// Per experiment
//   overlap_vs_delta  plant [lo,hi]; mu1 number or list; delta_grid list;
//                     delta_scale absolute (default) | delta_mu | optimal
//   overlap_vs_mu     plant; mu1 list; policy floored_optimal (default) |
//                     optimal; delta_floor (default 0.25)
//   run_length        deltas list
//   boundary_error    plant; mu1; deltas list

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "maxsub/error.hpp"
#include "maxsub/expfam.hpp"
#include "maxsub/rng.hpp"
#include "maxsub/simlab.hpp"
#include "maxsub/version.hpp"

namespace maxsub::experiment {

using nlohmann::json;

/// Schema violation; the message lists every offending key.
class ConfigError : public InvalidInput {
public:
    explicit ConfigError(const std::vector<std::string>& problems)
        : InvalidInput(join(problems)), problems_(problems) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& ps) {
        std::string s = "invalid experiment config:";
        for (const auto& p : ps) s += "\n  " + p;
        return s;
    }
    std::vector<std::string> problems_;
};

struct Output {
    std::string name;      // experiment kind, used for file names
    std::string csv;
    json metadata;
};

/// Shortest round-trip decimal form; locale-independent.
inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace detail {

class Reader {
public:
    explicit Reader(const json& j) : j_(j) {
        if (!j_.is_object()) problems_.push_back("config: expected a JSON object");
    }

    bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

    double number(const char* key, std::optional<double> fallback = std::nullopt) {
        if (!has(key)) {
            if (fallback) return *fallback;
            problems_.push_back(std::string(key) + ": missing (number)");
            return 0.0;
        }
        const json& v = j_.at(key);
        if (!v.is_number()) {
            problems_.push_back(std::string(key) + ": expected a number");
            return 0.0;
        }
        return v.get<double>();
    }

    std::uint64_t count(const char* key, std::optional<std::uint64_t> fallback = std::nullopt, bool positive = true) {
        if (!has(key)) {
            if (fallback) return *fallback;
            problems_.push_back(std::string(key) + ": missing (" + (positive ? "positive " : "") + "integer)");
            return 0;
        }
        const json& v = j_.at(key);
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
            problems_.push_back(std::string(key) + ": expected a non-negative integer");
            return 0;
        }
        const auto n = v.get<std::uint64_t>();
        if (positive && n == 0) problems_.push_back(std::string(key) + ": must be positive");
        return n;
    }

    std::vector<double> numbers(const char* key, bool allow_scalar = false) {
        std::vector<double> out;
        if (!has(key)) {
            problems_.push_back(std::string(key) + ": missing (list of numbers)");
            return out;
        }
        const json& v = j_.at(key);
        if (allow_scalar && v.is_number()) return {v.get<double>()};
        if (!v.is_array() || v.empty()) {
            problems_.push_back(std::string(key) + ": expected a non-empty list of numbers");
            return out;
        }
        for (const json& x : v) {
            if (!x.is_number()) {
                problems_.push_back(std::string(key) + ": every entry must be a number");
                return {};
            }
            out.push_back(x.get<double>());
        }
        return out;
    }

    std::vector<std::uint64_t> counts(const char* key) {
        std::vector<std::uint64_t> out;
        if (has(key) && j_.at(key).is_array()) {
            for (const json& x : j_.at(key)) {
                if (!x.is_number_unsigned() || x.get<std::uint64_t>() == 0) {
                    problems_.push_back(std::string(key) + ": every entry must be a positive integer");
                    return {};
                }
                out.push_back(x.get<std::uint64_t>());
            }
            if (out.empty()) problems_.push_back(std::string(key) + ": list is empty");
            return out;
        }
        return {count(key)};
    }

    std::string text(const char* key, std::optional<std::string> fallback = std::nullopt) {
        if (!has(key)) {
            if (fallback) return *fallback;
            problems_.push_back(std::string(key) + ": missing (string)");
            return {};
        }
        const json& v = j_.at(key);
        if (!v.is_string()) {
            problems_.push_back(std::string(key) + ": expected a string");
            return {};
        }
        return v.get<std::string>();
    }

    Interval interval(const char* key) {
        if (!has(key)) {
            problems_.push_back(std::string(key) + ": missing ([lo, hi])");
            return {};
        }
        const json& v = j_.at(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number_unsigned() || !v[1].is_number_unsigned() ||
            v[0].get<std::uint64_t>() > v[1].get<std::uint64_t>()) {
            problems_.push_back(std::string(key) + ": expected [lo, hi] with 0 <= lo <= hi");
            return {};
        }
        return Interval{v[0].get<std::size_t>(), v[1].get<std::size_t>()};
    }

    void problem(std::string p) { problems_.push_back(std::move(p)); }

    void finish() const {
        if (!problems_.empty()) throw ConfigError(problems_);
    }

private:
    const json& j_;
    std::vector<std::string> problems_;
};

struct Common {
    ExpFamilyModel model = ExpFamilyModel::gaussian(1.0);
    double mu0 = 0.0;
    std::uint64_t seed = 1;
    std::size_t trials = 0;
};

inline Common read_common(Reader& r) {
    Common c;
    const std::string fam = r.text("family", std::string("gaussian"));
    c.seed = r.count("seed", 1, false);
    c.trials = r.count("trials");
    try {
        switch (parse_family(fam)) {
            case Family::Gaussian: c.model = ExpFamilyModel::gaussian(r.number("sigma", 1.0)); break;
            case Family::Poisson: c.model = ExpFamilyModel::poisson(); break;
            case Family::GammaFixedShape: c.model = ExpFamilyModel::gamma_fixed_shape(r.number("shape")); break;
            case Family::Bernoulli: c.model = ExpFamilyModel::bernoulli(); break;
        }
    } catch (const InvalidInput& e) {
        r.problem(std::string("family parameters: ") + e.what());
    }
    c.mu0 = c.model.family() == Family::Gaussian ? r.number("mu0", 0.0) : r.number("mu0");
    return c;
}

inline PlantedConfig planted_config(const Common& c, std::size_t n, Interval plant, double mu1) {
    PlantedConfig cfg;
    cfg.n = n;
    cfg.planted = plant;
    cfg.model = c.model;
    cfg.eta0 = natural_from_mean(c.model, c.mu0);
    cfg.eta1 = natural_from_mean(c.model, mu1);
    cfg.seed = c.seed;
    cfg.trials = c.trials;
    cfg.validate();
    return cfg;
}

inline std::string row(std::initializer_list<std::string> cells) {
    std::string s;
    for (const auto& c : cells) {
        if (!s.empty()) s += ',';
        s += c;
    }
    return s + '\n';
}

inline Output overlap_vs_delta(Reader& r, const Common& c, std::size_t threads) {
    const auto n = static_cast<std::size_t>(r.count("N"));
    const Interval plant = r.interval("plant");
    const std::vector<double> mu1s = r.numbers("mu1", true);
    const std::vector<double> grid = r.numbers("delta_grid");
    const std::string scale = r.text("delta_scale", std::string("absolute"));
    if (scale != "absolute" && scale != "delta_mu" && scale != "optimal") {
        r.problem("delta_scale: expected absolute, delta_mu or optimal");
    }
    r.finish();

    Output out{"overlap_vs_delta", row({"mu1", "grid_value", "delta", "mean_overlap", "stderr"}), json::object()};
    json summary = json::array();
    for (double mu1 : mu1s) {
        const PlantedConfig cfg = planted_config(c, n, plant, mu1);
        double unit = 1.0;
        if (scale == "delta_mu") unit = mu1 - c.mu0;
        if (scale == "optimal") unit = optimal_penalty(ParamPair(cfg.model, cfg.eta0, cfg.eta1));
        std::vector<double> deltas;
        for (double g : grid) deltas.push_back(g * unit);
        const OverlapCurve curve = maxsub::overlap_vs_delta(cfg, deltas, threads);
        std::size_t best = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            out.csv += row({format_number(mu1), format_number(grid[i]), format_number(deltas[i]),
                            format_number(curve.mean_overlap[i]), format_number(curve.stderr_[i])});
            if (curve.mean_overlap[i] > curve.mean_overlap[best]) best = i;
        }
        summary.push_back({{"mu1", mu1}, {"argmax_grid_value", grid[best]}, {"max_mean_overlap", curve.mean_overlap[best]}});
    }
    out.metadata["summary"] = summary;
    return out;
}

inline Output overlap_vs_mu(Reader& r, const Common& c, std::size_t threads) {
    const auto n = static_cast<std::size_t>(r.count("N"));
    const Interval plant = r.interval("plant");
    const std::vector<double> mu1s = r.numbers("mu1");
    const std::string policy_name = r.text("policy", std::string("floored_optimal"));
    const double floor = r.number("delta_floor", 0.25);
    PenaltyPolicy policy = PenaltyPolicy::FlooredOptimal;
    if (policy_name == "optimal") {
        policy = PenaltyPolicy::Optimal;
    } else if (policy_name != "floored_optimal") {
        r.problem("policy: expected optimal or floored_optimal");
    }
    r.finish();

    Output out{"overlap_vs_mu", row({"mu1", "delta", "mean_overlap", "stderr"}), json::object()};
    for (double mu1 : mu1s) {
        const PlantedConfig cfg = planted_config(c, n, plant, mu1);
        const double delta = policy_penalty(ParamPair(cfg.model, cfg.eta0, cfg.eta1), policy, floor);
        const std::vector<double> grid{delta};
        const OverlapCurve curve = maxsub::overlap_vs_delta(cfg, grid, threads);
        out.csv += row({format_number(mu1), format_number(delta), format_number(curve.mean_overlap[0]),
                        format_number(curve.stderr_[0])});
    }
    return out;
}

inline Output run_length(Reader& r, const Common& c, std::size_t threads) {
    const auto n = static_cast<std::size_t>(r.count("N"));
    const std::vector<double> deltas = r.numbers("deltas");
    r.finish();

    Output out{"run_length", row({"delta", "length", "count"}), json::object()};
    json medians = json::array();
    const double eta0 = natural_from_mean(c.model, c.mu0);
    for (double d : deltas) {
        const RunLengthHistogram h = run_length_histogram(n, c.model, eta0, d, c.trials, c.seed, threads);
        for (const auto& [len, cnt] : h.counts) {
            out.csv += row({format_number(d), std::to_string(len), std::to_string(cnt)});
        }
        medians.push_back({{"delta", d}, {"median_length", h.median()}});
    }
    out.metadata["summary"] = medians;
    return out;
}

inline Output boundary_error(Reader& r, const Common& c, std::size_t threads) {
    const std::vector<std::uint64_t> ns = r.counts("N");
    const Interval plant = r.interval("plant");
    const double mu1 = r.number("mu1");
    const std::vector<double> deltas = r.numbers("deltas");
    r.finish();

    Output out{"boundary_error",
               row({"N", "M", "delta", "trials", "kept", "discard_rate", "mean_overshoot", "stderr_overshoot",
                    "mean_abs_error"}),
               json::object()};
    for (std::uint64_t n : ns) {
        const PlantedConfig cfg = planted_config(c, static_cast<std::size_t>(n), plant, mu1);
        for (double d : deltas) {
            const BoundaryErrorSummary s = boundary_error_study(cfg, d, threads);
            out.csv += row({std::to_string(n), std::to_string(plant.hi), format_number(d), std::to_string(s.trials),
                            std::to_string(s.kept), format_number(s.discard_rate), format_number(s.mean_overshoot),
                            format_number(s.stderr_overshoot), format_number(s.mean_abs_error)});
        }
    }
    return out;
}

}  // namespace detail

/// Runs the experiment described by `config`. The output does not depend on
/// `threads`.
inline Output run(const json& config, std::size_t threads = 1) {
    detail::Reader r(config);
    r.finish();
    const std::string kind = r.text("experiment");
    const detail::Common common = detail::read_common(r);
    if (kind != "overlap_vs_delta" && kind != "overlap_vs_mu" && kind != "run_length" && kind != "boundary_error") {
        if (!kind.empty()) r.problem("experiment: unknown kind '" + kind + "'");
        r.finish();
    }

    Output out;
    try {
        if (kind == "overlap_vs_delta") out = detail::overlap_vs_delta(r, common, threads);
        if (kind == "overlap_vs_mu") out = detail::overlap_vs_mu(r, common, threads);
        if (kind == "run_length") out = detail::run_length(r, common, threads);
        if (kind == "boundary_error") out = detail::boundary_error(r, common, threads);
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidInput& e) {
        throw ConfigError({std::string("parameters: ") + e.what()});
    }

    json meta = {{"experiment", kind},
                 {"config", config},
                 {"seed", common.seed},
                 {"version", kVersion},
                 {"rng", kRngAlgorithm},
                 {"csv", kind + ".csv"}};
    if (out.metadata.contains("summary")) meta["summary"] = out.metadata["summary"];
    out.metadata = std::move(meta);
    return out;
}

}  // namespace maxsub::experiment
