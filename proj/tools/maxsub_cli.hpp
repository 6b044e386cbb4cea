#pragma once

// Command-line front end. Exit codes: 0 success, 2 usage or input error,
// 1 internal error.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "maxsub/experiment.hpp"
#include "maxsub/maxsub.hpp"

namespace maxsub::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

inline std::string version_string() {
    return std::string("maxsub ") + kVersion + " (rng " + kRngAlgorithm + ")";
}

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput(path + ": cannot open file");
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline std::vector<double> read_weights(const std::string& path) {
    try {
        return parse_weights(read_file(path));
    } catch (const InvalidInput& e) {
        const std::string msg = e.what();
        if (msg.rfind(path, 0) == 0) throw;
        throw InvalidInput(path + ": " + msg);
    }
}

inline std::string format_significant(double v, int digits) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

inline nlohmann::json solution_json(const Solution& s, double delta) {
    return {{"interval", {s.interval.lo, s.interval.hi}},
            {"raw_weight", s.raw_weight},
            {"penalized_weight", s.penalized_weight},
            {"delta", delta}};
}

}  // namespace detail

/// Runs the tool with argv-style arguments (args[0] is the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Interval and rectangle localization by penalized maximum subarray"};
    app.name(args.empty() ? "maxsub" : args[0]);
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    // solve1d
    auto* solve1d = app.add_subcommand("solve1d", "Solve a 1D max-subarray problem (plain, penalized or budgeted)");
    std::string solve_input;
    std::optional<double> solve_delta;
    std::optional<std::size_t> solve_budget;
    solve1d->add_option("input", solve_input, "Text file of numbers, one per line or comma-separated")->required();
    auto* opt_delta = solve1d->add_option("--delta", solve_delta, "Penalty subtracted from every element");
    auto* opt_budget = solve1d->add_option("--budget", solve_budget, "Maximum interval length K");
    opt_delta->excludes(opt_budget);

    // penalty
    auto* penalty = app.add_subcommand("penalty", "Print the optimal penalty for a background mean and mean shift");
    std::string pen_family = "gaussian";
    double pen_mu0 = 0.0;
    double pen_dmu = 0.0;
    double pen_sigma = 1.0;
    double pen_shape = 1.0;
    penalty->add_option("--family", pen_family, "gaussian | poisson | gamma | bernoulli")->capture_default_str();
    penalty->add_option("--mu0", pen_mu0, "Background mean")->required();
    penalty->add_option("--delta-mu", pen_dmu, "Mean shift of the elevated interval")->required();
    penalty->add_option("--sigma", pen_sigma, "Gaussian standard deviation")->capture_default_str();
    penalty->add_option("--shape", pen_shape, "Gamma shape")->capture_default_str();

    // detect2d
    auto* detect = app.add_subcommand("detect2d", "Iteratively detect rectangles in a PGM image or CSV matrix");
    std::string det_input;
    double det_delta = 0.0;
    std::size_t det_max_regions = 10;
    double det_background = 0.0;
    std::string det_format = "pgm";
    detect->add_option("input", det_input, "PGM (P2/P5) image or CSV matrix")->required();
    detect->add_option("--delta", det_delta, "Penalty per pixel")->required();
    detect->add_option("--max-regions", det_max_regions, "Maximum number of rectangles")->capture_default_str();
    detect->add_option("--background", det_background, "Scalar subtracted from every pixel")->capture_default_str();
    detect->add_option("--format", det_format, "pgm | csv")->check(CLI::IsMember({"pgm", "csv"}))->capture_default_str();

    // hull
    auto* hull = app.add_subcommand("hull", "CSV of the length-constrained frontier with convex-hull flags");
    std::string hull_input;
    hull->add_option("input", hull_input, "Text file of numbers")->required();

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment from a JSON config");
    std::string exp_config;
    std::string exp_out;
    std::size_t exp_threads = 1;
    experiment->add_option("config", exp_config, "Experiment config (JSON)")->required();
    experiment->add_option("--out", exp_out, "Output directory")->required();
    experiment->add_option("--threads", exp_threads, "Worker threads (does not change results)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    for (const auto& a : args) argv.push_back(a.c_str());
    if (argv.empty()) argv.push_back("maxsub");
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*solve1d) {
            const std::vector<double> w = detail::read_weights(solve_input);
            nlohmann::json result;
            if (solve_budget) {
                result = detail::solution_json(max_subarray_constrained(w, *solve_budget), 0.0);
                result["budget"] = *solve_budget;
            } else if (solve_delta) {
                result = detail::solution_json(max_subarray_penalized(w, *solve_delta), *solve_delta);
            } else {
                result = detail::solution_json(max_subarray(w), 0.0);
            }
            out << result.dump() << '\n';
        } else if (*penalty) {
            ExpFamilyModel model = ExpFamilyModel::poisson();
            switch (parse_family(pen_family)) {
                case Family::Gaussian: model = ExpFamilyModel::gaussian(pen_sigma); break;
                case Family::Poisson: model = ExpFamilyModel::poisson(); break;
                case Family::GammaFixedShape: model = ExpFamilyModel::gamma_fixed_shape(pen_shape); break;
                case Family::Bernoulli: model = ExpFamilyModel::bernoulli(); break;
            }
            out << detail::format_significant(penalty_from_prior(model, pen_mu0, pen_dmu), 12) << '\n';
        } else if (*detect) {
            const std::string bytes = detail::read_file(det_input);
            Matrix m;
            if (det_format == "csv") {
                m = parse_matrix_csv(bytes);
                std::vector<double> shifted(m.values().begin(), m.values().end());
                for (double& v : shifted) v -= det_background;
                m = Matrix(m.rows(), m.cols(), std::move(shifted));
            } else {
                const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
                m = pgm_to_matrix(read_pgm({data, bytes.size()}), det_background);
            }
            nlohmann::json regions = nlohmann::json::array();
            for (const RectSolution& r : detect_regions(m, det_delta, det_max_regions)) {
                regions.push_back({{"rect", {r.rect.top, r.rect.left, r.rect.bottom, r.rect.right}},
                                   {"raw_weight", r.raw_weight},
                                   {"penalized_weight", r.penalized_weight}});
            }
            out << regions.dump() << '\n';
        } else if (*hull) {
            const std::vector<double> w = detail::read_weights(hull_input);
            const HullReport report = hull_check(w);
            out << "K,length,raw_weight,on_hull,is_vertex,attained_by_delta\n";
            for (const HullRow& row : report.rows) {
                out << *row.point.budget << ',' << row.point.length << ','
                    << experiment::format_number(row.point.raw_weight) << ',' << int(row.on_hull) << ','
                    << int(row.is_vertex) << ',' << int(row.attained_by_delta) << '\n';
            }
        } else if (*experiment) {
            nlohmann::json config;
            try {
                config = nlohmann::json::parse(detail::read_file(exp_config));
            } catch (const nlohmann::json::parse_error& e) {
                throw InvalidInput(exp_config + ": " + e.what());
            }
            const experiment::Output result = experiment::run(config, exp_threads);
            std::filesystem::create_directories(exp_out);
            const auto dir = std::filesystem::path(exp_out);
            std::ofstream(dir / (result.name + ".csv"), std::ios::binary) << result.csv;
            std::ofstream(dir / (result.name + ".json"), std::ios::binary) << result.metadata.dump(2) << '\n';
            out << "wrote " << (dir / (result.name + ".csv")).string() << " and "
                << (dir / (result.name + ".json")).string() << '\n';
        }
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitOk;
}

}  // namespace maxsub::cli
