// Copyright 2026 The pmfix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

#include "pmfix/cli.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <vector>

#include <CLI11.hpp>

#include "pmfix/contraction.hpp"
#include "pmfix/serialization.hpp"
#include "pmfix/solver.hpp"

namespace pmfix::cli {

using nlohmann::json;

namespace {

std::size_t resolve_point(const PMSpace& space, const json& ref, const char* context) {
    if (ref.is_string()) {
        const auto idx = space.index_of(ref.get<std::string>());
        if (!idx) {
            throw ConfigError(std::string(context) + ": unknown point name \"" +
                              ref.get<std::string>() + "\"");
        }
        return *idx;
    }
    if (ref.is_number_unsigned() && ref.get<std::size_t>() < space.size()) {
        return ref.get<std::size_t>();
    }
    throw ConfigError(std::string(context) + ": expected a point name or index");
}

std::vector<double> grid_from(const json& block, const char* key,
                              std::vector<double> fallback) {
    if (!block.is_object() || !block.contains(key)) return fallback;
    std::vector<double> grid;
    if (!block[key].is_array()) {
        throw ConfigError(std::string(key) + ": expected an array of numbers");
    }
    for (const json& t : block[key]) {
        if (!t.is_number()) throw ConfigError(std::string(key) + ": expected a number");
        grid.push_back(t.get<double>());
    }
    if (grid.empty()) throw ConfigError(std::string(key) + ": must not be empty");
    return grid;
}

double number_or(const json& block, const char* key, double fallback) {
    if (!block.is_object() || !block.contains(key)) return fallback;
    if (!block[key].is_number()) throw ConfigError(std::string(key) + ": expected a number");
    return block[key].get<double>();
}

double require_number_field(const json& block, const char* key, const char* context) {
    if (!block.is_object() || !block.contains(key) || !block[key].is_number()) {
        throw ConfigError(std::string(context) + ": missing numeric field \"" + key + "\"");
    }
    return block[key].get<double>();
}

PMSpace space_from_config(const json& config) {
    if (!config.is_object() || !config.contains("space")) {
        throw ConfigError("config: missing \"space\" block");
    }
    return space_from_json(config["space"]);
}

SelfMap map_from_config(const PMSpace& space, const json& config) {
    if (!config.contains("map")) throw ConfigError("config: missing \"map\" block");
    return self_map_from_json(space, config["map"]);
}

/// Random left-continuous step functions with dyadic breakpoints, used as
/// extra triangle-axiom samples. Dyadic coordinates keep the builtin
/// t-norm evaluations exact, so the tolerance-zero check stays honest.
std::vector<Ddf> random_dyadic_samples(unsigned seed, std::size_t count) {
    std::mt19937 rng(seed);
    std::vector<Ddf> samples;
    samples.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        std::vector<Breakpoint> raw;
        const std::size_t breaks = 1 + rng() % 4;
        for (std::size_t b = 0; b < breaks; ++b) {
            const double threshold = static_cast<double>(rng() % 33) / 8.0;
            const double value = static_cast<double>(1 + rng() % 16) / 16.0;
            raw.push_back({threshold, value});
        }
        samples.emplace_back(std::move(raw));
    }
    return samples;
}

std::string format_report(const json& config, const CliOptions&, const json& document) {
    if (config.is_object() && config.contains("output")) {
        const json& output = config["output"];
        if (output.is_object() && output.contains("format")) {
            const std::string format = output["format"].get<std::string>();
            if (format == "csv") {
                throw ConfigError("output.format: csv is only defined for solve traces");
            }
            if (format != "json") {
                throw ConfigError("output.format: expected \"json\" or \"csv\"");
            }
        }
    }
    return dump_json(document);
}

bool csv_requested(const json& config) {
    return config.is_object() && config.contains("output") && config["output"].is_object() &&
           config["output"].value("format", "json") == std::string("csv");
}

}  // namespace

CommandOutcome cmd_check_space(const json& config, const CliOptions& opts) {
    const PMSpace space = space_from_config(config);
    const json check = config.value("check", json::object());
    const double tolerance = number_or(check, "tolerance", 0.0);

    const SpaceAxiomReport axioms = check_axioms(space);
    const TNormAxiomReport tnorm_axioms =
        check_tnorm_axioms(space.mode().tnorm, /*grid_step=*/1.0 / 16);

    std::vector<Ddf> samples = space.distinct_distances();
    std::size_t extra_samples = 0;
    if (opts.seed) {
        auto extras = random_dyadic_samples(*opts.seed, 8);
        extra_samples = extras.size();
        samples.insert(samples.end(), extras.begin(), extras.end());
    }
    const TriangleAxiomReport triangle_axioms =
        check_triangle_axioms(space.mode(), samples, tolerance);

    json document{{"points", space.points()},
                  {"mode", triangle_mode_to_json(space.mode())},
                  {"assume_complete", space.completeness_assumed()},
                  {"axioms", space_report_to_json(space, axioms)},
                  {"tnorm_axioms", tnorm_report_to_json(tnorm_axioms)},
                  {"triangle_axioms", triangle_report_to_json(triangle_axioms)},
                  {"extra_samples", extra_samples}};
    CommandOutcome outcome;
    outcome.report = format_report(config, opts, document);
    outcome.exit_code = axioms.ok() && tnorm_axioms.ok() && triangle_axioms.ok() ? kExitOk
                                                                                 : kExitFailed;
    return outcome;
}

CommandOutcome cmd_check_contraction(const json& config, const CliOptions& opts) {
    const PMSpace space = space_from_config(config);
    const SelfMap f = map_from_config(space, config);
    if (!config.contains("check")) throw ConfigError("config: missing \"check\" block");
    const json& check = config["check"];

    const std::string class_name =
        check.contains("class") && check["class"].is_string()
            ? check["class"].get<std::string>()
            : throw ConfigError("check.class: missing contraction class name");
    const auto cls = contraction_class_from_name(class_name);
    if (!cls) throw ConfigError("check.class: unknown class \"" + class_name + "\"");

    const std::vector<double> t_grid = grid_from(check, "t_grid", {1.0});
    const double tolerance = number_or(check, "tolerance", 0.0);
    const int m_max = static_cast<int>(number_or(check, "m_max", 4.0));

    if (!check.contains("k")) throw ConfigError("check.k: missing (a number or \"search\")");
    json document;
    CommandOutcome outcome;
    if (check["k"].is_string()) {
        if (check["k"].get<std::string>() != "search") {
            throw ConfigError("check.k: the only string form is \"search\"");
        }
        const MinKResult result = estimate_min_k(space, f, *cls, t_grid,
                                                 /*k_tolerance=*/1e-6, tolerance, m_max);
        document = json{{"class", class_name}, {"min_k", min_k_to_json(result)}};
        outcome.exit_code = result.k ? kExitOk : kExitFailed;
    } else if (check["k"].is_number()) {
        const double k = check["k"].get<double>();
        const ContractionReport report =
            contraction_check(space, f, *cls, k, t_grid, tolerance, m_max);
        document = json{{"class", class_name},
                        {"report", contraction_report_to_json(space, report)}};
        outcome.exit_code = report.holds ? kExitOk : kExitFailed;
    } else {
        throw ConfigError("check.k: expected a number or \"search\"");
    }
    outcome.report = format_report(config, opts, document);
    return outcome;
}

CommandOutcome cmd_solve(const json& config, const CliOptions& opts) {
    const PMSpace space = space_from_config(config);
    const SelfMap f = map_from_config(space, config);
    if (!config.contains("solve")) throw ConfigError("config: missing \"solve\" block");
    const json& solve = config["solve"];

    const std::string mode_name =
        solve.contains("mode") && solve["mode"].is_string()
            ? solve["mode"].get<std::string>()
            : throw ConfigError("solve.mode: expected thm33, thm41, sphere or power");
    if (!solve.contains("x0")) throw ConfigError("solve.x0: missing start point");
    const std::size_t x0 = resolve_point(space, solve["x0"], "solve.x0");
    const double k = require_number_field(solve, "k", "solve");
    const double eps = number_or(solve, "eps", 1e-9);
    const auto max_iter = static_cast<std::size_t>(number_or(solve, "max_iter", 256.0));
    const std::vector<double> t_grid = grid_from(solve, "t_grid", {1.0});

    CommandOutcome outcome;
    json document;
    bool converged = false;
    bool certified = false;
    const IterationTrace* trace = nullptr;

    IterationTrace plain;
    SphereRunResult sphere;
    PowerRunResult power;
    if (mode_name == "thm33" || mode_name == "thm41") {
        plain = picard(space, f, x0, solve_mode_from_name(mode_name), k, t_grid, eps, max_iter);
        document = trace_to_json(space, plain);
        trace = &plain;
    } else if (mode_name == "sphere") {
        if (!solve.contains("sphere")) throw ConfigError("solve.sphere: missing block");
        const json& sp = solve["sphere"];
        const double r = require_number_field(sp, "r", "solve.sphere");
        const double t = require_number_field(sp, "t", "solve.sphere");
        const std::vector<double> u_grid = grid_from(sp, "u_grid", {});
        sphere = picard_in_sphere(space, f, x0, k, r, t, u_grid, t_grid, eps, max_iter,
                                  opts.force);
        document = sphere_result_to_json(space, sphere);
        trace = &sphere.trace;
    } else if (mode_name == "power") {
        const double m = require_number_field(solve, "m", "solve");
        power = power_picard(space, f, static_cast<int>(m), x0, k, t_grid, eps, max_iter,
                             opts.force);
        document = power_result_to_json(space, power);
        trace = &power.trace;
    } else {
        throw ConfigError("solve.mode: unknown mode \"" + mode_name + "\"");
    }

    converged = trace->outcome == Outcome::Converged;
    certified = trace->certified;
    outcome.exit_code = converged && (certified || opts.force) ? kExitOk : kExitFailed;
    outcome.report = csv_requested(config) ? trace_to_csv(space, *trace)
                                           : dump_json(document);
    return outcome;
}

CommandOutcome cmd_report(const json& config, const CliOptions& opts) {
    const PMSpace space = space_from_config(config);
    const json check = config.value("check", json::object());
    const double tolerance = number_or(check, "tolerance", 0.0);
    const std::vector<double> t_grid = grid_from(check, "t_grid", {1.0});
    const int m_max = static_cast<int>(number_or(check, "m_max", 4.0));

    const SpaceAxiomReport axioms = check_axioms(space);
    const TNormAxiomReport tnorm_axioms =
        check_tnorm_axioms(space.mode().tnorm, /*grid_step=*/1.0 / 16);
    const TriangleAxiomReport triangle_axioms =
        check_triangle_axioms(space.mode(), space.distinct_distances(), tolerance);

    json document{{"space", space_to_json(space)},
                  {"axioms", space_report_to_json(space, axioms)},
                  {"tnorm_axioms", tnorm_report_to_json(tnorm_axioms)},
                  {"triangle_axioms", triangle_report_to_json(triangle_axioms)}};

    if (config.contains("map")) {
        const SelfMap f = map_from_config(space, config);
        document["map"] = self_map_to_json(space, f);
        if (check.contains("k") && check["k"].is_number()) {
            const double k = check["k"].get<double>();
            json checks;
            for (ContractionClass cls : {ContractionClass::TSR, ContractionClass::TSR_P,
                                         ContractionClass::B, ContractionClass::H}) {
                const ContractionReport report =
                    contraction_check(space, f, cls, k, t_grid, tolerance, m_max);
                checks[std::string(to_string(cls))] =
                    contraction_report_to_json(space, report);
            }
            document["contraction"] = std::move(checks);
        }
        if (check.contains("class") && check["class"].is_string()) {
            const auto cls = contraction_class_from_name(check["class"].get<std::string>());
            if (!cls) throw ConfigError("check.class: unknown class");
            document["min_k"] = min_k_to_json(
                estimate_min_k(space, f, *cls, t_grid, 1e-6, tolerance, m_max));
        }
    }

    CommandOutcome outcome;
    outcome.report = format_report(config, opts, document);
    outcome.exit_code = axioms.ok() && tnorm_axioms.ok() && triangle_axioms.ok() ? kExitOk
                                                                                 : kExitFailed;
    return outcome;
}

int run(int argc, const char* const* argv) {
    CLI::App app{"exact checks and certified fixed-point iteration on probabilistic "
                 "metric spaces"};
    app.require_subcommand(1);

    std::string config_path;
    CliOptions opts;
    std::string out_path;
    unsigned seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "JSON configuration file")->required();
        sub->add_flag("--force", opts.force, "exit 0 for converged but uncertified runs");
        sub->add_option("--out", out_path, "write the report here instead of stdout");
        sub->add_option("--seed", seed, "seed for extra randomized probes")
            ->check(CLI::NonNegativeNumber);
    };
    CLI::App* check_space = app.add_subcommand("check-space", "verify the space axioms");
    CLI::App* check_contraction =
        app.add_subcommand("check-contraction", "verify a contraction condition");
    CLI::App* solve = app.add_subcommand("solve", "run certified Picard iteration");
    CLI::App* report = app.add_subcommand("report", "produce a full diagnostic document");
    for (CLI::App* sub : {check_space, check_contraction, solve, report}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    if (!out_path.empty()) opts.out_path = out_path;
    for (const CLI::App* sub : {check_space, check_contraction, solve, report}) {
        if (sub->count("--seed") > 0) opts.seed = seed;
    }

    json config;
    {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot read config file " << config_path << '\n';
            return kExitUsage;
        }
        try {
            config = json::parse(in);
        } catch (const json::parse_error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitUsage;
        }
    }

    CommandOutcome outcome;
    try {
        if (*check_space) {
            outcome = cmd_check_space(config, opts);
        } else if (*check_contraction) {
            outcome = cmd_check_contraction(config, opts);
        } else if (*solve) {
            outcome = cmd_solve(config, opts);
        } else {
            outcome = cmd_report(config, opts);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailed;
    }

    std::string path = opts.out_path.value_or("");
    if (path.empty() && config.is_object() && config.contains("output") &&
        config["output"].is_object()) {
        path = config["output"].value("path", "");
    }
    if (path.empty()) {
        std::cout << outcome.report;
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write report to " << path << '\n';
            return kExitUsage;
        }
        out << outcome.report;
    }
    return outcome.exit_code;
}

}  // namespace pmfix::cli
