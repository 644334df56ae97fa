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

#include "pmfix/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <tuple>
#include <utility>
#include <vector>

namespace pmfix {

using nlohmann::json;

namespace {

std::string where(const char* context) { return std::string(context); }

const json& require_field(const json& j, const char* key, const char* context) {
    if (!j.is_object()) throw ConfigError(where(context) + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) {
        throw ConfigError(where(context) + ": missing field \"" + key + "\"");
    }
    return *it;
}

double require_number(const json& j, const char* context) {
    if (!j.is_number()) throw ConfigError(where(context) + ": expected a number");
    return j.get<double>();
}

std::string require_string(const json& j, const char* context) {
    if (!j.is_string()) throw ConfigError(where(context) + ": expected a string");
    return j.get<std::string>();
}

const json& require_array(const json& j, const char* context) {
    if (!j.is_array()) throw ConfigError(where(context) + ": expected an array");
    return j;
}

std::size_t resolve_point(const PMSpace& space, const json& ref, const char* context) {
    if (ref.is_string()) {
        const auto idx = space.index_of(ref.get<std::string>());
        if (!idx) {
            throw ConfigError(where(context) + ": unknown point name \"" +
                              ref.get<std::string>() + "\"");
        }
        return *idx;
    }
    if (ref.is_number_unsigned() || (ref.is_number_integer() && ref.get<long long>() >= 0)) {
        const auto idx = ref.get<std::size_t>();
        if (idx >= space.size()) {
            throw ConfigError(where(context) + ": point index " + std::to_string(idx) +
                              " out of range");
        }
        return idx;
    }
    throw ConfigError(where(context) + ": point must be a name or an index");
}

std::vector<std::vector<double>> require_matrix(const json& j, const char* context) {
    std::vector<std::vector<double>> out;
    for (const json& row : require_array(j, context)) {
        std::vector<double> r;
        for (const json& cell : require_array(row, context)) {
            r.push_back(require_number(cell, context));
        }
        out.push_back(std::move(r));
    }
    return out;
}

json point_name(const PMSpace& space, std::size_t idx) { return space.points().at(idx); }

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

json ddf_to_json(const Ddf& f) {
    json out = json::array();
    for (const Breakpoint& bp : f.breakpoints()) {
        out.push_back(json::array({bp.threshold, bp.value}));
    }
    return out;
}

Ddf ddf_from_json(const json& j) {
    std::vector<Breakpoint> raw;
    for (const json& entry : require_array(j, "distribution")) {
        const json& pair = require_array(entry, "distribution entry");
        if (pair.size() != 2) {
            throw ConfigError("distribution entry: expected [threshold, value]");
        }
        double threshold = 0.0;
        if (pair[0].is_string()) {
            if (pair[0].get<std::string>() != "inf") {
                throw ConfigError("distribution entry: the only string threshold is \"inf\"");
            }
            threshold = kInfinity;
        } else {
            threshold = require_number(pair[0], "distribution threshold");
        }
        raw.push_back({threshold, require_number(pair[1], "distribution value")});
    }
    try {
        return Ddf(std::move(raw));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("distribution: ") + e.what());
    }
}

TNorm tnorm_from_json(const json& j) {
    if (j.is_string()) {
        const auto t = TNorm::from_name(j.get<std::string>());
        if (!t) throw ConfigError("tnorm: unknown name \"" + j.get<std::string>() + "\"");
        return *t;
    }
    if (j.is_object() && j.contains("table")) {
        const json& table = j["table"];
        const json& points = require_field(table, "grid_points", "tnorm table");
        if (!points.is_number_unsigned() &&
            !(points.is_number_integer() && points.get<long long>() >= 0)) {
            throw ConfigError("tnorm table: grid_points must be a non-negative integer");
        }
        std::vector<double> values;
        for (const json& v : require_array(require_field(table, "values", "tnorm table"),
                                           "tnorm table values")) {
            values.push_back(require_number(v, "tnorm table value"));
        }
        try {
            return TNorm::from_table(std::move(values), points.get<std::size_t>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("tnorm table: ") + e.what());
        }
    }
    throw ConfigError("tnorm: expected a builtin name or {\"table\": ...}");
}

json tnorm_to_json(const TNorm& t) {
    if (t.kind() != TNorm::Kind::Table) return std::string(t.name());
    // Tables do not round-trip through reports; name the kind only.
    return json{{"kind", "table"}, {"verified", t.verified()}};
}

TriangleMode triangle_mode_from_json(const json& j) {
    TriangleMode mode;
    if (j.is_null()) return mode;
    if (!j.is_object()) throw ConfigError("mode: expected an object");
    if (j.contains("triangle")) {
        const std::string name = require_string(j["triangle"], "mode.triangle");
        const auto kind = TriangleMode::kind_from_name(name);
        if (!kind) throw ConfigError("mode.triangle: unknown kind \"" + name + "\"");
        mode.kind = *kind;
    }
    if (j.contains("tnorm")) mode.tnorm = tnorm_from_json(j["tnorm"]);
    return mode;
}

json triangle_mode_to_json(const TriangleMode& mode) {
    return json{{"triangle", std::string(mode.kind_name())}, {"tnorm", tnorm_to_json(mode.tnorm)}};
}

PMSpace space_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("space: expected an object");
    std::vector<std::string> points;
    for (const json& p : require_array(require_field(j, "points", "space"), "space.points")) {
        points.push_back(require_string(p, "space point name"));
    }
    const TriangleMode mode =
        j.contains("mode") ? triangle_mode_from_json(j["mode"]) : TriangleMode{};
    const bool assume_complete = j.value("assume_complete", true);

    const int forms = int(j.contains("distance")) + int(j.contains("ultrametric_plateau")) +
                      int(j.contains("simple"));
    if (forms != 1) {
        throw ConfigError(
            "space: provide exactly one of distance, ultrametric_plateau or simple");
    }

    if (j.contains("ultrametric_plateau")) {
        const json& u = j["ultrametric_plateau"];
        const auto beta = require_matrix(require_field(u, "beta", "ultrametric_plateau"),
                                         "ultrametric_plateau.beta");
        return PMSpace::ultrametric_plateau(std::move(points), beta, mode, assume_complete);
    }
    if (j.contains("simple")) {
        const json& s = j["simple"];
        const auto metric =
            require_matrix(require_field(s, "metric", "simple"), "simple.metric");
        const Ddf shape = ddf_from_json(require_field(s, "shape", "simple"));
        return PMSpace::simple(std::move(points), metric, shape, mode, assume_complete);
    }

    // Full distance table. Names are resolved against a throwaway index of
    // the declared points, since the space does not exist yet.
    std::vector<std::tuple<std::size_t, std::size_t, Ddf>> entries;
    auto resolve = [&](const json& ref) -> std::size_t {
        if (ref.is_string()) {
            for (std::size_t i = 0; i < points.size(); ++i) {
                if (points[i] == ref.get<std::string>()) return i;
            }
            throw ConfigError("space.distance: unknown point name \"" +
                              ref.get<std::string>() + "\"");
        }
        const bool index_like =
            ref.is_number_unsigned() || (ref.is_number_integer() && ref.get<long long>() >= 0);
        if (index_like && ref.get<std::size_t>() < points.size()) {
            return ref.get<std::size_t>();
        }
        throw ConfigError("space.distance: point must be a declared name or index");
    };
    for (const json& entry : require_array(j["distance"], "space.distance")) {
        const json& triple = require_array(entry, "space.distance entry");
        if (triple.size() != 3) {
            throw ConfigError("space.distance entry: expected [p, q, distribution]");
        }
        entries.emplace_back(resolve(triple[0]), resolve(triple[1]), ddf_from_json(triple[2]));
    }
    return PMSpace::build(std::move(points), std::move(entries), mode, assume_complete);
}

json space_to_json(const PMSpace& space) {
    json distance = json::array();
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t q = i + 1; q < space.size(); ++q) {
            distance.push_back(json::array(
                {space.points()[i], space.points()[q], ddf_to_json(space.distance(i, q))}));
        }
    }
    return json{{"points", space.points()},
                {"mode", triangle_mode_to_json(space.mode())},
                {"assume_complete", space.completeness_assumed()},
                {"distance", std::move(distance)}};
}

SelfMap self_map_from_json(const PMSpace& space, const json& j) {
    const std::string type = require_string(require_field(j, "type", "map"), "map.type");
    if (type != "table") throw ConfigError("map.type: the only supported type is \"table\"");
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const json& entry : require_array(require_field(j, "pairs", "map"), "map.pairs")) {
        const json& pair = require_array(entry, "map pair");
        if (pair.size() != 2) throw ConfigError("map pair: expected [from, to]");
        pairs.emplace_back(space.points().at(resolve_point(space, pair[0], "map pair")),
                           space.points().at(resolve_point(space, pair[1], "map pair")));
    }
    return SelfMap::from_pairs(space, pairs);
}

json self_map_to_json(const PMSpace& space, const SelfMap& f) {
    json pairs = json::array();
    for (std::size_t i = 0; i < f.size(); ++i) {
        pairs.push_back(json::array({space.points()[i], space.points()[f.apply(i)]}));
    }
    return json{{"type", "table"}, {"pairs", std::move(pairs)}};
}

json tnorm_report_to_json(const TNormAxiomReport& report) {
    json violations = json::array();
    for (const TNormViolation& v : report.violations) {
        violations.push_back(json{{"axiom", v.axiom},
                                  {"x", v.x},
                                  {"y", v.y},
                                  {"z", v.z},
                                  {"lhs", v.lhs},
                                  {"rhs", v.rhs}});
    }
    return json{{"grid_step", report.grid_step},
                {"tolerance", report.tolerance},
                {"ok", report.ok()},
                {"violations", std::move(violations)}};
}

json space_report_to_json(const PMSpace& space, const SpaceAxiomReport& report) {
    json violations = json::array();
    for (const SpaceAxiomViolation& v : report.violations) {
        violations.push_back(json{{"p", point_name(space, v.p)},
                                  {"q", point_name(space, v.q)},
                                  {"r", point_name(space, v.r)},
                                  {"witness_t", v.witness_t}});
    }
    return json{{"checked_triples", report.checked_triples},
                {"ok", report.ok()},
                {"violations", std::move(violations)}};
}

json triangle_report_to_json(const TriangleAxiomReport& report) {
    json violations = json::array();
    for (const TriangleViolation& v : report.violations) {
        violations.push_back(json{
            {"axiom", v.axiom}, {"i", v.i}, {"j", v.j}, {"k", v.k}, {"detail", v.detail}});
    }
    return json{{"tolerance", report.tolerance},
                {"sample_count", report.sample_count},
                {"ok", report.ok()},
                {"violations", std::move(violations)}};
}

json contraction_report_to_json(const PMSpace& space, const ContractionReport& report) {
    json out{{"class", std::string(to_string(report.cls))},
             {"k", report.k},
             {"tolerance", report.tolerance},
             {"holds", report.holds},
             {"t_grid", report.t_grid}};
    out["max_defect"] = report.no_case_applied() ? json(nullptr) : json(report.max_defect);
    if (report.witness) {
        json w{{"x", point_name(space, report.witness->x)},
               {"y", point_name(space, report.witness->y)},
               {"t", report.witness->t}};
        if (report.witness->m) w["m"] = *report.witness->m;
        out["witness"] = std::move(w);
    } else {
        out["witness"] = nullptr;
    }
    if (report.m_max) out["m_max"] = *report.m_max;
    if (!report.pair_subset.empty()) {
        json subset = json::array();
        for (std::size_t idx : report.pair_subset) subset.push_back(point_name(space, idx));
        out["pair_subset"] = std::move(subset);
    }
    return out;
}

json min_k_to_json(const MinKResult& result) {
    json scan = json::array();
    for (const MinKScanPoint& p : result.scan) {
        scan.push_back(json{{"k", p.k}, {"holds", p.holds}});
    }
    return json{{"k", result.k ? json(*result.k) : json(nullptr)},
                {"monotone", result.monotone},
                {"k_tolerance", result.k_tolerance},
                {"scan", std::move(scan)}};
}

json trace_to_json(const PMSpace& space, const IterationTrace& trace) {
    json iterates = json::array();
    for (std::size_t idx : trace.iterates) iterates.push_back(point_name(space, idx));
    json steps = json::array();
    for (const Ddf& d : trace.step_distance) steps.push_back(ddf_to_json(d));
    json bounds = json::array();
    for (const BoundRecord& rec : trace.bounds) {
        bounds.push_back(json{{"n", rec.n},
                              {"t", rec.t},
                              {"bound", rec.bound},
                              {"step_at_t", rec.step_at_t},
                              {"step_at_scaled", rec.step_at_scaled},
                              {"ok_at_t", rec.ok_at_t},
                              {"ok_at_scaled", rec.ok_at_scaled}});
    }
    json cauchy = json::array();
    for (const CauchyRecord& rec : trace.cauchy) {
        cauchy.push_back(json{{"n", rec.n},
                              {"p", rec.p},
                              {"t", rec.t},
                              {"lhs", rec.lhs},
                              {"bound", rec.bound},
                              {"ok", rec.ok}});
    }
    return json{{"mode", to_string(trace.mode)},
                {"k", trace.k},
                {"eps", trace.eps},
                {"t_grid", trace.t_grid},
                {"iterates", std::move(iterates)},
                {"step_distance", std::move(steps)},
                {"residuals", trace.residuals},
                {"bounds", std::move(bounds)},
                {"cauchy", std::move(cauchy)},
                {"outcome", to_string(trace.outcome)},
                {"fixed_point",
                 trace.fixed_point ? point_name(space, *trace.fixed_point) : json(nullptr)},
                {"steps", trace.steps},
                {"exact_fixpoint", trace.exact_fixpoint},
                {"contraction", contraction_report_to_json(space, trace.contraction)},
                {"tnorm_dominant", trace.tnorm_dominant},
                {"certified", trace.certified},
                {"notes", trace.notes}};
}

json sphere_result_to_json(const PMSpace& space, const SphereRunResult& result) {
    json sphere = json::array();
    for (std::size_t idx : result.sphere) sphere.push_back(point_name(space, idx));
    return json{{"hypothesis_ok", result.hypothesis_ok},
                {"hypothesis_witness",
                 result.hypothesis_witness ? json(*result.hypothesis_witness) : json(nullptr)},
                {"sphere", std::move(sphere)},
                {"map_closed_on_sphere", result.map_closed_on_sphere},
                {"escape_index",
                 result.escape_index ? json(*result.escape_index) : json(nullptr)},
                {"trace", trace_to_json(space, result.trace)}};
}

json power_result_to_json(const PMSpace& space, const PowerRunResult& result) {
    json continuity = json::array();
    for (const ContinuityProbe& probe : result.continuity) {
        json p{{"t", probe.t}, {"eps", probe.eps}, {"ok", probe.ok}};
        p["witness_x"] = probe.witness_x ? point_name(space, *probe.witness_x) : json(nullptr);
        p["witness_a"] = probe.witness_a ? point_name(space, *probe.witness_a) : json(nullptr);
        continuity.push_back(std::move(p));
    }
    json aux = json::array();
    for (const AuxChainRecord& rec : result.aux_chain) {
        aux.push_back(json{{"n", rec.n},
                           {"t", rec.t},
                           {"lhs", rec.lhs},
                           {"bound", rec.bound},
                           {"ok", rec.ok}});
    }
    return json{{"m", result.m},
                {"power_contraction_ok", result.power_contraction_ok},
                {"refused", result.refused},
                {"f_fixes_limit", result.f_fixes_limit},
                {"continuity", std::move(continuity)},
                {"aux_chain", std::move(aux)},
                {"g_report", contraction_report_to_json(space, result.g_report)},
                {"trace", trace_to_json(space, result.trace)}};
}

json uniqueness_to_json(const UniquenessReport& report) {
    return json{{"inputs_fixed", report.inputs_fixed},
                {"unique", report.unique},
                {"max_deviation", report.max_deviation},
                {"witness_t", report.witness_t ? json(*report.witness_t) : json(nullptr)},
                {"tolerance", report.tolerance}};
}

std::string dump_json(const json& j) {
    // nlohmann objects keep keys sorted, so equal documents dump to equal
    // bytes.
    return j.dump(2) + "\n";
}

std::string trace_to_csv(const PMSpace& space, const IterationTrace& trace) {
    std::string out = "n,x,residual,bound,step,certified\n";
    for (std::size_t n = 0; n < trace.step_distance.size(); ++n) {
        double worst_bound = -kInfinity;
        double step_value = 1.0;
        for (const BoundRecord& rec : trace.bounds) {
            if (rec.n != n) continue;
            worst_bound = std::max(worst_bound, rec.bound);
            const double active =
                trace.mode == SolveMode::Thm33 ? rec.step_at_scaled : rec.step_at_t;
            step_value = std::min(step_value, active);
        }
        out += std::to_string(n) + ',' + space.points().at(trace.iterates[n + 1]) + ',' +
               format_double(trace.residuals[n]) + ',' + format_double(worst_bound) + ',' +
               format_double(step_value) + ',' + (trace.certified ? "true" : "false") + '\n';
    }
    return out;
}

}  // namespace pmfix
