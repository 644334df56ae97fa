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

#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "pmfix/contraction.hpp"
#include "pmfix/ddf.hpp"
#include "pmfix/solver.hpp"
#include "pmfix/space.hpp"
#include "pmfix/tnorm.hpp"
#include "pmfix/triangle.hpp"

namespace pmfix {

/// Thrown when a JSON document has the wrong shape for the schema (missing
/// fields, wrong types, unknown names). Semantic failures discovered while
/// building the objects (a broken ultrametric, a non-closed map) keep
/// their library exception types so callers can tell the two apart.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A distribution is the array of its breakpoints, [[threshold, value],
/// ...]. On input a threshold may also be the string "inf"; canonical form
/// drops such entries, so they are never emitted.
nlohmann::json ddf_to_json(const Ddf& f);
Ddf ddf_from_json(const nlohmann::json& j);

/// A t-norm is a builtin name ("min", "product", "lukasiewicz") or
/// {"table": {"grid_points": n, "values": [n*n row-major]}}.
TNorm tnorm_from_json(const nlohmann::json& j);
nlohmann::json tnorm_to_json(const TNorm& t);

/// {"triangle": "tau_star" | "tau_pointwise", "tnorm": ...}; both fields
/// optional, defaulting to tau_star with min.
TriangleMode triangle_mode_from_json(const nlohmann::json& j);
nlohmann::json triangle_mode_to_json(const TriangleMode& mode);

/// {"points": [names], "mode": ..., "assume_complete": bool, and exactly
/// one of "distance": [[p, q, ddf], ...], "ultrametric_plateau": {"beta":
/// n*n matrix} or "simple": {"metric": n*n matrix, "shape": ddf}}. Points
/// in entries may be given by name or by index.
PMSpace space_from_json(const nlohmann::json& j);
nlohmann::json space_to_json(const PMSpace& space);

/// {"type": "table", "pairs": [[from, to], ...]} with names or indices.
SelfMap self_map_from_json(const PMSpace& space, const nlohmann::json& j);
nlohmann::json self_map_to_json(const PMSpace& space, const SelfMap& f);

nlohmann::json tnorm_report_to_json(const TNormAxiomReport& report);
nlohmann::json space_report_to_json(const PMSpace& space, const SpaceAxiomReport& report);
nlohmann::json triangle_report_to_json(const TriangleAxiomReport& report);
nlohmann::json contraction_report_to_json(const PMSpace& space, const ContractionReport& report);
nlohmann::json min_k_to_json(const MinKResult& result);
nlohmann::json trace_to_json(const PMSpace& space, const IterationTrace& trace);
nlohmann::json sphere_result_to_json(const PMSpace& space, const SphereRunResult& result);
nlohmann::json power_result_to_json(const PMSpace& space, const PowerRunResult& result);
nlohmann::json uniqueness_to_json(const UniquenessReport& report);

/// Canonical dump: sorted keys, two-space indent, trailing newline. Equal
/// documents serialize to identical bytes.
std::string dump_json(const nlohmann::json& j);

/// One CSV row per iteration step: index, the new iterate, the residual,
/// the worst certified bound over the grid, the matching step evaluation
/// and the run-level certification flag.
std::string trace_to_csv(const PMSpace& space, const IterationTrace& trace);

}  // namespace pmfix
