#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "tropmod/matroid.hpp"
#include "tropmod/plmap.hpp"

namespace tropmod {

// The JSON complex format used by the command line:
// { "ambient_dim": n, "lineality": [[rat,...]], "vertices": [[rat,...]],
//   "rays": [[int,...]],
//   "cells": [{"dim": d, "vertex_ids": [...], "ray_ids": [...],
//              "weight": w or null}],
//   "faces": [[sub, super], ...] }
// Rationals are "p/q" strings, integers plain numbers. Cell-level lineality is
// written as opposite ray pairs and recovered on load.
nlohmann::json complex_to_json(const WeightedComplex& complex);
WeightedComplex complex_from_json(const nlohmann::json& j);

// Affine maps: {"matrix": [[rat,...]], "translation": [rat,...]} or
// {"per_cell": [ ... one such object per maximal cell, in canonical order ]}.
nlohmann::json map_to_json(const PLMap& f);
PLMap map_from_json(const nlohmann::json& j, const WeightedComplex& source);

// "max(x1-1, x2, 0)" with nested max/min over affine expressions in x1..xn.
RationalFunction parse_max_expression(const std::string& text, int ambient);

// "uniform:r,m", "graph:Kn", or "flats:<path to json>"
// ({"ground_size": m, "flats": [[...], ...]}).
Matroid parse_matroid_spec(const std::string& spec);

QVec parse_vector(const std::string& text); // "1, -2/3, 0" or "[1,-2/3,0]"

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace tropmod
