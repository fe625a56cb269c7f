#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "freeconv/families.hpp"
#include "freeconv/measure.hpp"
#include "freeconv/transforms.hpp"

namespace freeconv {

/// Measure JSON:
///   {"atoms": [[x, w], ...],
///    "density": {"grid": [...], "values": [...]},
///    "family": {"name": "semicircle" | "free_poisson" | "meixner_w", "params": {...}},
///    "normalize": false}
/// A "family" entry selects the closed form and excludes atoms and density.
/// "normalize": true rescales a density-only measure to unit mass.
Law law_from_json(const nlohmann::json& j);
Law load_law(const std::filesystem::path& path);

FamilySpec family_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FamilySpec& f);
nlohmann::json to_json(const Measure& m);

nlohmann::json load_json(const std::filesystem::path& path);

}  // namespace freeconv
