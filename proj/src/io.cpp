#include "freeconv/io.hpp"

#include <fstream>

#include "freeconv/error.hpp"

namespace freeconv {

using nlohmann::json;

nlohmann::json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
}

FamilySpec family_from_json(const json& j) {
    try {
        const auto name = family_name_from_string(j.at("name").get<std::string>());
        const json params = j.value("params", json::object());
        switch (name) {
            case FamilyName::Semicircle:
                return FamilySpec::semicircle(params.value("mean", 0.0), params.value("variance", 1.0));
            case FamilyName::FreePoisson:
                return FamilySpec::free_poisson(params.value("rate", 1.0));
            case FamilyName::MeixnerW:
                return FamilySpec::meixner(params.value("a", 0.0));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("family: ") + e.what());
    }
    throw Error(ErrorCode::ParseError, "unknown family");
}

json to_json(const FamilySpec& f) {
    json params = json::object();
    switch (f.name) {
        case FamilyName::Semicircle:
            params["mean"] = f.mean;
            params["variance"] = f.variance;
            break;
        case FamilyName::FreePoisson: params["rate"] = f.rate; break;
        case FamilyName::MeixnerW: params["a"] = f.a; break;
    }
    return json{{"name", to_string(f.name)}, {"params", params}};
}

json to_json(const Measure& m) {
    json atoms = json::array();
    for (const auto& a : m.atoms()) atoms.push_back({a.position, a.weight});
    json out{{"atoms", atoms}};
    if (!m.grid().empty()) out["density"] = json{{"grid", m.grid()}, {"values", m.values()}};
    return out;
}

Law law_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "measure must be a JSON object");
    try {
        if (j.contains("family")) {
            const bool has_atoms = j.contains("atoms") && !j["atoms"].empty();
            const bool has_density = j.contains("density") && !j["density"].is_null();
            if (has_atoms || has_density) {
                throw Error(ErrorCode::ParseError, "a family measure cannot also list atoms or a density");
            }
            return Law(family_from_json(j["family"]));
        }
        std::vector<Atom> atoms;
        for (const auto& a : j.value("atoms", json::array())) {
            if (!a.is_array() || a.size() != 2) throw Error(ErrorCode::ParseError, "atoms must be [x, w] pairs");
            atoms.push_back(Atom{a[0].get<double>(), a[1].get<double>()});
        }
        std::vector<double> grid, values;
        if (j.contains("density") && !j["density"].is_null()) {
            grid = j["density"].at("grid").get<std::vector<double>>();
            values = j["density"].at("values").get<std::vector<double>>();
        }
        if (atoms.empty() && grid.empty()) throw Error(ErrorCode::ParseError, "measure has no atoms and no density");
        if (j.value("normalize", false)) {
            if (!atoms.empty()) throw Error(ErrorCode::ParseError, "normalize applies to density-only measures");
            return Law(make_density(std::move(grid), std::move(values), true));
        }
        return Law(make_measure(std::move(atoms), std::move(grid), std::move(values)));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

Law load_law(const std::filesystem::path& path) { return law_from_json(load_json(path)); }

}  // namespace freeconv
