#pragma once

// Input documents (material + stacking or direct A, B, D) and JSON reports.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polarlam/polarlam.hpp"

namespace polarlam::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "polarlam";
inline constexpr const char* kToolVersion = "1.0.0";

struct InputDocument {
    json raw;
    std::optional<PolarElastic4> ply;  // absent only for abd documents without a material
    std::optional<EngineeringConstants> engineering;
    std::optional<std::vector<double>> stacking_deg;
    std::optional<LaminatePolar> abd;
    double thickness = 1.0;

    bool has_stacking() const noexcept { return stacking_deg.has_value(); }
};

namespace detail {

[[noreturn]] inline void input_error(const std::string& what) { throw Error(ErrorKind::InputError, what); }

inline double number(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) input_error(path + "." + key + ": missing required field");
    if (!it->is_number()) input_error(path + "." + key + ": expected a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) input_error(path + "." + key + ": must be finite");
    return v;
}

inline std::optional<double> optional_number(const json& obj, const std::string& key,
                                             const std::string& path) {
    if (!obj.contains(key)) return std::nullopt;
    return number(obj, key, path);
}

inline void reject_unknown(const json& obj, const std::vector<std::string>& allowed,
                           const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            input_error(path + "." + key + ": unknown field");
    }
}

inline void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) input_error(path + ": expected an object");
}

inline PolarElastic4 polar_material(const json& m, const std::string& path) {
    reject_unknown(m, {"T0", "T1", "R0", "R1", "Phi0_deg", "Phi1_deg", "units"}, path);
    PolarElastic4 p;
    p.T0 = number(m, "T0", path);
    p.T1 = number(m, "T1", path);
    p.R0 = number(m, "R0", path);
    p.R1 = number(m, "R1", path);
    p.Phi0 = deg_to_rad(optional_number(m, "Phi0_deg", path).value_or(0.0));
    p.Phi1 = deg_to_rad(optional_number(m, "Phi1_deg", path).value_or(0.0));
    if (p.R0 < 0.0 || p.R1 < 0.0) input_error(path + ": R0 and R1 must be non-negative");
    p.Phi0 = normalize_phi0(p.Phi0);
    p.Phi1 = normalize_phi1(p.Phi1);
    apply_angle_convention(p, modulus_scale(p));
    return p;
}

inline PolarElastic4 anisotropic_part(const json& t, const std::string& path, double T0, double T1,
                                      std::optional<double> phi1_fallback) {
    require_object(t, path);
    reject_unknown(t, {"R0", "R1", "Phi0_deg", "Phi1_deg"}, path);
    PolarElastic4 p;
    p.T0 = T0;
    p.T1 = T1;
    p.R0 = number(t, "R0", path);
    p.R1 = number(t, "R1", path);
    if (p.R0 < 0.0 || p.R1 < 0.0) input_error(path + ": R0 and R1 must be non-negative");
    p.Phi0 = deg_to_rad(optional_number(t, "Phi0_deg", path).value_or(0.0));
    if (const auto phi1 = optional_number(t, "Phi1_deg", path)) {
        p.Phi1 = deg_to_rad(*phi1);
    } else {
        p.Phi1 = phi1_fallback.value_or(0.0);
    }
    return p;
}

}  // namespace detail

/// Parses and validates an input document. Throws Error(InputError) with
/// the offending field path; parse errors carry the line and column.
inline InputDocument parse_input(const std::string& text) {
    using detail::input_error;
    InputDocument doc;
    try {
        doc.raw = json::parse(text);
    } catch (const json::parse_error& e) {
        input_error(std::string("malformed JSON: ") + e.what());
    }
    const json& j = doc.raw;
    detail::require_object(j, "$");
    detail::reject_unknown(j, {"material", "stacking_deg", "thickness", "abd", "units", "name"}, "$");

    if (j.contains("thickness")) {
        doc.thickness = detail::number(j, "thickness", "$");
        if (!(doc.thickness > 0.0)) input_error("$.thickness: must be positive");
    }

    if (j.contains("material")) {
        const json& m = j.at("material");
        detail::require_object(m, "$.material");
        const bool polar = m.contains("T0") || m.contains("R0");
        const bool eng = m.contains("E1") || m.contains("G12");
        if (polar == eng) {
            input_error("$.material: give either polar moduli (T0, T1, R0, R1) or engineering constants (E1, E2, G12, nu12)");
        }
        if (polar) {
            doc.ply = detail::polar_material(m, "$.material");
        } else {
            detail::reject_unknown(m, {"E1", "E2", "G12", "nu12", "units"}, "$.material");
            EngineeringConstants ec{detail::number(m, "E1", "$.material"),
                                    detail::number(m, "E2", "$.material"),
                                    detail::number(m, "G12", "$.material"),
                                    detail::number(m, "nu12", "$.material")};
            doc.engineering = ec;
            try {
                doc.ply = cartesian_to_polar4(engineering_to_cartesian(ec));
            } catch (const Error& e) {
                input_error(std::string("$.material: ") + e.what());
            }
        }
        const LayerMargins lm = check_layer_bounds(*doc.ply);
        if (!lm.admissible()) input_error("$.material: the layer violates its elastic bounds");
    }

    const bool has_stacking = j.contains("stacking_deg");
    const bool has_abd = j.contains("abd");
    if (has_stacking == has_abd) input_error("$: give exactly one of stacking_deg and abd");

    if (has_stacking) {
        if (!doc.ply) input_error("$.material: required together with stacking_deg");
        const json& s = j.at("stacking_deg");
        if (!s.is_array()) input_error("$.stacking_deg: expected an array of angles in degrees");
        if (s.empty()) input_error("$.stacking_deg: stacking has no plies");
        std::vector<double> angles;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!s[i].is_number() || !std::isfinite(s[i].get<double>()))
                input_error("$.stacking_deg[" + std::to_string(i) + "]: expected a finite number");
            angles.push_back(s[i].get<double>());
        }
        doc.stacking_deg = std::move(angles);
        return doc;
    }

    const json& a = j.at("abd");
    detail::require_object(a, "$.abd");
    detail::reject_unknown(a, {"T0", "T1", "A", "B", "D", "deltaA_deg", "deltaD_deg"}, "$.abd");
    double T0 = 0.0, T1 = 0.0;
    if (a.contains("T0") || a.contains("T1")) {
        T0 = detail::number(a, "T0", "$.abd");
        T1 = detail::number(a, "T1", "$.abd");
    } else if (doc.ply) {
        T0 = doc.ply->T0;
        T1 = doc.ply->T1;
    } else {
        input_error("$.abd: T0 and T1 are required when no material is given");
    }
    if (!(T0 > 0.0) || !(T1 > 0.0)) input_error("$.abd: T0 and T1 must be positive");
    for (const char* t : {"A", "B", "D"}) {
        if (!a.contains(t)) input_error(std::string("$.abd.") + t + ": missing required field");
    }

    LaminatePolar lp;
    lp.h = doc.thickness;
    lp.A = detail::anisotropic_part(a.at("A"), "$.abd.A", T0, T1, std::nullopt);
    const auto dA = detail::optional_number(a, "deltaA_deg", "$.abd");
    const auto dD = detail::optional_number(a, "deltaD_deg", "$.abd");
    if (dA && a.at("B").contains("Phi1_deg")) input_error("$.abd: give B.Phi1_deg or deltaA_deg, not both");
    lp.B = detail::anisotropic_part(a.at("B"), "$.abd.B", 0.0, 0.0,
                                    dA ? std::optional<double>(lp.A.Phi1 + deg_to_rad(*dA))
                                       : std::nullopt);
    if (dD && a.at("D").contains("Phi1_deg")) input_error("$.abd: give D.Phi1_deg or deltaD_deg, not both");
    lp.D = detail::anisotropic_part(a.at("D"), "$.abd.D", T0, T1,
                                    dD ? std::optional<double>(lp.B.Phi1 - deg_to_rad(*dD))
                                       : std::nullopt);
    doc.abd = normalize_laminate(lp);
    return doc;
}

/// Stacking described by the document (requires stacking_deg).
inline Stacking stacking_of(const InputDocument& doc) {
    if (!doc.has_stacking()) throw Error(ErrorKind::InputError, "$.stacking_deg: required by this command");
    Stacking s;
    s.ply = *doc.ply;
    s.h = doc.thickness;
    for (double a : *doc.stacking_deg) s.angles.push_back(deg_to_rad(a));
    return s;
}

inline LaminatePolar laminate_of(const InputDocument& doc) {
    if (doc.abd) return *doc.abd;
    return compute_abd_polar(stacking_of(doc));
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline json to_json(const PolarElastic4& p) {
    return {{"T0", p.T0},   {"T1", p.T1}, {"R0", p.R0}, {"R1", p.R1},
            {"Phi0_deg", rad_to_deg(p.Phi0)}, {"Phi1_deg", rad_to_deg(p.Phi1)}};
}

inline json to_json(const Cartesian4& c) {
    return {{"c1111", c.c1111}, {"c1112", c.c1112}, {"c1122", c.c1122},
            {"c1212", c.c1212}, {"c1222", c.c1222}, {"c2222", c.c2222}};
}

inline json to_json(const DerivedAngles& d) {
    return {{"PhiA_deg", rad_to_deg(d.PhiA)},     {"PhiB_deg", rad_to_deg(d.PhiB)},
            {"PhiD_deg", rad_to_deg(d.PhiD)},     {"deltaA_deg", rad_to_deg(d.deltaA)},
            {"deltaD_deg", rad_to_deg(d.deltaD)},
            {"conventional", {{"PhiA", d.PhiA_conventional},
                              {"PhiB", d.PhiB_conventional},
                              {"PhiD", d.PhiD_conventional},
                              {"deltaA", d.deltaA_conventional},
                              {"deltaD", d.deltaD_conventional}}}};
}

inline json to_json(const ConditionMargin& m) {
    json j = {{"name", m.name},
              {"value", m.value},
              {"normalized", m.normalized()},
              {"kind", m.kind == ConditionKind::Strict ? "strict" : "non-strict"},
              {"active", m.active}};
    if (m.argmin) {
        j["argmin_deg"] = {rad_to_deg(m.argmin->first), rad_to_deg(m.argmin->second)};
    }
    return j;
}

struct ReportParams {
    double tol = 1e-9;
    double grid_step_deg = 0.5;
};

inline json to_json(const BoundsReport& r, const InputDocument& doc, const ReportParams& params) {
    json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["input"] = doc.raw;
    j["case_used"] = r.case_used;
    j["variant"] = r.variant;
    j["verdict"] = std::string(to_string(r.verdict));
    j["parameters"] = {{"tol", params.tol}, {"grid_step_deg", params.grid_step_deg}};
    j["scale"] = r.scale;
    json margins = json::array();
    for (const auto& m : r.margins) margins.push_back(to_json(m));
    j["margins"] = std::move(margins);
    j["snapped"] = r.snapped;
    if (r.minimum) {
        j["minimizer"] = {{"value", r.minimum->value},
                          {"argmin_deg", {rad_to_deg(r.minimum->phi_eps), rad_to_deg(r.minimum->phi_kap)}},
                          {"grid_value", r.minimum->grid_value},
                          {"lower_bound", r.minimum->lower_bound},
                          {"fallback", r.minimum->fallback},
                          {"argmin_frame", "angles measured from Phi1 of B"}};
    }
    if (r.cross_check) j["cross_check"] = std::string(to_string(*r.cross_check));
    return j;
}

}  // namespace polarlam::cli
