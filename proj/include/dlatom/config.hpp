#pragma once

// JSON run and sweep configuration.
//
// A run document holds the keys listed in kRunKeys; a sweep document is a
// run document with an additional "sweep" object {"axis": <dotted path>,
// "values": [numbers]}. Unknown keys are rejected. See README.md for the
// full grammar.

#include "dlatom/dynamics.hpp"
#include "dlatom/errors.hpp"
#include "dlatom/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dlatom {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    EvolutionProblem problem;
    std::string output_prefix = "run";
    /// Parsed and echoed; no component is stochastic.
    std::uint64_t seed = 0;
};

struct SweepConfig {
    RunConfig base;
    std::string axis;
    std::vector<double> values;
};

using AnyConfig = std::variant<RunConfig, SweepConfig>;

namespace config_detail {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& field, const std::string& what) {
    throw ConfigError("config field '" + field + "': " + what);
}

inline std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

inline void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                           const std::string& prefix) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            fail(join(prefix, key), "unknown key");
    }
}

inline const json& require_object(const json& j, const std::string& field) {
    if (!j.is_object()) fail(field, "expected an object");
    return j;
}

inline double number(const json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(field, "must be finite");
    return v;
}

inline double number_or(const json& obj, const std::string& key, double fallback,
                        const std::string& prefix) {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    return number(*it, join(prefix, key));
}

inline std::optional<double> optional_number(const json& obj, const std::string& key,
                                             const std::string& prefix) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    return number(*it, join(prefix, key));
}

inline Vec3 vec3(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3) fail(field, "expected an array of 3 numbers");
    return {number(j[0], field + "[0]"), number(j[1], field + "[1]"), number(j[2], field + "[2]")};
}

inline Vec3 vec3_or_zero(const json& obj, const std::string& key, const std::string& prefix) {
    const auto it = obj.find(key);
    if (it == obj.end()) return Vec3::Zero();
    return vec3(*it, join(prefix, key));
}

template <typename Enum, std::size_t K>
Enum enum_value(const json& j, const std::string& field,
                const std::array<std::pair<std::string_view, Enum>, K>& table) {
    if (!j.is_string()) fail(field, "expected a string");
    const std::string s = j.get<std::string>();
    for (const auto& [name, value] : table)
        if (name == s) return value;
    std::string expected;
    for (const auto& [name, _] : table) expected += (expected.empty() ? "" : ", ") + std::string(name);
    fail(field, "invalid value '" + s + "' (expected one of " + expected + ")");
}

inline constexpr std::array<std::pair<std::string_view, ModelKind>, 4> kModelNames{{
    {"Full", ModelKind::Full},
    {"TransformedLiteral", ModelKind::TransformedLiteral},
    {"TransformedExact", ModelKind::TransformedExact},
    {"Baseline2", ModelKind::Baseline2},
}};
inline constexpr std::array<std::pair<std::string_view, CouplingKind>, 3> kCouplingNames{{
    {"AlphaE", CouplingKind::AlphaE},
    {"SigmaE", CouplingKind::SigmaE},
    {"None", CouplingKind::None},
}};
inline constexpr std::array<std::pair<std::string_view, IntegratorKind>, 3> kIntegratorNames{{
    {"ExpMidpoint", IntegratorKind::ExpMidpoint},
    {"RK4", IntegratorKind::RK4},
    {"Magnus2", IntegratorKind::Magnus2},
}};
inline constexpr std::array<std::pair<std::string_view, Axis>, 3> kAxisNames{{
    {"x", Axis::x},
    {"y", Axis::y},
    {"z", Axis::z},
}};

inline PhysicalParams parse_params(const json& j) {
    require_object(j, "params");
    reject_unknown(j, {"hbar", "c", "mass", "omega", "mu", "momentum", "gamma", "omega_a"},
                   "params");
    PhysicalParams p;
    p.hbar = number_or(j, "hbar", p.hbar, "params");
    p.c = number_or(j, "c", p.c, "params");
    p.mass = number_or(j, "mass", p.mass, "params");
    p.omega = number_or(j, "omega", p.omega, "params");
    p.mu = number_or(j, "mu", p.mu, "params");
    p.momentum = vec3_or_zero(j, "momentum", "params");
    p.gamma = optional_number(j, "gamma", "params");
    p.omega_a = optional_number(j, "omega_a", "params");
    if (p.hbar <= 0.0) fail("params.hbar", "must be > 0");
    if (p.c <= 0.0) fail("params.c", "must be > 0");
    if (p.mass < 0.0) fail("params.mass", "must be >= 0");
    if (p.omega < 0.0) fail("params.omega", "must be >= 0");
    if (p.gamma && *p.gamma <= 0.0) fail("params.gamma", "must be > 0");
    if (p.omega_a && *p.omega_a < 0.0) fail("params.omega_a", "must be >= 0");
    return p;
}

inline FieldModel parse_field(const json& j) {
    require_object(j, "field");
    const auto type_it = j.find("type");
    if (type_it == j.end()) fail("field.type", "missing");
    if (!type_it->is_string()) fail("field.type", "expected a string");
    const std::string type = type_it->get<std::string>();
    auto nu_of = [&j]() {
        const double nu = number_or(j, "nu", 0.0, "field");
        if (nu < 0.0) fail("field.nu", "must be >= 0");
        return nu;
    };
    if (type == "Zero") {
        reject_unknown(j, {"type"}, "field");
        return ZeroField{};
    }
    if (type == "Static") {
        reject_unknown(j, {"type", "amplitude"}, "field");
        return StaticField{vec3_or_zero(j, "amplitude", "field")};
    }
    if (type == "Cosine") {
        reject_unknown(j, {"type", "amplitude", "nu", "phase"}, "field");
        return CosineField{vec3_or_zero(j, "amplitude", "field"), nu_of(),
                           number_or(j, "phase", 0.0, "field")};
    }
    if (type == "GaussianPulse") {
        reject_unknown(j, {"type", "amplitude", "nu", "phase", "center", "width"}, "field");
        GaussianPulse g{vec3_or_zero(j, "amplitude", "field"), nu_of(),
                        number_or(j, "phase", 0.0, "field"), number_or(j, "center", 0.0, "field"),
                        number_or(j, "width", 1.0, "field")};
        if (g.width <= 0.0) fail("field.width", "must be > 0");
        return g;
    }
    fail("field.type",
         "invalid value '" + type + "' (expected one of Zero, Static, Cosine, GaussianPulse)");
}

inline InitialState parse_state(const json& j, ModelKind kind) {
    if (!j.is_array()) fail("initial_state", "expected an array of [re, im] pairs");
    const int expected = component_count(kind);
    if (static_cast<int>(j.size()) != expected)
        fail("initial_state", "component count mismatch (model " + std::string(to_string(kind)) +
                                  " expects " + std::to_string(expected) + ", got " +
                                  std::to_string(j.size()) + ")");
    Eigen::VectorXcd v(expected);
    for (int i = 0; i < expected; ++i) {
        const std::string field = "initial_state[" + std::to_string(i) + "]";
        const json& e = j[static_cast<std::size_t>(i)];
        if (e.is_number()) {
            v(i) = number(e, field);
        } else if (e.is_array() && e.size() == 2) {
            v(i) = cplx(number(e[0], field + "[0]"), number(e[1], field + "[1]"));
        } else {
            fail(field, "expected a number or an [re, im] pair");
        }
    }
    if (v.squaredNorm() == 0.0) fail("initial_state", "must not be the zero vector");
    if (expected == 2) return State2(v(0), v(1));
    return Spinor4(v(0), v(1), v(2), v(3));
}

inline constexpr std::array<std::string_view, 13> kRunKeys{
    "model_kind",    "coupling", "integrator", "params", "field",
    "initial_state", "t0",       "t1",         "dt",     "sample_stride",
    "output_prefix", "seed",     "polarization_axis"};

inline RunConfig parse_run(const json& doc) {
    require_object(doc, "<root>");
    for (const auto& [key, _] : doc.items()) {
        if (key == "sweep") continue;
        if (std::find(kRunKeys.begin(), kRunKeys.end(), key) == kRunKeys.end())
            fail(key, "unknown key");
    }
    RunConfig cfg;
    EvolutionProblem& p = cfg.problem;

    const auto model_it = doc.find("model_kind");
    if (model_it == doc.end()) fail("model_kind", "missing");
    p.model_kind = enum_value(*model_it, "model_kind", kModelNames);
    if (const auto it = doc.find("coupling"); it != doc.end())
        p.coupling = enum_value(*it, "coupling", kCouplingNames);
    if (const auto it = doc.find("integrator"); it != doc.end())
        p.integrator = enum_value(*it, "integrator", kIntegratorNames);
    if (const auto it = doc.find("polarization_axis"); it != doc.end())
        p.polarization_axis = enum_value(*it, "polarization_axis", kAxisNames);

    p.params = parse_params(doc.value("params", json::object()));
    p.field = doc.contains("field") ? parse_field(doc["field"]) : FieldModel{ZeroField{}};
    p.initial_state = doc.contains("initial_state") ? parse_state(doc["initial_state"], p.model_kind)
                                                    : ground_state(p.model_kind);

    p.t0 = number_or(doc, "t0", 0.0, "");
    if (!doc.contains("t1")) fail("t1", "missing");
    p.t1 = number(doc["t1"], "t1");
    if (!doc.contains("dt")) fail("dt", "missing");
    p.dt = number(doc["dt"], "dt");
    if (!(p.t1 > p.t0)) fail("t1", "must be greater than t0");
    if (!(p.dt > 0.0)) fail("dt", "must be > 0");
    if (p.dt > p.t1 - p.t0) fail("dt", "must not exceed t1 - t0");

    if (const auto it = doc.find("sample_stride"); it != doc.end()) {
        if (!it->is_number_integer()) fail("sample_stride", "expected an integer");
        p.sample_stride = it->get<std::int64_t>();
        if (p.sample_stride < 1) fail("sample_stride", "must be >= 1");
    }
    if (const auto it = doc.find("output_prefix"); it != doc.end()) {
        if (!it->is_string() || it->get<std::string>().empty())
            fail("output_prefix", "expected a non-empty string");
        cfg.output_prefix = it->get<std::string>();
    }
    if (const auto it = doc.find("seed"); it != doc.end()) {
        if (!it->is_number_unsigned()) fail("seed", "expected an unsigned integer");
        cfg.seed = it->get<std::uint64_t>();
    }
    if (p.model_kind == ModelKind::Baseline2) {
        try {
            require_polarization(p.field, p.polarization_axis);
        } catch (const InvalidArgument& e) {
            fail("polarization_axis", e.what());
        }
    }
    try {
        validate(p);
    } catch (const InvalidArgument& e) {
        fail("<problem>", e.what());
    }
    return cfg;
}

}  // namespace config_detail

inline nlohmann::json to_json(const Vec3& v) { return nlohmann::json::array({v(0), v(1), v(2)}); }

inline nlohmann::json to_json(const FieldModel& f) {
    using nlohmann::json;
    return std::visit(
        [](const auto& m) -> json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ZeroField>) {
                return {{"type", "Zero"}};
            } else if constexpr (std::is_same_v<T, StaticField>) {
                return {{"type", "Static"}, {"amplitude", to_json(m.amplitude)}};
            } else if constexpr (std::is_same_v<T, CosineField>) {
                return {{"type", "Cosine"},
                        {"amplitude", to_json(m.amplitude)},
                        {"nu", m.nu},
                        {"phase", m.phase}};
            } else {
                return {{"type", "GaussianPulse"}, {"amplitude", to_json(m.amplitude)},
                        {"nu", m.nu},              {"phase", m.phase},
                        {"center", m.center},      {"width", m.width}};
            }
        },
        f);
}

/// Fully resolved document; parse_config(to_json(c).dump()) reproduces c.
inline nlohmann::json to_json(const RunConfig& c) {
    using nlohmann::json;
    const EvolutionProblem& p = c.problem;
    json params = {{"hbar", p.params.hbar},   {"c", p.params.c},   {"mass", p.params.mass},
                   {"omega", p.params.omega}, {"mu", p.params.mu}, {"momentum", to_json(p.params.momentum)},
                   {"gamma", nullptr},        {"omega_a", nullptr}};
    if (p.params.gamma) params["gamma"] = *p.params.gamma;
    if (p.params.omega_a) params["omega_a"] = *p.params.omega_a;
    json state = json::array();
    std::visit(
        [&state](const auto& s) {
            for (Eigen::Index i = 0; i < s.size(); ++i) state.push_back({s(i).real(), s(i).imag()});
        },
        p.initial_state);
    return {{"model_kind", to_string(p.model_kind)},
            {"coupling", to_string(p.coupling)},
            {"integrator", to_string(p.integrator)},
            {"polarization_axis", axis_name(p.polarization_axis)},
            {"params", params},
            {"field", to_json(p.field)},
            {"initial_state", state},
            {"t0", p.t0},
            {"t1", p.t1},
            {"dt", p.dt},
            {"sample_stride", p.sample_stride},
            {"output_prefix", c.output_prefix},
            {"seed", c.seed}};
}

inline nlohmann::json to_json(const SweepConfig& s) {
    nlohmann::json j = to_json(s.base);
    j["sweep"] = {{"axis", s.axis}, {"values", s.values}};
    return j;
}

namespace config_detail {

/// Locates the numeric scalar named by a dotted path; vector entries are
/// addressed as <vector>.x / .y / .z.
inline json* locate(json& doc, const std::string& path) {
    json* node = &doc;
    std::size_t start = 0;
    while (start <= path.size()) {
        const std::size_t dot = path.find('.', start);
        const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) return nullptr;
        if (node->is_array() && node->size() == 3 && (part == "x" || part == "y" || part == "z")) {
            node = &(*node)[static_cast<std::size_t>(index_of(parse_axis(part)))];
        } else if (node->is_object() && node->contains(part)) {
            node = &(*node)[part];
        } else {
            return nullptr;
        }
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return node;
}

}  // namespace config_detail

/// Run configuration with the sweep axis set to `value`.
inline RunConfig sweep_point(const SweepConfig& s, double value) {
    nlohmann::json doc = to_json(s.base);
    nlohmann::json* slot = config_detail::locate(doc, s.axis);
    if (slot == nullptr || !slot->is_number())
        config_detail::fail("sweep.axis", "'" + s.axis + "' does not name a numeric parameter");
    *slot = value;
    return config_detail::parse_run(doc);
}

inline AnyConfig parse_config(std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t pos = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        const std::size_t line = 1 + static_cast<std::size_t>(
                                         std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
        const std::size_t last_nl = text.rfind('\n', pos == 0 ? 0 : pos - 1);
        const std::size_t column = last_nl == std::string_view::npos ? pos + 1 : pos - last_nl;
        throw ConfigError("malformed config at line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ": " + e.what());
    }
    RunConfig run = config_detail::parse_run(doc);
    const auto sweep_it = doc.find("sweep");
    if (sweep_it == doc.end()) return run;

    const json& sw = config_detail::require_object(*sweep_it, "sweep");
    config_detail::reject_unknown(sw, {"axis", "values"}, "sweep");
    SweepConfig s;
    s.base = std::move(run);
    if (!sw.contains("axis") || !sw["axis"].is_string())
        config_detail::fail("sweep.axis", "expected a string");
    s.axis = sw["axis"].get<std::string>();
    if (!sw.contains("values") || !sw["values"].is_array())
        config_detail::fail("sweep.values", "expected an array of numbers");
    for (std::size_t i = 0; i < sw["values"].size(); ++i)
        s.values.push_back(config_detail::number(sw["values"][i], "sweep.values[" + std::to_string(i) + "]"));
    if (s.values.empty()) config_detail::fail("sweep.values", "must not be empty");
    {
        nlohmann::json probe = to_json(s.base);
        const nlohmann::json* slot = config_detail::locate(probe, s.axis);
        if (slot == nullptr || !slot->is_number())
            config_detail::fail("sweep.axis", "'" + s.axis + "' does not name a numeric parameter");
    }
    return s;
}

}  // namespace dlatom
