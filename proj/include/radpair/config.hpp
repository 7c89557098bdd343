// config.hpp — radical-pair experiment description, JSON parsing/serialization, presets
#pragma once

#include <radpair/spin_algebra.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace radpair {

using json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Diagonal hyperfine tensor in the molecular frame, millitesla.
struct HyperfineTensor {
    double ax_mT = 0.0;
    double ay_mT = 0.0;
    double az_mT = 0.0;

    double component_mT(int p) const { return p == 0 ? ax_mT : (p == 1 ? ay_mT : az_mT); }
    bool operator==(const HyperfineTensor&) const = default;
};

struct NucleusSpec {
    std::string label;
    double spin = 0.5;
    HyperfineTensor hyperfine;

    Eigen::Index dim() const { return static_cast<Eigen::Index>(std::lround(2.0 * spin)) + 1; }
    bool operator==(const NucleusSpec&) const = default;
};

// Spin quantum number inferred from the nucleus label: N* -> 1 (14N), H* -> 1/2.
inline double default_spin_for_label(const std::string& label) {
    if (!label.empty() && (label[0] == 'N' || label[0] == 'n')) return 1.0;
    if (!label.empty() && (label[0] == 'H' || label[0] == 'h')) return 0.5;
    throw ConfigError("nucleus '" + label +
                      "': spin not given and label does not start with N or H");
}

struct RadicalSpec {
    std::string label;
    std::vector<NucleusSpec> nuclei;

    // electron (dim 2) times all nuclear multiplicities
    Eigen::Index dim() const {
        Eigen::Index d = 2;
        for (const auto& n : nuclei) d *= n.dim();
        return d;
    }
    // size of the nuclear spin space only
    Eigen::Index nuclear_size() const { return dim() / 2; }
    bool operator==(const RadicalSpec&) const = default;
};

struct FieldConfig {
    double b_uT = 47.0;
    double theta_rad = 0.0;
    double phi_rad = 0.0;
    bool operator==(const FieldConfig&) const = default;
};

struct RateConfig {
    double ks_per_s = 1e4;
    double kt_per_s = 1e4;

    bool equal() const { return ks_per_s == kt_per_s; }
    bool operator==(const RateConfig&) const = default;
};

struct DimensionCaps {
    Eigen::Index per_radical = 256;
    Eigen::Index joint = 4096;
};

struct RadicalPairConfig {
    RadicalSpec radical_a;
    RadicalSpec radical_b;
    FieldConfig field;
    RateConfig rates;

    Eigen::Index joint_dim() const { return radical_a.dim() * radical_b.dim(); }
    // N = N1 * N2, the total nuclear spin space size
    Eigen::Index nuclear_space() const {
        return radical_a.nuclear_size() * radical_b.nuclear_size();
    }
    bool operator==(const RadicalPairConfig&) const = default;
};

inline void validate_config(const RadicalPairConfig& c, const DimensionCaps& caps = {}) {
    auto check_radical = [&](const RadicalSpec& r, const char* which) {
        for (const auto& n : r.nuclei) {
            if (!is_half_integer_spin(n.spin) || n.spin <= 0.0) {
                throw ConfigError(std::string(which) + " nucleus '" + n.label +
                                  "': 2*spin must be a positive integer");
            }
            if (!std::isfinite(n.hyperfine.ax_mT) || !std::isfinite(n.hyperfine.ay_mT) ||
                !std::isfinite(n.hyperfine.az_mT)) {
                throw ConfigError(std::string(which) + " nucleus '" + n.label +
                                  "': hyperfine components must be finite");
            }
        }
        if (r.dim() > caps.per_radical) {
            throw ConfigError(std::string(which) + ": Hilbert dimension " +
                              std::to_string(r.dim()) + " exceeds per-radical cap " +
                              std::to_string(caps.per_radical));
        }
    };
    check_radical(c.radical_a, "radical_a");
    check_radical(c.radical_b, "radical_b");
    if (c.joint_dim() > caps.joint) {
        throw ConfigError("joint dimension " + std::to_string(c.joint_dim()) +
                          " exceeds cap " + std::to_string(caps.joint));
    }
    if (!(c.field.b_uT >= 0.0) || !std::isfinite(c.field.b_uT)) {
        throw ConfigError("field.b_uT must be finite and >= 0");
    }
    if (!(c.field.theta_rad >= 0.0 && c.field.theta_rad <= std::numbers::pi)) {
        throw ConfigError("field.theta_rad must lie in [0, pi]");
    }
    if (!(c.field.phi_rad >= 0.0 && c.field.phi_rad < 2.0 * std::numbers::pi)) {
        throw ConfigError("field.phi_rad must lie in [0, 2*pi)");
    }
    if (!(c.rates.ks_per_s > 0.0) || !(c.rates.kt_per_s > 0.0)) {
        throw ConfigError("rates must be > 0");
    }
}

inline json to_json(const RadicalPairConfig& c) {
    auto radical = [](const RadicalSpec& r) {
        json nuclei = json::array();
        for (const auto& n : r.nuclei) {
            nuclei.push_back({{"label", n.label},
                              {"spin", n.spin},
                              {"ax_mT", n.hyperfine.ax_mT},
                              {"ay_mT", n.hyperfine.ay_mT},
                              {"az_mT", n.hyperfine.az_mT}});
        }
        return json{{"label", r.label}, {"nuclei", nuclei}};
    };
    return json{{"radical_a", radical(c.radical_a)},
                {"radical_b", radical(c.radical_b)},
                {"field",
                 {{"b_uT", c.field.b_uT},
                  {"theta_rad", c.field.theta_rad},
                  {"phi_rad", c.field.phi_rad}}},
                {"rates", {{"ks_per_s", c.rates.ks_per_s}, {"kt_per_s", c.rates.kt_per_s}}}};
}

inline std::string serialize_config(const RadicalPairConfig& c) {
    return to_json(c).dump(2) + "\n";
}

inline RadicalPairConfig config_from_json(const json& j, const DimensionCaps& caps = {}) {
    RadicalPairConfig c;
    auto radical = [](const json& r, const char* which) {
        RadicalSpec out;
        out.label = r.value("label", std::string(which));
        if (r.contains("nuclei")) {
            if (!r["nuclei"].is_array()) {
                throw ConfigError(std::string(which) + ".nuclei must be an array");
            }
            for (const auto& n : r["nuclei"]) {
                NucleusSpec spec;
                if (!n.contains("label") || !n["label"].is_string()) {
                    throw ConfigError(std::string(which) + ": every nucleus needs a label");
                }
                spec.label = n["label"].get<std::string>();
                spec.spin = n.contains("spin") ? n["spin"].get<double>()
                                               : default_spin_for_label(spec.label);
                spec.hyperfine.ax_mT = n.value("ax_mT", 0.0);
                spec.hyperfine.ay_mT = n.value("ay_mT", 0.0);
                spec.hyperfine.az_mT = n.value("az_mT", 0.0);
                out.nuclei.push_back(std::move(spec));
            }
        }
        return out;
    };
    if (!j.contains("radical_a") || !j.contains("radical_b")) {
        throw ConfigError("config must contain radical_a and radical_b sections");
    }
    c.radical_a = radical(j["radical_a"], "radical_a");
    c.radical_b = radical(j["radical_b"], "radical_b");
    if (j.contains("field")) {
        const auto& f = j["field"];
        c.field.b_uT = f.value("b_uT", 47.0);
        c.field.theta_rad = f.value("theta_rad", 0.0);
        c.field.phi_rad = f.value("phi_rad", 0.0);
    }
    if (j.contains("rates")) {
        const auto& r = j["rates"];
        c.rates.ks_per_s = r.value("ks_per_s", 1e4);
        c.rates.kt_per_s = r.value("kt_per_s", 1e4);
    }
    validate_config(c, caps);
    return c;
}

inline RadicalPairConfig parse_config(const std::string& text, const DimensionCaps& caps = {}) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // nlohmann reports a byte offset; translate to a line number
        std::size_t line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') ++line;
        }
        throw ConfigError("parse error at line " + std::to_string(line) + ": " + e.what());
    }
    return config_from_json(j, caps);
}

// FNV-1a over the canonical serialization; stable across runs.
inline std::string config_digest(const RadicalPairConfig& c) {
    std::string s = serialize_config(c);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

// Standard FAD/Trp hyperfine couplings (mT).
inline const std::vector<NucleusSpec>& fad_nuclei() {
    static const std::vector<NucleusSpec> v = {
        {"N5", 1.0, {-0.0989, -0.0989, 1.7569}},
        {"N10", 1.0, {-0.0241, -0.0144, 0.6046}},
        {"H6", 0.5, {-0.5304, -0.4336, -0.1976}},
    };
    return v;
}

inline const std::vector<NucleusSpec>& trp_nuclei() {
    static const std::vector<NucleusSpec> v = {
        {"N1", 1.0, {0.0, 0.0, 1.0812}},
        {"H1", 0.5, {0.4716, -0.36990, 0.0}},
        {"H4", 0.5, {-0.74, -0.536, -0.1879}},
    };
    return v;
}

inline RadicalPairConfig fad_trp_preset(std::size_t n_per_radical) {
    RadicalPairConfig c;
    c.radical_a.label = "FAD";
    c.radical_b.label = "Trp";
    for (std::size_t i = 0; i < n_per_radical; ++i) {
        c.radical_a.nuclei.push_back(fad_nuclei()[i]);
        c.radical_b.nuclei.push_back(trp_nuclei()[i]);
    }
    return c;
}

inline std::map<std::string, RadicalPairConfig> builtin_presets() {
    return {{"fad-trp-1-1", fad_trp_preset(1)},
            {"fad-trp-2-2", fad_trp_preset(2)},
            {"fad-trp-3-3", fad_trp_preset(3)}};
}

inline RadicalPairConfig preset(const std::string& name) {
    auto all = builtin_presets();
    auto it = all.find(name);
    if (it == all.end()) {
        std::string known;
        for (const auto& [k, v] : all) known += " " + k;
        throw ConfigError("unknown preset '" + name + "'; known presets:" + known);
    }
    return it->second;
}

// n identical nuclei on each radical, same tensor everywhere. Used by the
// equal-tensor sweeps; spin defaults to 1/2.
inline RadicalPairConfig equal_tensor_config(std::size_t n_per_radical, double ax_mT,
                                             double ay_mT, double az_mT, double spin = 0.5,
                                             double k_per_s = 1e4) {
    RadicalPairConfig c;
    c.radical_a.label = "A";
    c.radical_b.label = "B";
    for (std::size_t i = 0; i < n_per_radical; ++i) {
        NucleusSpec n{"n" + std::to_string(i + 1), spin, {ax_mT, ay_mT, az_mT}};
        c.radical_a.nuclei.push_back(n);
        c.radical_b.nuclei.push_back(n);
    }
    c.rates.ks_per_s = c.rates.kt_per_s = k_per_s;
    return c;
}

}  // namespace radpair
