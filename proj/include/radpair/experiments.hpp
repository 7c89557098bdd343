// experiments.hpp — angular yield profiles, compass sensitivity, and the
// hyperfine/rate parameter sweeps, with deterministic CSV emission
#pragma once

#include <radpair/coherence.hpp>
#include <radpair/parallel.hpp>
#include <radpair/yield.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace radpair {

inline constexpr const char* kVersion = "0.1.0";

struct AngleGrid {
    std::vector<double> thetas;  // radians, strictly increasing, within [0, pi]
    double phi = 0.0;

    // 91 uniform points on [0, pi/2] resolve the theta = 90 deg needle at k = 1e4
    static AngleGrid uniform(std::size_t points = 91, double lo = 0.0,
                             double hi = std::numbers::pi / 2.0) {
        if (points < 2 || !(lo < hi) || lo < 0.0 || hi > std::numbers::pi) {
            throw std::invalid_argument("AngleGrid: need >= 2 points with 0 <= lo < hi <= pi");
        }
        AngleGrid g;
        g.thetas.resize(points);
        for (std::size_t i = 0; i < points; ++i) {
            g.thetas[i] = lo + (hi - lo) * static_cast<double>(i) /
                                   static_cast<double>(points - 1);
        }
        return g;
    }
};

struct SweepResult {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string config_digest;
    json metadata;
};

inline SweepResult yield_profile(const RadicalPairConfig& config, const AngleGrid& grid) {
    require_equal_rates(config, "yield_profile");
    SweepResult out;
    out.name = "yield_profile";
    out.columns = {"theta_rad", "phi_rad", "singlet_yield"};
    out.config_digest = config_digest(config);
    out.rows.resize(grid.thetas.size());
    parallel_for(grid.thetas.size(), [&](std::size_t i) {
        RadicalPairConfig c = config;
        c.field.theta_rad = grid.thetas[i];
        c.field.phi_rad = grid.phi;
        out.rows[i] = {grid.thetas[i], grid.phi, singlet_yield_closed(c).value};
    });
    out.metadata = {{"grid_points", grid.thetas.size()},
                    {"theta_min_rad", grid.thetas.front()},
                    {"theta_max_rad", grid.thetas.back()},
                    {"phi_rad", grid.phi}};
    return out;
}

inline double sensitivity(const RadicalPairConfig& config, const AngleGrid& grid) {
    SweepResult p = yield_profile(config, grid);
    double lo = p.rows.front()[2], hi = lo;
    for (const auto& r : p.rows) {
        lo = std::min(lo, r[2]);
        hi = std::max(hi, r[2]);
    }
    return hi - lo;
}

// Phi_S(theta = 0) - Phi_S(theta = pi/2), sign preserved.
inline double delta_yield_0_90(const RadicalPairConfig& config) {
    require_equal_rates(config, "delta_yield_0_90");
    RadicalPairConfig c = config;
    c.field.theta_rad = 0.0;
    double at0 = singlet_yield_closed(c).value;
    c.field.theta_rad = std::numbers::pi / 2.0;
    return at0 - singlet_yield_closed(c).value;
}

struct TransverseSweepResult {
    SweepResult profiles;       // (ax_mT, theta_rad, phi_rad, singlet_yield)
    SweepResult sensitivities;  // (ax_mT, sensitivity)
};

// Equal-tensor n-n system with ax = ay swept and az fixed on every nucleus.
inline TransverseSweepResult sweep_transverse(const std::vector<double>& ax_values_mT,
                                              double az_mT, const AngleGrid& grid,
                                              double k_per_s = 1e4,
                                              std::size_t n_per_radical = 3,
                                              double spin = 0.5) {
    TransverseSweepResult out;
    out.profiles.name = "sweep_transverse";
    out.profiles.columns = {"ax_mT", "theta_rad", "phi_rad", "singlet_yield"};
    out.sensitivities.name = "sweep_transverse_sensitivity";
    out.sensitivities.columns = {"ax_mT", "sensitivity"};
    const std::size_t nt = grid.thetas.size();
    out.profiles.rows.resize(ax_values_mT.size() * nt);
    out.sensitivities.rows.resize(ax_values_mT.size());
    parallel_for(ax_values_mT.size(), [&](std::size_t ia) {
        const double a = ax_values_mT[ia];
        RadicalPairConfig c = equal_tensor_config(n_per_radical, a, a, az_mT, spin, k_per_s);
        SweepResult prof = yield_profile(c, grid);
        double lo = prof.rows.front()[2], hi = lo;
        for (std::size_t it = 0; it < nt; ++it) {
            const auto& r = prof.rows[it];
            out.profiles.rows[ia * nt + it] = {a, r[0], r[1], r[2]};
            lo = std::min(lo, r[2]);
            hi = std::max(hi, r[2]);
        }
        out.sensitivities.rows[ia] = {a, hi - lo};
        if (ia == 0) {
            out.profiles.config_digest = prof.config_digest;
            out.sensitivities.config_digest = prof.config_digest;
        }
    });
    json meta = {{"az_mT", az_mT},
                 {"k_per_s", k_per_s},
                 {"nuclei_per_radical", n_per_radical},
                 {"nuclear_spin", spin},
                 {"ax_values_mT", ax_values_mT},
                 {"grid_points", nt}};
    out.profiles.metadata = meta;
    out.sensitivities.metadata = meta;
    return out;
}

// 2-D map of delta_yield_0_90 over (transverse, longitudinal) tensor components
// for the six-nuclei equal-tensor system.
inline SweepResult sweep_2d(const std::vector<double>& az_values_mT,
                            const std::vector<double>& transverse_values_mT,
                            double k_per_s = 1e4, std::size_t n_per_radical = 3,
                            double spin = 0.5) {
    SweepResult out;
    out.name = "sweep_2d";
    out.columns = {"a_transverse_mT", "az_mT", "delta_yield_0_90"};
    const std::size_t nz = az_values_mT.size(), ntr = transverse_values_mT.size();
    out.rows.resize(nz * ntr);
    parallel_for(nz * ntr, [&](std::size_t cell) {
        const double az = az_values_mT[cell / ntr];
        const double at = transverse_values_mT[cell % ntr];
        RadicalPairConfig c = equal_tensor_config(n_per_radical, at, at, az, spin, k_per_s);
        out.rows[cell] = {at, az, delta_yield_0_90(c)};
        if (cell == 0) out.config_digest = config_digest(c);
    });
    out.metadata = {{"k_per_s", k_per_s},
                    {"nuclei_per_radical", n_per_radical},
                    {"nuclear_spin", spin},
                    {"az_values_mT", az_values_mT},
                    {"transverse_values_mT", transverse_values_mT}};
    return out;
}

struct RateSweepResult {
    SweepResult profiles;       // (k_per_s, theta_rad, phi_rad, singlet_yield)
    SweepResult sensitivities;  // (k_per_s, sensitivity)
};

inline RateSweepResult sweep_rates(const RadicalPairConfig& config,
                                   const std::vector<double>& k_values,
                                   const AngleGrid& grid) {
    RateSweepResult out;
    out.profiles.name = "sweep_rates";
    out.profiles.columns = {"k_per_s", "theta_rad", "phi_rad", "singlet_yield"};
    out.sensitivities.name = "sweep_rates_sensitivity";
    out.sensitivities.columns = {"k_per_s", "sensitivity"};
    const std::size_t nt = grid.thetas.size();
    out.profiles.rows.resize(k_values.size() * nt);
    out.sensitivities.rows.resize(k_values.size());
    parallel_for(k_values.size(), [&](std::size_t ik) {
        RadicalPairConfig c = config;
        c.rates.ks_per_s = c.rates.kt_per_s = k_values[ik];
        SweepResult prof = yield_profile(c, grid);
        double lo = prof.rows.front()[2], hi = lo;
        for (std::size_t it = 0; it < nt; ++it) {
            const auto& r = prof.rows[it];
            out.profiles.rows[ik * nt + it] = {k_values[ik], r[0], r[1], r[2]};
            lo = std::min(lo, r[2]);
            hi = std::max(hi, r[2]);
        }
        out.sensitivities.rows[ik] = {k_values[ik], hi - lo};
    });
    out.profiles.config_digest = config_digest(config);
    out.sensitivities.config_digest = out.profiles.config_digest;
    json meta = {{"k_values", k_values}, {"grid_points", nt}};
    out.profiles.metadata = meta;
    out.sensitivities.metadata = meta;
    return out;
}

// ---------------------------------------------------------------- CSV output

inline std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string sweep_to_csv(const SweepResult& sweep) {
    std::string out;
    for (std::size_t i = 0; i < sweep.columns.size(); ++i) {
        if (i) out += ',';
        out += sweep.columns[i];
    }
    out += '\n';
    for (const auto& row : sweep.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_value(row[i]);
        }
        out += '\n';
    }
    return out;
}

// Writes <name>.csv plus a <name>.meta.json sidecar; no timestamps unless
// `stamp` is set, so identical inputs give identical bytes.
inline std::vector<std::filesystem::path> write_sweep(const std::filesystem::path& out_dir,
                                                      const SweepResult& sweep,
                                                      bool stamp = false,
                                                      const std::string& stamp_text = "") {
    std::filesystem::create_directories(out_dir);
    std::filesystem::path csv_path = out_dir / (sweep.name + ".csv");
    std::filesystem::path meta_path = out_dir / (sweep.name + ".meta.json");
    {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + csv_path.string());
        f << sweep_to_csv(sweep);
    }
    json meta = {{"name", sweep.name},
                 {"columns", sweep.columns},
                 {"rows", sweep.rows.size()},
                 {"config_digest", sweep.config_digest},
                 {"software_version", kVersion},
                 {"spin_assignment", "labels N* -> spin 1, H* -> spin 1/2 unless overridden; "
                                     "equal-tensor sweep nuclei are spin 1/2"},
                 {"parameters", sweep.metadata}};
    if (stamp) meta["generated_at"] = stamp_text;
    {
        std::ofstream f(meta_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + meta_path.string());
        f << meta.dump(2) << "\n";
    }
    return {csv_path, meta_path};
}

}  // namespace radpair
