// radpair — command-line front end: observables, sweeps, and oracle validation
#include <radpair/experiments.hpp>
#include <radpair/oracle.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace radpair;

constexpr double kDegToRad = std::numbers::pi / 180.0;

struct CommonOpts {
    std::string preset_name;
    std::string config_path;
    std::optional<double> theta_deg, phi_deg, b_uT, k_per_sec, ks_per_sec, kt_per_sec;
    std::vector<double> set_tensor_mT;  // ax,ay,az applied to every nucleus
    std::string out_dir = "out";
    bool stamp = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_config = true) {
    auto* preset_opt = cmd->add_option("--preset", o.preset_name, "built-in preset name");
    auto* config_opt =
        cmd->add_option("--config", o.config_path, "path to a JSON config document");
    preset_opt->excludes(config_opt);
    if (needs_config) {
        // exactly one source; checked after parse so the error is a usage error
    }
    cmd->add_option("--theta-deg", o.theta_deg, "field polar angle, degrees");
    cmd->add_option("--phi-deg", o.phi_deg, "field azimuthal angle, degrees");
    cmd->add_option("--b-uT", o.b_uT, "field magnitude, microtesla");
    cmd->add_option("--k-per-sec", o.k_per_sec, "recombination rate ks = kt, 1/s");
    cmd->add_option("--ks-per-sec", o.ks_per_sec, "singlet recombination rate, 1/s");
    cmd->add_option("--kt-per-sec", o.kt_per_sec, "triplet recombination rate, 1/s");
    cmd->add_option("--set-tensor-mT", o.set_tensor_mT,
                    "override every nucleus with this ax ay az tensor (mT)")
        ->expected(3);
    cmd->add_option("--out-dir", o.out_dir, "output directory for CSV + metadata");
    cmd->add_flag("--stamp", o.stamp, "include a timestamp in metadata sidecars");
}

RadicalPairConfig resolve_config(const CommonOpts& o) {
    RadicalPairConfig c;
    if (!o.preset_name.empty()) {
        c = preset(o.preset_name);
    } else if (!o.config_path.empty()) {
        std::ifstream f(o.config_path, std::ios::binary);
        if (!f) throw ConfigError("cannot open config file '" + o.config_path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        c = parse_config(ss.str());
    } else {
        throw CLI::ValidationError("--preset or --config is required");
    }
    if (o.theta_deg) c.field.theta_rad = *o.theta_deg * kDegToRad;
    if (o.phi_deg) c.field.phi_rad = *o.phi_deg * kDegToRad;
    if (o.b_uT) c.field.b_uT = *o.b_uT;
    if (o.k_per_sec) c.rates.ks_per_s = c.rates.kt_per_s = *o.k_per_sec;
    if (o.ks_per_sec) c.rates.ks_per_s = *o.ks_per_sec;
    if (o.kt_per_sec) c.rates.kt_per_s = *o.kt_per_sec;
    if (!o.set_tensor_mT.empty()) {
        HyperfineTensor t{o.set_tensor_mT[0], o.set_tensor_mT[1], o.set_tensor_mT[2]};
        for (auto* r : {&c.radical_a, &c.radical_b})
            for (auto& n : r->nuclei) n.hyperfine = t;
    }
    validate_config(c);
    return c;
}

std::string fixed12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12f", v);
    return buf;
}

void print_written(const std::vector<std::filesystem::path>& paths) {
    for (const auto& p : paths) std::cout << p.string() << "\n";
}

std::vector<double> linspace_step(double lo, double hi, double step) {
    std::vector<double> v;
    const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
    for (std::size_t i = 0; i <= n; ++i) v.push_back(lo + step * static_cast<double>(i));
    return v;
}

int cmd_yield(const CommonOpts& o) {
    RadicalPairConfig c = resolve_config(o);
    std::cout << fixed12(singlet_yield_closed(c).value) << "\n";
    return 0;
}

int cmd_profile(const CommonOpts& o, std::size_t grid_points) {
    RadicalPairConfig c = resolve_config(o);
    AngleGrid grid = AngleGrid::uniform(grid_points);
    grid.phi = c.field.phi_rad;
    SweepResult sweep = yield_profile(c, grid);
    print_written(write_sweep(o.out_dir, sweep, o.stamp));
    return 0;
}

int cmd_sensitivity(const CommonOpts& o, std::size_t grid_points) {
    RadicalPairConfig c = resolve_config(o);
    AngleGrid grid = AngleGrid::uniform(grid_points);
    grid.phi = c.field.phi_rad;
    std::cout << fixed12(sensitivity(c, grid)) << "\n";
    return 0;
}

int cmd_coherence(const CommonOpts& o, const std::string& subsystem, const std::string& basis,
                  bool no_renormalize, double t_max_us, std::size_t t_points) {
    RadicalPairConfig c = resolve_config(o);
    CoherenceOptions opt;
    opt.subsystem = subsystem == "electrons" ? Subsystem::electrons : Subsystem::joint;
    opt.basis = basis == "singlet-triplet" ? Basis::singlet_triplet : Basis::product_z;
    opt.renormalize = !no_renormalize;
    std::vector<double> times(t_points);
    for (std::size_t i = 0; i < t_points; ++i) {
        times[i] = t_max_us * 1e-6 * static_cast<double>(i) / static_cast<double>(t_points - 1);
    }
    TraceSeries trace = coherence_trace(c, times, opt);
    SweepResult sweep;
    sweep.name = "coherence";
    sweep.columns = {"time_s", "coherence"};
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        sweep.rows.push_back({trace.times[i], trace.values[i]});
    }
    sweep.config_digest = trace.config_digest;
    sweep.metadata = {{"subsystem", subsystem},
                      {"basis", basis},
                      {"renormalize", !no_renormalize},
                      {"t_max_us", t_max_us},
                      {"t_points", t_points},
                      {"truncated", trace.truncated},
                      {"theta_rad", c.field.theta_rad}};
    print_written(write_sweep(o.out_dir, sweep, o.stamp));
    return 0;
}

int cmd_sweep_transverse(const CommonOpts& o, double az_mT, double ax_max_mT, double ax_step_mT,
                         std::size_t grid_points, double k_per_s) {
    TransverseSweepResult res = sweep_transverse(linspace_step(0.0, ax_max_mT, ax_step_mT),
                                                 az_mT, AngleGrid::uniform(grid_points), k_per_s);
    auto paths = write_sweep(o.out_dir, res.profiles, o.stamp);
    auto more = write_sweep(o.out_dir, res.sensitivities, o.stamp);
    paths.insert(paths.end(), more.begin(), more.end());
    print_written(paths);
    return 0;
}

int cmd_sweep_2d(const CommonOpts& o, double az_max_mT, double az_step_mT, double trans_max_mT,
                 double trans_step_mT, double k_per_s) {
    SweepResult res = sweep_2d(linspace_step(0.0, az_max_mT, az_step_mT),
                               linspace_step(0.0, trans_max_mT, trans_step_mT), k_per_s);
    print_written(write_sweep(o.out_dir, res, o.stamp));
    return 0;
}

int cmd_sweep_rates(const CommonOpts& o, const std::vector<double>& k_values,
                    std::size_t grid_points) {
    RadicalPairConfig c = resolve_config(o);
    RateSweepResult res = sweep_rates(c, k_values, AngleGrid::uniform(grid_points));
    auto paths = write_sweep(o.out_dir, res.profiles, o.stamp);
    auto more = write_sweep(o.out_dir, res.sensitivities, o.stamp);
    paths.insert(paths.end(), more.begin(), more.end());
    print_written(paths);
    return 0;
}

// Oracle cross-checks on a small system: trace decay, state agreement of the
// three evolution paths, coherence agreement, and closed-vs-integrated yield.
int cmd_validate(const CommonOpts& o, double horizon_us) {
    RadicalPairConfig c = resolve_config(o);
    require_equal_rates(c, "validate");
    const double horizon = horizon_us * 1e-6;
    // well under the stability bound: RK4 truncation scales as dt^4 and the
    // checks below ask for 1e-7 states
    const double dt = 0.15 * oracle_max_stable_dt(c);
    const auto steps = static_cast<long long>(std::ceil(horizon / dt));
    const auto stride = std::max<long long>(1, steps / 64);
    Trajectory traj = integrate_master_equation(c, dt, horizon, stride);

    const double k = c.rates.ks_per_s;
    PairSystem sys = prepare(c);
    double trace_dev = 0.0, state_dev = 0.0, direct_dev = 0.0;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const double t = traj.times[i];
        trace_dev = std::max(trace_dev,
                             std::abs(traj.states[i].trace().real() - std::exp(-k * t)));
        Matrix fac = evolve_joint(sys, t).matrix;
        state_dev = std::max(state_dev, (traj.states[i] - fac).cwiseAbs().maxCoeff());
        Matrix dir = evolve_joint_direct(c, t).matrix;
        direct_dev = std::max(direct_dev, (fac - dir).cwiseAbs().maxCoeff());
    }

    CoherenceOptions copt;
    TraceSeries ours = coherence_trace(sys, traj.times, copt);
    TraceSeries theirs = oracle_coherence(traj, copt);
    double coh_dev = 0.0;
    for (std::size_t i = 0; i < std::min(ours.values.size(), theirs.values.size()); ++i) {
        coh_dev = std::max(coh_dev, std::abs(ours.values[i] - theirs.values[i]));
    }

    YieldResult closed = singlet_yield_closed(sys);
    YieldResult integrated = singlet_yield_integrated(sys);
    const double yield_dev = std::abs(closed.value - integrated.value);

    struct Check {
        const char* name;
        double dev, tol;
    } checks[] = {
        {"trace_vs_exp_decay", trace_dev, 1e-8},
        {"oracle_vs_factorized_state", state_dev, 1e-7},
        {"factorized_vs_direct_state", direct_dev, 1e-9},
        {"oracle_vs_analytic_coherence", coh_dev, 1e-6},
        {"closed_vs_integrated_yield", yield_dev, 1e-4},
    };
    bool ok = true;
    for (const auto& chk : checks) {
        const bool pass = chk.dev <= chk.tol;
        ok = ok && pass;
        std::printf("%-30s max_dev %.3e tol %.0e %s\n", chk.name, chk.dev, chk.tol,
                    pass ? "ok" : "FAIL");
    }
    return ok ? 0 : 1;
}

int cmd_presets() {
    for (const auto& [name, c] : builtin_presets()) {
        std::cout << name << "  joint_dim=" << c.joint_dim()
                  << "  nuclear_space=" << c.nuclear_space() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"radpair: radical-pair spin dynamics — yields, sensitivity, coherence, sweeps"};
    app.require_subcommand(1);

    CommonOpts common;
    std::size_t grid_points = 91;
    std::string subsystem = "joint", basis = "product-z";
    bool no_renormalize = false;
    double t_max_us = 10.0;
    std::size_t t_points = 201;
    double az_mT = 1.0812, ax_max_mT = 0.17, ax_step_mT = 0.01;
    double az_max_mT = 2.0, az_step_mT = 0.1, trans_max_mT = 0.4, trans_step_mT = 0.02;
    double sweep_k = 1e4;
    std::vector<double> k_values = {1e4, 1e5, 1e6};
    double horizon_us = 2.0;

    auto* yield_cmd = app.add_subcommand("yield", "closed-form singlet yield Phi_S");
    add_common(yield_cmd, common);

    auto* profile_cmd = app.add_subcommand("profile", "yield-vs-theta profile CSV");
    add_common(profile_cmd, common);
    profile_cmd->add_option("--grid-points", grid_points, "theta grid points on [0, 90 deg]");

    auto* sens_cmd = app.add_subcommand("sensitivity", "compass sensitivity Delta_S");
    add_common(sens_cmd, common);
    sens_cmd->add_option("--grid-points", grid_points, "theta grid points on [0, 90 deg]");

    auto* coh_cmd = app.add_subcommand("coherence", "relative entropy of coherence trace CSV");
    add_common(coh_cmd, common);
    coh_cmd->add_option("--subsystem", subsystem, "joint | electrons")
        ->check(CLI::IsMember({"joint", "electrons"}));
    coh_cmd->add_option("--basis", basis, "product-z | singlet-triplet")
        ->check(CLI::IsMember({"product-z", "singlet-triplet"}));
    coh_cmd->add_flag("--no-renormalize", no_renormalize,
                      "evaluate on the decaying (sub-normalized) state");
    coh_cmd->add_option("--t-max-us", t_max_us, "trace end time, microseconds");
    coh_cmd->add_option("--t-points", t_points, "number of time samples")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1000000}));

    auto* st_cmd = app.add_subcommand("sweep-transverse",
                                      "Delta_S vs transverse hyperfine (equal-tensor 3-3)");
    add_common(st_cmd, common, false);
    st_cmd->add_option("--az-mT", az_mT, "fixed longitudinal component, mT");
    st_cmd->add_option("--ax-max-mT", ax_max_mT, "transverse sweep end, mT");
    st_cmd->add_option("--ax-step-mT", ax_step_mT, "transverse sweep step, mT");
    st_cmd->add_option("--grid-points", grid_points, "theta grid points");
    st_cmd->add_option("--sweep-k-per-sec", sweep_k, "recombination rate for the sweep, 1/s");

    auto* s2_cmd = app.add_subcommand(
        "sweep-2d", "delta_yield_0_90 map over (transverse, longitudinal) tensor components");
    add_common(s2_cmd, common, false);
    s2_cmd->add_option("--az-max-mT", az_max_mT, "longitudinal sweep end, mT");
    s2_cmd->add_option("--az-step-mT", az_step_mT, "longitudinal sweep step, mT");
    s2_cmd->add_option("--trans-max-mT", trans_max_mT, "transverse sweep end, mT");
    s2_cmd->add_option("--trans-step-mT", trans_step_mT, "transverse sweep step, mT");
    s2_cmd->add_option("--sweep-k-per-sec", sweep_k, "recombination rate for the sweep, 1/s");

    auto* sr_cmd = app.add_subcommand("sweep-rates", "Delta_S and profiles per rate k");
    add_common(sr_cmd, common);
    sr_cmd->add_option("--k-list", k_values, "rates to sweep, 1/s")->expected(-1);
    sr_cmd->add_option("--grid-points", grid_points, "theta grid points");

    auto* val_cmd = app.add_subcommand("validate", "oracle cross-checks; exit 0 iff all pass");
    add_common(val_cmd, common);
    val_cmd->add_option("--horizon-us", horizon_us, "oracle integration horizon, microseconds");

    auto* presets_cmd = app.add_subcommand("presets", "list built-in presets");
    (void)presets_cmd;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (yield_cmd->parsed()) return cmd_yield(common);
        if (profile_cmd->parsed()) return cmd_profile(common, grid_points);
        if (sens_cmd->parsed()) return cmd_sensitivity(common, grid_points);
        if (coh_cmd->parsed())
            return cmd_coherence(common, subsystem, basis, no_renormalize, t_max_us, t_points);
        if (st_cmd->parsed())
            return cmd_sweep_transverse(common, az_mT, ax_max_mT, ax_step_mT, grid_points,
                                        sweep_k);
        if (s2_cmd->parsed())
            return cmd_sweep_2d(common, az_max_mT, az_step_mT, trans_max_mT, trans_step_mT,
                                sweep_k);
        if (sr_cmd->parsed()) return cmd_sweep_rates(common, k_values, grid_points);
        if (val_cmd->parsed()) return cmd_validate(common, horizon_us);
        if (presets_cmd->parsed()) return cmd_presets();
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
