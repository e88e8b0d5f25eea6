#include "chimera/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "chimera/errors.hpp"
#include "chimera/gspt.hpp"
#include "chimera/meanfield.hpp"
#include "chimera/network.hpp"
#include "chimera/signal.hpp"

namespace chimera {

namespace {

using json = nlohmann::ordered_json;

struct file_closer {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using file_ptr = std::unique_ptr<std::FILE, file_closer>;

file_ptr open_for_write(const std::filesystem::path& file) {
    file_ptr f(std::fopen(file.string().c_str(), "wb"));
    if (!f) throw config_error("cannot open " + file.string() + " for writing");
    return f;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    file_ptr f = open_for_write(file);
    std::fwrite(text.data(), 1, text.size(), f.get());
}

json classification_json(const pattern_class& pc, const pattern_thresholds& th) {
    json j;
    j["kind"] = to_string(pc.kind);
    j["mean_R1"] = pc.mean_r1;
    j["mean_R2"] = pc.mean_r2;
    j["osc_amplitude"] = pc.osc_amplitude;
    if (pc.osc_period)
        j["osc_period"] = *pc.osc_period;
    else
        j["osc_period"] = nullptr;
    j["thresholds"] = {{"transient_fraction", th.transient_fraction},
                       {"incoherence_floor", th.incoherence_floor},
                       {"sync_r", th.sync_r},
                       {"quiet_amplitude", th.quiet_amplitude},
                       {"chimera_r1_low_pad", th.chimera_r1_low_pad},
                       {"chimera_r1_high", th.chimera_r1_high},
                       {"breathing_r2", th.breathing_r2}};
    return j;
}

json equilibria_json(const run_config& cfg) {
    json out = json::array();
    const nullcline_info nc = nullcline(cfg.law);
    if (!nc.coupling_of_rho1) return out;
    const fast_system sys = (cfg.law.target == adaptive_target::inter)
                                ? fast_system::inter
                                : fast_system::intra;
    for (const branch br : {branch::plus, branch::minus}) {
        std::vector<slow_equilibrium> eqs;
        try {
            eqs = chimera_equilibrium(cfg.system, cfg.law, sys, br);
        } catch (const config_error&) {
            continue;
        }
        for (const slow_equilibrium& eq : eqs) {
            json row;
            row["rho1"] = eq.rho1;
            row["coupling"] = eq.coupling;
            row["psi"] = eq.psi;
            row["branch"] = to_string(eq.br);
            row["fast_class"] = to_string(eq.fast_cls);
            row["slow_stable"] = eq.slow_stable;
            out.push_back(row);
        }
    }
    return out;
}

json final_row_json(const trajectory& traj) {
    const std::size_t i = traj.size() - 1;
    return {{"t", traj.t[i]},      {"R1", traj.r1[i]},   {"R2", traj.r2[i]},
            {"psi", traj.psi[i]},  {"coupling", traj.coupling[i]}};
}

json diagnostics_json(const trajectory& traj) {
    return {{"clamp_events", traj.clamp_events}, {"floor_events", traj.floor_events}};
}

pattern_thresholds thresholds_for(const run_config& cfg, bool network) {
    pattern_thresholds th =
        network ? pattern_thresholds::for_population_size(cfg.system.pop1.size)
                : pattern_thresholds{};
    th.transient_fraction = cfg.classifier.transient_fraction;
    return th;
}

// Runs too short for the classifier still deserve a summary.
json maybe_classification(const trajectory& traj, const pattern_thresholds& th) {
    if (traj.size() < 20) return nullptr;
    return classification_json(classify_pattern(traj, th), th);
}

std::string finish_summary(json& summary, const run_config& cfg,
                           const std::filesystem::path& out_dir,
                           const char* summary_name) {
    summary["config"] = json::parse(resolved_config_json(cfg));
    const std::string text = summary.dump(2) + "\n";
    write_text(out_dir / summary_name, text);
    return text;
}

trajectory run_network(const run_config& cfg) {
    const network_state init =
        synthesize_network_state(cfg.system, cfg.init.rho1, cfg.init.rho2,
                                 cfg.init.psi, cfg.initial_coupling(), cfg.seed);
    return integrate_network(cfg.system, cfg.law, init, cfg.integrator);
}

trajectory run_meanfield(const run_config& cfg) {
    meanfield_state init;
    init.rho1 = cfg.init.rho1;
    init.rho2 = cfg.init.rho2;
    init.psi = cfg.init.psi;
    init.coupling = cfg.initial_coupling();
    return integrate_meanfield(cfg.resolved_mf_system(), cfg.system, cfg.law, init,
                               cfg.integrator);
}

trajectory with_filtered_r1(const trajectory& traj, const filter_config& f) {
    trajectory out = traj;
    if (traj.size() >= f.window) out.r1 = savitzky_golay(traj.r1, f.window, f.poly_order);
    return out;
}

} // namespace

void write_trajectory_csv(const std::filesystem::path& file, const trajectory& traj) {
    file_ptr f = open_for_write(file);
    std::fputs("t,R1,phi1,R2,phi2,psi,coupling\n", f.get());
    for (std::size_t i = 0; i < traj.size(); ++i)
        std::fprintf(f.get(), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", traj.t[i],
                     traj.r1[i], traj.phi1[i], traj.r2[i], traj.phi2[i], traj.psi[i],
                     traj.coupling[i]);
}

std::string cmd_simulate_network(const run_config& cfg,
                                 const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const trajectory traj = run_network(cfg);
    write_trajectory_csv(out_dir / "network_trajectory.csv", traj);

    const trajectory filtered = with_filtered_r1(traj, cfg.filter);
    const pattern_thresholds th = thresholds_for(cfg, true);

    json summary;
    summary["command"] = "simulate-network";
    summary["outputs"] = {{"trajectory", "network_trajectory.csv"}};
    summary["final"] = final_row_json(traj);
    summary["classification"] = maybe_classification(filtered, th);
    summary["equilibria"] = equilibria_json(cfg);
    return finish_summary(summary, cfg, out_dir, "network_summary.json");
}

std::string cmd_simulate_meanfield(const run_config& cfg,
                                   const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const trajectory traj = run_meanfield(cfg);
    write_trajectory_csv(out_dir / "meanfield_trajectory.csv", traj);

    const pattern_thresholds th = thresholds_for(cfg, false);

    json summary;
    summary["command"] = "simulate-meanfield";
    summary["system"] = "meanfield";
    summary["outputs"] = {{"trajectory", "meanfield_trajectory.csv"}};
    summary["final"] = final_row_json(traj);
    summary["classification"] = maybe_classification(traj, th);
    summary["diagnostics"] = diagnostics_json(traj);
    summary["equilibria"] = equilibria_json(cfg);
    return finish_summary(summary, cfg, out_dir, "meanfield_summary.json");
}

std::string cmd_manifold(const run_config& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const fast_system sys = (cfg.law.target == adaptive_target::inter)
                                ? fast_system::inter
                                : fast_system::intra;
    const stability_report rep =
        scan_manifold(cfg.system, sys, cfg.manifold.only_branch,
                      cfg.manifold.grid_points, cfg.manifold.tol);

    {
        file_ptr f = open_for_write(out_dir / "manifold_grid.csv");
        std::fputs("rho1,branch,coupling,psi,lambda1_re,lambda1_im,lambda2_re,"
                   "lambda2_im,class\n",
                   f.get());
        for (const manifold_sample& s : rep.grid)
            std::fprintf(f.get(), "%.12g,%s,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%s\n",
                         s.rho1, to_string(s.br), s.coupling, s.psi, s.eig.l1.real(),
                         s.eig.l1.imag(), s.eig.l2.real(), s.eig.l2.imag(),
                         to_string(s.cls));
    }

    std::size_t counts[4] = {0, 0, 0, 0};
    for (const manifold_sample& s : rep.grid) ++counts[static_cast<int>(s.cls)];

    json summary;
    summary["command"] = "manifold";
    summary["system"] = (sys == fast_system::inter) ? "inter" : "intra";
    summary["outputs"] = {{"grid", "manifold_grid.csv"}};
    summary["folds"] = rep.folds;
    summary["boundary_degenerate"] = rep.boundary_degenerate;
    summary["hyperbolic_everywhere"] = rep.hyperbolic_everywhere;
    summary["no_real_points"] = rep.no_real_points;
    summary["class_counts"] = {
        {"attracting", counts[static_cast<int>(stability::attracting)]},
        {"repelling", counts[static_cast<int>(stability::repelling)]},
        {"saddle", counts[static_cast<int>(stability::saddle)]},
        {"non_hyperbolic", counts[static_cast<int>(stability::non_hyperbolic)]}};
    if (sys == fast_system::inter)
        summary["hyperbolicity_condition"] =
            hyperbolicity_condition(cfg.system.coupling.k1, cfg.system.pop1.width);
    else
        summary["connectivity_check"] =
            connectivity_check(cfg.system.coupling.mu, cfg.system.omega_diff());
    summary["equilibria"] = equilibria_json(cfg);
    return finish_summary(summary, cfg, out_dir, "manifold_summary.json");
}

std::string cmd_compare(const run_config& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const trajectory net = run_network(cfg);
    const trajectory mf = run_meanfield(cfg);
    if (net.size() != mf.size())
        throw numerical_error("network and mean-field grids disagree");
    const trajectory netf = with_filtered_r1(net, cfg.filter);

    {
        file_ptr f = open_for_write(out_dir / "compare_joint.csv");
        std::fputs("t,R1_net,R1_net_filtered,R2_net,psi_net,coupling_net,"
                   "R1_mf,R2_mf,psi_mf,coupling_mf\n",
                   f.get());
        for (std::size_t i = 0; i < net.size(); ++i)
            std::fprintf(f.get(),
                         "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                         net.t[i], net.r1[i], netf.r1[i], net.r2[i], net.psi[i],
                         net.coupling[i], mf.r1[i], mf.r2[i], mf.psi[i],
                         mf.coupling[i]);
    }

    const auto start = static_cast<std::size_t>(cfg.classifier.transient_fraction *
                                                static_cast<double>(net.size()));
    double max_gap = 0.0;
    for (std::size_t i = start; i < net.size(); ++i)
        max_gap = std::max(max_gap, std::abs(netf.r1[i] - mf.r1[i]));

    const pattern_thresholds net_th = thresholds_for(cfg, true);
    const pattern_thresholds mf_th = thresholds_for(cfg, false);

    json summary;
    summary["command"] = "compare";
    summary["outputs"] = {{"joint", "compare_joint.csv"}};
    summary["max_post_transient_gap_R1"] = max_gap;
    summary["transient_fraction"] = cfg.classifier.transient_fraction;
    summary["network"] = {{"classification", maybe_classification(netf, net_th)},
                          {"final", final_row_json(net)}};
    summary["meanfield"] = {{"classification", maybe_classification(mf, mf_th)},
                            {"final", final_row_json(mf)},
                            {"diagnostics", diagnostics_json(mf)}};
    summary["equilibria"] = equilibria_json(cfg);
    return finish_summary(summary, cfg, out_dir, "compare_summary.json");
}

namespace {

double* sweep_axis_target(run_config& cfg, const std::string& axis) {
    if (axis == "system.coupling.k1") return &cfg.system.coupling.k1;
    if (axis == "system.coupling.k2") return &cfg.system.coupling.k2;
    if (axis == "system.coupling.mu") return &cfg.system.coupling.mu;
    if (axis == "system.coupling.phase_lag") return &cfg.system.coupling.phase_lag;
    if (axis == "system.pop1.center_freq") return &cfg.system.pop1.center_freq;
    if (axis == "system.pop1.width") return &cfg.system.pop1.width;
    if (axis == "system.pop2.center_freq") return &cfg.system.pop2.center_freq;
    if (axis == "system.pop2.width") return &cfg.system.pop2.width;
    if (axis == "law.epsilon") return &cfg.law.epsilon;
    if (axis == "law.gamma" || axis == "law.eta") {
        auto* lf = std::get_if<linear_feedback>(&cfg.law.kind);
        if (!lf)
            throw config_error("axis " + axis + " needs a linear_feedback law");
        return axis == "law.gamma" ? &lf->gamma : &lf->eta;
    }
    if (axis == "law.amplitude_scale" || axis == "law.drive_freq") {
        auto* pd = std::get_if<periodic_drive>(&cfg.law.kind);
        if (!pd)
            throw config_error("axis " + axis + " needs a periodic_drive law");
        return axis == "law.amplitude_scale" ? &pd->amplitude_scale : &pd->drive_freq;
    }
    if (axis == "init.rho1") return &cfg.init.rho1;
    if (axis == "init.rho2") return &cfg.init.rho2;
    if (axis == "init.psi") return &cfg.init.psi;
    if (axis == "integrator.dt") return &cfg.integrator.dt;
    if (axis == "integrator.t_final") return &cfg.integrator.t_final;
    throw config_error("unknown sweep axis '" + axis + "'");
}

} // namespace

std::string cmd_sweep(const run_config& cfg, const std::string& axis,
                      const std::vector<double>& values,
                      const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        // Resolve the axis up front so a typo fails the whole command.
        run_config probe = cfg;
        sweep_axis_target(probe, axis);
    }

    std::string rows;
    std::size_t failed = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        run_config row_cfg = cfg;
        *sweep_axis_target(row_cfg, axis) = values[i];
        json row;
        row["index"] = i;
        row["axis"] = axis;
        row["value"] = values[i];
        try {
            validate(row_cfg.system);
            const fast_system sys = (row_cfg.law.target == adaptive_target::inter)
                                        ? fast_system::inter
                                        : fast_system::intra;
            const stability_report rep =
                scan_manifold(row_cfg.system, sys, row_cfg.manifold.only_branch,
                              row_cfg.manifold.grid_points, row_cfg.manifold.tol);
            row["folds"] = rep.folds;
            row["hyperbolic_everywhere"] = rep.hyperbolic_everywhere;
            row["boundary_degenerate"] = rep.boundary_degenerate;
            row["equilibria"] = equilibria_json(row_cfg);
            if (row_cfg.integrator.t_final > 0.0) {
                const trajectory mf = run_meanfield(row_cfg);
                const pattern_thresholds th = thresholds_for(row_cfg, false);
                row["final"] = final_row_json(mf);
                row["classification"] = maybe_classification(mf, th);
                row["diagnostics"] = diagnostics_json(mf);
            }
        } catch (const config_error& e) {
            row["error"] = {{"type", "config"}, {"message", e.what()}};
            ++failed;
        } catch (const numerical_error& e) {
            row["error"] = {{"type", "numerical"}, {"message", e.what()}};
            ++failed;
        }
        rows += row.dump() + "\n";
    }
    write_text(out_dir / "sweep.jsonl", rows);

    json summary;
    summary["command"] = "sweep";
    summary["axis"] = axis;
    summary["values"] = values;
    summary["rows"] = values.size();
    summary["failed_rows"] = failed;
    summary["outputs"] = {{"rows", "sweep.jsonl"}};
    return finish_summary(summary, cfg, out_dir, "sweep_summary.json");
}

} // namespace chimera
