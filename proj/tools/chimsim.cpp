#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chimera/errors.hpp"
#include "chimera/harness.hpp"
#include "chimera/run_config.hpp"

namespace {

void emit_error(const char* type, const std::string& message) {
    nlohmann::ordered_json err;
    err["error"] = {{"type", type}, {"message", message}};
    std::fputs((err.dump() + "\n").c_str(), stderr);
}

struct common_options {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    double dt = 0.0;
    double t_final = 0.0;
    int threads = 0;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* dt_opt = nullptr;
    CLI::Option* t_final_opt = nullptr;
    CLI::Option* threads_opt = nullptr;

    void attach(CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration file")
            ->required();
        sub->add_option("--out", out_dir, "output directory (default: .)");
        seed_opt = sub->add_option("--seed", seed, "override config seed");
        dt_opt = sub->add_option("--dt", dt, "override integrator step");
        t_final_opt = sub->add_option("--t-final", t_final, "override time horizon");
        threads_opt = sub->add_option("--threads", threads, "override thread count");
    }

    chimera::run_config load() const {
        chimera::run_config cfg = chimera::load_run_config(config_path);
        if (*seed_opt) cfg.seed = seed;
        if (*dt_opt) cfg.integrator.dt = dt;
        if (*t_final_opt) cfg.integrator.t_final = t_final;
        if (*threads_opt) cfg.integrator.threads = threads;
        return cfg;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-population oscillator networks with a slowly adapting coupling"};
    app.require_subcommand(1);

    common_options net_opts, mf_opts, man_opts, cmp_opts, sweep_opts;
    CLI::App* net = app.add_subcommand("simulate-network",
                                       "integrate the full phase network");
    net_opts.attach(net);
    CLI::App* mf = app.add_subcommand("simulate-meanfield",
                                      "integrate the mean-field reduction");
    mf_opts.attach(mf);
    CLI::App* man = app.add_subcommand("manifold",
                                       "classify the critical manifold on a grid");
    man_opts.attach(man);
    CLI::App* cmp = app.add_subcommand("compare",
                                       "network vs mean-field on a shared grid");
    cmp_opts.attach(cmp);
    CLI::App* sweep = app.add_subcommand("sweep", "repeat a run over an axis");
    sweep_opts.attach(sweep);
    std::string axis;
    std::vector<double> values;
    sweep->add_option("--axis", axis, "config field to vary, e.g. system.coupling.k1")
        ->required();
    sweep->add_option("--values", values, "comma-separated axis values")
        ->delimiter(',')
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        std::string summary;
        if (app.got_subcommand(net)) {
            summary = chimera::cmd_simulate_network(net_opts.load(), net_opts.out_dir);
        } else if (app.got_subcommand(mf)) {
            summary = chimera::cmd_simulate_meanfield(mf_opts.load(), mf_opts.out_dir);
        } else if (app.got_subcommand(man)) {
            summary = chimera::cmd_manifold(man_opts.load(), man_opts.out_dir);
        } else if (app.got_subcommand(cmp)) {
            summary = chimera::cmd_compare(cmp_opts.load(), cmp_opts.out_dir);
        } else {
            summary = chimera::cmd_sweep(sweep_opts.load(), axis, values,
                                         sweep_opts.out_dir);
        }
        std::fputs(summary.c_str(), stdout);
        return 0;
    } catch (const chimera::config_error& e) {
        emit_error("config", e.what());
        return 2;
    } catch (const chimera::numerical_error& e) {
        emit_error("numerical", e.what());
        return 3;
    } catch (const chimera::no_real_branch_error& e) {
        emit_error("numerical", e.what());
        return 3;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 3;
    }
}
