#include "chimera/run_config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "json.hpp"

#include "chimera/errors.hpp"

namespace chimera {

namespace {

using json = nlohmann::ordered_json;

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw config_error(path + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) known = true;
        if (!known)
            throw config_error("unknown key '" + it.key() + "' in " + path);
    }
}

double get_number(const json& j, const std::string& path, const char* key,
                  std::optional<double> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw config_error(path + "." + key + " is required");
    }
    if (!j[key].is_number())
        throw config_error(path + "." + key + " must be a number");
    return j[key].get<double>();
}

std::uint64_t get_count(const json& j, const std::string& path, const char* key,
                        std::optional<std::uint64_t> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw config_error(path + "." + key + " is required");
    }
    if (!j[key].is_number_unsigned())
        throw config_error(path + "." + key + " must be a non-negative integer");
    return j[key].get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key) || !j[key].is_string())
        throw config_error(path + "." + key + " must be a string");
    return j[key].get<std::string>();
}

population_spec parse_population(const json& j, const std::string& path) {
    check_keys(j, path, {"size", "center_freq", "width", "sampling"});
    population_spec pop;
    pop.size = get_count(j, path, "size");
    pop.center_freq = get_number(j, path, "center_freq");
    pop.width = get_number(j, path, "width");
    if (j.contains("sampling")) {
        const json& s = j["sampling"];
        check_keys(s, path + ".sampling", {"mode", "seed"});
        const std::string mode = get_string(s, path + ".sampling", "mode");
        if (mode == "deterministic") {
            pop.sampling = deterministic_quantiles{};
            if (s.contains("seed"))
                throw config_error(path + ".sampling.seed only applies to seeded mode");
        } else if (mode == "seeded") {
            pop.sampling = seeded_random{get_count(s, path + ".sampling", "seed", 0)};
        } else {
            throw config_error(path + ".sampling.mode must be 'deterministic' or 'seeded'");
        }
    }
    return pop;
}

adaptive_law_spec parse_law(const json& j) {
    const std::string kind = get_string(j, "law", "kind");
    adaptive_law_spec law{adaptive_target::inter, 0.0, constant_law{}};
    if (kind == "constant") {
        check_keys(j, "law", {"target", "epsilon", "kind"});
    } else if (kind == "linear_feedback") {
        check_keys(j, "law", {"target", "epsilon", "kind", "gamma", "eta"});
        law.kind = linear_feedback{get_number(j, "law", "gamma"),
                                   get_number(j, "law", "eta")};
    } else if (kind == "periodic_drive") {
        check_keys(j, "law", {"target", "epsilon", "kind", "amplitude_scale", "drive_freq"});
        law.kind = periodic_drive{get_number(j, "law", "amplitude_scale", 1.0),
                                  get_number(j, "law", "drive_freq")};
    } else if (kind == "phase_feedback") {
        check_keys(j, "law", {"target", "epsilon", "kind", "sign"});
        const double sign = get_number(j, "law", "sign", -1.0);
        if (sign != 1.0 && sign != -1.0)
            throw config_error("law.sign must be +1 or -1");
        law.kind = phase_feedback{sign};
    } else {
        throw config_error("law.kind must be one of constant, linear_feedback, "
                           "periodic_drive, phase_feedback");
    }
    const std::string target = get_string(j, "law", "target");
    if (target == "inter")
        law.target = adaptive_target::inter;
    else if (target == "intra1")
        law.target = adaptive_target::intra1;
    else
        throw config_error("law.target must be 'inter' or 'intra1'");
    law.epsilon = get_number(j, "law", "epsilon");
    if (!(std::isfinite(law.epsilon) && law.epsilon >= 0.0))
        throw config_error("law.epsilon must be finite and non-negative");
    return law;
}

json sampling_json(const sampling_mode& s) {
    json out;
    if (std::holds_alternative<deterministic_quantiles>(s)) {
        out["mode"] = "deterministic";
    } else {
        out["mode"] = "seeded";
        out["seed"] = std::get<seeded_random>(s).seed;
    }
    return out;
}

json population_json(const population_spec& pop) {
    json out;
    out["size"] = pop.size;
    out["center_freq"] = pop.center_freq;
    out["width"] = pop.width;
    out["sampling"] = sampling_json(pop.sampling);
    return out;
}

json law_json(const adaptive_law_spec& law) {
    json out;
    out["target"] = (law.target == adaptive_target::inter) ? "inter" : "intra1";
    out["epsilon"] = law.epsilon;
    if (std::holds_alternative<constant_law>(law.kind)) {
        out["kind"] = "constant";
    } else if (const auto* lf = std::get_if<linear_feedback>(&law.kind)) {
        out["kind"] = "linear_feedback";
        out["gamma"] = lf->gamma;
        out["eta"] = lf->eta;
    } else if (const auto* pd = std::get_if<periodic_drive>(&law.kind)) {
        out["kind"] = "periodic_drive";
        out["amplitude_scale"] = pd->amplitude_scale;
        out["drive_freq"] = pd->drive_freq;
    } else {
        out["kind"] = "phase_feedback";
        out["sign"] = std::get<phase_feedback>(law.kind).sign;
    }
    return out;
}

const char* mf_system_name(meanfield_system sys) {
    switch (sys) {
    case meanfield_system::general: return "general";
    case meanfield_system::full_two_pop: return "full_two_pop";
    case meanfield_system::reduced_inter: return "reduced_inter";
    default: return "reduced_intra";
    }
}

} // namespace

meanfield_system run_config::resolved_mf_system() const {
    if (mf_system) return *mf_system;
    return (law.target == adaptive_target::inter) ? meanfield_system::reduced_inter
                                                  : meanfield_system::reduced_intra;
}

double run_config::initial_coupling() const {
    if (init.coupling) return *init.coupling;
    return (law.target == adaptive_target::inter) ? system.coupling.mu
                                                  : system.coupling.k1;
}

run_config parse_run_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j, "config",
               {"schema_version", "system", "law", "init", "integrator", "mf_system",
                "seed", "filter", "manifold", "classifier"});
    run_config cfg;
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
        throw config_error("config.schema_version is required");
    cfg.schema_version = j["schema_version"].get<int>();
    if (cfg.schema_version != 1)
        throw config_error("unsupported schema_version (expected 1)");

    if (!j.contains("system")) throw config_error("config.system is required");
    const json& sys = j["system"];
    check_keys(sys, "system", {"pop1", "pop2", "coupling"});
    if (!sys.contains("pop1") || !sys.contains("pop2") || !sys.contains("coupling"))
        throw config_error("system.pop1, system.pop2 and system.coupling are required");
    cfg.system.pop1 = parse_population(sys["pop1"], "system.pop1");
    cfg.system.pop2 = parse_population(sys["pop2"], "system.pop2");
    const json& cpl = sys["coupling"];
    check_keys(cpl, "system.coupling", {"k1", "k2", "mu", "phase_lag"});
    cfg.system.coupling.k1 = get_number(cpl, "system.coupling", "k1");
    cfg.system.coupling.k2 = get_number(cpl, "system.coupling", "k2");
    cfg.system.coupling.mu = get_number(cpl, "system.coupling", "mu");
    cfg.system.coupling.phase_lag = get_number(cpl, "system.coupling", "phase_lag", 0.0);
    validate(cfg.system);

    if (!j.contains("law")) throw config_error("config.law is required");
    cfg.law = parse_law(j["law"]);

    if (j.contains("init")) {
        const json& init = j["init"];
        check_keys(init, "init", {"rho1", "rho2", "psi", "coupling"});
        cfg.init.rho1 = get_number(init, "init", "rho1", cfg.init.rho1);
        cfg.init.rho2 = get_number(init, "init", "rho2", cfg.init.rho2);
        cfg.init.psi = get_number(init, "init", "psi", cfg.init.psi);
        if (init.contains("coupling"))
            cfg.init.coupling = get_number(init, "init", "coupling");
        if (!(cfg.init.rho1 >= 0.0 && cfg.init.rho1 <= 1.0))
            throw config_error("init.rho1 must lie in [0, 1]");
        if (!(cfg.init.rho2 >= 0.0 && cfg.init.rho2 <= 1.0))
            throw config_error("init.rho2 must lie in [0, 1]");
        if (!std::isfinite(cfg.init.psi))
            throw config_error("init.psi must be finite");
    }

    if (j.contains("integrator")) {
        const json& it = j["integrator"];
        check_keys(it, "integrator", {"dt", "t_final", "record_stride", "threads"});
        cfg.integrator.dt = get_number(it, "integrator", "dt", cfg.integrator.dt);
        cfg.integrator.t_final =
            get_number(it, "integrator", "t_final", cfg.integrator.t_final);
        cfg.integrator.record_stride = static_cast<std::size_t>(
            get_count(it, "integrator", "record_stride", cfg.integrator.record_stride));
        cfg.integrator.threads = static_cast<int>(
            get_count(it, "integrator", "threads",
                      static_cast<std::uint64_t>(cfg.integrator.threads)));
        if (!(std::isfinite(cfg.integrator.dt) && cfg.integrator.dt > 0.0))
            throw config_error("integrator.dt must be positive");
        if (!(std::isfinite(cfg.integrator.t_final) && cfg.integrator.t_final >= 0.0))
            throw config_error("integrator.t_final must be non-negative");
        if (cfg.integrator.record_stride == 0)
            throw config_error("integrator.record_stride must be at least 1");
    }

    if (j.contains("mf_system")) {
        const std::string name = get_string(j, "config", "mf_system");
        if (name == "general")
            cfg.mf_system = meanfield_system::general;
        else if (name == "full_two_pop")
            cfg.mf_system = meanfield_system::full_two_pop;
        else if (name == "reduced_inter")
            cfg.mf_system = meanfield_system::reduced_inter;
        else if (name == "reduced_intra")
            cfg.mf_system = meanfield_system::reduced_intra;
        else
            throw config_error("mf_system must be one of general, full_two_pop, "
                               "reduced_inter, reduced_intra");
    }

    cfg.seed = get_count(j, "config", "seed", cfg.seed);

    if (j.contains("filter")) {
        const json& f = j["filter"];
        check_keys(f, "filter", {"window", "poly_order"});
        cfg.filter.window =
            static_cast<std::size_t>(get_count(f, "filter", "window", cfg.filter.window));
        cfg.filter.poly_order = static_cast<std::size_t>(
            get_count(f, "filter", "poly_order", cfg.filter.poly_order));
        if (cfg.filter.window % 2 == 0)
            throw config_error("filter.window must be odd");
        if (cfg.filter.poly_order >= cfg.filter.window)
            throw config_error("filter.poly_order must be smaller than filter.window");
    }

    if (j.contains("manifold")) {
        const json& m = j["manifold"];
        check_keys(m, "manifold", {"grid_points", "tol", "branch"});
        cfg.manifold.grid_points = static_cast<std::size_t>(
            get_count(m, "manifold", "grid_points", cfg.manifold.grid_points));
        cfg.manifold.tol = get_number(m, "manifold", "tol", cfg.manifold.tol);
        if (cfg.manifold.grid_points < 2)
            throw config_error("manifold.grid_points must be at least 2");
        if (!(std::isfinite(cfg.manifold.tol) && cfg.manifold.tol >= 0.0))
            throw config_error("manifold.tol must be non-negative");
        if (m.contains("branch")) {
            const std::string b = get_string(m, "manifold", "branch");
            if (b == "plus")
                cfg.manifold.only_branch = branch::plus;
            else if (b == "minus")
                cfg.manifold.only_branch = branch::minus;
            else if (b == "both")
                cfg.manifold.only_branch.reset();
            else
                throw config_error("manifold.branch must be plus, minus or both");
        }
    }

    if (j.contains("classifier")) {
        const json& c = j["classifier"];
        check_keys(c, "classifier", {"transient_fraction"});
        cfg.classifier.transient_fraction = get_number(
            c, "classifier", "transient_fraction", cfg.classifier.transient_fraction);
        if (!(cfg.classifier.transient_fraction >= 0.0 &&
              cfg.classifier.transient_fraction < 1.0))
            throw config_error("classifier.transient_fraction must lie in [0, 1)");
    }

    return cfg;
}

run_config load_run_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw config_error("cannot read config file " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

std::string resolved_config_json(const run_config& cfg) {
    json j;
    j["schema_version"] = cfg.schema_version;
    j["system"]["pop1"] = population_json(cfg.system.pop1);
    j["system"]["pop2"] = population_json(cfg.system.pop2);
    j["system"]["coupling"] = {{"k1", cfg.system.coupling.k1},
                               {"k2", cfg.system.coupling.k2},
                               {"mu", cfg.system.coupling.mu},
                               {"phase_lag", cfg.system.coupling.phase_lag}};
    j["law"] = law_json(cfg.law);
    j["init"] = {{"rho1", cfg.init.rho1},
                 {"rho2", cfg.init.rho2},
                 {"psi", cfg.init.psi},
                 {"coupling", cfg.initial_coupling()}};
    j["integrator"] = {{"dt", cfg.integrator.dt},
                       {"t_final", cfg.integrator.t_final},
                       {"record_stride", cfg.integrator.record_stride},
                       {"threads", cfg.integrator.threads}};
    j["mf_system"] = mf_system_name(cfg.resolved_mf_system());
    j["seed"] = cfg.seed;
    j["filter"] = {{"window", cfg.filter.window}, {"poly_order", cfg.filter.poly_order}};
    j["manifold"] = {{"grid_points", cfg.manifold.grid_points},
                     {"tol", cfg.manifold.tol},
                     {"branch", cfg.manifold.only_branch
                                    ? to_string(*cfg.manifold.only_branch)
                                    : "both"}};
    j["classifier"] = {{"transient_fraction", cfg.classifier.transient_fraction}};
    return j.dump(2);
}

} // namespace chimera
