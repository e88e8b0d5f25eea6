#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "chimera/adaptive_law.hpp"
#include "chimera/gspt.hpp"
#include "chimera/meanfield.hpp"
#include "chimera/model.hpp"
#include "chimera/trajectory.hpp"

namespace chimera {

struct init_config {
    double rho1 = 0.99;
    double rho2 = 0.99;
    double psi = -0.5;
    // Defaults to the coupling_config entry matching the law target.
    std::optional<double> coupling;
};

struct filter_config {
    std::size_t window = 101;
    std::size_t poly_order = 3;
};

struct manifold_run_config {
    std::size_t grid_points = 1000;
    double tol = hyperbolicity_tol;
    std::optional<branch> only_branch; // both branches when unset
};

struct classifier_config {
    double transient_fraction = 0.2;
};

struct run_config {
    int schema_version = 1;
    system_params system;
    adaptive_law_spec law{adaptive_target::inter, 0.0, constant_law{}};
    init_config init;
    integration_options integrator;
    std::optional<meanfield_system> mf_system; // defaults per law target
    std::uint64_t seed = 0;
    filter_config filter;
    manifold_run_config manifold;
    classifier_config classifier;

    meanfield_system resolved_mf_system() const;
    double initial_coupling() const;
};

// Parse/serialize the versioned JSON schema.  Unknown keys anywhere are
// rejected; all validation failures throw config_error.
run_config parse_run_config(const std::string& json_text);
run_config load_run_config(const std::filesystem::path& file);
std::string resolved_config_json(const run_config& cfg); // defaults materialized

} // namespace chimera
