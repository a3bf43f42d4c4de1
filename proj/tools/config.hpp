#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "phifem/assembly.hpp"
#include "phifem/grid.hpp"

namespace phifem::cli {

// Effective run configuration: registry case plus overrides. Loaded from an
// optional JSON file, then overridden by command-line flags.
struct RunConfig {
    std::string case_name = "disk-poly";
    std::vector<int> ns = {16};
    int k = 1;
    int l = 0;  // 0 = match k
    double gamma = -1.0;    // < 0 = case default
    double sigma_d = -1.0;  // < 0 = case default
    std::string variant = "dual";  // dual | direct | both
    int stab2 = -1;                // -1 auto, 0 off, 1 on
    BoundingBox bbox{0.0, 0.0, 1.0, 1.0};
    bool bbox_set = false;  // false = use the case's box
    QuadratureOverrides quadrature;
    double solver_tol = 1e-10;
    int error_subdivision = 2;
    int oversampling = 4;
    int reference_factor = 4;  // reference n = factor * max(ns) for no-exact cases
    std::string out_dir = ".";
    std::uint64_t seed = 0x5eed2024u;
    bool vtk = false;
    bool with_cond = false;
    bool timings = true;  // false writes zero ms columns for byte-stable CSVs
    bool dump_matrix = false;

    int effective_l() const { return l > 0 ? l : k; }
    bool wants_dual() const { return variant == "dual" || variant == "both"; }
    bool wants_direct() const { return variant == "direct" || variant == "both"; }
};

// Merge JSON document into cfg; throws std::invalid_argument on unknown keys
// or wrong types.
void apply_json(RunConfig& cfg, const nlohmann::json& doc);
RunConfig load_config_file(const std::string& path);

// Throws std::invalid_argument when an invariant is violated (ns strictly
// increasing and positive, variant known, k/l in {1,2}, ...).
void validate(const RunConfig& cfg);

// Canonical JSON of the effective configuration (defaults applied). The
// output directory is excluded so runs differing only in destination hash
// identically.
nlohmann::json effective_json(const RunConfig& cfg);

// FNV-1a over the canonical serialization, as fixed-width hex.
std::string config_hash(const RunConfig& cfg);

}  // namespace phifem::cli
