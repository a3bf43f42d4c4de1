#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace phifem::cli {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

double as_number(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number()) bad("'" + key + "' must be a number");
    return v.get<double>();
}

int as_int(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number_integer()) bad("'" + key + "' must be an integer");
    return v.get<int>();
}

bool as_bool(const nlohmann::json& v, const std::string& key) {
    if (!v.is_boolean()) bad("'" + key + "' must be a boolean");
    return v.get<bool>();
}

std::string as_string(const nlohmann::json& v, const std::string& key) {
    if (!v.is_string()) bad("'" + key + "' must be a string");
    return v.get<std::string>();
}

}  // namespace

void apply_json(RunConfig& cfg, const nlohmann::json& doc) {
    if (!doc.is_object()) bad("document must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "case") {
            cfg.case_name = as_string(value, key);
        } else if (key == "n") {
            cfg.ns = {as_int(value, key)};
        } else if (key == "ns") {
            if (!value.is_array()) bad("'ns' must be an array of integers");
            cfg.ns.clear();
            for (const auto& e : value) cfg.ns.push_back(as_int(e, "ns"));
        } else if (key == "k") {
            cfg.k = as_int(value, key);
        } else if (key == "l") {
            cfg.l = as_int(value, key);
        } else if (key == "gamma") {
            cfg.gamma = as_number(value, key);
        } else if (key == "sigma_d") {
            cfg.sigma_d = as_number(value, key);
        } else if (key == "variant") {
            cfg.variant = as_string(value, key);
        } else if (key == "stab2") {
            const std::string s = as_string(value, key);
            if (s == "auto") {
                cfg.stab2 = -1;
            } else if (s == "off") {
                cfg.stab2 = 0;
            } else if (s == "on") {
                cfg.stab2 = 1;
            } else {
                bad("'stab2' must be auto, on, or off");
            }
        } else if (key == "bbox") {
            if (!value.is_array() || value.size() != 4) {
                bad("'bbox' must be [x_min, y_min, x_max, y_max]");
            }
            cfg.bbox = BoundingBox{as_number(value[0], key), as_number(value[1], key),
                                   as_number(value[2], key), as_number(value[3], key)};
            cfg.bbox_set = true;
        } else if (key == "quadrature") {
            if (!value.is_object()) bad("'quadrature' must be an object");
            for (const auto& [qk, qv] : value.items()) {
                if (qk == "volume_plain") {
                    cfg.quadrature.volume_plain = as_int(qv, qk);
                } else if (qk == "volume_cut") {
                    cfg.quadrature.volume_cut = as_int(qv, qk);
                } else if (qk == "segment") {
                    cfg.quadrature.segment = as_int(qv, qk);
                } else {
                    bad("unknown quadrature key '" + qk + "'");
                }
            }
        } else if (key == "solver_tol") {
            cfg.solver_tol = as_number(value, key);
        } else if (key == "error_subdivision") {
            cfg.error_subdivision = as_int(value, key);
        } else if (key == "oversampling") {
            cfg.oversampling = as_int(value, key);
        } else if (key == "reference_factor") {
            cfg.reference_factor = as_int(value, key);
        } else if (key == "out") {
            cfg.out_dir = as_string(value, key);
        } else if (key == "seed") {
            if (!value.is_number_unsigned() && !value.is_number_integer()) {
                bad("'seed' must be an integer");
            }
            cfg.seed = value.get<std::uint64_t>();
        } else if (key == "vtk") {
            cfg.vtk = as_bool(value, key);
        } else if (key == "cond") {
            cfg.with_cond = as_bool(value, key);
        } else if (key == "timings") {
            cfg.timings = as_bool(value, key);
        } else if (key == "dump_matrix") {
            cfg.dump_matrix = as_bool(value, key);
        } else {
            bad("unknown key '" + key + "'");
        }
    }
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open config file " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        bad("parse error in " + path + ": " + e.what());
    }
    RunConfig cfg;
    apply_json(cfg, doc);
    return cfg;
}

void validate(const RunConfig& cfg) {
    if (cfg.ns.empty()) bad("at least one n value is required");
    for (size_t i = 0; i < cfg.ns.size(); ++i) {
        if (cfg.ns[i] < 1) bad("n values must be >= 1");
        if (i > 0 && cfg.ns[i] <= cfg.ns[i - 1]) bad("n values must be strictly increasing");
    }
    if (cfg.k != 1 && cfg.k != 2) bad("k must be 1 or 2");
    if (cfg.l != 0 && cfg.l != 1 && cfg.l != 2) bad("l must be 1 or 2");
    if (cfg.variant != "dual" && cfg.variant != "direct" && cfg.variant != "both") {
        bad("variant must be dual, direct, or both");
    }
    if (!(cfg.gamma > 0.0) && cfg.gamma != -1.0) bad("gamma must be > 0");
    if (!(cfg.sigma_d > 0.0) && cfg.sigma_d != -1.0) bad("sigma_d must be > 0");
    if (!(cfg.solver_tol > 0.0)) bad("solver_tol must be > 0");
    if (cfg.error_subdivision < 0 || cfg.error_subdivision > 8) {
        bad("error_subdivision must be in [0, 8]");
    }
    if (cfg.oversampling < 0) bad("oversampling must be >= 0");
    if (cfg.reference_factor < 2) bad("reference_factor must be >= 2");
    if (cfg.bbox_set && (!(cfg.bbox.width() > 0.0) || !(cfg.bbox.height() > 0.0))) {
        bad("bbox must have positive extent");
    }
}

nlohmann::json effective_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["case"] = cfg.case_name;
    j["ns"] = cfg.ns;
    j["k"] = cfg.k;
    j["l"] = cfg.effective_l();
    j["gamma"] = cfg.gamma;
    j["sigma_d"] = cfg.sigma_d;
    j["variant"] = cfg.variant;
    j["stab2"] = cfg.stab2 < 0 ? "auto" : (cfg.stab2 == 0 ? "off" : "on");
    j["bbox"] = {cfg.bbox.x_min, cfg.bbox.y_min, cfg.bbox.x_max, cfg.bbox.y_max};
    j["quadrature"] = {{"volume_plain", cfg.quadrature.volume_plain},
                       {"volume_cut", cfg.quadrature.volume_cut},
                       {"segment", cfg.quadrature.segment}};
    j["solver_tol"] = cfg.solver_tol;
    j["error_subdivision"] = cfg.error_subdivision;
    j["oversampling"] = cfg.oversampling;
    j["reference_factor"] = cfg.reference_factor;
    j["seed"] = cfg.seed;
    j["vtk"] = cfg.vtk;
    j["cond"] = cfg.with_cond;
    j["timings"] = cfg.timings;
    j["dump_matrix"] = cfg.dump_matrix;
    return j;
}

std::string config_hash(const RunConfig& cfg) {
    const std::string dump = effective_json(cfg).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << h;
    return out.str();
}

}  // namespace phifem::cli
