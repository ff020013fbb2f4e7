#pragma once

// Flat key = value run configuration with strict validation: unknown keys,
// duplicates and malformed values are rejected with the offending key named.
//
// The problem may be given either in natural units via the dimensionless
// pair (g, lk0) -- with hbar = m1 = L = 1 -- or through the raw physical
// fields (mass1, mass2, box_length, coupling, hbar, k0). Mixing the two
// styles is an error.

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dbox/channels.hpp"
#include "dbox/io.hpp"
#include "dbox/sweep.hpp"

namespace dbox {

struct RunConfig {
    // dimensionless problem
    double g = 0.0;
    double lk0 = 0.0;
    double mass_ratio = 1.0;
    bool has_g = false, has_lk0 = false;
    // physical problem
    double mass1 = 1.0, mass2 = 1.0, box_length = 1.0, coupling = 0.0, hbar = 1.0,
           k0 = 0.0;
    std::set<std::string> physical_keys_seen;
    bool dimensionless_seen = false;

    int n0 = 1;

    // discretization
    int truncation = 50;
    int nodes = 0; // 0 -> 2 * truncation

    // sweep grid (open interval)
    int sweep_points = 500;
    double lk0_min = 0.0;
    double lk0_max = 30.0;

    // convergence study
    int t_min = 10, t_max = 100, t_step = 10;

    SolverKind solver = SolverKind::dense;
    bool svg_log_y = true;

    io::ConfigEcho raw; // keys as given, for provenance echo

    bool physical() const { return !physical_keys_seen.empty(); }

    int effective_nodes() const { return nodes > 0 ? nodes : 2 * truncation; }

    /// Point problem for `solve` / `converge`.
    ProblemConfig problem() const {
        if (physical()) {
            for (const char* key : {"mass1", "mass2", "box_length", "coupling", "k0"})
                if (!physical_keys_seen.count(key))
                    throw config_error(std::string("physical problem needs key '") + key +
                                       "'");
            ProblemConfig cfg{mass1, mass2, box_length, coupling, hbar, k0, n0};
            cfg.validate();
            return cfg;
        }
        if (!has_g || !has_lk0)
            throw config_error("dimensionless problem needs keys 'g' and 'lk0'");
        return ProblemConfig::from_dimensionless(g, lk0, n0, mass_ratio);
    }

    SweepPlan sweep_plan() const {
        SweepPlan plan;
        if (physical()) {
            const ProblemConfig cfg = problem();
            const Dimensionless d = to_dimensionless(cfg);
            plan.g = d.g;
            plan.mass_ratio = cfg.mass1 / cfg.mass2;
        } else {
            if (!has_g) throw config_error("sweep needs key 'g'");
            plan.g = g;
            plan.mass_ratio = mass_ratio;
        }
        if (sweep_points < 1) throw config_error("'sweep_points' must be >= 1");
        plan.lk0_grid = SweepPlan::open_interval_grid(lk0_min, lk0_max, sweep_points);
        plan.n0 = n0;
        plan.truncation = truncation;
        plan.nodes = nodes;
        plan.solver = solver;
        return plan;
    }

    ConvergencePlan convergence_plan() const {
        ConvergencePlan plan;
        if (physical()) {
            const ProblemConfig cfg = problem();
            const Dimensionless d = to_dimensionless(cfg);
            plan.g = d.g;
            plan.lk0 = d.lk0;
            plan.mass_ratio = cfg.mass1 / cfg.mass2;
        } else {
            if (!has_g || !has_lk0)
                throw config_error("convergence study needs keys 'g' and 'lk0'");
            plan.g = g;
            plan.lk0 = lk0;
            plan.mass_ratio = mass_ratio;
        }
        plan.n0 = n0;
        plan.solver = solver;
        if (t_step < 1) throw config_error("'t_step' must be >= 1");
        for (int t = t_min; t <= t_max; t += t_step) plan.t_list.push_back(t);
        return plan;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw config_error("invalid numeric value for key '" + key + "': " + value);
    return v;
}

inline int parse_int(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw config_error("invalid integer value for key '" + key + "': " + value);
    return static_cast<int>(v);
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw config_error("invalid boolean value for key '" + key + "': " + value);
}

} // namespace detail

inline RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream stream(text);
    std::string line;
    int lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) +
                               " is not of the form key = value: " + line);
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw config_error("empty key on config line " + std::to_string(lineno));
        if (!seen.insert(key).second) throw config_error("duplicate config key '" + key + "'");
        cfg.raw.emplace_back(key, value);

        if (key == "g") { cfg.g = detail::parse_double(key, value); cfg.has_g = true; cfg.dimensionless_seen = true; }
        else if (key == "lk0") { cfg.lk0 = detail::parse_double(key, value); cfg.has_lk0 = true; cfg.dimensionless_seen = true; }
        else if (key == "mass_ratio") { cfg.mass_ratio = detail::parse_double(key, value); cfg.dimensionless_seen = true; }
        else if (key == "n0") cfg.n0 = detail::parse_int(key, value);
        else if (key == "mass1") { cfg.mass1 = detail::parse_double(key, value); cfg.physical_keys_seen.insert(key); }
        else if (key == "mass2") { cfg.mass2 = detail::parse_double(key, value); cfg.physical_keys_seen.insert(key); }
        else if (key == "box_length") { cfg.box_length = detail::parse_double(key, value); cfg.physical_keys_seen.insert(key); }
        else if (key == "coupling") { cfg.coupling = detail::parse_double(key, value); cfg.physical_keys_seen.insert(key); }
        else if (key == "hbar") { cfg.hbar = detail::parse_double(key, value); cfg.physical_keys_seen.insert(key); }
        else if (key == "k0") { cfg.k0 = detail::parse_double(key, value); cfg.physical_keys_seen.insert(key); }
        else if (key == "truncation") cfg.truncation = detail::parse_int(key, value);
        else if (key == "nodes") cfg.nodes = detail::parse_int(key, value);
        else if (key == "sweep_points") cfg.sweep_points = detail::parse_int(key, value);
        else if (key == "lk0_min") cfg.lk0_min = detail::parse_double(key, value);
        else if (key == "lk0_max") cfg.lk0_max = detail::parse_double(key, value);
        else if (key == "t_min") cfg.t_min = detail::parse_int(key, value);
        else if (key == "t_max") cfg.t_max = detail::parse_int(key, value);
        else if (key == "t_step") cfg.t_step = detail::parse_int(key, value);
        else if (key == "solver") {
            if (value == "dense") cfg.solver = SolverKind::dense;
            else if (value == "separable") cfg.solver = SolverKind::separable;
            else throw config_error("invalid value for key 'solver': " + value +
                                    " (expected dense or separable)");
        }
        else if (key == "svg_log_y") cfg.svg_log_y = detail::parse_bool(key, value);
        else throw config_error("unknown config key '" + key + "'");
    }
    if (cfg.dimensionless_seen && !cfg.physical_keys_seen.empty())
        throw config_error("config mixes dimensionless keys (g, lk0, mass_ratio) with "
                           "physical keys (mass1, mass2, box_length, coupling, hbar, k0)");
    if (cfg.truncation < 1) throw config_error("'truncation' must be >= 1");
    if (cfg.nodes < 0) throw config_error("'nodes' must be >= 2");
    if (cfg.nodes == 1) throw config_error("'nodes' must be >= 2");
    return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

} // namespace dbox
