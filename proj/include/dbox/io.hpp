#pragma once

// CSV and JSON emission. Numbers are serialized with 17 significant digits
// so identical runs are byte-identical and every value round-trips exactly.

#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dbox/observables.hpp"
#include "dbox/sweep.hpp"
#include "dbox/version.hpp"

namespace dbox::io {

inline std::string format17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

inline nlohmann::json provenance(const ConfigEcho& echo) {
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [k, v] : echo) cfg[k] = v;
    return {{"artifact", artifact_name}, {"version", artifact_version}, {"config", cfg}};
}

// ---- solve ----------------------------------------------------------------

inline std::string solve_csv(const OutcomeReport& report) {
    std::string out = "n,k_n,E_n,p_plus,p_minus,p_total\n";
    for (const ChannelOutcome& o : report.outcomes) {
        out += std::to_string(o.n) + "," + format17(o.k) + "," + format17(o.energy) + "," +
               format17(o.p_plus) + "," + format17(o.p_minus) + "," + format17(o.p_total) +
               "\n";
    }
    return out;
}

inline nlohmann::json outcome_json(const ChannelOutcome& o) {
    return {{"n", o.n},         {"k_n", o.k},
            {"E_n", o.energy},  {"p_plus", o.p_plus},
            {"p_minus", o.p_minus}, {"p_total", o.p_total}};
}

inline nlohmann::json solve_json(const OutcomeReport& report, const ConfigEcho& echo) {
    nlohmann::json outcomes = nlohmann::json::array();
    for (const ChannelOutcome& o : report.outcomes) outcomes.push_back(outcome_json(o));
    return {{"provenance", provenance(echo)},
            {"open_channel_count", report.outcomes.size()},
            {"unitarity_defect", report.unitarity_defect},
            {"flux_left", report.flux_left},
            {"flux_right", report.flux_right},
            {"incident_energy", report.incident_energy},
            {"cond_estimate", report.cond_estimate},
            {"outcomes", outcomes}};
}

// ---- sweep ----------------------------------------------------------------

inline std::string sweep_csv(const SweepResult& result) {
    std::string out = "Lk0,n,p_plus,p_minus,p_total,defect,cond_estimate,status\n";
    for (const SweepPoint& p : result.points) {
        const std::string lk0 = format17(p.lk0);
        const std::string status = to_string(p.status);
        if (p.status == PointStatus::ok || p.status == PointStatus::nudged) {
            for (const ChannelOutcome& o : p.report.outcomes) {
                out += lk0 + "," + std::to_string(o.n) + "," + format17(o.p_plus) + "," +
                       format17(o.p_minus) + "," + format17(o.p_total) + "," +
                       format17(p.report.unitarity_defect) + "," +
                       format17(p.report.cond_estimate) + "," + status + "\n";
            }
        } else {
            out += lk0 + ",0,0,0,0,0,0," + status + "\n";
        }
    }
    return out;
}

inline nlohmann::json sweep_json(const SweepResult& result, const ConfigEcho& echo) {
    nlohmann::json points = nlohmann::json::array();
    for (const SweepPoint& p : result.points) {
        nlohmann::json rec = {{"Lk0", p.lk0},
                              {"Lk0_requested", p.lk0_requested},
                              {"status", to_string(p.status)}};
        if (p.status == PointStatus::ok || p.status == PointStatus::nudged) {
            rec["defect"] = p.report.unitarity_defect;
            rec["cond_estimate"] = p.report.cond_estimate;
            nlohmann::json outcomes = nlohmann::json::array();
            for (const ChannelOutcome& o : p.report.outcomes)
                outcomes.push_back(outcome_json(o));
            rec["outcomes"] = outcomes;
        } else {
            rec["message"] = p.message;
        }
        points.push_back(std::move(rec));
    }
    return {{"provenance", provenance(echo)}, {"points", points}};
}

// ---- convergence ----------------------------------------------------------

inline std::string converge_csv(const ConvergenceResult& result) {
    std::string out = "T,diff\n";
    for (const ConvergencePoint& p : result.points)
        out += std::to_string(p.truncation) + "," + format17(p.diff) + "\n";
    return out;
}

inline nlohmann::json converge_json(const ConvergenceResult& result,
                                    const ConfigEcho& echo) {
    nlohmann::json points = nlohmann::json::array();
    for (const ConvergencePoint& p : result.points)
        points.push_back({{"T", p.truncation}, {"diff", p.diff}});
    return {{"provenance", provenance(echo)},
            {"slope", result.slope},
            {"points", points}};
}

} // namespace dbox::io
