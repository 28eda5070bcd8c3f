#pragma once

// Machine-readable reports: JSON is the canonical format for verification
// runs (schema shipped in docs/report_schema.json), CSV for scans. Field
// sets are fixed per tool version and checks are emitted sorted by id, so
// identical config and seed produce byte-identical output (modulo the
// timestamp, which --reproducible suppresses).

#include <chrono>
#include <ctime>

#include <json.hpp>

#include "weylkk/verify.hpp"

namespace weylkk {

inline constexpr const char* tool_name = "weylkk";
inline constexpr const char* tool_version = "0.1.0";

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline std::string timestamp_utc() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace detail

inline ordered_json report_json(const VerifyReport& rep,
                                const std::map<std::string, double>& params,
                                bool reproducible) {
    ordered_json j;
    j["tool"] = tool_name;
    j["version"] = tool_version;
    if (!reproducible) j["generated_at"] = detail::timestamp_utc();
    j["geometry"] = rep.geometry;
    ordered_json cfg;
    cfg["points"] = rep.config.points;
    cfg["seed"] = rep.config.seed;
    cfg["residual_tol"] = rep.config.residual_tol;
    cfg["class_tol"] = rep.config.class_tol;
    cfg["params"] = ordered_json::object();
    for (const auto& [k, v] : params) cfg["params"][k] = v;
    j["config"] = cfg;
    j["checks"] = ordered_json::array();
    for (const auto& c : rep.checks) {
        ordered_json r;
        r["id"] = c.id;
        r["equation"] = c.equation;
        r["max_residual"] = c.max_residual;
        r["scale"] = c.scale;
        r["passed"] = c.passed;
        r["note"] = c.note;
        j["checks"].push_back(r);
    }
    j["summary"] = {{"passed", rep.n_passed}, {"failed", rep.n_failed},
                    {"ok", rep.ok()}};
    return j;
}

inline std::string report_text(const VerifyReport& rep) {
    std::ostringstream os;
    os << tool_name << " " << tool_version << " — verify " << rep.geometry << "\n";
    os << "points: " << rep.config.points << "  seed: " << rep.config.seed
       << "  tol: " << rep.config.residual_tol << "\n\n";
    for (const auto& c : rep.checks) {
        os << (c.passed ? "PASS" : "FAIL") << "  " << std::left << std::setw(22)
           << c.id << std::setw(24) << ("[" + c.equation + "]")
           << "residual " << std::scientific << std::setprecision(3)
           << c.max_residual << "  scale " << c.scale << std::defaultfloat;
        if (!c.note.empty()) os << "  (" << c.note << ")";
        os << "\n";
    }
    os << "\n" << rep.n_passed << " passed, " << rep.n_failed << " failed\n";
    return os.str();
}

// Scan CSV columns, fixed: the three chart coordinates, then P computed on
// the 4-metric, P from the reduced formula, the point class, and the norms.
inline std::string scan_csv(const GeometryEntry& e,
                            const std::vector<PointRecord>& records) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (int i = 0; i < 3; ++i) os << e.coords[i] << ",";
    os << "p_full,p_reduced,class,c_norm,k_norm\n";
    for (const auto& r : records) {
        for (double x : r.coords) os << x << ",";
        os << r.p_full << "," << r.p_reduced << "," << to_string(r.point_class)
           << "," << r.c_norm << "," << r.k_norm << "\n";
    }
    return os.str();
}

inline ordered_json scan_json(const GeometryEntry& e,
                              const std::vector<PointRecord>& records) {
    ordered_json j;
    j["tool"] = tool_name;
    j["version"] = tool_version;
    j["geometry"] = e.name;
    j["points"] = ordered_json::array();
    for (const auto& r : records) {
        ordered_json p;
        p["coords"] = r.coords;
        p["p_full"] = r.p_full;
        p["p_reduced"] = r.p_reduced;
        p["class"] = to_string(r.point_class);
        p["c_norm"] = r.c_norm;
        p["k_norm"] = r.k_norm;
        j["points"].push_back(p);
    }
    return j;
}

inline ordered_json list_json() {
    ordered_json arr = ordered_json::array();
    for (const auto& name : builtin_names()) {
        GeometryEntry e = builtin(name);
        ordered_json j;
        j["name"] = e.name;
        j["kind"] = to_string(e.kind);
        j["signature"] = to_string(e.signature);
        j["params"] = ordered_json::object();
        for (const auto& [k, v] : e.params) j["params"][k] = v;
        j["coords"] = e.coords;
        j["domain"] = ordered_json::array();
        for (const auto& d : e.domain)
            j["domain"].push_back({{"coord", d.coord}, {"lo", d.lo}, {"hi", d.hi}});
        j["description"] = e.provenance;
        arr.push_back(j);
    }
    return arr;
}

inline std::string list_text() {
    std::ostringstream os;
    for (const auto& name : builtin_names()) {
        GeometryEntry e = builtin(name);
        os << std::left << std::setw(22) << e.name << std::setw(11)
           << to_string(e.kind) << std::setw(12) << to_string(e.signature);
        std::string ps;
        for (const auto& [k, v] : e.params) {
            std::ostringstream pv;
            pv << v;
            ps += (ps.empty() ? "" : ", ") + k + "=" + pv.str();
        }
        os << std::setw(18) << (ps.empty() ? "-" : ps) << e.provenance << "\n";
    }
    return os.str();
}

}  // namespace weylkk
