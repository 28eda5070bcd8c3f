// Command-line front end: verification suites, field scans, catalog listing,
// and metric-file validation. Exit codes: 0 all checks pass, 1 check failure,
// 2 usage/configuration error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "weylkk/expr.hpp"
#include "weylkk/report.hpp"

namespace {

using namespace weylkk;

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, double> params;
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw CLI::ValidationError("--param", "expected name=value, got '" + kv + "'");
        try {
            params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--param", "bad numeric value in '" + kv + "'");
        }
    }
    return params;
}

// A geometry argument is a builtin name or a path to a metric file.
GeometryEntry resolve_geometry(const std::string& arg,
                               const std::map<std::string, double>& params) {
    const auto& names = builtin_names();
    if (std::find(names.begin(), names.end(), arg) != names.end())
        return builtin(arg, params);
    if (!std::filesystem::exists(arg))
        throw catalog_error("unknown geometry '" + arg +
                            "' (not a builtin, and no such file)");
    std::ifstream in(arg);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_metric_file(ss.str(), params,
                             std::filesystem::path(arg).stem().string());
}

// --out is resolved against $WEYLKK_OUT_DIR when relative; empty means stdout.
void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::filesystem::path p = out_path;
    const char* dir = std::getenv("WEYLKK_OUT_DIR");
    if (p.is_relative() && dir && *dir) p = std::filesystem::path(dir) / p;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream of(p);
    if (!of) throw std::runtime_error("cannot write to " + p.string());
    of << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kaluza-Klein reduction of the Weyl tensor: numerical checks"};
    app.require_subcommand(1);

    std::string geometry, out_path, format, grid_spec;
    std::vector<std::string> param_kvs;
    VerifyConfig cfg;
    bool reproducible = false;

    auto* list = app.add_subcommand("list", "List the built-in geometries");
    std::string list_format = "text";
    list->add_option("--format", list_format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));

    auto* verify = app.add_subcommand("verify", "Run the identity suite");
    format = "json";
    verify->add_option("geometry", geometry, "Builtin name or metric file path")
        ->required();
    verify->add_option("--param", param_kvs, "Parameter override, name=value");
    verify->add_option("--points", cfg.points, "Number of sample points");
    verify->add_option("--seed", cfg.seed, "Sample seed");
    verify->add_option("--tol", cfg.residual_tol, "Residual tolerance");
    verify->add_option("--class-tol", cfg.class_tol, "Classification tolerance");
    verify->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "text"}));
    verify->add_flag("--reproducible", reproducible,
                     "Suppress the timestamp for byte-stable output");
    verify->add_option("--out", out_path, "Output path (default: stdout)");

    auto* scan = app.add_subcommand("scan", "Tabulate P and the class per point");
    std::string scan_format = "csv";
    scan->add_option("geometry", geometry, "Builtin name or metric file path")
        ->required();
    scan->add_option("--param", param_kvs, "Parameter override, name=value");
    scan->add_option("--points", cfg.points, "Number of random sample points");
    scan->add_option("--seed", cfg.seed, "Sample seed");
    scan->add_option("--grid", grid_spec,
                     "Grid nodes per coordinate, e.g. 4 or 4,3,5 (overrides --points)");
    scan->add_option("--class-tol", cfg.class_tol, "Classification tolerance");
    scan->add_option("--format", scan_format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    scan->add_option("--out", out_path, "Output path (default: stdout)");

    auto* check = app.add_subcommand("check-file", "Parse-only metric file validation");
    std::string file_path;
    check->add_option("path", file_path, "Metric file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help exits 0; usage errors exit 2
    }

    try {
        if (*list) {
            std::cout << (list_format == "json" ? list_json().dump(2) + "\n"
                                                : list_text());
            return 0;
        }

        if (*check) {
            if (!std::filesystem::exists(file_path)) {
                std::cerr << "error: no such file: " << file_path << "\n";
                return 2;
            }
            std::ifstream in(file_path);
            std::stringstream ss;
            ss << in.rdbuf();
            try {
                GeometryEntry e = parse_metric_file(ss.str(), {}, file_path);
                std::cout << "ok: " << to_string(e.kind) << ", "
                          << to_string(e.signature) << ", coords";
                for (const auto& c : e.coords) std::cout << " " << c;
                std::cout << "\n";
                return 0;
            } catch (const parse_error& pe) {
                std::cerr << file_path << ": " << pe.what() << "\n";
                return 2;
            }
        }

        GeometryEntry e = resolve_geometry(geometry, parse_params(param_kvs));

        if (*verify) {
            VerifyReport rep = run_verify(e, cfg);
            std::string content = format == "text"
                                      ? report_text(rep)
                                      : report_json(rep, e.params, reproducible)
                                                .dump(2) +
                                            "\n";
            emit(out_path, content);
            return rep.ok() ? 0 : 1;
        }

        // scan
        std::vector<Point> pts;
        if (!grid_spec.empty()) {
            std::vector<int> counts;
            std::stringstream ss(grid_spec);
            std::string tok;
            while (std::getline(ss, tok, ','))
                counts.push_back(std::max(1, std::atoi(tok.c_str())));
            if (counts.empty()) {
                std::cerr << "error: empty --grid spec\n";
                return 2;
            }
            // everything scanned is independent of the Killing coordinate, so
            // the grid covers only the three reduced coordinates
            GeometryEntry e3 = e;
            if (e3.domain.size() > 3) e3.domain.resize(3);
            pts = grid_points(e3, counts);
        } else {
            pts = sample_points(e, cfg.points, cfg.seed);
        }
        std::vector<PointRecord> records = run_scan(e, pts, cfg.class_tol);
        emit(out_path, scan_format == "json" ? scan_json(e, records).dump(2) + "\n"
                                             : scan_csv(e, records));
        return 0;
    } catch (const parse_error& pe) {
        std::cerr << "error: " << pe.what() << "\n";
        return 2;
    } catch (const catalog_error& ce) {
        std::cerr << "error: " << ce.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}
