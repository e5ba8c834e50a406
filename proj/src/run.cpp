#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>

#include "json.hpp"

#include "koitervi/fieldexpr.hpp"
#include "koitervi/report.hpp"
#include "koitervi/run.hpp"

namespace koitervi {

namespace {

using json = nlohmann::ordered_json;

int log_level() {
    const char* env = std::getenv("KOITERVI_LOG");
    if (!env) return 0;
    std::string v = env;
    if (v == "debug") return 2;
    if (v == "info") return 1;
    return 0;
}

void info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "info: " << msg << "\n";
}

Chart make_chart(const RunConfig& cfg) {
    if (cfg.chart_kind == "sphere") return Chart::sphere_graph(cfg.radius, cfg.half_width);
    if (cfg.chart_kind == "ellipsoid")
        return Chart::ellipsoid_graph(cfg.axis1, cfg.axis2, cfg.axis3, cfg.half_width);
    return Chart::plate(cfg.half_width);
}

void check_expr(const std::string& key, const std::string& text,
                std::vector<std::string>& errs) {
    try {
        FieldExpr::parse(text);
    } catch (const ParseError& e) {
        errs.push_back(key + ": " + e.what());
    }
}

void validate(const std::string& command, const RunConfig& cfg) {
    std::vector<std::string> errs;
    if (cfg.chart_kind != "sphere" && cfg.chart_kind != "ellipsoid" && cfg.chart_kind != "plate")
        errs.push_back("chart.kind: must be sphere, ellipsoid or plate");
    if (cfg.chart_kind == "sphere" && cfg.radius <= 0.0)
        errs.push_back("chart.radius: must be positive");
    if (cfg.chart_kind == "ellipsoid" && (cfg.axis1 <= 0.0 || cfg.axis2 <= 0.0 || cfg.axis3 <= 0.0))
        errs.push_back("chart.axis1..3: must be positive");
    if (cfg.half_width <= 0.0) errs.push_back("chart.half_width: must be positive");
    if (cfg.nx < 2 || cfg.ny < 2) errs.push_back("mesh.nx, mesh.ny: must be >= 2");
    if (cfg.lambda < 0.0) errs.push_back("lame.lambda: must be >= 0");
    if (cfg.mu <= 0.0) errs.push_back("lame.mu: must be positive");
    if (cfg.tol <= 0.0) errs.push_back("solver.tol: must be positive");
    check_expr("gap.s", cfg.gap, errs);
    check_expr("load.p1", cfg.p1, errs);
    check_expr("load.p2", cfg.p2, errs);
    check_expr("load.p3", cfg.p3, errs);
    if (command == "solve-koiter" && !(cfg.eps > 0.0 && cfg.eps <= 0.3))
        errs.push_back("koiter.eps: must lie in (0, 0.3]");
    if (command == "sweep") {
        if (cfg.eps_list.size() < 3) errs.push_back("sweep.eps_list: need at least 3 values");
        for (size_t i = 0; i < cfg.eps_list.size(); ++i) {
            if (!(cfg.eps_list[i] > 0.0 && cfg.eps_list[i] <= 0.3)) {
                errs.push_back("sweep.eps_list: entries must lie in (0, 0.3]");
                break;
            }
        }
        for (size_t i = 1; i < cfg.eps_list.size(); ++i)
            if (!(cfg.eps_list[i] < cfg.eps_list[i - 1])) {
                errs.push_back("sweep.eps_list: must be strictly decreasing");
                break;
            }
    }
    if (command == "probe") {
        if (cfg.patch <= 0.0 || cfg.patch >= cfg.half_width)
            errs.push_back("probe.patch: must lie in (0, chart.half_width)");
        if (cfg.probe_levels < 1 || cfg.probe_levels > 16)
            errs.push_back("probe.levels: must lie in [1, 16]");
        if (cfg.patch > 0.0 && cfg.patch < cfg.half_width && cfg.probe_levels >= 1 &&
            cfg.probe_levels <= 16 && cfg.nx >= 2) {
            double hmax = (2.0 * cfg.half_width / cfg.nx) * (1 << (cfg.probe_levels - 1));
            if (cfg.half_width - cfg.patch < 4.0 * hmax)
                errs.push_back(
                    "probe.patch: boundary margin must be at least 4 coarsest spacings "
                    "(refine mesh.nx/ny, shrink probe.patch or probe.levels)");
        }
        check_expr("probe.cutoff", cfg.cutoff, errs);
    }
    if (!errs.empty()) {
        std::string msg = "invalid config for " + command + " (" + std::to_string(errs.size()) +
                          " problems)";
        for (const auto& e : errs) msg += "\n  " + e;
        throw ConfigError(msg, errs);
    }
}

json config_echo(const RunConfig& cfg) {
    json j = json::object();
    for (const auto& kv : cfg.raw) j[kv.first] = kv.second;
    return j;
}

void write_json(const std::string& out_dir, const std::string& command, const json& j) {
    std::string path = out_dir + "/" + command + ".json";
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << j.dump(2) << "\n";
    info("wrote " + path);
}

json solve_results(const ShellSolveReport& rep, const DofMap& dm) {
    json res = json::object();
    res["eps"] = sci12(rep.eps);
    res["energy"] = sci12(rep.objective);
    res["kkt_residual"] = sci12(rep.qp.kkt_residual);
    res["iterations"] = rep.qp.iterations;
    res["active_count"] = rep.active_count;
    res["min_feasibility"] = sci12(rep.min_feasibility);
    json nodes = json::array();
    for (size_t k = 0; k < dm.transverse_value_dofs.size(); ++k)
        if (rep.qp.active_set[dm.transverse_value_dofs[k]])
            nodes.push_back(dm.transverse_value_nodes[k]);
    res["active_nodes"] = nodes;
    return res;
}

int dispatch(const std::string& command, const RunConfig& cfg, const std::string& out_dir) {
    validate(command, cfg);
    Chart chart = make_chart(cfg);
    LameConstants lame(cfg.lambda, cfg.mu);
    Mesh mesh = build_mesh(chart, cfg.nx, cfg.ny);
    std::array<FieldFn, 3> p = {FieldExpr::parse(cfg.p1).fn(), FieldExpr::parse(cfg.p2).fn(),
                                FieldExpr::parse(cfg.p3).fn()};
    GapField gap = make_gap_field(mesh, FieldExpr::parse(cfg.gap).fn());

    json report;
    report["command"] = command;
    report["config_echo"] = config_echo(cfg);
    json results = json::object();
    json diagnostics = json::object();

    if (command == "geometry-check") {
        double k0 = assert_elliptic(chart, 16);
        double kmin = std::numeric_limits<double>::infinity(), kmax = -kmin;
        for (int j = 0; j < 16; ++j)
            for (int i = 0; i < 16; ++i) {
                double x = -cfg.half_width + 2.0 * cfg.half_width * (i + 0.5) / 16.0;
                double y = -cfg.half_width + 2.0 * cfg.half_width * (j + 0.5) / 16.0;
                double K = eval_geometry(chart, {x, y}).gauss_K;
                kmin = std::min(kmin, K);
                kmax = std::max(kmax, K);
            }
        results["elliptic"] = true;
        results["curvature_lower_bound"] = sci12(k0);
        results["gauss_K_min"] = sci12(kmin);
        results["gauss_K_max"] = sci12(kmax);
    } else if (command == "solve-membrane") {
        ShellSolveReport rep = solve_membrane_limit(chart, mesh, lame, gap, p, cfg.tol);
        DofMap dm = build_dofmap(mesh, SpaceKind::Membrane);
        results = solve_results(rep, dm);
    } else if (command == "solve-koiter") {
        ShellSolveReport rep = solve_koiter(chart, mesh, lame, gap, p, cfg.eps, cfg.tol);
        DofMap dm = build_dofmap(mesh, SpaceKind::Koiter);
        results = solve_results(rep, dm);
    } else if (command == "sweep") {
        SweepReport rep = epsilon_sweep(chart, mesh, lame, gap, p, cfg.eps_list, cfg.tol);
        std::string csv_path = out_dir + "/sweep.csv";
        std::ofstream csv(csv_path);
        if (!csv) throw std::runtime_error("cannot write " + csv_path);
        write_sweep_csv(csv, rep);
        info("wrote " + csv_path);
        json errors = json::array();
        for (const auto& e : rep.errors) errors.push_back(sci12(e.vm_norm));
        results["err_vm"] = errors;
        results["membrane_energy"] = sci12(rep.membrane.objective);
        results["csv"] = "sweep.csv";
    } else if (command == "korn") {
        KornResult kr = korn_constant(chart, mesh, lame);
        results["lambda_min"] = sci12(kr.lambda_min);
        results["c0_estimate"] = sci12(kr.c0_estimate);
        diagnostics["power_iterations"] = kr.iterations;
    } else if (command == "probe") {
        ShellSolveReport rep = solve_membrane_limit(chart, mesh, lame, gap, p, cfg.tol);
        DofMap dm = build_dofmap(mesh, SpaceKind::Membrane);
        FieldFn cutoff = FieldExpr::parse(cfg.cutoff).fn();
        auto rows =
            interior_regularity_probe(mesh, dm, rep.qp.u, cfg.patch, cutoff, cfg.probe_levels);
        std::string csv_path = out_dir + "/probe.csv";
        std::ofstream csv(csv_path);
        if (!csv) throw std::runtime_error("cannot write " + csv_path);
        write_probe_csv(csv, rows);
        info("wrote " + csv_path);
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& r : rows) {
            double n = std::sqrt(r.norm_h1_tan * r.norm_h1_tan +
                                 r.norm_l2_trans * r.norm_l2_trans);
            lo = std::min(lo, n);
            hi = std::max(hi, n);
        }
        results["ratio_max_min"] = sci12(lo > 0.0 ? hi / lo : 0.0);
        results["csv"] = "probe.csv";
    } else {
        throw ConfigError("unknown command " + command, {"unknown command " + command});
    }

    report["results"] = results;
    report["diagnostics"] = diagnostics;
    write_json(out_dir, command, report);
    return 0;
}

}  // namespace

int run_command(const std::string& command, const RunConfig& cfg, const std::string& out_dir) {
    try {
        return dispatch(command, cfg, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: parse: " << e.what() << "\n";
        return 2;
    } catch (const NonEllipticError& e) {
        std::cerr << "error: geometry: " << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "error: geometry: " << e.what() << "\n";
        return 3;
    } catch (const ImmersionError& e) {
        std::cerr << "error: geometry: " << e.what() << "\n";
        return 3;
    } catch (const InfeasibleGapError& e) {
        std::cerr << "error: data: " << e.what() << "\n";
        return 4;
    } catch (const DegenerateKornError& e) {
        std::cerr << "error: solver: " << e.what() << "\n";
        return 5;
    } catch (const SolverError& e) {
        std::cerr << "error: solver: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace koitervi
