#include <cmath>
#include <fstream>
#include <sstream>

#include "koitervi/config.hpp"

namespace koitervi {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& val, std::vector<std::string>& errs) {
    try {
        size_t used = 0;
        double v = std::stod(val, &used);
        if (used != val.size()) throw std::invalid_argument("trailing characters");
        if (!std::isfinite(v)) throw std::invalid_argument("not finite");
        return v;
    } catch (const std::exception&) {
        errs.push_back(key + ": expected a finite number, got '" + val + "'");
        return 0.0;
    }
}

int to_int(const std::string& key, const std::string& val, std::vector<std::string>& errs) {
    try {
        size_t used = 0;
        int v = std::stoi(val, &used);
        if (used != val.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        errs.push_back(key + ": expected an integer, got '" + val + "'");
        return 0;
    }
}

std::vector<double> to_list(const std::string& key, const std::string& val,
                            std::vector<std::string>& errs) {
    std::vector<double> out;
    std::stringstream ss(val);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(to_double(key, item, errs));
    }
    if (out.empty()) errs.push_back(key + ": expected a comma-separated list of numbers");
    return out;
}

}  // namespace

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::vector<std::string> errs;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                errs.push_back("line " + std::to_string(lineno) + ": unterminated section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            errs.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        std::string key = section + "." + trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        cfg.raw.emplace_back(key, val);

        if (key == "chart.kind")
            cfg.chart_kind = val;
        else if (key == "chart.radius")
            cfg.radius = to_double(key, val, errs);
        else if (key == "chart.axis1")
            cfg.axis1 = to_double(key, val, errs);
        else if (key == "chart.axis2")
            cfg.axis2 = to_double(key, val, errs);
        else if (key == "chart.axis3")
            cfg.axis3 = to_double(key, val, errs);
        else if (key == "chart.half_width")
            cfg.half_width = to_double(key, val, errs);
        else if (key == "mesh.nx")
            cfg.nx = to_int(key, val, errs);
        else if (key == "mesh.ny")
            cfg.ny = to_int(key, val, errs);
        else if (key == "lame.lambda")
            cfg.lambda = to_double(key, val, errs);
        else if (key == "lame.mu")
            cfg.mu = to_double(key, val, errs);
        else if (key == "gap.s")
            cfg.gap = val;
        else if (key == "load.p1")
            cfg.p1 = val;
        else if (key == "load.p2")
            cfg.p2 = val;
        else if (key == "load.p3")
            cfg.p3 = val;
        else if (key == "koiter.eps")
            cfg.eps = to_double(key, val, errs);
        else if (key == "sweep.eps_list")
            cfg.eps_list = to_list(key, val, errs);
        else if (key == "solver.tol")
            cfg.tol = to_double(key, val, errs);
        else if (key == "probe.patch")
            cfg.patch = to_double(key, val, errs);
        else if (key == "probe.cutoff")
            cfg.cutoff = val;
        else if (key == "probe.levels")
            cfg.probe_levels = to_int(key, val, errs);
        else
            errs.push_back("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (!errs.empty()) {
        std::string msg = "invalid config (" + std::to_string(errs.size()) + " problems)";
        for (const auto& e : errs) msg += "\n  " + e;
        throw ConfigError(msg, errs);
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path, {"cannot open config file " + path});
    return parse_config(in);
}

}  // namespace koitervi
