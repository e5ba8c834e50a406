#pragma once

#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace koitervi {

struct ConfigError : std::runtime_error {
    ConfigError(const std::string& msg, std::vector<std::string> probs)
        : std::runtime_error(msg), problems(std::move(probs)) {}
    std::vector<std::string> problems;
};

/// Flat "key = value" lines grouped under [section] headers; '#' comments.
struct RunConfig {
    std::string chart_kind = "sphere";  // sphere | ellipsoid | plate
    double radius = 1.0;
    double axis1 = 1.0, axis2 = 1.0, axis3 = 1.0;
    double half_width = 0.5;

    int nx = 16, ny = 16;
    double lambda = 1.0, mu = 1.0;

    std::string gap = "1";
    std::string p1 = "0", p2 = "0", p3 = "0";

    double eps = 0.1;
    std::vector<double> eps_list;
    double tol = 1e-9;

    double patch = 0.25;
    std::string cutoff = "1";
    int probe_levels = 3;

    /// every key seen, in file order, for echoing into reports
    std::vector<std::pair<std::string, std::string>> raw;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

}  // namespace koitervi
