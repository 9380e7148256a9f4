#include "krflow/scenario.hpp"
#include "krflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace krflow::scenario {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": expected a number, got '" + v + "'");
    }
}

std::vector<double> to_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ParseError("line " + std::to_string(line) + ": empty list item");
        out.push_back(to_double(item, line));
    }
    if (out.empty()) throw ParseError("line " + std::to_string(line) + ": empty list");
    return out;
}

} // namespace

Scenario parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path.string());
    Scenario s;
    s.name = path.stem().string();
    std::map<std::string, int> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (seen.count(key)) {
            throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
        seen[key] = lineno;

        if (key == "k") {
            const double d = to_double(value, lineno);
            if (d != std::floor(d)) {
                throw ParseError("line " + std::to_string(lineno) + ": k must be an integer");
            }
            s.k = static_cast<int>(d);
        } else if (key == "f0") {
            s.f0 = to_double(value, lineno);
        } else if (key == "c0") {
            s.c0 = to_double(value, lineno);
        } else if (key == "s0_split") {
            s.s0_split = to_double(value, lineno);
        } else if (key == "grid_n") {
            const double d = to_double(value, lineno);
            if (d != std::floor(d)) {
                throw ParseError("line " + std::to_string(lineno) + ": grid_n must be an integer");
            }
            s.grid_n = static_cast<int>(d);
        } else if (key == "t_stops") {
            s.t_stops = to_list(value, lineno);
        } else if (key == "delta") {
            s.delta = to_double(value, lineno);
        } else if (key == "cfl") {
            s.cfl = to_double(value, lineno);
        } else {
            throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    validate(s);
    return s;
}

void validate(Scenario& s) {
    if (s.k < 0) throw ValidationError("k >= 0 required");
    if (!(s.f0 > 0.0)) throw ValidationError("f0 > 0 required (T = 0 otherwise)");
    if (!(s.c0 > 0.0)) throw ValidationError("c0 > 0 required (class not Kahler)");

    const geometry::BundleGeometry geom(s.k);
    const geometry::KahlerClassPath path{s.f0, s.c0};
    const auto st = geometry::singular_time(path, geom);
    const auto collapse = geometry::is_base_collapse(path, geom);
    if (!collapse.base_collapse) {
        throw ValidationError("class trajectory does not collapse to the base "
                              "(section period vanishes first)");
    }
    s.T = st.T;
    s.cB = collapse.cB;

    if (s.s0_split < 0.0) throw ValidationError("s0_split >= 0 required");
    s.a0 = s.s0_split * s.f0;
    s.b0 = s.a0 + s.f0;
    s.s0 = s.c0 - static_cast<double>(s.k) * s.a0;
    if (!(s.s0 > 0.0)) throw ValidationError("s0 = c0 - k*a0 must stay positive; reduce s0_split");

    if (s.grid_n < 64) throw ValidationError("grid_n >= 64 required");
    if (!(s.delta > 0.0 && s.delta < 0.5)) throw ValidationError("delta must lie in (0, 0.5)");
    if (!(s.cfl > 0.0 && s.cfl <= 0.69)) throw ValidationError("cfl must lie in (0, 0.69]");

    std::sort(s.t_stops.begin(), s.t_stops.end());
    s.t_stops.erase(std::unique(s.t_stops.begin(), s.t_stops.end()), s.t_stops.end());
    for (double ts : s.t_stops) {
        if (ts < 0.0 || ts > 1.0 - s.delta + 1e-12) {
            throw ValidationError("t_stops entries must lie in [0, 1 - delta] (fractions of T)");
        }
    }
    if (s.t_stops.empty()) throw ValidationError("t_stops must not be empty");
}

Scenario preset(const std::string& name) {
    Scenario s;
    s.name = name;
    if (name == "product") {
        s.k = 0;
        s.f0 = 2.0;
        s.c0 = 6.0;
    } else if (name == "hirzebruch1") {
        s.k = 1;
        s.f0 = 2.0;
        s.c0 = 6.0;
    } else if (name == "hirzebruch2") {
        s.k = 2;
        s.f0 = 1.0;
        s.c0 = 3.0;
    } else {
        throw ValidationError("unknown preset '" + name + "'");
    }
    validate(s);
    return s;
}

std::vector<std::string> preset_names() { return {"product", "hirzebruch1", "hirzebruch2"}; }

flow::FlowProblem make_problem(const Scenario& s) {
    return flow::FlowProblem(geometry::BundleGeometry(s.k), geometry::KahlerClassPath{s.f0, s.c0},
                             s.a0, s.b0, calabi::Grid(s.grid_n));
}

std::vector<double> monitor_times(const Scenario& s, int count) {
    if (count < 2) throw ValidationError("monitor_times: count >= 2 required");
    std::vector<double> out;
    const double lo = std::log(s.delta);
    for (int i = 0; i < count; ++i) {
        const double tau = static_cast<double>(i) / static_cast<double>(count - 1);
        const double rem = std::exp(lo * tau); // 1 - t/T from 1 down to delta
        out.push_back(s.T * (1.0 - rem));
    }
    out.front() = 0.0;
    out.back() = s.t_end();
    return out;
}

} // namespace krflow::scenario
