#include "nanofield/config.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nanofield/check.h"

namespace nanofield {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& where) {
    size_t used = 0;
    double x = 0;
    try {
        x = std::stod(v, &used);
    } catch (...) {
        fail("parse_config: bad number '" + v + "' " + where);
    }
    check(used == v.size(), "parse_config: trailing junk in number '" + v + "' " + where);
    check(std::isfinite(x), "parse_config: non-finite number " + where);
    return x;
}

int to_int(const std::string& v, const std::string& where) {
    double x = to_double(v, where);
    int i = static_cast<int>(std::llround(x));
    check(static_cast<double>(i) == x, "parse_config: expected integer, got '" + v + "' " + where);
    return i;
}

bool to_bool(const std::string& v, const std::string& where) {
    std::string s = v;
    std::transform(s.begin(), s.end(), s.begin(), ::tolower);
    if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "off" || s == "no") return false;
    fail("parse_config: bad boolean '" + v + "' " + where);
}

Vec3 to_vec3(const std::string& v, const std::string& where) {
    std::string s = v;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream ss(s);
    Vec3 p;
    std::string extra;
    check(static_cast<bool>(ss >> p.x >> p.y >> p.z),
          "parse_config: expected three comma-separated numbers, got '" + v + "' " + where);
    check(!(ss >> extra), "parse_config: trailing junk in point '" + v + "' " + where);
    check(p.finite(), "parse_config: non-finite point " + where);
    return p;
}

}  // namespace

void RunConfig::validate() const {
    check(e0 > 0.0, "config: e0 must be positive");
    check(lattice > 0.0, "config: lattice must be positive");
    check(r_nn >= 0.0, "config: r_nn must be non-negative");
    check(coord_surface > 0, "config: coord_surface must be positive");
    check(dbscan_min_pts >= 1, "config: dbscan_min_pts must be >= 1");
    check(c1 >= 0 && c2 >= 0 && c3 >= 0, "config: coarsening factors must be >= 0");
    check(structure_radius >= 0.0, "config: structure_radius must be >= 0");
    check(q_min > 0.0 && q_min < 1.0, "config: q_min must lie in (0, 1)");
    check(v_max >= 0.0, "config: v_max must be >= 0");
    check(refine_max_sweeps >= 1, "config: refine_max_sweeps must be >= 1");
    check(taubin_lambda > 0.0 && taubin_mu < 0.0 && -taubin_mu > taubin_lambda,
          "config: taubin passband requires lambda > 0, mu < 0, |mu| > lambda");
    check(taubin_iters >= 0, "config: taubin_iters must be >= 0");
    check(cg_tol > 0.0, "config: cg_tol must be positive");
    check(cg_max_iter > 0, "config: cg_max_iter must be positive");
    check(rmsd_threshold >= 0.0, "config: rmsd_threshold must be >= 0");
    check(order == 1 || order == 2, "config: order must be 1 or 2");
    check(box_height_factor > 0.0 && box_halfwidth_factor > 0.0,
          "config: box factors must be positive");
    check(box_height_abs >= 0.0 && box_halfwidth_abs >= 0.0,
          "config: absolute box sizes must be >= 0");
    check(extend_halfwidth >= 0.0, "config: extend_halfwidth must be >= 0");
    check(threads >= 1, "config: threads must be >= 1");
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;
    static const std::map<std::string, Setter> setters = {
        {"e0", [](RunConfig& c, const std::string& v, const std::string& w) { c.e0 = to_double(v, w); }},
        {"lattice", [](RunConfig& c, const std::string& v, const std::string& w) { c.lattice = to_double(v, w); }},
        {"r_nn", [](RunConfig& c, const std::string& v, const std::string& w) { c.r_nn = to_double(v, w); }},
        {"coord_surface", [](RunConfig& c, const std::string& v, const std::string& w) { c.coord_surface = to_int(v, w); }},
        {"eps_dbscan", [](RunConfig& c, const std::string& v, const std::string& w) { c.eps_dbscan = to_double(v, w); }},
        {"dbscan_min_pts", [](RunConfig& c, const std::string& v, const std::string& w) { c.dbscan_min_pts = to_int(v, w); }},
        {"voronoi", [](RunConfig& c, const std::string& v, const std::string& w) { c.voronoi = to_bool(v, w); }},
        {"c1", [](RunConfig& c, const std::string& v, const std::string& w) { c.c1 = to_int(v, w); }},
        {"c2", [](RunConfig& c, const std::string& v, const std::string& w) { c.c2 = to_int(v, w); }},
        {"c3", [](RunConfig& c, const std::string& v, const std::string& w) { c.c3 = to_int(v, w); }},
        {"structure_radius", [](RunConfig& c, const std::string& v, const std::string& w) { c.structure_radius = to_double(v, w); }},
        {"r_apex", [](RunConfig& c, const std::string& v, const std::string& w) { c.r_apex = to_vec3(v, w); c.r_apex_set = true; }},
        {"r_base", [](RunConfig& c, const std::string& v, const std::string& w) { c.r_base = to_vec3(v, w); c.r_base_set = true; }},
        {"q_min", [](RunConfig& c, const std::string& v, const std::string& w) { c.q_min = to_double(v, w); }},
        {"v_max", [](RunConfig& c, const std::string& v, const std::string& w) { c.v_max = to_double(v, w); }},
        {"refine_max_sweeps", [](RunConfig& c, const std::string& v, const std::string& w) { c.refine_max_sweeps = to_int(v, w); }},
        {"taubin_lambda", [](RunConfig& c, const std::string& v, const std::string& w) { c.taubin_lambda = to_double(v, w); }},
        {"taubin_mu", [](RunConfig& c, const std::string& v, const std::string& w) { c.taubin_mu = to_double(v, w); }},
        {"taubin_iters", [](RunConfig& c, const std::string& v, const std::string& w) { c.taubin_iters = to_int(v, w); }},
        {"taubin_uniform_weights", [](RunConfig& c, const std::string& v, const std::string& w) { c.taubin_uniform_weights = to_bool(v, w); }},
        {"cg_tol", [](RunConfig& c, const std::string& v, const std::string& w) { c.cg_tol = to_double(v, w); }},
        {"cg_max_iter", [](RunConfig& c, const std::string& v, const std::string& w) { c.cg_max_iter = to_int(v, w); }},
        {"rmsd_threshold", [](RunConfig& c, const std::string& v, const std::string& w) { c.rmsd_threshold = to_double(v, w); }},
        {"order", [](RunConfig& c, const std::string& v, const std::string& w) { c.order = to_int(v, w); }},
        {"postprocess", [](RunConfig& c, const std::string& v, const std::string& w) { c.postprocess = to_bool(v, w); }},
        {"box_height_factor", [](RunConfig& c, const std::string& v, const std::string& w) { c.box_height_factor = to_double(v, w); }},
        {"box_halfwidth_factor", [](RunConfig& c, const std::string& v, const std::string& w) { c.box_halfwidth_factor = to_double(v, w); }},
        {"box_height_abs", [](RunConfig& c, const std::string& v, const std::string& w) { c.box_height_abs = to_double(v, w); }},
        {"box_halfwidth_abs", [](RunConfig& c, const std::string& v, const std::string& w) { c.box_halfwidth_abs = to_double(v, w); }},
        {"extend_halfwidth", [](RunConfig& c, const std::string& v, const std::string& w) { c.extend_halfwidth = to_double(v, w); }},
        {"seed", [](RunConfig& c, const std::string& v, const std::string& w) { c.seed = static_cast<uint64_t>(to_double(v, w)); }},
        {"threads", [](RunConfig& c, const std::string& v, const std::string& w) { c.threads = to_int(v, w); }},
    };

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::string where = "(" + origin + ":" + std::to_string(lineno) + ")";
        size_t eq = line.find('=');
        check(eq != std::string::npos, "parse_config: missing '=' " + where);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        check(!key.empty(), "parse_config: empty key " + where);
        check(!value.empty(), "parse_config: empty value for '" + key + "' " + where);
        auto it = setters.find(key);
        check(it != setters.end(), "parse_config: unknown key '" + key + "' " + where);
        it->second(cfg, value, where);
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    check(in.good(), "parse_config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

}  // namespace nanofield
