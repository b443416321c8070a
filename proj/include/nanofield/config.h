/*
 * config.h
 * Run parameters. All lengths are Angstroms, the applied field E0 is V/nm
 * (converted to V/A internally once, at parse time the value is kept as
 * given). Parsed from `key = value` files with '#' comments; unknown keys
 * are rejected, missing keys fall back to the defaults below.
 */
#pragma once

#include <cstdint>
#include <string>

#include "nanofield/vec3.h"

namespace nanofield {

struct RunConfig {
    // Applied field at the top boundary, V/nm.
    double e0 = 1.0;

    // FCC lattice constant (A) and derived nearest-neighbor cutoff. A
    // cutoff of 0.765*a sits between the first (0.707a) and second (a)
    // neighbor shells; an explicit r_nn overrides the derived value.
    double lattice = 3.61;
    double r_nn = 0.0;  // 0 = derive from lattice

    // Surface extraction.
    int coord_surface = 10;    // coordination below this marks a candidate
    double eps_dbscan = 0.0;   // 0 = use r_nn
    int dbscan_min_pts = 2;
    bool voronoi = true;       // second-pass Voronoi exposure cleaner

    // Coarsening factors of the clearance radius (apex region / lateral
    // shank band / far region). Integers by contract; 0 disables coarsening
    // for that region.
    int c1 = 1, c2 = 1, c3 = 1;

    // Structure radius R (A) delimiting the coarsening regions; 0 = detect
    // from the surface atoms. Optional explicit apex / substrate-center
    // points (given as "x,y,z"); when unset they are detected too.
    double structure_radius = 0.0;
    Vec3 r_apex{};
    bool r_apex_set = false;
    Vec3 r_base{};
    bool r_base_set = false;

    // Mesh quality: min-edge/circumradius floor and tet volume cap (A^3,
    // 0 disables the cap).
    double q_min = 0.2;
    double v_max = 0.0;
    int refine_max_sweeps = 20;

    // Surface smoothing (Taubin lambda/mu). Passband requires lambda > 0,
    // mu < 0, |mu| > lambda.
    double taubin_lambda = 0.6307;
    double taubin_mu = -0.6732;
    int taubin_iters = 3;
    bool taubin_uniform_weights = false;  // default: inverse-distance weights

    // Linear solver.
    double cg_tol = 1e-10;
    int cg_max_iter = 30000;

    // Solution reuse gate (A) and interpolation order.
    double rmsd_threshold = 0.5;
    int order = 2;

    // Field post-processing.
    bool postprocess = true;

    // Simulation box: top height d and lateral half-width D as multiples of
    // the structure radius R, or absolute overrides in A (0 = unset).
    double box_height_factor = 6.0;
    double box_halfwidth_factor = 5.0;
    double box_height_abs = 0.0;
    double box_halfwidth_abs = 0.0;

    // Flat extended-surface half-width (A); 0 = auto (out to the box walls).
    double extend_halfwidth = 0.0;

    uint64_t seed = 1;
    int threads = 1;

    double derived_r_nn() const { return r_nn > 0.0 ? r_nn : 0.765 * lattice; }
    double derived_eps_dbscan() const { return eps_dbscan > 0.0 ? eps_dbscan : derived_r_nn(); }

    // Throws on out-of-range values (bad passband, q_min outside (0,1), ...).
    void validate() const;
};

// Parse `key = value` lines. Unknown keys and malformed values throw with
// the offending line number.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

}  // namespace nanofield
