/*
 * surface.h
 * Surface atom extraction in three passes. Density clustering (DBSCAN over
 * the nearest-neighbor radius) separates the connected material from
 * detached fragments and lone evaporated atoms; the most populous cluster
 * is the material. Inside it, atoms whose coordination drops below the
 * bulk threshold become candidates. An optional exposure pass then demotes
 * candidates that are merely under-coordinated (thermal displacement
 * noise) but fully enclosed: a kept atom must sit on the cluster's convex
 * hull or touch a Delaunay edge long enough to certify an adjacent void.
 */
#pragma once

#include <vector>

#include "nanofield/atoms.h"

namespace nanofield {

struct SurfaceOpts {
    double r_nn = 0.0;         // coordination radius (required, > 0)
    double eps = 0.0;          // clustering radius (required, > 0)
    int min_pts = 2;           // DBSCAN core threshold, point itself included
    int coord_surface = 10;    // coordination below this -> candidate
    bool voronoi = true;       // exposure cleaner on/off
    double exposure_edge = 1.5;  // edge factor (x r_nn) certifying a void
};

struct SurfaceResult {
    std::vector<int> surface;  // ascending atom ids labeled Surface
    int n_clusters = 0;        // DBSCAN clusters found
    int n_detached = 0;        // atoms in non-main clusters
    int n_evaporated = 0;      // isolated atoms
    int n_candidates = 0;      // under-coordinated before the exposure pass
};

// Rewrites cloud.labels (Bulk / Surface / Cluster / Evaporated).
SurfaceResult extract_surface(AtomCloud& cloud, const SurfaceOpts& opt);

}  // namespace nanofield
