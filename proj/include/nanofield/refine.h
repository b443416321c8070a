/*
 * refine.h
 * Delaunay refinement. Tets that fail the min-edge/circumradius quality
 * floor or exceed the volume cap receive a Steiner point at their
 * circumcenter. A circumcenter that is degenerate, leaves the domain box,
 * leaves the triangulated region, or lands within the guard radius of a
 * protected point is skipped (the tet stays and is counted), which keeps
 * the spacing bounded and the sweep loop terminating.
 */
#pragma once

#include <vector>

#include "nanofield/aabb.h"
#include "nanofield/delaunay.h"
#include "nanofield/vec3.h"

namespace nanofield {

struct RefineOpts {
    double q_min = 0.2;   // split tets with min_edge/circumradius below this
    double v_max = 0.0;   // split tets larger than this volume (0 = off)
    int max_sweeps = 20;
    Aabb domain;          // Steiner points are kept strictly inside
    const std::vector<Vec3>* guard_pts = nullptr;
    double guard_radius = 0.0;
};

struct RefineResult {
    int inserted = 0;
    int sweeps = 0;
    int skipped_guard = 0;    // circumcenter inside a guard ball
    int skipped_outside = 0;  // circumcenter degenerate or outside the domain
    int remaining_bad = 0;    // bad tets left when the loop stopped
};

RefineResult refine_mesh(DelaunayBuilder& b, const RefineOpts& opt);

}  // namespace nanofield
