/*
 * refine.cpp
 * Sweep-based Steiner insertion. Inserting a tet's circumcenter always
 * removes that tet (its circumsphere strictly contains its own center), so
 * every successful insertion makes progress; sweeps stop when nothing was
 * inserted or the sweep cap is reached.
 */
#include "nanofield/refine.h"

#include <vector>

#include "nanofield/check.h"
#include "nanofield/grid_index.h"
#include "nanofield/tetmesh.h"

namespace nanofield {

namespace {

bool tet_is_bad(const DelaunayBuilder& b, int t, const RefineOpts& opt) {
    const auto& v = b.tet(t);
    const auto& p = b.points();
    if (tet_quality(p[v[0]], p[v[1]], p[v[2]], p[v[3]]) < opt.q_min) return true;
    if (opt.v_max > 0.0 &&
        tet_volume(p[v[0]], p[v[1]], p[v[2]], p[v[3]]) > opt.v_max)
        return true;
    return false;
}

bool strictly_inside(const Aabb& box, const Vec3& p) {
    const double eps = 1e-9 * box.max_extent();
    return p.x > box.lo.x + eps && p.x < box.hi.x - eps &&
           p.y > box.lo.y + eps && p.y < box.hi.y - eps &&
           p.z > box.lo.z + eps && p.z < box.hi.z - eps;
}

}  // namespace

RefineResult refine_mesh(DelaunayBuilder& b, const RefineOpts& opt) {
    check(opt.q_min > 0.0 && opt.q_min < 1.0, "refine_mesh: q_min must lie in (0, 1)");
    check(opt.max_sweeps >= 1, "refine_mesh: max_sweeps must be >= 1");
    check(opt.domain.valid(), "refine_mesh: domain box is empty");

    GridIndex guard;
    const bool use_guard = opt.guard_pts && !opt.guard_pts->empty() && opt.guard_radius > 0.0;
    if (use_guard) guard = GridIndex(*opt.guard_pts, opt.guard_radius);

    RefineResult res;
    std::vector<int> bad;
    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
        bad.clear();
        for (int t = 0; t < b.n_slots(); ++t)
            if (b.alive(t) && tet_is_bad(b, t, opt)) bad.push_back(t);
        if (bad.empty()) break;
        res.sweeps = sweep + 1;

        int inserted_now = 0;
        for (int t : bad) {
            // Earlier insertions of this sweep may have retired the slot or
            // recycled it for a tet that is fine.
            if (!b.alive(t) || !tet_is_bad(b, t, opt)) continue;
            const auto& v = b.tet(t);
            const auto& p = b.points();
            bool ok = false;
            const Vec3 s = tet_circumcenter(p[v[0]], p[v[1]], p[v[2]], p[v[3]], &ok);
            // Only the circumcenter keeps the mesh spacing bounded (it is at
            // least one circumradius away from every existing node). When it
            // is degenerate or falls outside the domain, the tet is left
            // alone rather than split at an interior point: centroid-style
            // fallbacks create ever-shorter edges and do not terminate.
            if (!ok || !strictly_inside(opt.domain, s) || b.locate(s) < 0) {
                res.skipped_outside += 1;
                continue;
            }
            bool blocked = false;
            if (use_guard) guard.for_near(s, opt.guard_radius, [&](int) { blocked = true; });
            if (blocked) {
                res.skipped_guard += 1;
                continue;
            }
            if (b.insert(s) >= 0) {
                res.inserted += 1;
                inserted_now += 1;
            }
        }
        if (inserted_now == 0) break;  // only guarded or duplicate sites left
    }

    for (int t = 0; t < b.n_slots(); ++t)
        if (b.alive(t) && tet_is_bad(b, t, opt)) res.remaining_bad += 1;
    return res;
}

}  // namespace nanofield
