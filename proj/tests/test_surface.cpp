/*
 * test_surface.cpp
 * Surface extraction against brute-force oracles on FCC slabs: coordination
 * counted O(n^2), face membership judged geometrically from the bounding
 * box, cluster separation checked on hand-built detached fragments.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "nanofield/aabb.h"
#include "nanofield/surface.h"

using namespace nanofield;

namespace {

const double kA = 3.61;  // lattice constant

std::vector<Vec3> fcc_slab(int nx, int ny, int nz, double a = kA) {
    std::vector<Vec3> pts;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            for (int k = 0; k < nz; ++k) {
                const Vec3 o = {i * a, j * a, k * a};
                pts.push_back(o);
                pts.push_back({o.x + a / 2, o.y + a / 2, o.z});
                pts.push_back({o.x + a / 2, o.y, o.z + a / 2});
                pts.push_back({o.x, o.y + a / 2, o.z + a / 2});
            }
    return pts;
}

AtomCloud make_cloud(const std::vector<Vec3>& pts) {
    AtomCloud c;
    c.pos = pts;
    c.species.assign(pts.size(), "Cu");
    c.labels.assign(pts.size(), AtomLabel::Unclassified);
    c.comment = "test";
    return c;
}

SurfaceOpts default_opts() {
    SurfaceOpts o;
    o.r_nn = 0.765 * kA;
    o.eps = 0.765 * kA;
    return o;
}

// O(n^2) coordination oracle.
int brute_coord(const std::vector<Vec3>& pts, int i, double r) {
    int c = 0;
    for (size_t j = 0; j < pts.size(); ++j)
        if (static_cast<int>(j) != i && pts[j].dist(pts[i]) <= r) ++c;
    return c;
}

}  // namespace

TEST_CASE("surface: pristine slab faces vs core") {
    AtomCloud cloud = make_cloud(fcc_slab(6, 6, 4));
    SurfaceOpts opt = default_opts();
    SurfaceResult res = extract_surface(cloud, opt);

    CHECK(res.n_clusters == 1);
    CHECK(res.n_detached == 0);
    CHECK(res.n_evaporated == 0);
    CHECK(std::is_sorted(res.surface.begin(), res.surface.end()));

    Aabb box;
    for (const Vec3& p : cloud.pos) box.expand(p);
    for (int i = 0; i < cloud.size(); ++i) {
        const Vec3& p = cloud.pos[i];
        const bool on_face = p.x < box.lo.x + 0.1 || p.x > box.hi.x - 0.1 ||
                             p.y < box.lo.y + 0.1 || p.y > box.hi.y - 0.1 ||
                             p.z < box.lo.z + 0.1 || p.z > box.hi.z - 0.1;
        const bool deep = p.x > box.lo.x + kA && p.x < box.hi.x - kA &&
                          p.y > box.lo.y + kA && p.y < box.hi.y - kA &&
                          p.z > box.lo.z + kA && p.z < box.hi.z - kA;
        if (on_face) CHECK(cloud.labels[i] == AtomLabel::Surface);
        if (deep) CHECK(cloud.labels[i] == AtomLabel::Bulk);
    }

    // On a pristine slab the exposure pass demotes nothing: every
    // under-coordinated atom really is on the outside.
    AtomCloud plain = make_cloud(fcc_slab(6, 6, 4));
    SurfaceOpts raw = default_opts();
    raw.voronoi = false;
    SurfaceResult res2 = extract_surface(plain, raw);
    CHECK(res2.surface == res.surface);
    CHECK(res.n_candidates == static_cast<int>(res.surface.size()));

    // The raw pass is exactly the coordination rule.
    for (int i = 0; i < plain.size(); ++i) {
        const bool under = brute_coord(plain.pos, i, raw.r_nn) < raw.coord_surface;
        CHECK((plain.labels[i] == AtomLabel::Surface) == under);
    }
}

TEST_CASE("surface: detached cluster and evaporated atom") {
    std::vector<Vec3> pts = fcc_slab(5, 5, 3);
    Aabb box;
    for (const Vec3& p : pts) box.expand(p);
    const size_t n_slab = pts.size();
    // A floating 14-atom fragment 3 lattice constants above the slab.
    std::vector<Vec3> frag = fcc_slab(1, 1, 1);  // 4 atoms
    for (const Vec3& p : fcc_slab(2, 2, 1))
        if (frag.size() < 14) frag.push_back({p.x + 20.0, p.y, p.z});
    for (Vec3& p : frag) pts.push_back({p.x + 5.0, p.y + 5.0, p.z + box.hi.z + 3 * kA});
    const size_t n_frag = pts.size() - n_slab;
    // One atom far off in the vacuum.
    pts.push_back({box.hi.x + 40.0, 0.0, 0.0});

    AtomCloud cloud = make_cloud(pts);
    SurfaceResult res = extract_surface(cloud, default_opts());

    CHECK(res.n_clusters >= 2);
    CHECK(res.n_detached == static_cast<int>(n_frag));
    CHECK(res.n_evaporated == 1);
    for (size_t i = n_slab; i < n_slab + n_frag; ++i)
        CHECK(cloud.labels[i] == AtomLabel::Cluster);
    CHECK(cloud.labels[cloud.size() - 1] == AtomLabel::Evaporated);
    // No detached atom may appear in the surface list.
    for (int id : res.surface) CHECK(id < static_cast<int>(n_slab));
}

TEST_CASE("surface: equal cluster populations tie to the lower atom id") {
    // Two identical 8-atom cubes, spacing under eps, far apart.
    std::vector<Vec3> pts;
    const double s = 2.0;
    for (int i = 0; i < 8; ++i)
        pts.push_back({s * (i & 1), s * ((i >> 1) & 1), s * ((i >> 2) & 1)});
    for (int i = 0; i < 8; ++i)
        pts.push_back({50.0 + s * (i & 1), s * ((i >> 1) & 1), s * ((i >> 2) & 1)});

    AtomCloud cloud = make_cloud(pts);
    SurfaceOpts opt;
    opt.r_nn = 3.0;
    opt.eps = 3.0;
    SurfaceResult res = extract_surface(cloud, opt);
    CHECK(res.n_clusters == 2);
    CHECK(res.n_detached == 8);
    // Atoms 0..7 hold the main cluster; every cube atom has coordination
    // 3 < 10 and sits on its hull, so the main cube is all surface.
    for (int i = 0; i < 8; ++i) CHECK(cloud.labels[i] == AtomLabel::Surface);
    for (int i = 8; i < 16; ++i) CHECK(cloud.labels[i] == AtomLabel::Cluster);
}

TEST_CASE("surface: exposure pass demotes enclosed noise") {
    std::vector<Vec3> pts = fcc_slab(7, 7, 5);
    // Center atom: corner-type site in the middle cell.
    const Vec3 center = {3 * kA, 3 * kA, 2 * kA};
    int x = -1;
    for (size_t i = 0; i < pts.size(); ++i)
        if (pts[i].dist(center) < 1e-9) x = static_cast<int>(i);
    REQUIRE(x >= 0);
    // Push four first-shell neighbors radially outward past the cutoff, as
    // thermal motion would; no hole opens up around x.
    int moved = 0;
    for (size_t i = 0; i < pts.size() && moved < 4; ++i) {
        const double d = pts[i].dist(center);
        if (i != static_cast<size_t>(x) && d < 0.72 * kA) {
            const Vec3 dir = (pts[i] - center) * (1.0 / d);
            pts[i] = pts[i] + dir * 0.3;
            ++moved;
        }
    }
    REQUIRE(moved == 4);

    SurfaceOpts raw = default_opts();
    raw.voronoi = false;
    AtomCloud plain = make_cloud(pts);
    extract_surface(plain, raw);
    CHECK(brute_coord(pts, x, raw.r_nn) < raw.coord_surface);
    CHECK(plain.labels[x] == AtomLabel::Surface);  // raw rule flags the noise

    // With the exposure pass (threshold above the octahedral-hole diagonal)
    // the enclosed atom goes back to bulk.
    SurfaceOpts clean = default_opts();
    clean.exposure_edge = 2.0;
    AtomCloud cloud = make_cloud(pts);
    SurfaceResult res = extract_surface(cloud, clean);
    CHECK(cloud.labels[x] == AtomLabel::Bulk);
    // And the real faces survive the pass untouched.
    Aabb box;
    for (const Vec3& p : pts) box.expand(p);
    for (int i = 0; i < cloud.size(); ++i) {
        const Vec3& p = cloud.pos[i];
        const bool on_face = p.x < box.lo.x + 0.1 || p.x > box.hi.x - 0.1 ||
                             p.y < box.lo.y + 0.1 || p.y > box.hi.y - 0.1 ||
                             p.z < box.lo.z + 0.1 || p.z > box.hi.z - 0.1;
        if (on_face) CHECK(cloud.labels[i] == AtomLabel::Surface);
    }
    CHECK(res.n_candidates > static_cast<int>(res.surface.size()));
}

TEST_CASE("surface: a single vacancy does not create surface") {
    std::vector<Vec3> pts = fcc_slab(7, 7, 5);
    const Vec3 center = {3 * kA, 3 * kA, 2 * kA};
    std::vector<Vec3> kept;
    std::vector<int> shell;
    for (const Vec3& p : pts)
        if (p.dist(center) > 1e-9) kept.push_back(p);
    for (size_t i = 0; i < kept.size(); ++i)
        if (kept[i].dist(center) < 0.72 * kA) shell.push_back(static_cast<int>(i));
    CHECK(shell.size() == 12);

    AtomCloud cloud = make_cloud(kept);
    extract_surface(cloud, default_opts());
    // Neighbors of the vacancy drop to 11 — still bulk.
    for (int i : shell) CHECK(cloud.labels[i] == AtomLabel::Bulk);
}

TEST_CASE("surface: bad inputs are rejected") {
    AtomCloud lone = make_cloud({{0, 0, 0}});
    CHECK_THROWS_AS(extract_surface(lone, default_opts()), std::runtime_error);

    AtomCloud cloud = make_cloud(fcc_slab(2, 2, 2));
    SurfaceOpts opt;  // r_nn unset
    CHECK_THROWS_AS(extract_surface(cloud, opt), std::runtime_error);
}
