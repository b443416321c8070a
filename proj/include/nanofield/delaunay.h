/*
 * delaunay.h
 * Incremental Bowyer-Watson Delaunay tetrahedralization. Points are wrapped
 * in a virtual super-box (8 corner nodes, removed after the bulk build) and
 * inserted in Hilbert order. All orientation and in-sphere decisions go
 * through the sign-exact predicates, so exactly cospherical inputs (lattice
 * planes, latitude rings) are handled without tolerances; the resulting
 * triangulation satisfies the empty-circumsphere property with points on a
 * common sphere allowed on, but never strictly inside, any circumsphere.
 */
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nanofield/aabb.h"
#include "nanofield/tetmesh.h"
#include "nanofield/vec3.h"

namespace nanofield {

struct DelaunayStats {
    long walk_steps = 0;
    long cavity_tets = 0;
    long brute_locates = 0;
    long inserts = 0;
};

class DelaunayBuilder {
public:
    explicit DelaunayBuilder(double super_scale = 1000.0) : super_scale_(super_scale) {}

    // Bulk build: pts become nodes 0..n-1 in input order. Throws if two
    // points coincide exactly or if all points are coplanar.
    void build(const std::vector<Vec3>& pts);

    // Incremental insertion after build(); p must lie inside the convex
    // hull of the built points. Returns the new node id, or -1 when p
    // exactly coincides with an existing node (nothing inserted).
    int insert(const Vec3& p);

    int n_nodes() const { return static_cast<int>(pts_.size()); }
    const std::vector<Vec3>& points() const { return pts_; }

    // Slot-level access for refinement scans (slots of dead tets persist
    // until take_mesh()).
    int n_slots() const { return static_cast<int>(tets_.size()); }
    bool alive(int t) const { return tets_[t].alive; }
    const std::array<int, 4>& tet(int t) const { return tets_[t].v; }

    // Walks to the tet whose closure contains p; -1 if p is outside the
    // triangulated region.
    int locate(const Vec3& p) const;

    // Compacted mesh copy; node ids are preserved.
    TetMesh take_mesh() const;

    mutable DelaunayStats stats;

private:
    struct BTet {
        std::array<int, 4> v;
        std::array<int, 4> nb;
        bool alive = false;
    };

    int insert_node(int pid);
    int locate_from(const Vec3& p, int start, bool& on_vertex, int& vertex_id) const;
    void remove_super();
    int new_tet(int a, int b, int c, int d);
    double in_ball(int t, const Vec3& p) const;

    std::vector<Vec3> pts_;
    std::vector<BTet> tets_;
    std::vector<int> free_;
    mutable std::vector<int> mark_;  // per-insert epoch stamps
    mutable int epoch_ = 0;
    int n_super_base_ = -1;  // first super node id while the super-box exists
    int last_ = -1;          // walk start hint
    double super_scale_;
    bool built_ = false;
    mutable uint64_t walk_rand_ = 0x9e3779b97f4a7c15ull;

    std::vector<int> cavity_, stack_;
    struct BFace { int a, b, c, outer, outer_k; };
    std::vector<BFace> faces_;
};

}  // namespace nanofield
