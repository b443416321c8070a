/*
 * tetmesh.h
 * Tetrahedral mesh with per-face adjacency, node classification flags and
 * vacuum/material domain labels. All tets are positively oriented:
 * orient3d(v0, v1, v2, v3) > 0.
 */
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nanofield/vec3.h"

namespace nanofield {

// A node can carry several roles at once (e.g. the substrate edge ring is
// both on the physical surface and on the simulation box wall).
enum NodeFlag : uint8_t {
    NODE_NONE = 0,
    NODE_SURFACE = 1,   // Dirichlet surface, smoothing operates here
    NODE_BOUNDARY = 2,  // on the simulation box; pinned during smoothing
};

enum class NodeDomain : uint8_t { Unknown = 0, Surface, Vacuum, Material };
enum class TetDomain : uint8_t { Unknown = 0, Vacuum, Material };

struct TetMesh {
    std::vector<Vec3> nodes;
    std::vector<std::array<int, 4>> tets;
    // neigh[t][k] is the tet across the face opposite vertex k, -1 on the hull.
    std::vector<std::array<int, 4>> neigh;
    std::vector<uint8_t> node_flags;        // NodeFlag bitmask
    std::vector<NodeDomain> node_domains;   // filled by separate_domains
    std::vector<TetDomain> tet_domains;     // filled by separate_domains

    int n_nodes() const { return static_cast<int>(nodes.size()); }
    int n_tets() const { return static_cast<int>(tets.size()); }

    // Face k (opposite vertex k), ordered so that orient3d(face, v_k) > 0
    // for a positively oriented tet.
    static constexpr int face_corners[4][3] = {{1, 3, 2}, {0, 2, 3}, {0, 3, 1}, {0, 1, 2}};

    double tet_volume(int t) const;
    double tet_quality(int t) const;

    // Consistency check used by tests and after construction: positive
    // volumes and symmetric adjacency. Throws on violation.
    void require_valid() const;
};

// Signed volume of (a, b, c, d); positive for positive orientation.
double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

// Circumcenter by Cramer's rule. For nearly degenerate tets the linear
// system is singular; then the centroid is returned and *ok is cleared.
Vec3 tet_circumcenter(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                      bool* ok = nullptr);

// min edge length / circumradius: ~1.63 for a regular tet, 0 when degenerate.
double tet_quality(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

double tet_shortest_edge(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);
double tet_longest_edge(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

}  // namespace nanofield
