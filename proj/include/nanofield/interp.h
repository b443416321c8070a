/*
 * interp.h
 * Point location and nodal interpolation on tetrahedral meshes. Barycentric
 * coordinates drive both: a face walk for location, and linear (4-node) or
 * quadratic (10-node) shape functions for evaluation. Batch queries are
 * ordered along a Hilbert curve and reuse the previous hit as the next
 * walk's starting tet.
 */
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nanofield/tetmesh.h"
#include "nanofield/vec3.h"

namespace nanofield {

// Tolerance band on barycentric coordinates: a point with all coordinates
// >= -kLocateEps counts as inside (points on shared faces belong to the
// first tet that passes).
constexpr double kLocateEps = 1e-10;

struct BaryCoords {
    double m[4];  // sums to 1 by construction

    double min() const {
        double lo = m[0];
        for (int k = 1; k < 4; ++k) lo = m[k] < lo ? m[k] : lo;
        return lo;
    }
    // Index of the smallest coordinate; ties resolve to the lowest index.
    int argmin() const {
        int arg = 0;
        for (int k = 1; k < 4; ++k)
            if (m[k] < m[arg]) arg = k;
        return arg;
    }
    bool inside(double eps = kLocateEps) const { return min() >= -eps; }
};

// Signed-volume barycentric coordinates of p in the given tet. Negative
// components mean p lies beyond the corresponding face. Throws if the tet
// is degenerate (non-positive volume).
BaryCoords barycentric(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c,
                       const Vec3& d);
BaryCoords barycentric(const Vec3& p, const TetMesh& mesh, int tet);

// Walks from `hint` across the face opposite the most negative coordinate
// until p is inside (within kLocateEps); returns the tet id, or -1 when the
// walk leaves the hull. If the walk cycles (more steps than tets), falls
// back to an exhaustive scan. `steps`, when given, accumulates the number
// of tets visited.
int locate(const Vec3& p, const TetMesh& mesh, int hint, long* steps = nullptr);

// Quadratic shape functions on the 10-node tet: 4 vertex functions
// m(2m - 1), then 6 edge functions 4 m_i m_j in the edge order
// (0,1),(1,2),(2,0),(0,3),(1,3),(2,3) -- the layout of HexMesh::tet_nodes10.
std::array<double, 10> quadratic_shapes(const BaryCoords& bc);

// Weighted nodal combinations; T is double or Vec3.
template <class T>
T interp_linear(const BaryCoords& bc, const std::array<int, 4>& nodes,
                const std::vector<T>& values) {
    T out{};
    for (int k = 0; k < 4; ++k) out += values[nodes[k]] * bc.m[k];
    return out;
}

template <class T>
T interp_quadratic(const BaryCoords& bc, const std::array<int, 10>& nodes,
                   const std::vector<T>& values) {
    const std::array<double, 10> phi = quadratic_shapes(bc);
    T out{};
    for (int k = 0; k < 10; ++k) out += values[nodes[k]] * phi[k];
    return out;
}

template <class T>
struct InterpValue {
    bool inside = false;
    T value{};
};

struct BatchStats {
    long walk_steps = 0;  // tets visited across all queries
    int misses = 0;       // queries outside the domain
};

// Interpolates `values` at every query point. order 1 reads the 4 tet
// vertices (values indexed by mesh node ids); order 2 reads the 10-node
// tets in `tet10` (one row per tet, e.g. HexMesh::tet_nodes10, with values
// indexed by hex-mesh node ids). Queries are processed in Hilbert order
// with chained walk hints; results come back in input order. Points
// outside the domain are flagged per point, never a batch failure.
template <class T>
std::vector<InterpValue<T>> interp_batch(const std::vector<Vec3>& pts, const TetMesh& mesh,
                                         const std::vector<T>& values, int order,
                                         const std::vector<std::array<int, 10>>* tet10 = nullptr,
                                         BatchStats* stats = nullptr);

extern template std::vector<InterpValue<double>> interp_batch<double>(
    const std::vector<Vec3>&, const TetMesh&, const std::vector<double>&, int,
    const std::vector<std::array<int, 10>>*, BatchStats*);
extern template std::vector<InterpValue<Vec3>> interp_batch<Vec3>(
    const std::vector<Vec3>&, const TetMesh&, const std::vector<Vec3>&, int,
    const std::vector<std::array<int, 10>>*, BatchStats*);

}  // namespace nanofield
