#include "nanofield/interp.h"

#include "nanofield/check.h"
#include "nanofield/hilbert.h"

namespace nanofield {

BaryCoords barycentric(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c,
                       const Vec3& d) {
    // Sub-volume opposite each vertex: replace that vertex by p. The signs
    // come out negative exactly when p lies beyond the corresponding face.
    const double v0 = tet_volume(p, b, c, d);
    const double v1 = tet_volume(a, p, c, d);
    const double v2 = tet_volume(a, b, p, d);
    const double v3 = tet_volume(a, b, c, p);
    const double total = tet_volume(a, b, c, d);
    if (!(total > 0.0)) fail("barycentric: degenerate tet (non-positive volume)");
    const double s = v0 + v1 + v2 + v3;  // equals `total` up to rounding
    if (s == 0.0) fail("barycentric: degenerate tet");
    BaryCoords bc;
    bc.m[0] = v0 / s;
    bc.m[1] = v1 / s;
    bc.m[2] = v2 / s;
    // Normalized by construction: the last coordinate closes the sum to 1.
    bc.m[3] = 1.0 - bc.m[0] - bc.m[1] - bc.m[2];
    return bc;
}

BaryCoords barycentric(const Vec3& p, const TetMesh& mesh, int tet) {
    if (tet < 0 || tet >= mesh.n_tets()) fail("barycentric: tet id out of range");
    const auto& t = mesh.tets[tet];
    return barycentric(p, mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]],
                       mesh.nodes[t[3]]);
}

int locate(const Vec3& p, const TetMesh& mesh, int hint, long* steps) {
    const int nt = mesh.n_tets();
    if (nt <= 0) fail("locate: empty mesh");
    if (mesh.neigh.size() != mesh.tets.size()) fail("locate: mesh has no adjacency");

    int t = (hint >= 0 && hint < nt) ? hint : 0;
    long visited = 0;
    for (int iter = 0; iter <= nt; ++iter) {
        ++visited;
        const BaryCoords bc = barycentric(p, mesh, t);
        if (bc.inside()) {
            if (steps) *steps += visited;
            return t;
        }
        const int next = mesh.neigh[t][bc.argmin()];
        if (next < 0) {  // the walk left the hull
            if (steps) *steps += visited;
            return -1;
        }
        t = next;
    }
    // Cycle (possible on non-convex domains or flat tets): exhaustive scan.
    for (int i = 0; i < nt; ++i) {
        ++visited;
        if (barycentric(p, mesh, i).inside()) {
            if (steps) *steps += visited;
            return i;
        }
    }
    if (steps) *steps += visited;
    return -1;
}

std::array<double, 10> quadratic_shapes(const BaryCoords& bc) {
    const double m1 = bc.m[0], m2 = bc.m[1], m3 = bc.m[2], m4 = bc.m[3];
    return {m1 * (2.0 * m1 - 1.0), m2 * (2.0 * m2 - 1.0), m3 * (2.0 * m3 - 1.0),
            m4 * (2.0 * m4 - 1.0), 4.0 * m1 * m2, 4.0 * m2 * m3, 4.0 * m3 * m1,
            4.0 * m1 * m4, 4.0 * m2 * m4, 4.0 * m3 * m4};
}

template <class T>
std::vector<InterpValue<T>> interp_batch(const std::vector<Vec3>& pts, const TetMesh& mesh,
                                         const std::vector<T>& values, int order,
                                         const std::vector<std::array<int, 10>>* tet10,
                                         BatchStats* stats) {
    check(order == 1 || order == 2, "interp_batch: order must be 1 or 2");
    if (order == 1) {
        check((int)values.size() >= mesh.n_nodes(),
              "interp_batch: field does not cover the mesh nodes");
    } else {
        check(tet10 != nullptr, "interp_batch: order 2 needs the 10-node tet table");
        check((int)tet10->size() == mesh.n_tets(),
              "interp_batch: 10-node table does not match the mesh");
    }

    std::vector<InterpValue<T>> out(pts.size());
    if (pts.empty()) return out;

    int hint = 0;
    long walk = 0;
    for (int idx : hilbert_order(pts)) {
        long st = 0;
        const int t = locate(pts[idx], mesh, hint, &st);
        walk += st;
        if (t < 0) {
            if (stats) ++stats->misses;
            continue;  // flagged per point: out[idx].inside stays false
        }
        hint = t;
        const BaryCoords bc = barycentric(pts[idx], mesh, t);
        out[idx].inside = true;
        out[idx].value = (order == 1) ? interp_linear(bc, mesh.tets[t], values)
                                      : interp_quadratic(bc, (*tet10)[t], values);
    }
    if (stats) stats->walk_steps += walk;
    return out;
}

template std::vector<InterpValue<double>> interp_batch<double>(
    const std::vector<Vec3>&, const TetMesh&, const std::vector<double>&, int,
    const std::vector<std::array<int, 10>>*, BatchStats*);
template std::vector<InterpValue<Vec3>> interp_batch<Vec3>(
    const std::vector<Vec3>&, const TetMesh&, const std::vector<Vec3>&, int,
    const std::vector<std::array<int, 10>>*, BatchStats*);

}  // namespace nanofield
