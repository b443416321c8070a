#include "nanofield/tetmesh.h"

#include <algorithm>
#include <cmath>

#include "nanofield/check.h"
#include "nanofield/predicates.h"

namespace nanofield {

double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    return (b - a).cross(c - a).dot(d - a) / 6.0;
}

Vec3 tet_circumcenter(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, bool* ok) {
    Vec3 ba = b - a, ca = c - a, da = d - a;
    double det = 2.0 * ba.cross(ca).dot(da);
    Vec3 centroid = (a + b + c + d) * 0.25;
    double scale = std::max({ba.norm2(), ca.norm2(), da.norm2()});
    if (std::fabs(det) <= 1e-12 * scale * std::sqrt(scale)) {
        if (ok) *ok = false;
        return centroid;
    }
    Vec3 num = ba.norm2() * ca.cross(da) + ca.norm2() * da.cross(ba) + da.norm2() * ba.cross(ca);
    if (ok) *ok = true;
    return a + num / det;
}

double tet_shortest_edge(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    return std::sqrt(std::min({a.dist2(b), a.dist2(c), a.dist2(d),
                               b.dist2(c), b.dist2(d), c.dist2(d)}));
}

double tet_longest_edge(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    return std::sqrt(std::max({a.dist2(b), a.dist2(c), a.dist2(d),
                               b.dist2(c), b.dist2(d), c.dist2(d)}));
}

double tet_quality(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    bool ok = false;
    Vec3 cc = tet_circumcenter(a, b, c, d, &ok);
    if (!ok) return 0.0;
    double r = cc.dist(a);
    if (r <= 0.0) return 0.0;
    return tet_shortest_edge(a, b, c, d) / r;
}

double TetMesh::tet_volume(int t) const {
    const auto& v = tets[t];
    return nanofield::tet_volume(nodes[v[0]], nodes[v[1]], nodes[v[2]], nodes[v[3]]);
}

double TetMesh::tet_quality(int t) const {
    const auto& v = tets[t];
    return nanofield::tet_quality(nodes[v[0]], nodes[v[1]], nodes[v[2]], nodes[v[3]]);
}

void TetMesh::require_valid() const {
    check(neigh.size() == tets.size(), "TetMesh: adjacency size mismatch");
    for (int t = 0; t < n_tets(); ++t) {
        for (int k = 0; k < 4; ++k) {
            int v = tets[t][k];
            check(v >= 0 && v < n_nodes(), "TetMesh: node index out of range");
            int u = neigh[t][k];
            if (u < 0) continue;
            check(u < n_tets(), "TetMesh: neighbor index out of range");
            // The neighbor must point back across the shared face.
            bool back = false;
            for (int j = 0; j < 4; ++j)
                if (neigh[u][j] == t) back = true;
            check(back, "TetMesh: adjacency is not symmetric");
        }
        // Exact orientation test: near-degenerate slivers can round a plain
        // double volume to the wrong sign.
        const auto& tt = tets[t];
        check(orient3d(nodes[tt[0]], nodes[tt[1]], nodes[tt[2]], nodes[tt[3]]) > 0,
              "TetMesh: non-positive tet orientation");
    }
}

}  // namespace nanofield
