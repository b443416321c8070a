/*
 * surface.cpp
 * DBSCAN with classic border handling (border atoms join the first core
 * cluster that reaches them and are not expanded); clusters are ranked by
 * population with ties going to the cluster holding the lowest atom id.
 */
#include "nanofield/surface.h"

#include <algorithm>
#include <limits>
#include <vector>

#include "nanofield/check.h"
#include "nanofield/delaunay.h"
#include "nanofield/grid_index.h"
#include "nanofield/tetmesh.h"
#include "nanofield/vec3.h"

namespace nanofield {

SurfaceResult extract_surface(AtomCloud& cloud, const SurfaceOpts& opt) {
    cloud.require_valid("extract_surface");
    check(opt.r_nn > 0.0, "extract_surface: r_nn must be positive");
    check(opt.eps > 0.0, "extract_surface: eps must be positive");
    check(opt.min_pts >= 1, "extract_surface: min_pts must be >= 1");
    check(opt.coord_surface >= 1, "extract_surface: coord_surface must be >= 1");
    check(opt.exposure_edge > 0.0, "extract_surface: exposure_edge must be positive");

    const int n = cloud.size();
    const GridIndex grid(cloud.pos, std::max(opt.r_nn, opt.eps));

    auto neighbors = [&](int i, double radius, std::vector<int>& out) {
        out.clear();
        grid.for_near(cloud.pos[i], radius, [&](int j) {
            if (j != i) out.push_back(j);
        });
    };

    // --- density clustering ---
    constexpr int kUnvisited = -2, kNoise = -1;
    std::vector<int> cid(n, kUnvisited);
    std::vector<int> queue, nbr;
    int n_clusters = 0;
    for (int i = 0; i < n; ++i) {
        if (cid[i] != kUnvisited) continue;
        neighbors(i, opt.eps, nbr);
        if (static_cast<int>(nbr.size()) + 1 < opt.min_pts) {
            cid[i] = kNoise;
            continue;
        }
        const int c = n_clusters++;
        cid[i] = c;
        queue = nbr;
        for (size_t k = 0; k < queue.size(); ++k) {
            const int j = queue[k];
            if (cid[j] == kNoise) cid[j] = c;  // border atom
            if (cid[j] != kUnvisited) continue;
            cid[j] = c;
            neighbors(j, opt.eps, nbr);
            if (static_cast<int>(nbr.size()) + 1 >= opt.min_pts)
                queue.insert(queue.end(), nbr.begin(), nbr.end());
        }
    }

    // --- rank clusters by population, ties to the lowest atom id ---
    std::vector<long> size_of(n_clusters, 0);
    std::vector<int> first_of(n_clusters, std::numeric_limits<int>::max());
    for (int i = 0; i < n; ++i) {
        if (cid[i] < 0) continue;
        size_of[cid[i]] += 1;
        first_of[cid[i]] = std::min(first_of[cid[i]], i);
    }
    std::vector<int> order(n_clusters);
    for (int c = 0; c < n_clusters; ++c) order[c] = c;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (size_of[a] != size_of[b]) return size_of[a] > size_of[b];
        return first_of[a] < first_of[b];
    });
    std::vector<int> rank(n_clusters);
    for (int r = 0; r < n_clusters; ++r) rank[order[r]] = r;

    check(n_clusters > 0, "extract_surface: no cluster found; every atom is isolated");

    SurfaceResult res;
    res.n_clusters = n_clusters;
    std::vector<char> is_main(n, 0);
    for (int i = 0; i < n; ++i) {
        if (cid[i] < 0) {
            cloud.labels[i] = AtomLabel::Evaporated;
            res.n_evaporated += 1;
        } else if (rank[cid[i]] > 0) {
            cloud.labels[i] = AtomLabel::Cluster;
            res.n_detached += 1;
        } else {
            is_main[i] = 1;
        }
    }

    // --- coordination inside the material cluster ---
    std::vector<int> cand;
    for (int i = 0; i < n; ++i) {
        if (!is_main[i]) continue;
        int coord = 0;
        grid.for_near(cloud.pos[i], opt.r_nn, [&](int j) {
            if (j != i && is_main[j]) ++coord;
        });
        if (coord < opt.coord_surface) {
            cand.push_back(i);
            cloud.labels[i] = AtomLabel::Surface;
        } else {
            cloud.labels[i] = AtomLabel::Bulk;
        }
    }
    res.n_candidates = static_cast<int>(cand.size());

    // --- exposure pass ---
    if (opt.voronoi && !cand.empty()) {
        std::vector<Vec3> mpos;
        std::vector<int> mid;  // main-cluster position -> atom id
        for (int i = 0; i < n; ++i)
            if (is_main[i]) {
                mpos.push_back(cloud.pos[i]);
                mid.push_back(i);
            }
        bool degenerate = mpos.size() < 4;
        TetMesh mesh;
        if (!degenerate) {
            try {
                DelaunayBuilder b;
                b.build(mpos);
                mesh = b.take_mesh();
            } catch (const std::exception&) {
                degenerate = true;  // coplanar cluster: keep all candidates
            }
        }
        if (!degenerate) {
            std::vector<char> exposed(mpos.size(), 0);
            const double long_edge = opt.exposure_edge * opt.r_nn;
            const double le2 = long_edge * long_edge;
            for (int t = 0; t < mesh.n_tets(); ++t) {
                const auto& v = mesh.tets[t];
                for (int k = 0; k < 4; ++k)
                    if (mesh.neigh[t][k] < 0)
                        for (int c = 0; c < 3; ++c)
                            exposed[v[TetMesh::face_corners[k][c]]] = 1;
                for (int a = 0; a < 4; ++a)
                    for (int b2 = a + 1; b2 < 4; ++b2)
                        if (mesh.nodes[v[a]].dist2(mesh.nodes[v[b2]]) > le2) {
                            exposed[v[a]] = 1;
                            exposed[v[b2]] = 1;
                        }
            }
            std::vector<int> local(n, -1);
            for (size_t k = 0; k < mid.size(); ++k) local[mid[k]] = static_cast<int>(k);
            for (int i : cand)
                if (!exposed[local[i]]) cloud.labels[i] = AtomLabel::Bulk;
        }
    }

    for (int i = 0; i < n; ++i)
        if (cloud.labels[i] == AtomLabel::Surface) res.surface.push_back(i);
    return res;
}

}  // namespace nanofield
