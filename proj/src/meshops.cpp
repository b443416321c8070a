#include "nanofield/meshops.h"

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <unordered_set>

#include "nanofield/check.h"

namespace nanofield {

namespace {

// Node-to-node adjacency from the tet edges, as a CSR-style structure.
struct NodeGraph {
    std::vector<int> start;
    std::vector<int> adj;

    explicit NodeGraph(const TetMesh& m) {
        std::set<std::pair<int, int>> edges;
        for (const auto& t : m.tets)
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j)
                    edges.insert({std::min(t[i], t[j]), std::max(t[i], t[j])});
        std::vector<int> deg(m.n_nodes(), 0);
        for (auto& e : edges) {
            ++deg[e.first];
            ++deg[e.second];
        }
        start.assign(m.n_nodes() + 1, 0);
        for (int i = 0; i < m.n_nodes(); ++i) start[i + 1] = start[i] + deg[i];
        adj.resize(start.back());
        std::vector<int> fill(m.n_nodes(), 0);
        for (auto& e : edges) {
            adj[start[e.first] + fill[e.first]++] = e.second;
            adj[start[e.second] + fill[e.second]++] = e.first;
        }
    }
};

}  // namespace

void separate_domains(TetMesh& mesh) {
    mesh.require_valid();
    check(mesh.node_flags.size() == mesh.nodes.size(),
          "separate_domains: node flags missing");
    const int n = mesh.n_nodes();

    std::vector<char> is_surface(n, 0);
    for (int i = 0; i < n; ++i)
        is_surface[i] = (mesh.node_flags[i] & NODE_SURFACE) ? 1 : 0;

    mesh.node_domains.assign(n, NodeDomain::Unknown);
    for (int i = 0; i < n; ++i)
        if (is_surface[i]) mesh.node_domains[i] = NodeDomain::Surface;

    // Seeds: the vacuum side owns the topmost free node, the material side
    // the bottommost. Flood along edges between free (non-surface) nodes.
    int seed_vac = -1, seed_mat = -1;
    for (int i = 0; i < n; ++i) {
        if (is_surface[i]) continue;
        if (seed_vac < 0 || mesh.nodes[i].z > mesh.nodes[seed_vac].z) seed_vac = i;
        if (seed_mat < 0 || mesh.nodes[i].z < mesh.nodes[seed_mat].z) seed_mat = i;
    }

    if (seed_vac >= 0) {
        check(seed_vac != seed_mat,
              "separate_domains: only one free node; the surface cannot separate "
              "vacuum from material");
        NodeGraph g(mesh);
        auto flood = [&](int seed, NodeDomain dom) {
            std::queue<int> q;
            q.push(seed);
            mesh.node_domains[seed] = dom;
            while (!q.empty()) {
                int u = q.front();
                q.pop();
                for (int k = g.start[u]; k < g.start[u + 1]; ++k) {
                    int v = g.adj[k];
                    if (is_surface[v]) continue;
                    if (mesh.node_domains[v] == dom) continue;
                    check(mesh.node_domains[v] == NodeDomain::Unknown,
                          "separate_domains: vacuum and material regions touch at node " +
                              std::to_string(v) + "; the surface does not seal");
                    mesh.node_domains[v] = dom;
                    q.push(v);
                }
            }
        };
        flood(seed_vac, NodeDomain::Vacuum);
        check(mesh.node_domains[seed_mat] == NodeDomain::Unknown,
              "separate_domains: vacuum flood reached the bottom node; the surface "
              "does not seal");
        flood(seed_mat, NodeDomain::Material);

        for (int i = 0; i < n; ++i)
            check(mesh.node_domains[i] != NodeDomain::Unknown,
                  "separate_domains: node " + std::to_string(i) +
                      " is sealed off from both the vacuum and the material side");
    }

    mesh.tet_domains.assign(mesh.n_tets(), TetDomain::Material);
    for (int t = 0; t < mesh.n_tets(); ++t)
        for (int v : mesh.tets[t])
            if (mesh.node_domains[v] == NodeDomain::Vacuum) {
                mesh.tet_domains[t] = TetDomain::Vacuum;
                break;
            }
}

TetMesh extract_domain(const TetMesh& mesh, TetDomain which,
                       std::vector<int>* old_of_new) {
    check(mesh.tet_domains.size() == mesh.tets.size(),
          "extract_domain: run separate_domains first");

    std::vector<int> new_id(mesh.n_nodes(), -1);
    std::vector<int> kept_tets;
    for (int t = 0; t < mesh.n_tets(); ++t)
        if (mesh.tet_domains[t] == which) {
            kept_tets.push_back(t);
            for (int v : mesh.tets[t]) new_id[v] = 0;
        }
    check(!kept_tets.empty(), "extract_domain: requested domain is empty");

    TetMesh out;
    if (old_of_new) old_of_new->clear();
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        if (new_id[i] < 0) continue;
        new_id[i] = out.n_nodes();
        out.nodes.push_back(mesh.nodes[i]);
        out.node_flags.push_back(mesh.node_flags[i]);
        out.node_domains.push_back(mesh.node_domains[i]);
        if (old_of_new) old_of_new->push_back(i);
    }

    std::map<std::array<int, 3>, std::pair<int, int>> face_owner;
    for (int t : kept_tets) {
        int nt = out.n_tets();
        std::array<int, 4> tt;
        for (int i = 0; i < 4; ++i) tt[i] = new_id[mesh.tets[t][i]];
        out.tets.push_back(tt);
        out.neigh.push_back({-1, -1, -1, -1});
        out.tet_domains.push_back(which);
        for (int k = 0; k < 4; ++k) {
            std::array<int, 3> key{tt[TetMesh::face_corners[k][0]],
                                   tt[TetMesh::face_corners[k][1]],
                                   tt[TetMesh::face_corners[k][2]]};
            std::sort(key.begin(), key.end());
            auto it = face_owner.find(key);
            if (it == face_owner.end()) {
                face_owner.emplace(key, std::make_pair(nt, k));
            } else {
                out.neigh[nt][k] = it->second.first;
                out.neigh[it->second.first][it->second.second] = nt;
                face_owner.erase(it);
            }
        }
    }
    out.require_valid();
    return out;
}

void taubin_smooth(std::vector<Vec3>& pos,
                   const std::vector<std::vector<int>>& neighbors,
                   const std::vector<char>& movable,
                   double lambda, double mu, int iterations, bool uniform_weights) {
    const int n = static_cast<int>(pos.size());
    check(neighbors.size() == pos.size() && movable.size() == pos.size(),
          "taubin_smooth: array sizes disagree");
    check(lambda >= 0.0 && mu <= 0.0, "taubin_smooth: expected lambda >= 0 >= mu");
    check(iterations >= 0, "taubin_smooth: negative iteration count");

    std::vector<Vec3> delta(n);
    auto step = [&](double f) {
        if (f == 0.0) return;
        for (int i = 0; i < n; ++i) {
            delta[i] = Vec3{};
            if (!movable[i] || neighbors[i].empty()) continue;
            if (uniform_weights) {
                Vec3 sum{};
                for (int j : neighbors[i]) sum += pos[j] - pos[i];
                delta[i] = sum / static_cast<double>(neighbors[i].size());
            } else {
                double wsum = 0.0;
                Vec3 acc{};
                for (int j : neighbors[i]) {
                    double d = pos[j].dist(pos[i]);
                    check(d > 0.0, "taubin_smooth: coincident neighbor nodes " +
                                       std::to_string(i) + " and " + std::to_string(j));
                    double w = 1.0 / d;
                    wsum += w;
                    acc += (pos[j] - pos[i]) * w;
                }
                delta[i] = acc / wsum;
            }
        }
        for (int i = 0; i < n; ++i)
            if (movable[i]) pos[i] += delta[i] * f;
    };

    for (int it = 0; it < iterations; ++it) {
        step(lambda);
        step(mu);
    }
}

InterfaceSmoothStats taubin_smooth_interface(TetMesh& mesh, double lambda, double mu,
                                             int iterations, bool uniform_weights) {
    check(mesh.tet_domains.size() == mesh.tets.size(),
          "taubin_smooth_interface: run separate_domains first");

    // Interface triangles: faces between a vacuum tet and a material tet.
    std::set<std::pair<int, int>> edges;
    std::unordered_set<int> on_interface;
    InterfaceSmoothStats stats;
    for (int t = 0; t < mesh.n_tets(); ++t) {
        if (mesh.tet_domains[t] != TetDomain::Vacuum) continue;
        for (int k = 0; k < 4; ++k) {
            int nb = mesh.neigh[t][k];
            if (nb < 0 || mesh.tet_domains[nb] != TetDomain::Material) continue;
            ++stats.triangles;
            int c[3] = {mesh.tets[t][TetMesh::face_corners[k][0]],
                        mesh.tets[t][TetMesh::face_corners[k][1]],
                        mesh.tets[t][TetMesh::face_corners[k][2]]};
            for (int i = 0; i < 3; ++i) {
                on_interface.insert(c[i]);
                int a = c[i], b = c[(i + 1) % 3];
                edges.insert({std::min(a, b), std::max(a, b)});
            }
        }
    }

    std::vector<std::vector<int>> nbrs(mesh.n_nodes());
    for (auto& e : edges) {
        nbrs[e.first].push_back(e.second);
        nbrs[e.second].push_back(e.first);
    }
    std::vector<char> movable(mesh.n_nodes(), 0);
    for (int i : on_interface)
        if ((mesh.node_flags[i] & NODE_SURFACE) && !(mesh.node_flags[i] & NODE_BOUNDARY)) {
            movable[i] = 1;
            ++stats.movable_nodes;
        }

    taubin_smooth(mesh.nodes, nbrs, movable, lambda, mu, iterations, uniform_weights);
    return stats;
}

}  // namespace nanofield
